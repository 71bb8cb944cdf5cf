/** Thin WebSocket wrapper: parse frames, surface connection state. */
import { parseServerMessage, type ServerMessage } from "./protocol.js";

export interface NetHandlers {
  onMessage: (msg: ServerMessage) => void;
  onDisconnect: () => void;
}

export interface Connection {
  send: (frame: string) => void;
  close: () => void;
}

export function connect(url: string, handlers: NetHandlers): Connection {
  const socket = new WebSocket(url);
  socket.onmessage = (event) => {
    const msg = parseServerMessage(String(event.data));
    if (msg !== null) {
      handlers.onMessage(msg);
    }
  };
  socket.onclose = () => handlers.onDisconnect();
  socket.onerror = () => socket.close();
  return {
    send: (frame) => {
      if (socket.readyState === WebSocket.OPEN) {
        socket.send(frame);
      }
    },
    close: () => socket.close(),
  };
}
