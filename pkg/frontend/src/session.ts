import { FrameDoc, PlaybackStatus, ServerMessage } from "./types.js";

/**
 * Minimal socket surface so tests can drive a session without a network.
 * Matches the parts of WebSocket the session actually uses.
 */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionSnapshot {
  connected: boolean;
  ended: boolean;
  status: PlaybackStatus;
  frame: FrameDoc | null;
  error: string | null;
}

/**
 * One streaming playback session against the replay service.
 *
 * Commands only send; the local status changes when the matching ack
 * arrives, so the controls can never run ahead of the server.  The
 * displayed frame is always the last frame message received.
 */
export class PlaybackSession {
  private socket: SocketLike;
  private listeners: Array<(snap: SessionSnapshot) => void> = [];

  connected = true;
  ended = false;
  status: PlaybackStatus = { playing: false, cursor: 0, rate: 1.0 };
  frame: FrameDoc | null = null;
  error: string | null = null;

  constructor(url: string, factory: SocketFactory) {
    this.socket = factory(url);
    this.socket.onmessage = (data) => this.handleMessage(data);
    this.socket.onclose = () => {
      this.connected = false;
      this.emit();
    };
  }

  onChange(fn: (snap: SessionSnapshot) => void): void {
    this.listeners.push(fn);
  }

  snapshot(): SessionSnapshot {
    return {
      connected: this.connected,
      ended: this.ended,
      status: { ...this.status },
      frame: this.frame,
      error: this.error,
    };
  }

  play(): void {
    this.send("play");
  }

  pause(): void {
    this.send("pause");
  }

  seek(time: number): void {
    this.send(`seek ${time}`);
  }

  setRate(rate: number): void {
    this.send(`rate ${rate}`);
  }

  close(): void {
    this.socket.close();
  }

  private send(command: string): void {
    if (!this.connected) return;
    this.socket.send(command);
  }

  private handleMessage(data: string): void {
    let msg: ServerMessage;
    try {
      msg = JSON.parse(data) as ServerMessage;
    } catch {
      this.error = "unparseable message";
      this.emit();
      return;
    }
    switch (msg.kind) {
      case "frame":
        this.frame = msg;
        break;
      case "ack":
        this.status = { playing: msg.playing, cursor: msg.cursor, rate: msg.rate };
        this.ended = false;
        break;
      case "end":
        this.ended = true;
        this.status = { ...this.status, playing: false, cursor: msg.cursor };
        break;
      case "error":
        this.error = msg.detail ? `${msg.error}: ${msg.detail}` : msg.error;
        break;
    }
    this.emit();
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) fn(snap);
  }
}
