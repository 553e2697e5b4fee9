/** Wire types shared with the replay service (format_version "1.x"). */

export const FORMAT_VERSION = "1.0";

export const TRIGGERS = [
  "GoForLaunch",
  "FirstSearchWaypointReached",
  "LandingComplete",
  "PotentialTargetFoundAuctionWon",
  "PotentialTargetFoundAuctionLost",
  "SearchTimeoutReached",
  "SearchComplete",
  "BatteryLow",
  "AbortMission",
  "SurveyComplete",
  "PotentialTargetLost",
] as const;

export type Trigger = (typeof TRIGGERS)[number];

export const STATES = [
  "Hold",
  "FlyOrbitAndObserve",
  "FlySearchPattern",
  "SurveyTarget",
] as const;

export type BehaviorState = (typeof STATES)[number];

export type LampStatus = "Inactive" | "Armed" | "Fired";

export interface RunSummary {
  format_version: string;
  run_id: string;
  file: string;
  /** Unix timestamp in seconds. */
  created: number;
  outcome: string;
  duration: number;
  n_frames: number;
  tick_hz: number;
  area: [number, number];
  /** Always a coordinate pair; target_present says whether it is real. */
  target: [number, number];
  target_present: boolean;
  visibility: number;
  light_level: number;
  uav_count: number;
}

export interface FlsRule {
  antecedent: string[];
  f_lo: number;
  f_up: number;
}

export interface UavFrame {
  time: number;
  x: number;
  y: number;
  altitude: number;
  heading: number;
  heading_rate: number;
  airspeed: number;
  battery: number;
  truth_state: BehaviorState;
  inferred_state: BehaviorState | null;
  fls_score: number;
  fls_label: string;
  no_firing: boolean;
  fls_rules: FlsRule[];
  triggers: Record<string, LampStatus>;
}

export interface FrameDoc {
  time: number;
  visibility: number;
  light_level: number;
  detected: boolean;
  perceived: [number, number] | null;
  /** Simulator target position; only meaningful when the run's target_present. */
  target: [number, number];
  geoloc_error: number | null;
  uavs: UavFrame[];
}

export interface FrameMessage extends FrameDoc {
  kind: "frame";
}

export interface AckMessage {
  kind: "ack";
  command: string;
  cursor: number;
  rate: number;
  playing: boolean;
}

export interface EndMessage {
  kind: "end";
  cursor: number;
}

export interface ErrorMessage {
  kind: "error";
  error: string;
  detail?: string;
}

export type ServerMessage = FrameMessage | AckMessage | EndMessage | ErrorMessage;

export interface PlaybackStatus {
  playing: boolean;
  cursor: number;
  rate: number;
}
