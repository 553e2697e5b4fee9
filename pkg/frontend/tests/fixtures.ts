import { FrameDoc, LampStatus, RunSummary, TRIGGERS, UavFrame } from "../src/types.js";

export function allInactive(): Record<string, LampStatus> {
  return Object.fromEntries(TRIGGERS.map((t) => [t, "Inactive"]));
}

export function makeUav(time: number, over: Partial<UavFrame> = {}): UavFrame {
  return {
    time,
    x: 20 * time,
    y: 10 * time,
    altitude: 100,
    heading: 0.1 * time,
    heading_rate: 0.05,
    airspeed: 20,
    battery: Math.max(0, 1 - 0.002 * time),
    truth_state: "FlySearchPattern",
    inferred_state: "FlySearchPattern",
    fls_score: 0.62,
    fls_label: "Marginal",
    no_firing: false,
    fls_rules: [
      { antecedent: ["Medium", "High", "Low"], f_lo: 0.3, f_up: 0.7 },
      { antecedent: ["Medium", "Medium", "Low"], f_lo: 0.2, f_up: 0.5 },
    ],
    triggers: allInactive(),
    ...over,
  };
}

export function makeFrame(
  time: number,
  over: Partial<FrameDoc> = {},
  uavOver: Partial<UavFrame> = {},
): FrameDoc {
  return {
    time,
    visibility: 0.8,
    light_level: 0.9,
    detected: false,
    perceived: null,
    target: [200, 150],
    geoloc_error: null,
    uavs: [makeUav(time, uavOver)],
    ...over,
  };
}

export function makeFrames(n: number, dt = 0.5): FrameDoc[] {
  return Array.from({ length: n }, (_, i) => makeFrame(i * dt));
}

export function makeRun(over: Partial<RunSummary> = {}): RunSummary {
  return {
    format_version: "1.0",
    run_id: "ab12cd34ef56ab78",
    file: "run_000.jsonl",
    created: 1787703675.0,
    outcome: "Completed",
    duration: 120.0,
    n_frames: 240,
    tick_hz: 2.0,
    area: [360, 300],
    target: [200, 150],
    target_present: true,
    visibility: 0.8,
    light_level: 0.9,
    uav_count: 1,
    ...over,
  };
}
