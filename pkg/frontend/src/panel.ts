import { BehaviorState, LampStatus, Trigger, TRIGGERS, UavFrame } from "./types.js";

export interface BadgeModel {
  /** Inferred state, or null during warm-up / without a model. */
  shown: BehaviorState | null;
  truth: BehaviorState;
  mismatch: boolean;
}

export interface LampModel {
  trigger: Trigger;
  status: LampStatus;
}

export interface GaugeModel {
  score: number;
  label: string;
  noFiring: boolean;
}

export interface RuleModel {
  antecedent: string[];
  fLo: number;
  fUp: number;
}

export interface PanelModel {
  badge: BadgeModel;
  lamps: LampModel[];
  gauge: GaugeModel;
  rules: RuleModel[];
}

/**
 * Holds Fired lamps lit for a short real-mission interval after the service
 * reports them, since a fired trigger lasts a single tick on the wire.
 *
 * Times are frame times, so the hold window scales with playback rate and
 * survives pauses.  A backwards seek drops any remembered firings that now
 * lie in the future.
 */
export class LampDecay {
  private firedAt = new Map<Trigger, number>();

  constructor(private readonly holdSeconds = 1.0) {}

  apply(trigger: Trigger, reported: LampStatus, now: number): LampStatus {
    const stamp = this.firedAt.get(trigger);
    if (stamp !== undefined && (stamp > now || stamp + this.holdSeconds < now)) {
      this.firedAt.delete(trigger);
    }
    if (reported === "Fired") {
      this.firedAt.set(trigger, now);
      return "Fired";
    }
    const held = this.firedAt.get(trigger);
    if (held !== undefined && held <= now && now < held + this.holdSeconds) {
      return "Fired";
    }
    return reported;
  }

  reset(): void {
    this.firedAt.clear();
  }
}

/** Build the state panel model for one UAV of the current frame. */
export function renderStatePanel(uav: UavFrame, decay?: LampDecay): PanelModel {
  const shown = uav.inferred_state;
  const lamps: LampModel[] = TRIGGERS.map((trigger) => {
    const reported: LampStatus = uav.triggers[trigger] ?? "Inactive";
    const status = decay ? decay.apply(trigger, reported, uav.time) : reported;
    return { trigger, status };
  });
  return {
    badge: {
      shown,
      truth: uav.truth_state,
      mismatch: shown !== null && shown !== uav.truth_state,
    },
    lamps,
    gauge: {
      score: uav.fls_score,
      label: uav.fls_label,
      noFiring: uav.no_firing,
    },
    rules: uav.fls_rules.map((r) => ({
      antecedent: [...r.antecedent],
      fLo: r.f_lo,
      fUp: r.f_up,
    })),
  };
}
