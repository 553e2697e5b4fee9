"""Hyperparameters and the named presets."""

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class LcsParams:
    N: int = 16000  # max micro population
    iterations: int = 15000
    train_size: int = 9000  # instances drawn from the dataset (seeded, no replacement)
    nu: float = 10.0  # fitness exponent
    chi: float = 0.8  # crossover probability
    mu: float = 0.04  # per-attribute mutation probability
    p_dontcare: float = 0.6  # covering generality
    s0: float = 0.2  # covering interval half-spread upper bound
    theta_ga: int = 25  # GA period (iterations)
    theta_sub: int = 20  # min experience for a subsumer
    theta_del: int = 20  # min experience before fitness biases deletion
    subsumption_accuracy: float = 0.99
    tournament_frac: float = 0.4
    seed: int = 0
    n_features_expected: int | None = None
    check_invariants: bool = False

    def validate(self) -> None:
        for name in ("chi", "mu", "p_dontcare", "subsumption_accuracy", "tournament_frac"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        for name in ("N", "iterations", "train_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.s0 < 0 or self.nu <= 0:
            raise ValueError("s0 must be >= 0 and nu > 0")

    def with_seed(self, seed: int) -> "LcsParams":
        return replace(self, seed=seed)


PRESETS: dict[str, LcsParams] = {
    # headline configuration: 16k rules, 15k iterations, 9k training instances
    "default": LcsParams(),
    # earlier vehicle-group configuration: longer training on fewer instances
    "osprey-beta-iii": LcsParams(iterations=120000, train_size=5000),
    # scaled-down configuration for laptop-speed experiments and acceptance runs
    "desk": LcsParams(N=2000, iterations=30000, train_size=40000),
}
