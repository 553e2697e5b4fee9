"""Compare the compiled rule-matching kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--quick]

Times match_one (the per-instance path used inside the training loop) and
match_block (the batch path used by prediction and compaction) for each
available backend, after checking that the backends agree bit-for-bit.
"""

import argparse
import timeit

import numpy as np

from dipt._kernels import BACKEND, backends


def make_problem(n_rules: int, n_features: int, n_block: int, seed: int):
    rng = np.random.default_rng(seed)
    lo = rng.uniform(0.0, 0.7, (n_rules, n_features))
    hi = lo + rng.uniform(0.05, 0.3, (n_rules, n_features))
    mask = (rng.random((n_rules, n_features)) < 0.5).astype(np.uint8)
    X = rng.uniform(0.0, 1.0, (n_block, n_features))
    return lo, hi, mask, X


def check_parity(lo, hi, mask, X) -> None:
    impls = backends()
    ref_one = impls["python"].match_one(lo, hi, mask, X[0])
    ref_blk = impls["python"].match_block(lo, hi, mask, X)
    for name, mod in impls.items():
        assert np.array_equal(mod.match_one(lo, hi, mask, X[0]), ref_one), name
        assert np.array_equal(mod.match_block(lo, hi, mask, X), ref_blk), name


def bench(fn, repeats: int) -> float:
    """Best-of-5 seconds per call."""
    n = max(1, repeats)
    return min(timeit.repeat(fn, number=n, repeat=5)) / n


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller sizes, fewer reps")
    args = ap.parse_args()

    sizes = [(256, 200), (2048, 1000)] if not args.quick else [(256, 200)]
    reps_one = 200 if not args.quick else 50
    reps_blk = 20 if not args.quick else 5

    print(f"selected backend at import: {BACKEND}")
    print(f"{'kernel':28} {'backend':10} {'sec/call':>12} {'speedup':>9}")
    for n_rules, n_block in sizes:
        lo, hi, mask, X = make_problem(n_rules, 7, n_block, seed=42)
        check_parity(lo, hi, mask, X)
        for label, call in (
            (f"match_one  {n_rules}r", lambda m: (lambda: m.match_one(lo, hi, mask, X[0]))),
            (f"match_block {n_rules}r x {n_block}i", lambda m: (lambda: m.match_block(lo, hi, mask, X))),
        ):
            base = None
            for name, mod in backends().items():
                reps = reps_one if "one" in label else reps_blk
                sec = bench(call(mod), reps)
                if name == "python":
                    base = sec
                speed = f"{base / sec:8.1f}x" if base else "      n/a"
                print(f"{label:28} {name:10} {sec:12.3e} {speed:>9}")


if __name__ == "__main__":
    main()
