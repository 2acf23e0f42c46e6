"""Benchmark the compiled estimator kernels against the numpy fallback.

Runs the location, scale, and joint block kernels on identical inputs with
both implementations, reports throughput and speedup, and verifies that the
outputs agree bit for bit.  Exits nonzero on any mismatch.

Usage:
    python benchmarks/bench_kernels.py [--realizations R] [--samples N]
                                       [--repeats K]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from quantest import (
    DesignSpec,
    Mode,
    ParamKind,
    cauchy,
    default_log_grid,
    gaussian,
    make_static_quantizer,
    sample,
)
from quantest import _backend, _kernels_py

try:
    from quantest import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _draws(dist, rows, cols, seed):
    rng = np.random.default_rng(seed)
    return np.ascontiguousarray(sample(dist, rng, rows * cols).reshape(rows, cols))


class Case:
    """One kernel workload: fixed inputs plus per-run fresh state."""

    def __init__(self, name, kernel_name, y, args_before_state, make_state, grid):
        self.name = name
        self.kernel_name = kernel_name
        self.y = y
        self.args_before_state = args_before_state
        self.make_state = make_state
        self.grid = grid

    def run(self, impl):
        state = self.make_state()
        errs = [np.empty((self.y.shape[0], self.grid.size)) for _ in state["err_slots"]]
        kernel = getattr(impl, self.kernel_name)
        t0 = time.perf_counter()
        kernel(self.y, *self.args_before_state, *state["pre"], self.grid, *errs)
        dt = time.perf_counter() - t0
        return dt, [*state["pre"], *errs]


def build_cases(realizations, samples):
    grid = np.asarray(default_log_grid(samples), dtype=np.int64)

    loc_spec = make_static_quantizer(DesignSpec(gaussian(), ParamKind.LOCATION, 4))
    loc_gain = (1.0 / loc_spec.fi_ref) * loc_spec.coefficients
    loc = Case(
        name="location (gaussian, 4-bit)",
        kernel_name="run_location_block",
        y=_draws(gaussian(), realizations, samples, seed=101),
        args_before_state=(1.0, 1.0, loc_spec.normalized_thresholds, loc_gain, 0.0, 0),
        make_state=lambda: {"pre": [np.zeros(realizations)], "err_slots": [0]},
        grid=grid,
    )

    sca_spec = make_static_quantizer(DesignSpec(cauchy(), ParamKind.SCALE, 4))
    sca_gain = sca_spec.coefficients / sca_spec.fi_ref
    sca = Case(
        name="scale (cauchy, 4-bit)",
        kernel_name="run_scale_block",
        y=_draws(cauchy(), realizations, samples, seed=102),
        args_before_state=(0.0, sca_spec.normalized_thresholds, sca_gain,
                           1.0, 2e-9, 0),
        make_state=lambda: {"pre": [np.full(realizations, 2.0)], "err_slots": [0]},
        grid=grid,
    )

    jnt_spec = make_static_quantizer(DesignSpec(cauchy(), ParamKind.LOCATION, 4),
                                     include_scale_coefficients=True)
    jnt_gain_mu = jnt_spec.coefficients / jnt_spec.fi_ref
    jnt_gain_dh = jnt_spec.scale_coefficients / jnt_spec.scale_fi_ref
    jnt = Case(
        name="joint (cauchy, 4-bit)",
        kernel_name="run_joint_block",
        y=_draws(cauchy(), realizations, samples, seed=103),
        args_before_state=(1.0, jnt_spec.normalized_thresholds, jnt_gain_mu,
                           jnt_gain_dh, 0.0, 1.0, 2e-9, 0),
        make_state=lambda: {"pre": [np.zeros(realizations), np.full(realizations, 2.0)],
                            "err_slots": [0, 1]},
        grid=grid,
    )
    return [loc, sca, jnt]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--realizations", type=int, default=256)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    impls = [("python", _kernels_py)]
    if _kernels_c is not None:
        impls.append(("compiled", _kernels_c))

    total = args.realizations * args.samples
    print(f"kernel benchmark: {args.realizations} realizations x "
          f"{args.samples} samples ({total / 1e6:.2f}M updates per run), "
          f"best of {args.repeats}")
    print(f"active default backend: {_backend.BACKEND}")
    if _kernels_c is None:
        print("compiled extension not importable; timing the numpy fallback only")
    print()
    print(f"{'mode':<28} " + " ".join(f"{n:>14}" for n, _ in impls)
          + ("  speedup  outputs" if len(impls) == 2 else ""))

    mismatch = False
    for case in build_cases(args.realizations, args.samples):
        best = {}
        outputs = {}
        for impl_name, impl in impls:
            times = []
            for _ in range(args.repeats):
                dt, out = case.run(impl)
                times.append(dt)
            best[impl_name] = min(times)
            outputs[impl_name] = out
        row = f"{case.name:<28} " + " ".join(
            f"{total / best[n] / 1e6:>9.1f} Mu/s" for n, _ in impls)
        if len(impls) == 2:
            same = all(a.tobytes() == b.tobytes()
                       for a, b in zip(outputs["python"], outputs["compiled"]))
            mismatch |= not same
            row += (f"  {best['python'] / best['compiled']:>6.1f}x  "
                    + ("identical" if same else "MISMATCH"))
        print(row)

    if mismatch:
        print("\nERROR: backends disagree bit-for-bit", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
