"""Invariant battery behind ``dcsit-gdof verify``.

Every check scans all of its points in a fixed order, counts violations
and keeps the first one as the counterexample. Functions are looked up
through their modules at call time, so a perturbed implementation is
picked up by the battery.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import achievability, core, lp
from .core import AlphaPair, RegionCase
from .errors import DomainError

# nudge used to step across a region boundary when comparing one-sided values
_BOUNDARY_EPS = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    points: int
    failures: int
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name} ({self.points} points)"
        return (
            f"FAIL {self.name} ({self.failures} of {self.points} points); "
            f"first counterexample: {self.counterexample}"
        )


def _tally(name: str, outcomes: Iterator[str | None]) -> CheckResult:
    points = failures = 0
    first = None
    for problem in outcomes:
        points += 1
        if problem is not None:
            failures += 1
            first = first or problem
    return CheckResult(name, points, failures, first)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    n = int(np.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]


def _canonical_pairs(lo, hi, step):
    vals = _grid(lo, hi, step)
    for a1 in vals:
        for a2 in vals:
            if a2 <= a1:
                yield AlphaPair(a1, a2)


def _tightness(lo, hi, step, tol):
    for a in _canonical_pairs(lo, hi, step):
        if core.classify_region(a) is RegionCase.MIXED_OPEN:
            continue
        upper = core.converse_sum_upper(a)
        lower = achievability.closed_form_lower(a).sum_gdof
        exact = core.theorem1_sum_gdof(a)
        if max(abs(upper - lower), abs(upper - exact)) > tol:
            yield (
                f"({a.alpha1}, {a.alpha2}): upper={upper:.9f} lower={lower:.9f} "
                f"closed_form={exact:.9f}"
            )
        else:
            yield None


def _kt_exhaustion(hi):
    # exact rational grid so the comparison with the bound is literal equality
    for i in range(int(round(hi * 100)) + 1):
        a2 = Fraction(i, 100)
        coeffs = [core.weighted_rate_coeff(k, a2) for k in (0, 1, 2)]
        best = max(range(3), key=lambda k: (coeffs[k], -k))
        rhs = core.converse_weighted_rhs(a2)
        if best != 0 or coeffs[0] != rhs:
            yield f"alpha2={float(a2)}: coeffs={[float(c) for c in coeffs]} rhs={float(rhs)}"
        else:
            yield None


def _continuity(hi, step, tol):
    # alpha1 = 1 with alpha2 in [0.5, 1]: BOTH_WEAK meets MIXED_COVERED
    edges = [(AlphaPair(1.0, v), AlphaPair(1.0 + _BOUNDARY_EPS, v)) for v in _grid(0.5, 1.0, step)]
    # alpha2 = 1 with alpha1 > 1: MIXED_COVERED meets BOTH_STRONG
    edges += [
        (AlphaPair(v, 1.0), AlphaPair(v, 1.0 + _BOUNDARY_EPS))
        for v in _grid(1.0, hi, step)
        if v > 1.0
    ]
    for left, right in edges:
        sides = [
            (
                core.theorem1_sum_gdof(a),
                core.converse_sum_upper(a),
                achievability.closed_form_lower(a).sum_gdof,
            )
            for a in (left, right)
        ]
        problem = None
        for what, x, y in zip(("closed_form", "upper", "lower"), *sides):
            if abs(x - y) > tol:
                problem = f"{what} jumps at ({left.alpha1}, {left.alpha2}): {x:.9f} vs {y:.9f}"
                break
        yield problem


def _maximin(lo, hi, step, grid_step_a):
    for a in _canonical_pairs(lo, hi, step):
        if core.classify_region(a) not in (RegionCase.BOTH_STRONG, RegionCase.MIXED_COVERED):
            continue
        want = achievability.closed_form_lower(a)
        got = achievability.maximin_search(a, grid_step_a)
        if got.best is None:
            yield (
                f"({a.alpha1}, {a.alpha2}): no feasible power split, "
                f"closed form {want.sum_gdof:.9f}"
            )
        elif (
            abs(got.sum_gdof - want.sum_gdof) > 4 * grid_step_a
            or abs(got.best.total - want.a_sum_star) > 2 * grid_step_a
        ):
            yield (
                f"({a.alpha1}, {a.alpha2}): search {got.sum_gdof:.9f} at A1+A2="
                f"{got.best.total:.9f}, closed form {want.sum_gdof:.9f} at "
                f"A1+A2={want.a_sum_star:.9f}"
            )
        else:
            yield None


def random_bounded_lp(rng: np.random.Generator) -> lp.LinearProgram:
    """Random LP on 1-4 variables confined to a box, so always bounded."""
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 5))
    A = rng.normal(size=(m, n))
    b = rng.uniform(-0.5, 2.0, size=m)
    hi = rng.uniform(0.5, 2.0, size=n)
    eye = np.eye(n)
    A = np.vstack([A, eye, -eye])
    b = np.concatenate([b, hi, np.zeros(n)])
    c = rng.normal(size=n)
    return lp.LinearProgram.from_arrays([f"x{i}" for i in range(n)], A, b, c)


def _lp_sampling(seed, count, samples, tol):
    rng = np.random.default_rng(seed)
    for i in range(count):
        prog = random_bounded_lp(rng)
        exact = lp.solve(prog)
        est = lp.solve_by_sampling(prog, samples, seed + i)
        sampled = est.status is lp.SamplingStatus.ESTIMATE
        if sampled and (not exact.optimal or exact.value < est.value - tol):
            yield f"LP #{i}: vertex {exact.status.value} {exact.value:.9f} < sampled {est.value:.9f}"
        elif exact.optimal and not prog.is_feasible(exact.point, tol):
            yield f"LP #{i}: returned point {exact.point} is infeasible"
        else:
            yield None


def check_tightness(lo, hi, step, tol) -> CheckResult:
    """Closed form, converse LP and scheme value coincide off MIXED_OPEN."""
    return _tally("tightness", _tightness(lo, hi, step, tol))


def check_kt_exhaustion(hi) -> CheckResult:
    """Rank deficiency 0 maximizes the weighted rate coefficient, exactly."""
    return _tally("kt_exhaustion", _kt_exhaustion(hi))


def check_continuity(hi, step, tol) -> CheckResult:
    """Values agree on both sides of the alpha1 = 1 and alpha2 = 1 edges."""
    return _tally("continuity", _continuity(hi, step, tol))


def check_maximin(lo, hi, step, grid_step_a) -> CheckResult:
    """Grid max-min over power splits reproduces the closed-form scheme value."""
    return _tally("maximin", _maximin(lo, hi, step, grid_step_a))


def check_lp_sampling(seed, count=200, samples=4000, tol=1e-9) -> CheckResult:
    """Vertex enumeration beats rejection sampling and returns feasible points."""
    return _tally("lp_sampling", _lp_sampling(seed, count, samples, tol))


def run_battery(
    step: float = 0.05,
    tol: float = 1e-9,
    grid_step_a: float = 0.01,
    seed: int = 0,
    lo: float = 0.0,
    hi: float = 3.0,
) -> list[CheckResult]:
    if not (step > 0 and tol > 0):
        raise DomainError("step and tol must be positive")
    if not (0 < grid_step_a <= 0.1):
        raise DomainError(f"grid step for power splits must be in (0, 0.1], got {grid_step_a}")
    if not (0 <= lo < hi):
        raise DomainError(f"need 0 <= min < max, got [{lo}, {hi}]")
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_tightness(lo, hi, step, tol),
        lambda: check_kt_exhaustion(hi),
        lambda: check_continuity(hi, step, tol),
        lambda: check_maximin(lo, hi, step, grid_step_a),
        lambda: check_lp_sampling(seed, tol=tol),
    ]
    return [check() for check in checks]
