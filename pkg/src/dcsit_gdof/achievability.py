"""Achievable sum-GDoF: block-Markov power splits and the 3-slot scheme.

For strong interference the private streams ``u_i`` are sent at power
``rho^-A_i`` on top of a common stream carrying the quantized interference
of the previous block. For a fixed split ``(A1, A2)`` the per-user GDoF
obey a short list of linear caps, one LP over ``(d1, d2)``; the power
split is then chosen to maximize the LP optimum.

Both weak (``alpha1, alpha2 <= 1``) uses a three-slot retrospective scheme
whose GDoF follow from simple bookkeeping, see :func:`three_slot_ledger`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import lp
from .core import AlphaPair, RegionCase, TOL, classify_region
from .errors import DomainError

# Rows of the per-split LP over (d1, d2); only the bounds depend on the split.
CASE_COEFFS = np.array(
    [
        [1.0, 0.0],   # d1 <= a1 + 1 - 2A1
        [0.0, 1.0],   # d2 <= a2 + 1 - 2A2
        [1.0, 0.0],   # d1 <= a1 - A1 + A2  (piecewise in the mixed case)
        [0.0, 1.0],   # d2 <= a2 - A2 + A1
        [1.0, 0.0],   # d1 <= 1
        [0.0, 1.0],   # d2 <= 1
        [1.0, 0.0],   # d1 <= A2  (A2 - a2 + 1 in the mixed case)
        [0.0, 1.0],   # d2 <= A1
        [-1.0, 0.0],
        [0.0, -1.0],
    ]
)
SUM_OBJECTIVE = np.array([1.0, 1.0])


@dataclass(frozen=True)
class PowerSplit:
    """Private-stream power reductions: ``u_i`` has power ``rho^-a_i``."""

    a1: float
    a2: float

    @property
    def total(self) -> float:
        return self.a1 + self.a2


def _case_bounds(region, alpha1, alpha2, A1, A2):
    """Vectorized feasibility mask and LP right-hand sides for splits ``(A1, A2)``."""
    A1 = np.asarray(A1, dtype=float)
    A2 = np.asarray(A2, dtype=float)
    ones = np.ones(np.broadcast(A1, A2).shape)
    if region is RegionCase.BOTH_STRONG:
        feasible = (
            (alpha1 - A1 <= 1 + TOL)
            & (alpha2 - A2 <= 1 + TOL)
            & (alpha1 + alpha2 <= A1 + A2 + 1 + TOL)
        )
        d1_cross = alpha1 - A1 + A2
        d1_common = A2 * ones
    elif region is RegionCase.MIXED_COVERED:
        feasible = (alpha1 - A1 <= 1 + TOL) & (alpha1 + alpha2 <= 1 + A1 + A2 + TOL)
        d1_cross = np.where(
            1 - A1 <= alpha2,
            alpha1 - A1 + A2,
            alpha1 - alpha2 + A2 + 1 - 2 * A1,
        )
        d1_common = A2 - alpha2 + 1
    else:
        raise DomainError(f"no block-Markov constraint set for region {region.value}")
    B = np.stack(
        np.broadcast_arrays(
            alpha1 + 1 - 2 * A1,
            alpha2 + 1 - 2 * A2,
            d1_cross,
            alpha2 - A2 + A1,
            ones,
            ones,
            d1_common,
            A1 * ones,
            0 * ones,
            0 * ones,
        ),
        axis=-1,
    )
    return feasible, B


def _check_split(a: AlphaPair, p: PowerSplit) -> None:
    if not (-TOL <= p.a1 <= a.alpha1 + TOL and -TOL <= p.a2 <= a.alpha2 + TOL):
        raise DomainError(
            f"power split ({p.a1}, {p.a2}) outside [0, {a.alpha1}] x [0, {a.alpha2}]"
        )


def _case_lp(a: AlphaPair, p: PowerSplit, region: RegionCase):
    if classify_region(a) is not region:
        raise DomainError(
            f"({a.alpha1}, {a.alpha2}) is {classify_region(a).value}, not {region.value}"
        )
    _check_split(a, p)
    feasible, B = _case_bounds(region, float(a.alpha1), float(a.alpha2), p.a1, p.a2)
    if not bool(feasible):
        return None
    return lp.LinearProgram.from_arrays(("d1", "d2"), CASE_COEFFS, B.tolist(), SUM_OBJECTIVE)


def case_constraints_strong(a: AlphaPair, p: PowerSplit) -> lp.LinearProgram | None:
    """LP over ``(d1, d2)`` for a split when both links are strong.

    Returns None when the split is infeasible, i.e. a common stream would
    have to carry more than one GDoF or the quantized interference cannot
    be recovered.
    """
    return _case_lp(a, p, RegionCase.BOTH_STRONG)


def case_constraints_mixed(a: AlphaPair, p: PowerSplit) -> lp.LinearProgram | None:
    """As :func:`case_constraints_strong` for ``alpha1 > 1 >= alpha2``."""
    return _case_lp(a, p, RegionCase.MIXED_COVERED)


class ClosedFormLower(NamedTuple):
    sum_gdof: float
    a_sum_star: float | None  # None for the 3-slot scheme, which has no split


def closed_form_lower(a: AlphaPair) -> ClosedFormLower | None:
    """Achievable sum-GDoF and optimal ``A1 + A2`` from the closed forms."""
    region = classify_region(a)
    a1, a2 = a.alpha1, a.alpha2
    if region is RegionCase.BOTH_STRONG:
        v = min((2 + a1 + a2) / 3, 2)
        return ClosedFormLower(v, v)
    if region is RegionCase.MIXED_COVERED:
        return ClosedFormLower(min((4 + a1 - a2) / 3, 2), (a1 + 2 * a2 + 1) / 3)
    if region is RegionCase.BOTH_WEAK:
        return ClosedFormLower(2 - (a1 + a2) / 3, None)
    return None


@dataclass(frozen=True)
class MaximinResult:
    sum_gdof: float
    best: PowerSplit | None
    d: tuple[float, float]
    grid_points: int
    feasible_points: int


def _axis(limit: float, step: float) -> np.ndarray:
    return step * np.arange(int(np.floor(limit / step + 1e-9)) + 1)


def maximin_search(a: AlphaPair, grid_step: float, backend: str | None = None) -> MaximinResult:
    """Best LP optimum over a square grid of power splits.

    Every split in ``[0, alpha1] x [0, alpha2]`` on the grid is checked;
    feasible ones are solved by vertex enumeration. Among optima within
    ``TOL`` of the best the lexicographically smallest ``(A1, A2)`` wins.
    """
    region = classify_region(a)
    if region not in (RegionCase.BOTH_STRONG, RegionCase.MIXED_COVERED):
        raise DomainError(f"max-min search is defined only for strong/mixed, not {region.value}")
    if not (0 < grid_step <= 0.1):
        raise DomainError(f"grid step must be in (0, 0.1], got {grid_step}")
    A1, A2 = np.meshgrid(
        _axis(float(a.alpha1), grid_step), _axis(float(a.alpha2), grid_step), indexing="ij"
    )
    A1 = A1.ravel()
    A2 = A2.ravel()
    feasible, B = _case_bounds(region, float(a.alpha1), float(a.alpha2), A1, A2)
    idx = np.nonzero(feasible)[0]
    values = np.full(A1.shape, np.nan)
    points = np.zeros((A1.size, 2))
    if idx.size:
        values[idx], points[idx] = lp.solve_many(CASE_COEFFS, B[idx], SUM_OBJECTIVE, backend)
    if np.all(np.isnan(values)):
        # the constraint set admits no split at all here
        return MaximinResult(float("nan"), None, (float("nan"),) * 2, int(A1.size), 0)
    top = np.nanmax(values)
    win = int(np.nonzero(values >= top - TOL)[0][0])
    return MaximinResult(
        sum_gdof=float(values[win]),
        best=PowerSplit(float(A1[win]), float(A2[win])),
        d=(float(points[win, 0]), float(points[win, 1])),
        grid_points=int(A1.size),
        feasible_points=int(np.count_nonzero(~np.isnan(values))),
    )


class Source(str, enum.Enum):
    IMMEDIATE = "IMMEDIATE"
    DELAYED = "DELAYED"


@dataclass(frozen=True)
class LedgerEntry:
    slot: int
    receiver: int
    source: Source
    gdof: object
    symbols: str


class Ledger(NamedTuple):
    entries: tuple[LedgerEntry, ...]
    d1: object
    d2: object


def three_slot_ledger(a: AlphaPair) -> Ledger:
    """GDoF bookkeeping of the 3-slot scheme for both-weak interference.

    Each receiver decodes one fresh symbol per slot right away and, after
    slot 3, resolves the two symbols whose interference profile was sent
    back as a common codeword. Exact on :class:`fractions.Fraction` input.
    """
    region = classify_region(a)
    if region is not RegionCase.BOTH_WEAK:
        raise DomainError(f"the 3-slot scheme needs BOTH_WEAK, got {region.value}")
    a1, a2 = a.alpha1, a.alpha2
    imm, dly = Source.IMMEDIATE, Source.DELAYED
    entries = (
        LedgerEntry(1, 1, imm, 1 - a1, "a3"),
        LedgerEntry(2, 1, imm, 1 - a2, "a4"),
        LedgerEntry(3, 1, imm, 1 - a1, "a5"),
        LedgerEntry(3, 1, dly, 2 * a1, "a1,a2 via c1"),
        LedgerEntry(1, 2, imm, 1 - a1, "b1"),
        LedgerEntry(2, 2, imm, 1 - a2, "b4"),
        LedgerEntry(3, 2, imm, 1 - a2, "b5"),
        LedgerEntry(3, 2, dly, 2 * a2, "b2,b3 via c2"),
    )
    d1 = sum((e.gdof for e in entries if e.receiver == 1), 0) / 3
    d2 = sum((e.gdof for e in entries if e.receiver == 2), 0) / 3
    return Ledger(entries, d1, d2)
