"""Sum-GDoF closed forms and the converse bound.

The channel has two transmitters with two antennas each and two
single-antenna receivers. ``alpha1`` is the interference exponent of the
Tx1 -> Rx2 link, ``alpha2`` that of Tx2 -> Rx1. Everything is stated for
the canonical orientation ``alpha2 <= alpha1``; :func:`canonicalize` maps
any pair onto it by relabelling the users.

The scalar functions are plain arithmetic, so they accept
:class:`fractions.Fraction` as well as ``float`` and stay exact on
rationals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from numbers import Integral, Real

from . import lp
from .errors import DomainError

TOL = 1e-9


class RegionCase(str, enum.Enum):
    BOTH_WEAK = "BOTH_WEAK"
    MIXED_COVERED = "MIXED_COVERED"
    BOTH_STRONG = "BOTH_STRONG"
    MIXED_OPEN = "MIXED_OPEN"


@dataclass(frozen=True)
class AlphaPair:
    alpha1: Real
    alpha2: Real

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            v = getattr(self, name)
            if not isinstance(v, Real) or not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be a finite nonnegative real, got {v!r}")

    @property
    def canonical(self) -> bool:
        return self.alpha2 <= self.alpha1

    def swapped(self) -> "AlphaPair":
        return AlphaPair(self.alpha2, self.alpha1)


@dataclass(frozen=True)
class GdofBounds:
    """Sum-GDoF bracket at one point; ``lower`` is None where no scheme is known.

    ``lower`` is the value claimed by the closed-form scheme analysis and
    ``upper`` the optimum of the converse LP. Where a single-user cap binds
    the claimed value can exceed the LP bound; such a bracket is kept and
    reported with ``consistent`` false rather than rejected.
    """

    lower: Real | None
    upper: Real
    region: RegionCase
    tight: bool

    def __post_init__(self):
        if not (-TOL <= self.upper <= 2 + TOL):
            raise DomainError(f"upper bound {self.upper} outside [0, 2]")
        expect = self.lower is not None and abs(self.upper - self.lower) <= TOL
        if self.tight != expect:
            raise DomainError("tight flag inconsistent with the bounds")

    @property
    def consistent(self) -> bool:
        return self.lower is None or self.lower <= self.upper + TOL

    @classmethod
    def from_values(cls, lower, upper, region) -> "GdofBounds":
        tight = lower is not None and abs(upper - lower) <= TOL
        return cls(lower, upper, region, tight)


def canonicalize(a: AlphaPair) -> tuple[AlphaPair, bool]:
    """Return ``(pair with alpha2 <= alpha1, swapped)``."""
    if not isinstance(a, AlphaPair):
        a = AlphaPair(*a)
    if a.canonical:
        return a, False
    return a.swapped(), True


def _require_canonical(a: AlphaPair) -> None:
    if not isinstance(a, AlphaPair):
        raise DomainError(f"expected an AlphaPair, got {type(a).__name__}")
    if not a.canonical:
        raise DomainError(
            f"pair ({a.alpha1}, {a.alpha2}) is not canonical; call canonicalize first"
        )


def classify_region(a: AlphaPair) -> RegionCase:
    _require_canonical(a)
    a1, a2 = a.alpha1, a.alpha2
    if a1 <= 1:
        return RegionCase.BOTH_WEAK
    if a2 > 1:
        return RegionCase.BOTH_STRONG
    if a1 + 2 * a2 >= 2:
        return RegionCase.MIXED_COVERED
    return RegionCase.MIXED_OPEN


def theorem1_sum_gdof(a: AlphaPair):
    """Exact sum-GDoF, or None in the region no matching scheme covers."""
    region = classify_region(a)
    a1, a2 = a.alpha1, a.alpha2
    if region is RegionCase.BOTH_WEAK:
        return 2 - (a1 + a2) / 3
    if region is RegionCase.MIXED_COVERED:
        return min((4 + a1 - a2) / 3, 2)
    if region is RegionCase.BOTH_STRONG:
        return min((2 + a1 + a2) / 3, 2)
    return None


def converse_weighted_rhs(alpha):
    """Bound on ``d_i + d_j / 2`` given the exponent of the link into Rx_i."""
    if alpha < 0:
        raise DomainError(f"exponent must be nonnegative, got {alpha}")
    if alpha <= 1:
        return (3 - alpha) / 2
    return (1 + alpha) / 2


def _check_k(k) -> None:
    if isinstance(k, bool) or not isinstance(k, Integral) or k not in (0, 1, 2):
        raise DomainError(f"rank deficiency must be 0, 1 or 2, got {k!r}")


def _pos(x):
    return max(x, 0)


# The three log-det pre-log coefficients below are exact piecewise expansions
# for a transmit covariance with k zero singular values.

def f_be6(k: int, alpha2):
    """Pre-log of log|I + S K S^H| with S stacking the Tx2 rows of both receivers."""
    _check_k(k)
    if alpha2 <= 1:
        return min(2 - k, 1) + min(_pos(1 - k), 1) * alpha2
    return min(2 - k, 1) * alpha2 + min(_pos(1 - k), 1)


def f_be7(k: int, alpha2):
    """Pre-log of log(1 + rho^alpha2 h12 K h12^H)."""
    _check_k(k)
    return min(2 - k, 1) * alpha2


def f_be5(k: int, alpha2):
    """Pre-log of the Gaussian bound on h(y1) with full-power Tx1."""
    _check_k(k)
    if alpha2 <= 1:
        return 1
    return min(2 - k, 1) * alpha2 + min(_pos(1 - (2 - k)), 2)


def weighted_rate_coeff(k: int, alpha2):
    """Per-slot coefficient bounding ``R1 + R2/2`` for rank deficiency ``k``."""
    return f_be5(k, alpha2) + f_be6(k, alpha2) / 2 - f_be7(k, alpha2)


def converse_lp(a: AlphaPair) -> lp.LinearProgram:
    """The two weighted-sum bounds plus single-user caps, over ``(d1, d2)``."""
    _require_canonical(a)
    r1 = float(converse_weighted_rhs(a.alpha2))
    r2 = float(converse_weighted_rhs(a.alpha1))
    return lp.LinearProgram.from_arrays(
        ("d1", "d2"),
        [[1, 0.5], [0.5, 1], [1, 0], [0, 1], [-1, 0], [0, -1]],
        [r1, r2, 1, 1, 0, 0],
        [1, 1],
    )


def converse_sum_upper(a: AlphaPair) -> float:
    sol = lp.solve(converse_lp(a))
    if not sol.optimal:  # bounded and contains the origin by construction
        raise RuntimeError(f"converse LP returned {sol.status}")
    return sol.value
