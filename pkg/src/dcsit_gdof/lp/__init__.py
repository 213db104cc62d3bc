"""Small exact linear programs solved by exhaustive vertex enumeration.

Every instance in this package has at most six variables and a few dozen
``<=`` constraints, so enumerating every basic solution is both exact and
cheap. The enumeration kernel is compiled when the extension is built and
falls back to a numpy implementation of the same elimination otherwise::

    >>> lp = LinearProgram.from_arrays(
    ...     ["d1", "d2"],
    ...     [[1, 0.5], [0.5, 1], [1, 0], [0, 1], [-1, 0], [0, -1]],
    ...     [1, 1, 1, 1, 0, 0],
    ...     [1, 1],
    ... )
    >>> round(solve(lp).value, 9)
    1.333333333
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, islice
from typing import NamedTuple

import numpy as np

from ..errors import CapacityError, DomainError
from . import _vertex_py

try:
    from . import _vertex_ext
except ImportError:  # extension not built
    _vertex_ext = None

TOL = 1e-9
MAX_VARIABLES = 6
# half-width of the artificial box used to probe line-containing feasible sets
_PROBE_BOX = 1e6

BACKENDS = {"python": _vertex_py.vertex_search}
if _vertex_ext is not None:
    BACKENDS["compiled"] = _vertex_ext.vertex_search
BACKEND = "compiled" if "compiled" in BACKENDS else "python"
vertex_search = BACKENDS[BACKEND]


class Status(str, enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


class Constraint(NamedTuple):
    """``coeffs . x <= bound``."""

    coeffs: tuple[float, ...]
    bound: float
    relation: str = "<="


@dataclass(frozen=True)
class LinearProgram:
    """Maximize ``objective . x`` subject to a list of ``<=`` constraints.

    Nonnegativity is not implied; add it as ordinary constraints.
    """

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[float, ...]

    def __post_init__(self):
        n = len(self.variables)
        if n == 0:
            raise DomainError("a linear program needs at least one variable")
        if len(self.objective) != n:
            raise DomainError(
                f"objective has {len(self.objective)} coefficients, expected {n}"
            )
        for i, con in enumerate(self.constraints):
            if con.relation != "<=":
                raise DomainError(f"constraint {i}: only '<=' is supported")
            if len(con.coeffs) != n:
                raise DomainError(
                    f"constraint {i} has {len(con.coeffs)} coefficients, expected {n}"
                )

    @classmethod
    def from_arrays(cls, variables, A, b, c) -> "LinearProgram":
        A = np.asarray(A, dtype=float).reshape(len(b), len(c))
        cons = tuple(
            Constraint(tuple(float(v) for v in row), float(bound))
            for row, bound in zip(A, b)
        )
        return cls(tuple(variables), cons, tuple(float(v) for v in c))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = len(self.variables)
        A = np.array([con.coeffs for con in self.constraints], dtype=float).reshape(-1, n)
        b = np.array([con.bound for con in self.constraints], dtype=float)
        return A, b, np.array(self.objective, dtype=float)

    def is_feasible(self, point, tol: float = TOL) -> bool:
        """Independent constraint check, written without numpy on purpose."""
        for con in self.constraints:
            lhs = sum(a * x for a, x in zip(con.coeffs, point))
            if lhs > con.bound + tol:
                return False
        return True


@dataclass(frozen=True)
class LpSolution:
    status: Status
    value: float
    point: tuple[float, ...]
    active_set: tuple[int, ...]

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _subset_at(m: int, n: int, index: int) -> tuple[int, ...]:
    return next(islice(combinations(range(m), n), index, None))


def _boxed(A, b, half_width):
    n = A.shape[1]
    eye = np.eye(n)
    return (
        np.vstack([A, eye, -eye]),
        np.concatenate([b, np.full(2 * n, float(half_width))]),
    )


def _improving_ray(A, c, kernel) -> bool:
    """True when some ``d`` with ``A d <= 0`` strictly improves the objective."""
    if not np.any(c):
        return False
    Ah, bh = _boxed(A, np.zeros(A.shape[0]), 1.0)
    values, _, best = kernel(Ah, bh[None, :], c, TOL)
    return bool(best[0] >= 0 and values[0] > TOL)


def solve(lp: LinearProgram, backend: str | None = None) -> LpSolution:
    """Solve ``lp`` exactly by enumerating every basic solution.

    Each subset of ``n`` constraints is solved as a square system by
    elimination with partial pivoting; singular subsets are skipped. Among
    vertices feasible within ``TOL`` the first one (lexicographic subset
    order) reaching the largest objective wins. ``backend`` picks the
    enumeration kernel by name; the default is the fastest available.
    """
    n = len(lp.variables)
    if n > MAX_VARIABLES:
        raise CapacityError(f"{n} variables exceeds the limit of {MAX_VARIABLES}")
    kernel = BACKENDS[backend or BACKEND]
    A, b, c = lp.arrays()
    m = A.shape[0]

    values, points, best = kernel(A, b[None, :], c, TOL)
    has_vertex = best[0] >= 0
    box_sol = None
    if not has_vertex:
        # no vertex: either empty, or the feasible set contains a line
        Ab, bb = _boxed(A, b, _PROBE_BOX)
        box_sol = kernel(Ab, bb[None, :], c, TOL)
        origin_ok = bool(np.all(b >= -TOL))
        nonempty = origin_ok or box_sol[2][0] >= 0
        if not nonempty:
            return LpSolution(Status.INFEASIBLE, float("nan"), (), ())

    if _improving_ray(A, c, kernel):
        return LpSolution(Status.UNBOUNDED, float("inf"), (), ())

    if has_vertex:
        point = tuple(float(v) for v in points[0])
        return LpSolution(Status.OPTIMAL, float(values[0]), point, _subset_at(m, n, int(best[0])))

    # objective is constant along the lineality space; any boxed optimum works
    bvals, bpoints, bbest = box_sol
    active = tuple(i for i in _subset_at(m + 2 * n, n, int(bbest[0])) if i < m)
    return LpSolution(
        Status.OPTIMAL, float(bvals[0]), tuple(float(v) for v in bpoints[0]), active
    )


def solve_many(A, B, c, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Solve a batch of LPs that share coefficients and objective.

    ``B`` holds one right-hand side per row. Every instance must describe a
    polytope (bounded when nonempty); empty instances come back as ``nan``.
    Returns ``(values, points)``.
    """
    A = np.asarray(A, dtype=float)
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] > MAX_VARIABLES:
        raise CapacityError(f"{A.shape[1]} variables exceeds the limit of {MAX_VARIABLES}")
    if B.shape[1] != A.shape[0]:
        raise DomainError(f"bounds have {B.shape[1]} columns, expected {A.shape[0]}")
    values, points, best = BACKENDS[backend or BACKEND](A, B, np.asarray(c, dtype=float), TOL)
    values = np.where(best >= 0, values, np.nan)
    return values, points


class SamplingStatus(str, enum.Enum):
    ESTIMATE = "ESTIMATE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SamplingEstimate:
    status: SamplingStatus
    value: float
    point: tuple[float, ...]
    accepted: int


def variable_box(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray]:
    """Per-variable bounds read off the single-variable constraints."""
    n = len(lp.variables)
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    for con in lp.constraints:
        nz = [i for i, a in enumerate(con.coeffs) if a != 0.0]
        if len(nz) != 1:
            continue
        i = nz[0]
        a = con.coeffs[i]
        if a > 0:
            hi[i] = min(hi[i], con.bound / a)
        else:
            lo[i] = max(lo[i], con.bound / a)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise DomainError("no bounded box can be read off the single-variable constraints")
    return lo, hi


def solve_by_sampling(
    lp: LinearProgram, samples: int, seed: int, chunk: int = 1 << 16
) -> SamplingEstimate:
    """Lower estimate of the optimum by uniform rejection sampling.

    Shares nothing with the vertex enumeration path: candidates come from
    the variable box and are accepted by a direct constraint check.
    """
    lo, hi = variable_box(lp)
    if np.any(lo > hi):
        return SamplingEstimate(SamplingStatus.INCONCLUSIVE, float("nan"), (), 0)
    A, b, c = lp.arrays()
    rng = np.random.default_rng(seed)
    best_val = -np.inf
    best_pt = None
    accepted = 0
    remaining = int(samples)
    while remaining > 0:
        k = min(chunk, remaining)
        remaining -= k
        pts = rng.uniform(lo, hi, size=(k, len(lo)))
        ok = np.all(pts @ A.T <= b + TOL, axis=1) if len(b) else np.ones(k, bool)
        if not ok.any():
            continue
        accepted += int(ok.sum())
        vals = pts[ok] @ c
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val = float(vals[j])
            best_pt = pts[ok][j]
    if best_pt is None:
        return SamplingEstimate(SamplingStatus.INCONCLUSIVE, float("nan"), (), 0)
    return SamplingEstimate(
        SamplingStatus.ESTIMATE, best_val, tuple(float(v) for v in best_pt), accepted
    )


__all__ = [
    "BACKEND",
    "BACKENDS",
    "Constraint",
    "LinearProgram",
    "LpSolution",
    "MAX_VARIABLES",
    "SamplingEstimate",
    "SamplingStatus",
    "Status",
    "TOL",
    "solve",
    "solve_by_sampling",
    "solve_many",
    "variable_box",
]
