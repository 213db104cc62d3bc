"""Seeded Monte Carlo checks of GDoF exponents at finite SNR.

A GDoF coefficient is the slope of ``E[log(...)]`` against ``log(rho)``.
:func:`logdet_slope` estimates it for the three log-det terms used by the
converse, :func:`scheme_power_audit` does the same for the received power
of every additive term of the 3-slot scheme.

Randomness for trial ``t`` comes from a Philox generator keyed on
``(seed, t)``, so any trial can be regenerated on its own and results do
not depend on how trials are batched. Gaussian entries are produced from
uniforms by the Box-Muller transform. Noise variance is 1 throughout.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import AlphaPair, RegionCase, classify_region, f_be5, f_be6, f_be7
from .errors import DomainError

DEFAULT_RHOS = (1e2, 1e3, 1e4, 1e5, 1e6)
MIN_TRIALS = 100


def _generator(seed: int, trial: int) -> np.random.Generator:
    if seed < 0 or trial < 0:
        raise DomainError("seed and trial index must be nonnegative")
    return np.random.Generator(np.random.Philox(key=np.array([seed, trial], dtype=np.uint64)))


def box_muller(gen: np.random.Generator, size: int) -> np.ndarray:
    """``size`` i.i.d. CN(0, 1) samples."""
    u1 = 1.0 - gen.random(size)  # (0, 1]
    u2 = gen.random(size)
    return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)


@dataclass(frozen=True)
class ChannelSample:
    """Row vectors ``h_ji`` from Tx_i to Rx_j, shape (2,) each."""

    h11: np.ndarray
    h12: np.ndarray
    h21: np.ndarray
    h22: np.ndarray


def _draw_channel(gen) -> ChannelSample:
    z = box_muller(gen, 8)
    return ChannelSample(z[0:2], z[2:4], z[4:6], z[6:8])


def sample_channel(seed: int, trial: int) -> ChannelSample:
    return _draw_channel(_generator(seed, trial))


def random_covariance(gen, k: int) -> np.ndarray:
    """Random 2x2 covariance with ``k`` zero eigenvalues and unit trace (zero if k=2)."""
    q, r = np.linalg.qr(box_muller(gen, 4).reshape(2, 2))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    lam = 1.0 - gen.random(2)
    lam[2 - k:] = 0.0
    if lam.sum() > 0:
        lam /= lam.sum()
    return (q * lam) @ q.conj().T


class Term(str, enum.Enum):
    BE6 = "BE6"  # log|I + S K S^H|, S = [rho^(a2/2) h12; rho^(1/2) h22]
    BE7 = "BE7"  # log(1 + rho^a2 h12 K h12^H)
    BE5 = "BE5"  # log(1 + rho |h11|^2 + rho^a2 h12 K h12^H)


_EXPECTED = {Term.BE6: f_be6, Term.BE7: f_be7, Term.BE5: f_be5}


@dataclass(frozen=True)
class CovarianceSpec:
    term: Term
    k: int
    alpha2: float

    def __post_init__(self):
        object.__setattr__(self, "term", Term(self.term))
        if self.k not in (0, 1, 2):
            raise DomainError(f"rank deficiency must be 0, 1 or 2, got {self.k}")
        if not self.alpha2 >= 0:
            raise DomainError(f"alpha2 must be nonnegative, got {self.alpha2}")

    @property
    def expected(self) -> float:
        return float(_EXPECTED[self.term](self.k, self.alpha2))


@dataclass(frozen=True)
class SlopeEstimate:
    slope: float
    r_squared: float
    rho_points: tuple[float, ...]
    trials: int
    mean_values: tuple[float, ...] = field(default=(), repr=False)


def _check_grid(rhos, trials) -> np.ndarray:
    rhos = np.asarray(rhos, dtype=float)
    if rhos.ndim != 1 or rhos.size < 3:
        raise DomainError("need at least three rho points")
    if np.any(rhos <= 0) or np.any(np.diff(rhos) <= 0):
        raise DomainError("rho points must be positive and strictly increasing")
    if trials < MIN_TRIALS:
        raise DomainError(f"need at least {MIN_TRIALS} trials, got {trials}")
    return rhos


def fit_slope(rhos, means) -> tuple[float, float]:
    """Least-squares slope of ``means`` against ``log(rhos)`` and its r^2.

    A constant series is fitted perfectly, so r^2 is 1 there.
    """
    x = np.log(np.asarray(rhos, dtype=float))
    y = np.asarray(means, dtype=float)
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    resid = y - (y.mean() + slope * xc)
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return slope, r2


def _quad(h, K):
    """``h K h^H`` for row vectors stacked along axis 0."""
    return np.real(np.einsum("ti,tij,tj->t", h, K, h.conj()))


def logdet_slope(spec: CovarianceSpec, rhos=DEFAULT_RHOS, trials: int = 2000, seed: int = 0) -> SlopeEstimate:
    """Estimate the pre-log of the log-det term selected by ``spec``.

    Each trial draws a channel and a fresh covariance; the same draws are
    reused at every rho, and the trial average is regressed on log(rho).
    """
    rhos = _check_grid(rhos, trials)
    h11 = np.empty((trials, 2), complex)
    h12 = np.empty((trials, 2), complex)
    h22 = np.empty((trials, 2), complex)
    K = np.empty((trials, 2, 2), complex)
    for t in range(trials):
        gen = _generator(seed, t)
        ch = _draw_channel(gen)
        h11[t], h12[t], h22[t] = ch.h11, ch.h12, ch.h22
        K[t] = random_covariance(gen, spec.k)

    q12 = _quad(h12, K)
    a2 = spec.alpha2
    if spec.term is Term.BE6:
        q22 = _quad(h22, K)
        # det(I + X) = 1 + tr X + det X for 2x2; det(S K S^H) = |det S|^2 det K
        cross = np.abs(h12[:, 0] * h22[:, 1] - h12[:, 1] * h22[:, 0]) ** 2
        det_k = np.real(np.linalg.det(K))
        vals = [
            np.log1p(rho**a2 * q12 + rho * q22 + rho ** (1 + a2) * cross * det_k)
            for rho in rhos
        ]
    elif spec.term is Term.BE7:
        vals = [np.log1p(rho**a2 * q12) for rho in rhos]
    else:
        g11 = np.sum(np.abs(h11) ** 2, axis=1)
        vals = [np.log1p(rho * g11 + rho**a2 * q12) for rho in rhos]
    means = np.array([np.mean(v) for v in vals])
    slope, r2 = fit_slope(rhos, means)
    return SlopeEstimate(slope, r2, tuple(float(r) for r in rhos), trials, tuple(means))


class TermKind(str, enum.Enum):
    LABELED = "LABELED"          # labeled exponent equals the literal one
    NOISE_LEVEL = "NOISE_LEVEL"  # labeled O(rho^0)
    AMBIGUOUS = "AMBIGUOUS"      # label disagrees with unit-power symbols
    UNLABELED = "UNLABELED"      # no exponent given (the subtracted common terms)


@dataclass(frozen=True)
class AuditRow:
    slot: int
    receiver: int
    term: str
    measured: float
    expected: float
    labeled_exponent: float | None
    kind: TermKind

    @property
    def abs_err(self) -> float:
        return abs(self.measured - self.expected)


def _audit_terms(a1, a2):
    """(slot, rx, label, expected exponent, labeled exponent, kind, builder).

    ``builder(rho, ch, s)`` returns the received term for one trial, where
    ``ch`` holds the three per-slot channels and ``s`` the unit symbols.
    """
    L, N, A, U = TermKind.LABELED, TermKind.NOISE_LEVEL, TermKind.AMBIGUOUS, TermKind.UNLABELED

    def v(x0, x1=0.0):
        return np.array([x0, x1])

    def c1(ch, s):  # reconstructed Rx2 interference of slot 1, normalized
        return ch[0].h21 @ v(s["a1"], s["a2"])

    def c2(ch, s):
        return ch[1].h12 @ v(s["b2"], s["b3"])

    sq = np.sqrt
    return [
        (1, 1, "a1,a2", 1.0, a1, A, lambda r, ch, s: sq(r) * ch[0].h11 @ v(s["a1"], s["a2"])),
        (1, 1, "a3", 1 - a1, 1 - a1, L, lambda r, ch, s: sq(r) * ch[0].h11 @ v(s["a3"] * r ** (-a1 / 2))),
        (1, 1, "b1", a2 - a1, 0.0, N, lambda r, ch, s: sq(r**a2) * ch[0].h12 @ v(s["b1"] * r ** (-a1 / 2))),
        (1, 2, "a1,a2", a1, a1, L, lambda r, ch, s: sq(r**a1) * ch[0].h21 @ v(s["a1"], s["a2"])),
        (1, 2, "a3", 0.0, 0.0, N, lambda r, ch, s: sq(r**a1) * ch[0].h21 @ v(s["a3"] * r ** (-a1 / 2))),
        (1, 2, "b1", 1 - a1, 1 - a1, L, lambda r, ch, s: sq(r) * ch[0].h22 @ v(s["b1"] * r ** (-a1 / 2))),
        (2, 1, "a4", 1 - a2, 1 - a2, L, lambda r, ch, s: sq(r) * ch[1].h11 @ v(s["a4"] * r ** (-a2 / 2))),
        (2, 1, "b2,b3", a2, a2, L, lambda r, ch, s: sq(r**a2) * ch[1].h12 @ v(s["b2"], s["b3"])),
        (2, 1, "b4", 0.0, 0.0, N, lambda r, ch, s: sq(r**a2) * ch[1].h12 @ v(s["b4"] * r ** (-a2 / 2))),
        (2, 2, "a4", 0.0, 0.0, N, lambda r, ch, s: sq(r**a2) * ch[1].h21 @ v(s["a4"] * r ** (-a2 / 2))),
        (2, 2, "b2,b3", 1.0, a2, A, lambda r, ch, s: sq(r) * ch[1].h22 @ v(s["b2"], s["b3"])),
        (2, 2, "b4", 1 - a2, 1 - a2, L, lambda r, ch, s: sq(r) * ch[1].h22 @ v(s["b4"] * r ** (-a2 / 2))),
        (3, 1, "c1", 1.0, a1, A, lambda r, ch, s: sq(r) * ch[2].h11 @ v(c1(ch, s))),
        (3, 1, "a5", 1 - a1, 1 - a1, L, lambda r, ch, s: sq(r) * ch[2].h11 @ v(s["a5"] * r ** (-a1 / 2))),
        (3, 1, "c2", a2, None, U, lambda r, ch, s: sq(r**a2) * ch[2].h12 @ v(c2(ch, s))),
        (3, 1, "b5", 0.0, 0.0, N, lambda r, ch, s: sq(r**a2) * ch[2].h12 @ v(s["b5"] * r ** (-a2 / 2))),
        (3, 2, "c2", 1.0, a2, A, lambda r, ch, s: sq(r) * ch[2].h22 @ v(c2(ch, s))),
        (3, 2, "b5", 1 - a2, 1 - a2, L, lambda r, ch, s: sq(r) * ch[2].h22 @ v(s["b5"] * r ** (-a2 / 2))),
        (3, 2, "c1", a1, None, U, lambda r, ch, s: sq(r**a1) * ch[2].h21 @ v(c1(ch, s))),
        (3, 2, "a5", 0.0, 0.0, N, lambda r, ch, s: sq(r**a1) * ch[2].h21 @ v(s["a5"] * r ** (-a1 / 2))),
    ]


_SYMBOLS = ("a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "b5")


def scheme_power_audit(a: AlphaPair, rhos=DEFAULT_RHOS, trials: int = 2000, seed: int = 0) -> list[AuditRow]:
    """Measured received-power exponent of every term of the 3-slot scheme.

    Symbols with an explicit ``rho^(-alpha/2)`` scaling carry it; all other
    symbols and the normalized common codewords have unit power, and the
    ``phi`` entries are zero.
    """
    if classify_region(a) is not RegionCase.BOTH_WEAK:
        raise DomainError("the 3-slot scheme is defined only for BOTH_WEAK")
    rhos = _check_grid(rhos, trials)
    a1, a2 = float(a.alpha1), float(a.alpha2)
    terms = _audit_terms(a1, a2)
    power = np.zeros((len(terms), len(rhos), trials))
    for t in range(trials):
        gen = _generator(seed, t)
        ch = [_draw_channel(gen) for _ in range(3)]
        s = dict(zip(_SYMBOLS, box_muller(gen, len(_SYMBOLS))))
        for i, (*_, build) in enumerate(terms):
            for j, rho in enumerate(rhos):
                power[i, j, t] = abs(build(rho, ch, s)) ** 2
    rows = []
    for i, (slot, rx, label, expected, labeled, kind, _) in enumerate(terms):
        mean_power = power[i].mean(axis=1)
        slope, _ = fit_slope(rhos, np.log(mean_power))
        rows.append(AuditRow(slot, rx, label, slope, expected, labeled, kind))
    return rows
