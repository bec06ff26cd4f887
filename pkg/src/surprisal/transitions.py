"""Sufficient transition criteria and entropy-production bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .approx import flat_approximation, steep_approximation, variance_spread, _check_eps
from .core import (
    INV_LN2,
    LN2,
    Dichotomy,
    _as_spectrum,
    dim_cap,
    marginals,
    measures,
    monotone_M,
    mutual_information,
    shannon_entropy,
    tensor,
    varentropy,
)
from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    InvalidDelta,
    NonpositiveEntropyGap,
    ReferenceMismatch,
)
from .lorenz import LorenzCurve, TransitionVerdict, dominates, lorenz_curve


@dataclass(frozen=True)
class SufficiencyVerdict:
    sufficient: bool
    lhs: float
    rhs: float
    certified_eps: float | None

    def __bool__(self):
        return self.sufficient


@dataclass(frozen=True)
class RateReport:
    n: int
    eps_n: float
    certified: bool
    rate_lower: float | None
    resonance_gap: float
    k: float
    k_prime: float
    ratio: float


def sufficient_condition(src: Dichotomy, dst: Dichotomy, eps: float) -> SufficiencyVerdict:
    """Entropy/variance test guaranteeing that ``src`` reaches ``dst`` up to ``eps``."""
    _check_eps(eps, lo_open=True, hi_open=True)
    a, b = measures(src), measures(dst)
    lhs = a.S - variance_spread(src, eps, factor=2.0)
    rhs = b.S + variance_spread(dst, eps, factor=2.0)
    gap = a.S - b.S
    cert = 2.0 * (math.sqrt(a.V) + math.sqrt(b.V)) ** 2 / gap**2 if gap > 0 else None
    return SufficiencyVerdict(lhs >= rhs, lhs, rhs, cert)


def sufficiency_certificate(src: Dichotomy, dst: Dichotomy, eps: float) -> TransitionVerdict:
    """Whether the half-eps steep version of ``src`` dominates the half-eps flat version of ``dst``."""
    _check_eps(eps, lo_open=True, hi_open=True)
    steep = steep_approximation(src, eps / 2).dichotomy(src.s)
    flat = flat_approximation(dst, eps / 2).dichotomy(dst.s)
    return dominates(lorenz_curve(steep), lorenz_curve(flat))


def iid_error_bound(src: Dichotomy, dst: Dichotomy, n: int) -> float:
    """Error level at which ``n`` copies of ``src`` certifiably reach ``n`` copies of ``dst``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a, b = measures(src), measures(dst)
    gap = a.S - b.S
    if not gap > 0:
        raise NonpositiveEntropyGap(f"source must have larger relative entropy (gap {gap!r})")
    bound = 2.0 * (math.sqrt(a.V) + math.sqrt(b.V)) ** 2 / (n * gap**2)
    return min(max(bound, 0.0), 1.0)


def iid_rate_bound(src: Dichotomy, dst: Dichotomy, n: int, eps_n: float) -> RateReport:
    """Certified conversion rate for ``n`` copies at error ``eps_n`` (shared reference).

    With ``m = sqrt(R)`` the sufficient condition reads
    ``m**2 + sqrt(k') m - (r - sqrt(k)) < 0``; the reported rate is the square
    of the positive root, the largest rate the condition certifies.
    """
    _check_eps(eps_n, lo_open=True, hi_open=True)
    if n < 1:
        raise ValueError("n must be >= 1")
    if src.dim != dst.dim or not np.array_equal(src.s.values, dst.s.values):
        raise ReferenceMismatch("both dichotomies must share the same reference")
    a, b = measures(src), measures(dst)
    if not b.S > 0:
        raise NonpositiveEntropyGap("target relative entropy must be positive")
    scale = (2.0 - eps_n) / (eps_n * n) / b.S**2
    k, kp = scale * a.V, scale * b.V
    r = a.S / b.S
    gap = -math.sqrt(k) + math.sqrt(r * kp)
    c = r - math.sqrt(k)
    if c <= 0:
        return RateReport(n, eps_n, False, None, gap, k, kp, r)
    if k == 0 and kp == 0:
        rate = r
    else:
        root = 0.5 * (-math.sqrt(kp) + math.sqrt(kp + 4.0 * c))
        rate = root * root
    return RateReport(n, eps_n, True, rate, gap, k, kp, r)


def entropy_production_bound(src: Dichotomy, dst: Dichotomy) -> float:
    """Lower bound ``dV / (2 sqrt(M))`` on the relative-entropy drop ``S(src) - S(dst)``."""
    dV = measures(src).V - measures(dst).V
    return dV / (2.0 * math.sqrt(monotone_M(src)))


def budget_constant(smin: float, dim: int) -> float:
    """``sqrt(2 ln 2) (12 + log2(smin)**2 + 8 log2(dim)**2)``."""
    return math.sqrt(2 * LN2) * (12 + math.log2(smin) ** 2 + 8 * math.log2(dim) ** 2)


def correlation_penalty(x: float) -> float:
    """``max(x**(1/2), x**(1/4))`` for ``x >= 0``."""
    x = max(x, 0.0)
    return max(math.sqrt(x), x**0.25)


def marginal_budget(
    joint_final,
    dims: tuple[int, int],
    from_S: Dichotomy,
    from_E: Dichotomy,
    to_refs: tuple,
) -> tuple[float, float]:
    """Both sides of the marginal entropy-production inequality.

    Returns ``(lhs, rhs)`` with ``lhs = dS_S + dS_E`` the summed drops of
    marginal relative entropy and ``rhs`` the variance-driven lower bound.
    """
    joint = _as_spectrum(joint_final)
    dS, dE = dims
    if (from_S.dim, from_E.dim) != (dS, dE):
        raise DimensionMismatch(f"initial systems have dims {(from_S.dim, from_E.dim)}, expected {dims}")
    ref_S, ref_E = (_as_spectrum(x) for x in to_refs)
    if (ref_S.dim, ref_E.dim) != (dS, dE):
        raise DimensionMismatch("final references do not match dims")
    fin_S, fin_E = marginals(joint, dims)
    to_S, to_E = Dichotomy(fin_S, ref_S), Dichotomy(fin_E, ref_E)
    a_S, a_E, b_S, b_E = (measures(x) for x in (from_S, from_E, to_S, to_E))
    lhs = (a_S.S - b_S.S) + (a_E.S - b_E.S)
    product = tensor(from_S, from_E)
    smin = min(float(product.s.values.min()), float(np.kron(ref_S.values, ref_E.values).min()))
    K = budget_constant(smin, dS * dE)
    info = mutual_information(joint, dims)
    num = (a_S.V - b_S.V) + (a_E.V - b_E.V) - K * correlation_penalty(info)
    rhs = num / (2.0 * math.sqrt(monotone_M(product)))
    return lhs, rhs


def unital_M(p) -> float:
    """``V + (1/ln2 + H)**2`` for Shannon entropy ``H`` and varentropy ``V``."""
    return varentropy(p) + (INV_LN2 + shannon_entropy(p)) ** 2


def _erasure_curves(p: np.ndarray, n: int) -> tuple[LorenzCurve, LorenzCurve]:
    d = p.size
    total = d * 2**n
    q = np.sort(p)[::-1]
    xs = np.concatenate((np.arange(d + 1) / total, [1.0]))
    ys = np.concatenate(([0.0], np.minimum(np.cumsum(q), 1.0), [1.0]))
    ys[-2] = 1.0
    target = LorenzCurve(np.array([0.0, 1.0 / d, 1.0]), np.array([0.0, 1.0, 1.0]))
    return LorenzCurve(xs, ys), target


def landauer(p, n_max: int) -> tuple[int | None, float]:
    """Smallest number of clean bits that erases ``p`` exactly, and the variance-corrected bound.

    The joint spectra are never materialized: the initial curve has the
    sorted ``p`` at spacing ``1/(d 2**n)`` and the target curve is
    ``min(d x, 1)`` for every ``n``.
    """
    p = _as_spectrum(p)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if p.dim * 2**n_max > dim_cap():
        raise DimensionCapExceeded(f"{p.dim}*2**{n_max} exceeds cap {dim_cap()}")
    n_exact = None
    for n in range(n_max + 1):
        start, target = _erasure_curves(p.values, n)
        if dominates(start, target).decision:
            n_exact = n
            break
    V = varentropy(p)
    H = shannon_entropy(p)
    n_bound = H + V / (2.0 * math.sqrt(unital_M(p)))
    return n_exact, n_bound


def catalyst_bound(delta: float, d_S: int, d_E: int, M_from: float) -> float:
    """Explicit bound on the variance a catalyst of dim ``d_E`` can remove at correlation ``delta``.

    Uses the marginal-budget constant with the smallest eigenvalue of the
    maximally mixed joint reference.
    """
    if math.isnan(delta) or not (0 <= delta <= 1):
        raise InvalidDelta(f"delta must lie in [0, 1], got {delta!r}")
    d = d_S * d_E
    K = budget_constant(1.0 / d, d)
    return 2.0 * math.sqrt(M_from) * delta + K * correlation_penalty(delta)
