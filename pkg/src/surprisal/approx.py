"""Flat and steep approximations inside a trace-distance ball, and smoothed divergences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import Dichotomy, Spectrum, measures, relative_variance, trace_distance, relative_entropy
from .errors import ExactSearchTooLarge, InvalidEpsilon
from .lorenz import eval_at, line_envelope, lorenz_curve

EXACT_SEARCH_MAX_DIM = 16
ROUNDOFF = 1e-15


@dataclass(frozen=True)
class ApproxState:
    spectrum: Spectrum
    eps: float
    kind: Literal["flat", "steep"]
    indices: tuple  # (M, N) for flat, (R, r) for steep; 1-based, in sigma order

    def dichotomy(self, s: Spectrum) -> Dichotomy:
        return Dichotomy(self.spectrum, s)


@dataclass(frozen=True)
class SmoothedBounds:
    smax_eps: float
    smin_eps_lower: float
    smin_eps_exact: float | None
    f_sigma: float


def _check_eps(eps: float, lo_open: bool = False, hi_open: bool = False):
    bad = math.isnan(eps) or eps < 0 or eps > 1
    bad = bad or (lo_open and eps <= 0) or (hi_open and eps >= 1)
    if bad:
        lo = "(" if lo_open else "["
        hi = ")" if hi_open else "]"
        raise InvalidEpsilon(f"eps must lie in {lo}0, 1{hi}, got {eps!r}")


def _unsort(d: Dichotomy, q_sorted: np.ndarray) -> Spectrum:
    out = np.empty_like(q_sorted)
    out[d.sigma_order] = q_sorted
    out = np.maximum(out, 0.0)
    return Spectrum(out / out.sum())


def flat_approximation(d: Dichotomy, eps: float) -> ApproxState:
    """The flattest state within trace distance ``eps`` of ``d.p``.

    Mass ``eps`` is removed from the leading block (indices ``1..M`` in sigma
    order) and added to the trailing block (``N..d``); each block is made
    proportional to the reference.
    """
    _check_eps(eps)
    if trace_distance(d.p, d.s) < eps:
        return ApproxState(d.s, eps, "flat", (0, 0))
    if eps == 0 or d.dim == 1:
        return ApproxState(d.p, eps, "flat", (d.dim, d.dim))
    q, t = d.ordered()
    n = d.dim
    r = q / t
    Q = np.cumsum(q)
    T = np.cumsum(t)
    tailQ = np.cumsum(q[::-1])[::-1]  # tailQ[i] = sum_{j >= i} q_j (0-based)
    tailT = np.cumsum(t[::-1])[::-1]
    # the leading block never extends past the ratios above one and the
    # trailing block never starts before them; this keeps M < N under round-off
    k = int(np.count_nonzero(r > 1))
    k = min(max(k, 1), n - 1)
    head = Q[:-1] - r[1:] * T[:-1]  # index m-1 holds the value for M = m
    ok = np.nonzero(eps <= head[:k])[0]
    M = int(ok[0]) + 1 if ok.size else k
    tail = r[:-1] * tailT[1:] - tailQ[1:]  # index j holds the value for N = j + 2
    ok = np.nonzero(eps <= tail[k - 1 :])[0]
    N = int(ok[-1]) + k + 1 if ok.size else k + 1
    out = q.copy()
    out[:M] = t[:M] * (Q[M - 1] - eps) / T[M - 1]
    out[N - 1 :] = t[N - 1 :] * (tailQ[N - 1] + eps) / tailT[N - 1]
    return ApproxState(_unsort(d, out), eps, "flat", (M, N))


def steep_approximation(d: Dichotomy, eps: float) -> ApproxState:
    """A steepened state within trace distance ``eps`` of ``d.p``.

    The top-ratio entry gains ``eps``; the same mass is cut from the far end
    of the sigma-ordered tail.
    """
    _check_eps(eps)
    q, _ = d.ordered()
    n = d.dim
    if eps > 1 - q[0]:
        out = np.zeros(n)
        out[0] = 1.0
        return ApproxState(_unsort(d, out), eps, "steep", (1, float(1 - q[0])))
    if eps == 0 or n == 1:
        return ApproxState(d.p, eps, "steep", (n, 0.0))
    tailQ = np.cumsum(q[::-1])[::-1]
    candidates = np.nonzero(tailQ[1:] >= eps)[0]
    R = int(candidates[-1]) + 2 if candidates.size else 2
    rest = float(tailQ[R]) if R < n else 0.0
    out = q.copy()
    out[0] += eps
    cut = out[R - 1] - (eps - rest)
    # an entry emptied up to round-off leaves the support
    out[R - 1] = cut if cut > ROUNDOFF else 0.0
    out[R:] = 0.0
    return ApproxState(_unsort(d, out), eps, "steep", (R, rest))


def variance_spread(d: Dichotomy, eps: float, factor: float = 1.0) -> float:
    """``sqrt(V (factor/eps - 1))``; factor 1 for smoothing, 2 for transitions."""
    return math.sqrt(relative_variance(d) * max(factor / eps - 1.0, 0.0))


def cantelli_envelopes(d: Dichotomy, eps: float) -> tuple[float, float]:
    """Slopes ``(r_st, r_fl)`` of the lines bounding steep and flat curves."""
    _check_eps(eps, lo_open=True, hi_open=True)
    S = relative_entropy(d)
    f = variance_spread(d, eps)
    return 2.0 ** (S - f), 2.0 ** (S + f)


def envelope_slacks(d: Dichotomy, eps: float) -> tuple[float, float]:
    """Worst margins of ``steep >= line(r_st)`` and ``flat <= line(r_fl)``.

    The steep margin is checked at the steep curve's breakpoints and at the
    line's kink; the flat margin at the flat curve's breakpoints, which
    suffices since a concave curve minus a concave line is extremal there.
    """
    r_st, r_fl = cantelli_envelopes(d, eps)
    steep = lorenz_curve(steep_approximation(d, eps).dichotomy(d.s))
    flat = lorenz_curve(flat_approximation(d, eps).dichotomy(d.s))
    xs = steep.xs
    if 1.0 / r_st <= 1.0:
        xs = np.union1d(xs, [1.0 / r_st])
    slack_st = float(np.min(eval_at(steep, xs) - line_envelope(r_st, xs)))
    xf = flat.xs
    if 1.0 / r_fl <= 1.0:
        xf = np.union1d(xf, [1.0 / r_fl])
    slack_fl = float(np.min(line_envelope(r_fl, xf) - eval_at(flat, xf)))
    return slack_st, slack_fl


def _subset_masks(n: int) -> np.ndarray:
    idx = np.arange(1, 2**n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def exact_smin(d: Dichotomy, eps: float) -> float:
    """Largest ``-log s(A)`` over supports ``A`` whose complement holds at most ``eps`` of ``p``."""
    if d.dim > EXACT_SEARCH_MAX_DIM:
        raise ExactSearchTooLarge(f"exact search limited to dim <= {EXACT_SEARCH_MAX_DIM}")
    masks = _subset_masks(d.dim)
    outside = (~masks).astype(float) @ d.p.values
    inside = masks.astype(float) @ d.s.values
    feasible = outside <= eps + 1e-12
    best = float(inside[feasible].min())
    return max(0.0, -math.log2(best))


def smoothed_divergences(d: Dichotomy, eps: float, exact: bool | None = None) -> SmoothedBounds:
    """Smoothed max divergence and bounds on the smoothed min divergence.

    ``exact=None`` runs the subset search whenever the dimension allows it;
    ``exact=True`` forces it and raises if the dimension is too large.
    """
    _check_eps(eps, lo_open=True, hi_open=True)
    smax = measures(flat_approximation(d, eps).dichotomy(d.s)).Smax
    smin_lower = measures(steep_approximation(d, eps).dichotomy(d.s)).Smin
    if exact is None:
        exact = d.dim <= EXACT_SEARCH_MAX_DIM
    smin_exact = exact_smin(d, eps) if exact else None
    return SmoothedBounds(smax, smin_lower, smin_exact, variance_spread(d, eps))
