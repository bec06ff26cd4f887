"""Lorenz curves and (relative) majorization decisions."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .core import Dichotomy, Spectrum, dichotomy
from .errors import InvalidEpsilon, OutOfRange

GAP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LorenzCurve:
    """Concave piecewise-linear curve through ``(xs[k], ys[k])``, starting at the origin."""

    xs: np.ndarray
    ys: np.ndarray

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def __call__(self, x):
        return eval_at(self, x)

    def slopes(self) -> np.ndarray:
        dx = np.diff(self.xs)
        dy = np.diff(self.ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(dx > 0, dy / np.where(dx > 0, dx, 1.0), np.inf)


@dataclass(frozen=True)
class TransitionVerdict:
    decision: bool
    worst_gap: float
    witness_x: float

    def __bool__(self):
        return self.decision


def lorenz_curve(d: Dichotomy) -> LorenzCurve:
    p, s = d.ordered()
    xs = np.concatenate(([0.0], np.cumsum(s)))
    ys = np.concatenate(([0.0], np.cumsum(p)))
    # pin the endpoint against round-off in the prefix sums
    xs[-1] = 1.0
    ys[-1] = 1.0
    xs = np.minimum(xs, 1.0)
    ys = np.minimum(ys, 1.0)
    xs.setflags(write=False)
    ys.setflags(write=False)
    return LorenzCurve(xs, ys)


def eval_at(c: LorenzCurve, x):
    """Linear interpolation of the curve; ``x`` must lie in [0, 1]."""
    arr = np.asarray(x, dtype=float)
    if arr.size and not (arr.min() >= 0 and arr.max() <= 1):
        raise OutOfRange(f"x must lie in [0, 1], got {x!r}")
    # xs may repeat where s-mass is zero-width; np.interp takes the right value
    out = np.interp(arr, c.xs, c.ys)
    return float(out) if out.ndim == 0 else out


def dominates(a: LorenzCurve, b: LorenzCurve) -> TransitionVerdict:
    """Whether ``a(x) >= b(x)`` everywhere, checked at both curves' breakpoints."""
    grid = np.sort(np.concatenate((a.xs, b.xs)))
    gaps = eval_at(a, grid) - eval_at(b, grid)
    k = int(np.argmin(gaps))
    worst = float(gaps[k])
    return TransitionVerdict(worst >= -GAP_TOL, worst, float(grid[k]))


def exact_transition(src: Dichotomy, dst: Dichotomy) -> TransitionVerdict:
    """Whether some stochastic map sends ``src.p -> dst.p`` and ``src.s -> dst.s``."""
    return dominates(lorenz_curve(src), lorenz_curve(dst))


def approx_transition(src: Dichotomy, dst: Dichotomy, eps: float) -> TransitionVerdict:
    """Whether ``src`` reaches some state within trace distance ``eps`` of ``dst.p``."""
    from .approx import flat_approximation

    if not (0 <= eps < 1):
        raise InvalidEpsilon(f"eps must lie in [0, 1), got {eps!r}")
    flat = flat_approximation(dst, eps)
    return exact_transition(src, Dichotomy(flat.spectrum, dst.s))


def slope_bounds(d: Dichotomy) -> tuple[float, float]:
    """Smallest and largest ratio ``p_i / s_i`` over the support of ``p``."""
    r = d.ratios[d.p.values > 0]
    return float(r.min()), float(r.max())


def line_envelope(c: float, x):
    """``min(c x, 1)``."""
    return np.minimum(c * np.asarray(x, dtype=float), 1.0)


def hypothesis_testing_curve(d: Dichotomy, ts) -> np.ndarray:
    """``E_t = sum_i max(p_i - t s_i, 0)`` for each ``t`` in ``ts``."""
    ts = np.asarray(ts, dtype=float)
    return np.maximum(d.p.values[None, :] - ts[:, None] * d.s.values[None, :], 0.0).sum(axis=1)


def _candidate_slopes(d: Dichotomy) -> np.ndarray:
    return np.unique(np.concatenate(([0.0], d.ratios)))


def hypothesis_testing_oracle(src: Dichotomy, dst: Dichotomy, tol: float = GAP_TOL) -> bool:
    """Decide ``src -> dst`` by comparing ``E_t`` at every slope where either is kinked.

    Both sides are convex piecewise-linear in ``t`` with kinks at the ratios,
    and agree (value 0) for large ``t``; so comparing at the union of kinks
    and ``t = 0`` decides the inequality for all ``t >= 0``.
    """
    ts = np.union1d(_candidate_slopes(src), _candidate_slopes(dst))
    return bool(np.all(hypothesis_testing_curve(src, ts) >= hypothesis_testing_curve(dst, ts) - tol))


def partial_sum_majorizes(p, q, tol: float = GAP_TOL) -> bool:
    """Classical majorization ``p > q`` for equal-length vectors via sorted partial sums."""
    a = np.sort(np.asarray(p, dtype=float))[::-1]
    b = np.sort(np.asarray(q, dtype=float))[::-1]
    if a.size != b.size:
        raise ValueError("partial-sum majorization needs equal lengths")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - tol))


def curve_csv(c: LorenzCurve) -> str:
    buf = io.StringIO()
    buf.write("x,y\n")
    for x, y in zip(c.xs.tolist(), c.ys.tolist()):
        buf.write(f"{x:.17g},{y:.17g}\n")
    return buf.getvalue()


def is_concave(c: LorenzCurve, tol: float = 1e-9) -> bool:
    sl = c.slopes()
    finite = sl[np.isfinite(sl)]
    return bool(np.all(np.diff(finite) <= tol))


def fixed_point(s: Spectrum) -> Dichotomy:
    """The pair ``(s, s)``, the minimum of the ordering."""
    return dichotomy(s, s)
