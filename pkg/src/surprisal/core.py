"""Spectra, dichotomies and the scalar information measures built on them.

All logarithms are base 2. A :class:`Dichotomy` is a co-diagonal pair of
states given by their eigenvalues ``p`` (the state) and ``s`` (a full-rank
reference) in a common eigenbasis.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    DimensionTooSmall,
    InvalidReferenceEigenvalue,
    NegativeAlpha,
    NegativeEntry,
    NotNormalized,
    ReferenceNotFullRank,
)

NORM_TOL = 1e-9
LN2 = math.log(2.0)
INV_LN2 = 1.0 / LN2
DEFAULT_DIM_CAP = 2**20


def dim_cap() -> int:
    """Largest number of entries a tensor product may produce.

    Overridable through the ``SURPRISAL_DIM_CAP`` environment variable.
    """
    raw = os.environ.get("SURPRISAL_DIM_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_DIM_CAP
    return int(raw)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a state: nonnegative, summing to one."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(np.ravel(self.values))
        if arr.size == 0:
            raise DimensionTooSmall("a spectrum needs at least one entry")
        if arr.min() < 0:
            raise NegativeEntry(f"negative entry {arr.min()!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise NotNormalized(f"entries sum to {total!r}")
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.values, other.values))

    def __repr__(self):
        return f"Spectrum({self.values.tolist()!r})"

    @property
    def support(self) -> np.ndarray:
        return self.values > 0

    @classmethod
    def uniform(cls, dim: int) -> "Spectrum":
        if dim < 1:
            raise DimensionTooSmall("dim must be >= 1")
        return cls(np.full(dim, 1.0 / dim))

    @classmethod
    def point_mass(cls, dim: int, index: int = 0) -> "Spectrum":
        v = np.zeros(dim)
        v[index] = 1.0
        return cls(v)


def validate_spectrum(values: Sequence[float], tolerance: float = NORM_TOL) -> Spectrum:
    """Clean up round-off and return a :class:`Spectrum`.

    Entries in ``[-tolerance, 0)`` are clamped to zero and the vector is
    renormalized when its sum is within ``tolerance`` of one. Anything
    further off raises :class:`NegativeEntry` / :class:`NotNormalized`.
    """
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise DimensionTooSmall("empty list of probabilities")
    if not np.isfinite(arr).all():
        raise NotNormalized("non-finite entry")
    low = arr.min()
    if low < -tolerance:
        i = int(np.argmin(arr))
        raise NegativeEntry(f"entry {i} is negative ({float(arr[i])!r})")
    if low < 0:
        arr = np.maximum(arr, 0.0)
    total = float(arr.sum())
    if abs(total - 1.0) > tolerance:
        raise NotNormalized(f"entries sum to {total!r}")
    return Spectrum(arr / total)


def _as_spectrum(x) -> Spectrum:
    return x if isinstance(x, Spectrum) else validate_spectrum(x)


@dataclass(frozen=True, eq=False)
class Dichotomy:
    """A state ``p`` together with a full-rank reference ``s``.

    ``sigma_order`` lists indices by non-increasing ratio ``p_i / s_i``,
    ties broken by ascending index.
    """

    p: Spectrum
    s: Spectrum
    sigma_order: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p, s = _as_spectrum(self.p), _as_spectrum(self.s)
        if p.dim != s.dim:
            raise DimensionMismatch(f"state has dim {p.dim}, reference has dim {s.dim}")
        if s.values.min() <= 0:
            raise ReferenceNotFullRank("reference must be strictly positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        order = np.argsort(-self.ratios, kind="stable")
        order.setflags(write=False)
        object.__setattr__(self, "sigma_order", order)

    @property
    def dim(self) -> int:
        return self.p.dim

    @property
    def ratios(self) -> np.ndarray:
        return self.p.values / self.s.values

    def ordered(self) -> tuple[np.ndarray, np.ndarray]:
        """``(p, s)`` rearranged into sigma order."""
        o = self.sigma_order
        return self.p.values[o], self.s.values[o]

    def __repr__(self):
        return f"Dichotomy(p={self.p.values.tolist()!r}, s={self.s.values.tolist()!r})"


def dichotomy(p, s=None) -> Dichotomy:
    """Build a :class:`Dichotomy`; ``s`` defaults to the uniform reference."""
    p = _as_spectrum(p)
    s = Spectrum.uniform(p.dim) if s is None else _as_spectrum(s)
    return Dichotomy(p, s)


@dataclass(frozen=True)
class MeasureSet:
    S: float
    V: float
    L: float
    Smin: float
    Smax: float


def trace_distance(a, b) -> float:
    a, b = _as_spectrum(a), _as_spectrum(b)
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} != {b.dim}")
    return 0.5 * float(np.abs(a.values - b.values).sum())


def log_ratios(d: Dichotomy) -> tuple[np.ndarray, np.ndarray]:
    """Weights and base-2 log ratios on the support of ``p``."""
    mask = d.p.values > 0
    w = d.p.values[mask]
    return w, np.log2(w / d.s.values[mask])


def measures(d: Dichotomy) -> MeasureSet:
    w, lr = log_ratios(d)
    S = float(np.dot(w, lr))
    L = float(np.dot(w, lr * lr))
    # central form keeps V >= 0 without cancellation
    V = float(np.dot(w, (lr - S) ** 2))
    Smax = float(lr.max())
    Smin = float(-np.log2(d.s.values[d.p.values > 0].sum()))
    return MeasureSet(S=S, V=V, L=L, Smin=max(0.0, Smin), Smax=Smax)


def relative_entropy(d: Dichotomy) -> float:
    w, lr = log_ratios(d)
    return float(np.dot(w, lr))


def relative_variance(d: Dichotomy) -> float:
    w, lr = log_ratios(d)
    S = np.dot(w, lr)
    return float(np.dot(w, (lr - S) ** 2))


def shannon_entropy(p) -> float:
    v = _as_spectrum(p).values
    v = v[v > 0]
    return float(-np.dot(v, np.log2(v)))


def varentropy(p) -> float:
    """Variance of the surprisal ``-log p_i`` under ``p``."""
    v = _as_spectrum(p).values
    v = v[v > 0]
    x = -np.log2(v)
    return float(np.dot(v, (x - np.dot(v, x)) ** 2))


def renyi_entropy(p, alpha: float) -> float:
    """Renyi entropy in bits; alpha in {0, 1, inf} are the limiting cases."""
    if alpha < 0 or math.isnan(alpha):
        raise NegativeAlpha(f"alpha must be >= 0, got {alpha!r}")
    v = _as_spectrum(p).values
    v = v[v > 0]
    if alpha == 0:
        return math.log2(v.size)
    if alpha == 1:
        return float(-np.dot(v, np.log2(v)))
    if math.isinf(alpha):
        return float(-math.log2(v.max()))
    t = alpha - 1.0
    if abs(t) < 0.5:
        # log Q = log1p(sum p (p^t - 1)) avoids cancellation near alpha = 1
        qm1 = float(np.dot(v, np.expm1(t * np.log(v))))
        return -math.log1p(qm1) / (t * LN2)
    return float(np.log2(np.sum(v**alpha)) / (1.0 - alpha))


def surprisal_cumulants(p, max_order: int) -> list[float]:
    """Cumulants of the surprisal ``-log2 p_i`` drawn with probability ``p_i``.

    Entry ``n-1`` holds the ``n``-th cumulant; the first two are the Shannon
    entropy and the varentropy. Computed from central moments.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    v = _as_spectrum(p).values
    v = v[v > 0]
    x = -np.log2(v)
    mean = float(np.dot(v, x))
    c = x - mean
    mu = [1.0, 0.0] + [float(np.dot(v, c**k)) for k in range(2, max_order + 1)]
    kappa = [mean] + [0.0] * (max_order - 1)
    for n in range(2, max_order + 1):
        acc = mu[n]
        for k in range(2, n - 1):
            acc -= math.comb(n - 1, k - 1) * kappa[k - 1] * mu[n - k]
        kappa[n - 1] = acc
    return kappa


def renyi_taylor(p, alpha: float, terms: int) -> float:
    """Partial sum of the expansion of the Renyi curve around alpha = 1.

    With base-2 logarithms the n-th coefficient is
    ``kappa_n * ln(2)**(n-1) / n!`` where ``kappa_n`` are the plain cumulants
    returned by :func:`surprisal_cumulants`.
    """
    kappa = surprisal_cumulants(p, terms)
    t = 1.0 - alpha
    return sum(k * (LN2 * t) ** (n - 1) / math.factorial(n) for n, k in enumerate(kappa, start=1))


def monotone_M(d: Dichotomy, smin_ref: float | None = None) -> float:
    """``V + (1/ln2 - log(smin_ref) - S)**2``; non-decreasing under transitions."""
    if smin_ref is None:
        smin_ref = float(d.s.values.min())
    if not (0 < smin_ref <= 1):
        raise InvalidReferenceEigenvalue(f"smin_ref must lie in (0, 1], got {smin_ref!r}")
    m = measures(d)
    return m.V + (INV_LN2 - math.log2(smin_ref) - m.S) ** 2


def max_variance_residual(r: float, dim: int) -> float:
    return (1 - 2 * r) * math.log((1 - r) / r * (dim - 1)) - 2


def max_variance_parameter(dim: int, tol: float = 1e-10) -> float:
    """Root ``r`` of ``(1-2r) ln((1-r)(d-1)/r) = 2`` on (0, 1/2), by bisection."""
    if dim < 2:
        raise DimensionTooSmall("max-variance state needs dim >= 2")
    lo, hi = 1e-15, 0.5 - 1e-15
    # residual is decreasing in r: positive at lo, -2 at 1/2
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        g = max_variance_residual(mid, dim)
        if abs(g) <= tol and hi - lo < 1e-15:
            break
        if g > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17:
            break
    r = 0.5 * (lo + hi)
    if abs(max_variance_residual(r, dim)) > tol:
        # extremely steep near the bracket ends; pick the better endpoint
        r = min((lo, hi, r), key=lambda x: abs(max_variance_residual(x, dim)))
    return r


def max_variance_spectrum(dim: int) -> Spectrum:
    r = max_variance_parameter(dim)
    return Spectrum(np.array([1 - r] + [r / (dim - 1)] * (dim - 1)))


def _check_cap(n: int):
    cap = dim_cap()
    if n > cap:
        raise DimensionCapExceeded(f"{n} entries exceeds cap {cap}")


def tensor(a: Dichotomy, b: Dichotomy) -> Dichotomy:
    _check_cap(a.dim * b.dim)
    return Dichotomy(
        Spectrum(np.kron(a.p.values, b.p.values)), Spectrum(np.kron(a.s.values, b.s.values))
    )


def iid_power(d: Dichotomy, n: int) -> Dichotomy:
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(d.dim**n)
    p, s = d.p.values, d.s.values
    for _ in range(n - 1):
        p, s = np.kron(p, d.p.values), np.kron(s, d.s.values)
    return Dichotomy(Spectrum(p), Spectrum(s))


def marginals(joint, dims: tuple[int, int]) -> tuple[Spectrum, Spectrum]:
    """Marginals of a row-major joint distribution over ``dims[0] x dims[1]``."""
    joint = _as_spectrum(joint)
    da, db = dims
    if joint.dim != da * db:
        raise DimensionMismatch(f"joint has dim {joint.dim}, expected {da}x{db}")
    m = joint.values.reshape(da, db)
    return validate_spectrum(m.sum(axis=1)), validate_spectrum(m.sum(axis=0))


def mutual_information(joint, dims: tuple[int, int]) -> float:
    """Relative entropy of the joint to the product of its marginals, in bits."""
    sp = _as_spectrum(joint)
    a, b = marginals(sp, dims)
    p = sp.values
    q = np.outer(a.values, b.values).ravel()
    mask = q > 0
    u = p[mask] / q[mask] - 1.0
    # sum of q ((1+u) ln(1+u) - u): every term is nonnegative, so near-product
    # inputs keep their tiny but genuine correlations instead of cancelling
    terms = np.ones_like(u)  # limit value where p = 0
    pos = u > -1.0
    terms[pos] = (1.0 + u[pos]) * np.log1p(u[pos]) - u[pos]
    return max(float(np.dot(q[mask], terms)) / LN2, 0.0)


def eta(x):
    """``-x log2 x`` extended by continuity to x = 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1.0)), 0.0)
    return out if out.ndim else float(out)


def chi(x, q):
    """``x log2(x/q)**2`` extended by continuity to x = 0."""
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    out = np.where(x > 0, safe * np.log2(safe / q) ** 2, 0.0)
    return out if out.ndim else float(out)
