"""Recover a spectrum from its Renyi entropies at integer orders 2..d."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Spectrum, renyi_entropy
from .errors import ComplexRoots, EmptyInput, InconsistentEntropies, InvalidPowerSums, NoConvergence

IMAG_SLACK = 1e-7
RANGE_SLACK = 1e-7
MAX_ITER = 10_000
LONG_STALL = 200
RESIDUAL_TOL = 1e-12
CLUSTER_RADIUS = 0.05
WIDE_CLUSTER = 1e-6
POWER_SUM_TOL = 1e-6


@dataclass(frozen=True)
class PowerSums:
    """``sums[k-1] = sum_i p_i**k`` for ``k = 1..d``."""

    sums: tuple[float, ...]

    @property
    def d(self) -> int:
        return len(self.sums)

    def __getitem__(self, k: int) -> float:
        """One-based access: ``ps[k]`` is the k-th power sum."""
        if not 1 <= k <= self.d:
            raise IndexError(k)
        return self.sums[k - 1]


@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial; ``coefficients[k]`` multiplies ``lambda**(d-k)``."""

    coefficients: tuple[float, ...]

    @property
    def d(self) -> int:
        return len(self.coefficients) - 1

    @property
    def elementary(self) -> tuple[float, ...]:
        """Elementary symmetric polynomials ``e_0..e_d`` of the roots."""
        return tuple((-1) ** k * c for k, c in enumerate(self.coefficients))

    def __call__(self, z):
        return np.polyval(np.asarray(self.coefficients), z)


def power_sums_from_renyi(renyi_values: Sequence[float]) -> PowerSums:
    """Power sums ``2**((1-k) S_k)`` from Renyi entropies (bits) of orders ``k = 2..d``."""
    vals = [float(v) for v in renyi_values]
    if not vals:
        raise EmptyInput("need Renyi entropies for orders 2..d")
    if not all(math.isfinite(v) for v in vals):
        raise InvalidPowerSums("Renyi entropies must be finite")
    return PowerSums((1.0,) + tuple(2.0 ** ((1 - k) * v) for k, v in enumerate(vals, start=2)))


def newton_girard(ps: PowerSums) -> CharPoly:
    """Characteristic polynomial from power sums via ``k e_k = sum_i (-1)**(i-1) e_{k-i} P_i``."""
    d = ps.d
    e = [1.0] + [0.0] * d
    for k in range(1, d + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * ps[i]
        e[k] = acc / k
    return CharPoly(tuple((-1) ** k * e[k] for k in range(d + 1)))


def _durand_kerner(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    d = coeffs.size - 1
    z = (0.4 + 0.9j) ** np.arange(d)
    best, stalled = np.inf, 0
    for _ in range(MAX_ITER):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = np.polyval(coeffs, z) / diff.prod(axis=1)
        z = z - step
        size = float(np.max(np.abs(step)))
        if size < 1e-15:
            break
        # once at round-off level the steps stop shrinking; quit then. Multiple
        # roots stall far above round-off, so long stalls end the run too
        if size < 0.5 * best:
            best, stalled = size, 0
        else:
            stalled += 1
            if (best < 1e-9 and stalled >= 25) or stalled >= LONG_STALL:
                break
    return z, float(np.max(np.abs(np.polyval(coeffs, z))))


def _refine_multiple(coeffs: np.ndarray, start: complex, m: int, radius: float) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    dq = np.polyder(coeffs, m - 1)
    ddq = np.polyder(dq)
    z = start
    for _ in range(100):
        slope = np.polyval(ddq, z)
        if slope == 0:
            break
        step = np.polyval(dq, z) / slope
        z = z - step
        if abs(step) <= 1e-17:
            break
    return z if np.isfinite(z) and abs(z - start) <= radius else start


def _merge_clusters(z: np.ndarray, coeffs: np.ndarray | None = None, min_radius: float = 1e-9) -> np.ndarray:
    """Replace each cluster of nearly coincident roots by one multiple root.

    A k-fold root comes back as k points spread on a small circle with
    sizeable imaginary parts. Their mean seeds a Newton refinement on the
    (k-1)-th derivative of the polynomial when the coefficients are given.
    Roots are linked when closer than a few times the largest imaginary part.
    """
    d = z.size
    spread = 3.0 * float(np.max(np.abs(z.imag))) if d else 0.0
    radius = min(max(spread, min_radius), CLUSTER_RADIUS)
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(d):
        for j in range(i + 1, d):
            if abs(z[i] - z[j]) <= radius:
                parent[find(i)] = find(j)
    out = z.copy()
    groups: dict[int, list[int]] = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        centre = z[members].mean()
        if coeffs is not None and len(members) > 1:
            centre = _refine_multiple(coeffs, centre, len(members), radius)
        out[members] = centre
    return out


def _coefficient_error(z: np.ndarray, coeffs: np.ndarray) -> float:
    if not np.all(np.isfinite(z)):
        return math.inf
    return float(np.max(np.abs(np.poly(z) - coeffs)))


def poly_roots(cp: CharPoly) -> list[float]:
    """Real roots of a characteristic polynomial whose roots are known to lie in [0, 1]."""
    coeffs = np.asarray(cp.coefficients, dtype=float)
    if coeffs[0] != 1.0:
        raise InvalidPowerSums("polynomial must be monic")
    if cp.d == 0:
        return []
    z, residual = _durand_kerner(coeffs)
    if not np.all(np.isfinite(z)):
        raise NoConvergence("root iteration diverged")
    # multiple roots converge only linearly and stop short as split clusters;
    # merged candidates are kept when they reproduce the coefficients better
    candidates = [_merge_clusters(z, coeffs), _merge_clusters(z, coeffs, WIDE_CLUSTER)]
    if residual < RESIDUAL_TOL and np.max(np.abs(z.imag)) <= IMAG_SLACK:
        candidates.insert(0, z)
    z = min(candidates, key=lambda c: _coefficient_error(c, coeffs))
    if not np.all(np.isfinite(z)):
        raise NoConvergence(f"no convergence after {MAX_ITER} iterations")
    if np.max(np.abs(z.imag)) > IMAG_SLACK:
        raise ComplexRoots(f"root with imaginary part {np.max(np.abs(z.imag)):.3g}")
    roots = z.real
    if np.any(roots < -RANGE_SLACK) or np.any(roots > 1 + RANGE_SLACK):
        raise InconsistentEntropies(f"root outside [0, 1]: {roots.tolist()!r}")
    return np.clip(roots, 0.0, 1.0).tolist()


def spectrum_from_renyi(renyi_values: Sequence[float], d: int | None = None) -> Spectrum:
    """The unique spectrum (sorted descending) whose Renyi entropies are the given values."""
    vals = list(renyi_values)
    if d is not None and len(vals) != d - 1:
        raise InvalidPowerSums(f"dimension {d} needs {d - 1} Renyi values, got {len(vals)}")
    if not vals and d == 1:
        return Spectrum([1.0])
    ps = power_sums_from_renyi(vals)
    roots = np.asarray(poly_roots(newton_girard(ps)))
    total = roots.sum()
    if abs(total - 1.0) > RANGE_SLACK:
        raise InconsistentEntropies(f"recovered eigenvalues sum to {total!r}")
    roots = np.sort(roots / total)[::-1]
    recomputed = np.array([np.sum(roots**k) for k in range(1, ps.d + 1)])
    if np.max(np.abs(recomputed - np.asarray(ps.sums))) > POWER_SUM_TOL:
        raise ComplexRoots("recovered spectrum does not reproduce the power sums")
    return Spectrum(roots)


def renyi_profile(p, d: int | None = None) -> list[float]:
    """Renyi entropies of orders ``2..d`` (default: the dimension of ``p``)."""
    sp = p if isinstance(p, Spectrum) else Spectrum(np.asarray(p, dtype=float))
    d = sp.dim if d is None else d
    return [renyi_entropy(sp, k) for k in range(2, d + 1)]
