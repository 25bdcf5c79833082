"""Entropy densities and the translation-invariant reference states ``f(-Delta)``.

The chemical potential is folded into the entropy, ``S(x) = T*S_base(x) + mu*x``,
so that ``S'(g_k) = |k|^2`` holds exactly on every occupied mode and
``f = (S')^{-1}``.  Occupations are normalized to the interval ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import entr, expit

from .lattice import MomentumGrid
from .operators import CLAMP_TOL, ConstraintError

FAMILIES = ("fermion", "boson", "boltzon", "custom")


class EntropyError(ValueError):
    pass


def _fermion_base(x):
    return entr(x) + entr(1.0 - x)


def _fermion_dbase(x):
    return np.log1p(-x) - np.log(x)


def _fermion_d2base(x):
    return -1.0 / (x * (1.0 - x))


def _boson_base(x):
    return entr(x) - entr(1.0 + x)


def _boson_dbase(x):
    return np.log1p(x) - np.log(x)


def _boson_d2base(x):
    return -1.0 / (x * (1.0 + x))


def _boltzon_base(x):
    return entr(x) + x


def _boltzon_dbase(x):
    return -np.log(x)


def _boltzon_d2base(x):
    return -1.0 / x


def _fermion_occupation(z):
    return expit(-z)


def _boson_occupation(z):
    # 1/(e^z - 1) written to survive overflow at large z
    with np.errstate(over="ignore", divide="ignore"):
        return np.exp(-z) / -np.expm1(-z)


def _boltzon_occupation(z):
    with np.errstate(over="ignore"):
        return np.exp(-z)


_BUILTIN = {
    "fermion": (_fermion_base, _fermion_dbase, _fermion_d2base, _fermion_occupation),
    "boson": (_boson_base, _boson_dbase, _boson_d2base, _boson_occupation),
    "boltzon": (_boltzon_base, _boltzon_dbase, _boltzon_d2base, _boltzon_occupation),
}


@dataclass(frozen=True)
class EntropySpec:
    """An entropy density ``S`` on ``[0, 1]`` together with ``S'`` and ``f = (S')^{-1}``.

    ``S``, ``dS`` and ``f`` are vectorized callables; ``d2S`` is optional and
    only used by diagnostics (Taylor oracles, Klein limits).
    """

    family: str
    temperature: float
    mu: float
    S: Callable = field(repr=False)
    dS: Callable = field(repr=False)
    f: Callable = field(repr=False)
    d2S: Optional[Callable] = field(default=None, repr=False)

    def occupation(self, r):
        """``f(r)`` clamped to ``[0, 1]``."""
        return np.clip(np.asarray(self.f(np.asarray(r, dtype=float)), dtype=float), 0.0, 1.0)


def make_entropy(family: str, T: float, mu: float) -> EntropySpec:
    """Closed-form entropy for one of the physical gases.

    Fermions take any ``mu``; bosons need ``mu <= -T log 2`` so that
    ``S'(1) <= 0``; Boltzmann gases need ``mu <= 0`` for the same reason.
    """
    if family not in _BUILTIN:
        raise EntropyError(f"unknown entropy family {family!r}; custom entropies use make_custom_entropy")
    if not np.isfinite(T) or T <= 0:
        raise EntropyError(f"temperature must be positive, got {T}")
    if family == "boson" and mu > -T * np.log(2.0) + 1e-15:
        raise EntropyError(f"boson gas needs mu <= -T log 2 = {-T * np.log(2.0):.6g}, got {mu}")
    if family == "boltzon" and mu > 0:
        raise EntropyError(f"Boltzmann gas needs mu <= 0 so that S'(1) <= 0, got {mu}")
    base, dbase, d2base, occ = _BUILTIN[family]
    T = float(T)
    mu = float(mu)

    def S(x):
        x = np.asarray(x, dtype=float)
        return T * base(x) + mu * x

    def dS(x):
        with np.errstate(divide="ignore"):
            return T * dbase(np.asarray(x, dtype=float)) + mu

    def d2S(x):
        with np.errstate(divide="ignore"):
            return T * d2base(np.asarray(x, dtype=float))

    def f(r):
        z = (np.asarray(r, dtype=float) - mu) / T
        g = occ(z)
        if family != "fermion":
            g = np.where((z <= 0) | (g > 1.0), 1.0, g)
        return g

    return EntropySpec(family, T, mu, S, dS, f, d2S)


def make_custom_entropy(S, dS, f, d2S=None, T: float = 1.0, mu: float = 0.0) -> EntropySpec:
    """Wrap a user-supplied ``(S, S', f)`` triple after checking its invariants."""
    spec = EntropySpec("custom", float(T), float(mu), S, dS, f, d2S)
    validate_entropy(spec)
    return spec


def validate_entropy(spec: EntropySpec, samples: int = 257) -> None:
    """Check monotonicity of ``S'``, its blow-up at 0, ``S'(1-) <= 0`` and ``f(S'(x)) = x``."""
    x = np.linspace(1e-6, 1.0 - 1e-6, samples)
    d = np.asarray(spec.dS(x), dtype=float)
    if not np.all(np.isfinite(d)):
        raise EntropyError("S' is not finite on (0, 1)")
    if not np.all(np.diff(d) < 0):
        raise EntropyError("S' must be strictly decreasing on (0, 1)")
    near_zero = np.asarray(spec.dS(np.array([1e-3, 1e-6, 1e-9, 1e-12])), dtype=float)
    if not np.all(np.diff(near_zero) > 0):
        raise EntropyError("S'(x) must increase without bound as x -> 0+")
    if float(spec.dS(np.array([1.0 - 1e-12]))[0]) > 1e-6:
        raise EntropyError("S'(1-) must be <= 0 for f = (S')^{-1} to cover [0, inf)")
    back = np.asarray(spec.f(d), dtype=float)
    err = float(np.max(np.abs(back - x)))
    if err > 1e-10:
        raise EntropyError(f"f is not the inverse of S' (round-trip error {err:.3e})")


@dataclass(frozen=True)
class ReferenceState:
    """Diagonal reference density matrix ``gamma_f = f(-Delta)`` on a grid.

    ``entropy`` is ``None`` for the zero-temperature Fermi sea, in which case
    ``mu`` is the Fermi level.
    """

    grid: MomentumGrid
    occupations: np.ndarray = field(repr=False)
    entropy: Optional[EntropySpec] = None
    mu: float = 0.0

    @property
    def density(self) -> float:
        """Uniform density ``L^{-d} sum_k g_k``."""
        return float(np.sum(self.occupations)) / self.grid.volume

    @property
    def zero_temperature(self) -> bool:
        return self.entropy is None

    def matrix(self) -> np.ndarray:
        return np.diag(self.occupations).astype(complex)


def fermi_sea(grid: MomentumGrid, mu: float) -> ReferenceState:
    if not mu > 0:
        raise ValueError(f"Fermi level must be positive, got {mu}")
    g = (grid.dispersion <= mu).astype(float)
    return ReferenceState(grid, g, None, float(mu))


def reference_state(grid: MomentumGrid, spec: EntropySpec) -> ReferenceState:
    raw = np.asarray(spec.f(grid.dispersion), dtype=float)
    if spec.family == "custom":
        excess = max(float(np.max(raw)) - 1.0, -float(np.min(raw)), 0.0)
        if excess > CLAMP_TOL or not np.all(np.isfinite(raw)):
            raise ConstraintError(f"occupations leave [0, 1] by {excess:.3e}", excess)
    # boltzon at mu = 0 gives exactly 1 at k = 0; anything above is clamped
    g = np.clip(raw, 0.0, 1.0)
    return ReferenceState(grid, g, spec, spec.mu)
