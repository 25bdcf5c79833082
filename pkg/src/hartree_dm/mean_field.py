"""Densities of operators, Fourier-multiplier interactions and mean-field potentials.

Fields are stored by Fourier coefficients on the difference lattice so that
``f(x) = sum_q fhat(q) exp(i q.x)``.  With that convention the multiplication
operator of a real potential has entries ``V[k, k'] = Vhat(k - k')`` and the
density of ``Q`` is ``rhohat(q) = L^{-d} sum_n Q[n + q, n]``; together they
satisfy ``tr(Q V) = L^d sum_q conj(rhohat(q)) Vhat(q)`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import MomentumGrid
from .operators import check_shape


@dataclass(frozen=True)
class DensityField:
    """Real periodic field given by its Fourier coefficients (shape ``grid.diff_shape``)."""

    grid: MomentumGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.coeffs.shape != self.grid.diff_shape:
            raise ValueError(f"coefficients have shape {self.coeffs.shape}, expected {self.grid.diff_shape}")

    @property
    def zero_mode(self) -> complex:
        return self.coeffs[(self.grid.M - 1,) * self.grid.d]

    def reality_defect(self) -> float:
        """Largest ``|fhat(-q) - conj(fhat(q))|``; zero for a real field."""
        flipped = self.coeffs[(slice(None, None, -1),) * self.grid.d]
        return float(np.max(np.abs(flipped - self.coeffs.conj())))

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = 1.0 + float(np.max(np.abs(self.coeffs)))
        return self.reality_defect() <= tol * scale

    def l2_norm(self) -> float:
        """``||f||_{L^2(box)}`` by Plancherel."""
        return float(np.sqrt(self.grid.volume * np.sum(np.abs(self.coeffs) ** 2)))

    def bandwidth(self) -> int:
        """Largest lattice index (per axis) carrying a nonzero coefficient; -1 for the zero field."""
        nz = np.argwhere(self.coeffs != 0)
        if nz.size == 0:
            return -1
        return int(np.max(np.abs(nz - (self.grid.M - 1))))

    def position_points(self, oversample: int = 4) -> int:
        """Points per axis for an alias-free position-space sampling.

        Depends only on the support of the coefficients, not on ``M``, so
        quadratures of the same field embedded in a larger grid coincide.
        """
        band = max(self.bandwidth(), 0)
        return oversample * (2 * band + 2)

    def on_grid(self, points=None, oversample: int = 4):
        """Sample the field on the uniform position grid ``x_j = j L / points``.

        Returns ``(values, cell_volume)``; values are complex (real part is the
        field for real fields).
        """
        if points is None:
            points = self.position_points(oversample)
        grid = self.grid
        if points < 2 * max(self.bandwidth(), 0) + 1:
            raise ValueError(f"{points} points alias a field of bandwidth {self.bandwidth()}")
        buf = np.zeros((points,) * grid.d, dtype=complex)
        band = max(self.bandwidth(), 0)
        lo, hi = grid.M - 1 - band, grid.M + band
        sub = self.coeffs[(slice(lo, hi),) * grid.d]
        axis = np.arange(-band, band + 1) % points
        buf[np.ix_(*([axis] * grid.d))] = sub
        values = np.fft.ifftn(buf) * points**grid.d
        return values, (grid.L / points) ** grid.d

    def l1_norm(self, points=None, oversample: int = 4) -> float:
        """``||f||_{L^1(box)}`` by the periodic trapezoid rule."""
        values, cell = self.on_grid(points, oversample)
        return float(np.sum(np.abs(values)) * cell)


class PotentialField(DensityField):
    """A real potential ``V = w * rho``; same storage as :class:`DensityField`."""


@dataclass(frozen=True)
class InteractionPotential:
    """Even pair interaction given by its Fourier multiplier ``W(q)``.

    ``(w * rho)^(q) = W(q) rhohat(q)``, i.e. ``W`` is the continuum Fourier
    transform ``int w(x) exp(-i q.x) dx`` sampled on the difference lattice.
    """

    grid: MomentumGrid
    multiplier: np.ndarray = field(repr=False)

    def __post_init__(self):
        W = np.asarray(self.multiplier, dtype=float)
        if W.shape != self.grid.diff_shape:
            raise ValueError(f"multiplier has shape {W.shape}, expected {self.grid.diff_shape}")
        if not np.all(np.isfinite(W)):
            raise ValueError("multiplier must be finite")
        object.__setattr__(self, "multiplier", W)

    @property
    def is_even(self) -> bool:
        flipped = self.multiplier[(slice(None, None, -1),) * self.grid.d]
        return bool(np.array_equal(flipped, self.multiplier))

    @property
    def defocusing(self) -> bool:
        """Sign certificate ``W >= 0`` everywhere."""
        return bool(np.all(self.multiplier >= 0))

    def sup_negative_part(self) -> float:
        return float(np.max(np.maximum(-self.multiplier, 0.0)))

    def shifted(self, c: float) -> "InteractionPotential":
        """Copy with ``c`` added to ``W(0)``."""
        W = self.multiplier.copy()
        W[(self.grid.M - 1,) * self.grid.d] += c
        return InteractionPotential(self.grid, W)


def zero_potential(grid: MomentumGrid) -> InteractionPotential:
    return InteractionPotential(grid, np.zeros(grid.diff_shape))


def gaussian_potential(grid: MomentumGrid, amplitude: float, width: float) -> InteractionPotential:
    """``w(x) = a (2 pi s^2)^{-d/2} exp(-|x|^2 / 2 s^2)``, so ``W(q) = a exp(-s^2 |q|^2 / 2)``."""
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    return InteractionPotential(grid, amplitude * np.exp(-0.5 * width**2 * grid.diff_dispersion))


def yukawa_potential(grid: MomentumGrid, amplitude: float, width: float) -> InteractionPotential:
    """Screened multiplier ``W(q) = a / (1 + s^2 |q|^2)``."""
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    return InteractionPotential(grid, amplitude / (1.0 + width**2 * grid.diff_dispersion))


def table_potential(grid: MomentumGrid, table) -> InteractionPotential:
    """Explicit multiplier values; ``table`` reshapes to ``grid.diff_shape`` and must be even."""
    W = np.asarray(table, dtype=float).reshape(grid.diff_shape)
    pot = InteractionPotential(grid, W)
    if not pot.is_even:
        raise ValueError("tabulated multiplier must satisfy W(q) = W(-q)")
    return pot


def density_of(grid: MomentumGrid, Q: np.ndarray) -> DensityField:
    """Fourier coefficients of the density ``rho_Q(x) = Q(x, x)``: diagonal sums of ``Q``."""
    Q = check_shape(Q, grid.N)
    idx = grid.pair_diff_index.ravel()
    size = int(np.prod(grid.diff_shape))
    Qf = np.ravel(Q)
    re = np.bincount(idx, weights=Qf.real, minlength=size)
    im = np.bincount(idx, weights=Qf.imag, minlength=size) if np.iscomplexobj(Qf) else 0.0
    coeffs = (re + 1j * im).reshape(grid.diff_shape) / grid.volume
    return DensityField(grid, coeffs)


def convolve(w: InteractionPotential, rho: DensityField) -> PotentialField:
    if w.grid != rho.grid:
        raise ValueError("interaction and density live on different grids")
    return PotentialField(rho.grid, w.multiplier * rho.coeffs)


def potential_operator(V: DensityField, shift: float = 0.0) -> np.ndarray:
    """Multiplication operator of ``V + shift``: ``V[k, k'] = Vhat(k - k')``."""
    grid = V.grid
    op = np.ravel(V.coeffs)[grid.pair_diff_index]
    if shift:
        op = op + shift * np.eye(grid.N)
    return op


def mean_field_operator(grid: MomentumGrid, w: InteractionPotential, Q: np.ndarray) -> np.ndarray:
    """Matrix of ``w * rho_Q`` (the background ``w * rho_{gamma_f}`` is a constant and is dropped)."""
    return potential_operator(convolve(w, density_of(grid, Q)))


def interaction_energy(w: InteractionPotential, rho: DensityField) -> float:
    """``(1/2) int int w(x - y) rho(x) rho(y) = (L^d / 2) sum_q W(q) |rhohat(q)|^2``."""
    if w.grid != rho.grid:
        raise ValueError("interaction and density live on different grids")
    return 0.5 * rho.grid.volume * float(np.sum(w.multiplier * np.abs(rho.coeffs) ** 2))
