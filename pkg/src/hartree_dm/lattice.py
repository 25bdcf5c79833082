"""Periodic box discretization and its plane-wave momentum lattice.

Modes are ``k_n = (2*pi/L) * n`` for ``n`` in ``{-M/2, ..., M/2 - 1}^d`` and are
flattened in row-major order of ``n + M/2``.  Densities and potentials built
from operators on this basis carry momenta ``k - k'`` and therefore live on the
symmetric difference lattice ``{-(M-1), ..., M-1}^d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

ModeIndex = Union[int, Sequence[int]]


@dataclass(frozen=True)
class MomentumGrid:
    """Truncated plane-wave lattice of the box ``[0, L)^d`` with ``M`` modes per axis."""

    d: int
    L: float
    M: int

    def __post_init__(self):
        if int(self.d) != self.d or not 1 <= self.d <= 3:
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        if not np.isfinite(self.L) or self.L <= 0:
            raise ValueError(f"box length must be positive, got {self.L}")
        if int(self.M) != self.M or self.M < 2 or self.M % 2:
            raise ValueError(f"modes per dimension must be an even integer >= 2, got {self.M}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "L", float(self.L))

    @property
    def N(self) -> int:
        return self.M**self.d

    @property
    def volume(self) -> float:
        return self.L**self.d

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.L

    @cached_property
    def indices(self) -> np.ndarray:
        """Integer lattice coordinates, shape ``(N, d)``, in flat order."""
        axis = np.arange(-self.M // 2, self.M // 2)
        mesh = np.meshgrid(*([axis] * self.d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @cached_property
    def momenta(self) -> np.ndarray:
        return self.dk * self.indices

    @cached_property
    def dispersion(self) -> np.ndarray:
        """Symbol of ``-Delta``: ``|k|^2`` per mode."""
        k = self.momenta
        return np.sum(k * k, axis=1)

    # difference lattice ---------------------------------------------------

    @property
    def diff_shape(self) -> tuple:
        return (2 * self.M - 1,) * self.d

    @cached_property
    def diff_indices(self) -> np.ndarray:
        """Integer coordinates of the difference lattice, shape ``(prod(diff_shape), d)``."""
        axis = np.arange(-(self.M - 1), self.M)
        mesh = np.meshgrid(*([axis] * self.d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @cached_property
    def diff_dispersion(self) -> np.ndarray:
        """``|q|^2`` on the difference lattice, shaped like ``diff_shape``."""
        q = self.dk * self.diff_indices
        return np.sum(q * q, axis=1).reshape(self.diff_shape)

    @cached_property
    def pair_diff_index(self) -> np.ndarray:
        """Flat difference-lattice index of ``n_i - n_j`` for every mode pair, shape ``(N, N)``."""
        diff = self.indices[:, None, :] - self.indices[None, :, :] + (self.M - 1)
        flat = np.zeros(diff.shape[:2], dtype=np.intp)
        for axis in range(self.d):
            flat = flat * (2 * self.M - 1) + diff[..., axis]
        return flat

    def flat_index(self, n: ModeIndex) -> int:
        """Flat index of lattice coordinates ``n``; raises if ``n`` is outside the lattice."""
        n = self._as_coords(n)
        shifted = n + self.M // 2
        if np.any(shifted < 0) or np.any(shifted >= self.M):
            raise ValueError(f"mode {tuple(n)} outside the lattice")
        return int(np.ravel_multi_index(tuple(shifted), (self.M,) * self.d))

    def coords(self, flat: int) -> tuple:
        if not 0 <= flat < self.N:
            raise ValueError(f"flat index {flat} out of range")
        return tuple(int(v) for v in self.indices[flat])

    def _as_coords(self, n: ModeIndex) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(n))
        if arr.shape != (self.d,) or not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"expected {self.d} integer coordinates, got {n!r}")
        return arr.astype(np.int64)

    def contains(self, n: ModeIndex) -> bool:
        shifted = self._as_coords(n) + self.M // 2
        return bool(np.all(shifted >= 0) and np.all(shifted < self.M))


def build_grid(d: int, L: float, M: int) -> MomentumGrid:
    return MomentumGrid(d, L, M)


def momentum_shift_index(grid: MomentumGrid, n: ModeIndex, q: ModeIndex) -> Optional[int]:
    """Flat index of mode ``n + q``, or ``None`` when it leaves the lattice (no wrap-around)."""
    base = grid._as_coords(n)
    if not grid.contains(base):
        raise ValueError(f"mode {tuple(base)} outside the lattice")
    target = base + grid._as_coords(q)
    if not grid.contains(target):
        return None
    return grid.flat_index(target)
