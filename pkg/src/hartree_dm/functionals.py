"""Conserved functionals and inequality diagnostics for a perturbation ``Q = gamma - gamma_f``."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .mean_field import DensityField, InteractionPotential, density_of, interaction_energy
from .operators import (
    CLAMP_TOL,
    ConstraintError,
    check_shape,
    clamp_spectrum,
    eigh,
    projector_mask,
    schatten_norm,
)
from .states import ReferenceState


class QuadratureError(RuntimeError):
    pass


class ZeroDenominatorError(ZeroDivisionError):
    pass


def constraint_violation(ref: ReferenceState, Q: np.ndarray) -> float:
    """How far the spectrum of ``gamma_f + Q`` leaves ``[0, 1]`` (0 when admissible)."""
    w = np.linalg.eigvalsh(ref.matrix() + Q)
    return float(max(-w.min(), w.max() - 1.0, 0.0))


def relative_particle_number(Q: np.ndarray) -> float:
    tr = np.trace(check_shape(Q))
    if abs(tr.imag) > 1e-12 * (1.0 + abs(tr.real)):
        raise ValueError(f"trace has imaginary part {tr.imag:.3e}")
    return float(tr.real)


def relative_kinetic_energy(ref: ReferenceState, Q: np.ndarray, mu: Optional[float] = None, check: bool = True):
    """``tr(-Delta - mu)(gamma - gamma_f)`` through the ``++``/``--`` splitting.

    On the lattice this collapses to ``sum_k (|k|^2 - mu) Q_kk``: the ``++``
    block contributes ``(|k|^2 - mu) Q_kk`` above the Fermi level and the
    ``--`` block ``(mu - |k|^2)(-Q_kk)`` below it.  With ``check`` the
    constraint ``0 <= gamma <= 1`` is enforced; the value may be negative for
    states that violate ``-Pi^- <= Q <= Pi^+`` (e.g. at positive temperature).
    """
    grid = ref.grid
    Q = check_shape(Q, grid.N)
    mu = ref.mu if mu is None else mu
    if check:
        violation = constraint_violation(ref, Q)
        if violation > CLAMP_TOL:
            raise ConstraintError(f"gamma leaves [0, 1] by {violation:.3e}", violation)
    shifted = grid.dispersion - mu
    diag = np.real(np.diag(Q))
    plus = projector_mask(grid, mu, "+")
    minus = ~plus
    return float(np.sum(shifted[plus] * diag[plus]) + np.sum(-shifted[minus] * -diag[minus]))


def relative_hartree_energy(ref: ReferenceState, Q: np.ndarray, w: InteractionPotential, mu=None) -> float:
    kinetic = relative_kinetic_energy(ref, Q, mu)
    return kinetic + interaction_energy(w, density_of(ref.grid, Q))


def _require_entropy(ref: ReferenceState):
    if ref.entropy is None:
        raise ValueError("relative entropy needs a positive-temperature reference state")
    return ref.entropy


def relative_entropy(ref: ReferenceState, Q: np.ndarray) -> float:
    """``-tr(S(gamma) - S(gamma_f) - S'(gamma_f)(gamma - gamma_f))`` by full eigendecomposition.

    Uses ``S'(gamma_f) = -Delta``, so the linear term is ``sum_k |k|^2 Q_kk``.
    """
    spec = _require_entropy(ref)
    grid = ref.grid
    Q = check_shape(Q, grid.N)
    lam, _ = eigh(ref.matrix() + Q)
    lam = clamp_spectrum(lam, 0.0, 1.0)
    value = (
        -float(np.sum(spec.S(lam)))
        + float(np.sum(spec.S(ref.occupations)))
        + float(np.sum(grid.dispersion * np.real(np.diag(Q))))
    )
    return value


def relative_entropy_integral(ref: ReferenceState, Q: np.ndarray, epsabs: float = 1e-14, epsrel: float = 1e-12):
    """Relative entropy from the layer-cake representation

    ``H = int_0^1 tr |S'(gamma_f) - S'(lam)| (1(gamma >= lam) - 1(gamma_f >= lam))^2 dlam``.

    Between consecutive points of the union of both spectra the projector
    difference is constant, so ``[0, 1]`` is split there and each piece is
    integrated with adaptive Gauss-Kronrod quadrature.  The diagonal of the
    squared projector difference is ``c_k (1 - 2 D_k) + D_k`` where
    ``c_k = <e_k, 1(gamma >= lam) e_k>`` and ``D_k = 1(g_k >= lam)``.
    """
    spec = _require_entropy(ref)
    grid = ref.grid
    Q = check_shape(Q, grid.N)
    lam, vec = eigh(ref.matrix() + Q)
    lam = clamp_spectrum(lam, 0.0, 1.0)
    g = ref.occupations
    disp = grid.dispersion
    weights = np.abs(vec) ** 2  # weights[k, j] = |<e_k, v_j>|^2
    order = np.argsort(lam)[::-1]
    lam_desc = lam[order]
    # cum[:, m] = sum of the m largest eigenvectors' weights
    cum = np.concatenate([np.zeros((grid.N, 1)), np.cumsum(weights[:, order], axis=1)], axis=1)

    points = np.unique(np.concatenate([[0.0, 1.0], lam, g]))
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        above = int(np.count_nonzero(lam_desc >= mid))
        c = cum[:, above]
        D = (g >= mid).astype(float)
        m = c * (1.0 - 2.0 * D) + D
        sign = np.where(g < mid, 1.0, -1.0)  # sign of |k|^2 - S'(lam), since S'(g_k) = |k|^2
        coef = sign * m
        alpha = float(np.sum(coef * disp))
        beta = float(np.sum(coef))
        if alpha == 0.0 and beta == 0.0:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                piece, _ = integrate.quad(
                    lambda x: alpha - beta * float(spec.dS(x)), a, b, epsabs=epsabs, epsrel=epsrel, limit=200
                )
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"quadrature on [{a:.6g}, {b:.6g}] did not converge: {exc}") from exc
        total += piece
    return total


def relative_free_energy(ref: ReferenceState, Q: np.ndarray, w: InteractionPotential) -> float:
    return relative_entropy(ref, Q) + interaction_energy(w, density_of(ref.grid, Q))


def weighted_hs_square(ref: ReferenceState, Q: np.ndarray) -> float:
    """``tr((1 - Delta) Q^2) = sum_{k,k'} (1 + |k|^2) |Q_kk'|^2``."""
    weight = 1.0 + ref.grid.dispersion
    return float(np.sum(weight[:, None] * np.abs(Q) ** 2))


def klein_quotient(ref: ReferenceState, Q: np.ndarray) -> float:
    """``H(gamma_f + Q, gamma_f) / tr((1 - Delta) Q^2)``."""
    denom = weighted_hs_square(ref, Q)
    if denom == 0:
        raise ZeroDenominatorError("Klein quotient of Q = 0")
    return relative_entropy(ref, Q) / denom


def _convex_remainder(bg: float, r: np.ndarray, p: float) -> np.ndarray:
    """``(bg + r)^p - bg^p - p bg^{p-1} r`` evaluated without cancellation."""
    if bg == 0:
        return np.maximum(r, 0.0) ** p
    u = np.maximum(r / bg, -1.0)
    return bg**p * (np.expm1(p * np.log1p(u)) - p * u)


def lieb_thirring_functional(rho: DensityField, background: float, points=None) -> float:
    """``int (rho_bg + rho)^{1+2/d} - rho_bg^{1+2/d} - (1+2/d) rho_bg^{2/d} rho dx``.

    Evaluated by the periodic trapezoid rule on an alias-free position grid.
    """
    if background < 0:
        raise ValueError(f"background density must be >= 0, got {background}")
    grid = rho.grid
    values, cell = rho.on_grid(points)
    r = values.real
    total = background + r
    if total.size and total.min() < -1e-9:
        raise ConstraintError(f"total density reaches {total.min():.3e}", -float(total.min()))
    p = 1.0 + 2.0 / grid.d
    return float(np.sum(_convex_remainder(background, r, p)) * cell)


def lt_quotient(ref: ReferenceState, Q: np.ndarray, energy_kind: Optional[str] = None) -> float:
    """Relative kinetic energy (``'kinetic'``) or relative entropy (``'entropy'``) over the LT functional."""
    if energy_kind is None:
        energy_kind = "kinetic" if ref.zero_temperature else "entropy"
    if energy_kind == "kinetic":
        num = relative_kinetic_energy(ref, Q)
    elif energy_kind == "entropy":
        num = relative_entropy(ref, Q)
    else:
        raise ValueError(f"energy_kind must be 'kinetic' or 'entropy', got {energy_kind!r}")
    denom = lieb_thirring_functional(density_of(ref.grid, Q), ref.density)
    if denom <= 0:
        raise ZeroDenominatorError("Lieb-Thirring functional vanishes")
    return num / denom


def _block(Q, rows, cols):
    out = np.zeros_like(Q)
    out[np.ix_(rows, cols)] = Q[np.ix_(rows, cols)]
    return out


def x_mu_norm(ref: ReferenceState, Q: np.ndarray, mu: Optional[float] = None) -> float:
    grid = ref.grid
    mu = ref.mu if mu is None else mu
    root = np.sqrt(np.abs(grid.dispersion - mu))
    plus = projector_mask(grid, mu, "+")
    minus = projector_mask(grid, mu, "-")
    weighted = root[:, None] * Q * root[None, :]
    return (
        schatten_norm(Q, np.inf)
        + schatten_norm(Q * root[None, :], 2)
        + schatten_norm(_block(weighted, plus, plus), 1)
        + schatten_norm(_block(weighted, minus, minus), 1)
    )


def y_mu_norm(ref: ReferenceState, Q: np.ndarray, mu: Optional[float] = None) -> float:
    grid = ref.grid
    mu = ref.mu if mu is None else mu
    plus = projector_mask(grid, 2 * mu, "+")
    minus = projector_mask(grid, 2 * mu, "-")
    low = density_of(grid, _block(Q, minus, minus))
    return (
        schatten_norm(Q, np.inf)
        + schatten_norm(_block(Q, plus, minus), 2)
        + schatten_norm(_block(Q, plus, plus), 1)
        + low.l2_norm()
    )


def split_norm(rho: DensityField, cutoff: float) -> float:
    """``L^2 + L^1`` split: Fourier modes with ``|q|^2 <= cutoff`` in ``L^2``, the rest in ``L^1``."""
    low_mask = rho.grid.diff_dispersion <= cutoff
    low = DensityField(rho.grid, np.where(low_mask, rho.coeffs, 0))
    high = DensityField(rho.grid, np.where(low_mask, 0, rho.coeffs))
    return low.l2_norm() + high.l1_norm()


def high_momentum_profile(ref: ReferenceState, Q: np.ndarray, cutoffs: Sequence[float]):
    """Split norms of the densities of ``Pi_A^+ Q Pi_A^+``, ``Pi_A^+ Q Pi_A^-``, ``Pi_A^- Q Pi_A^+``.

    Returns a list of ``(A, (pp, pm, mp))``.
    """
    grid = ref.grid
    cutoffs = list(cutoffs)
    if any(a <= 0 for a in cutoffs) or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be positive and increasing")
    out = []
    for A in cutoffs:
        plus = projector_mask(grid, A, "+")
        minus = projector_mask(grid, A, "-")
        tails = tuple(
            split_norm(density_of(grid, _block(Q, r, c)), A) for r, c in ((plus, plus), (plus, minus), (minus, plus))
        )
        out.append((A, tails))
    return out


LEDGER_FIELDS = (
    "relative_particle_number",
    "relative_kinetic",
    "relative_hartree",
    "relative_entropy",
    "relative_free_energy",
    "interaction",
    "klein_quotient",
    "lt_quotient",
    "x_mu_norm",
    "y_mu_norm",
    "constraint_violation",
)

# unit and defining expression of each ledger entry
LEDGER_META = {
    "relative_particle_number": ("particles", "tr Q"),
    "relative_kinetic": ("energy", "sum_k (|k|^2 - mu) Q_kk"),
    "relative_hartree": ("energy", "relative_kinetic + interaction"),
    "relative_entropy": ("energy", "-tr[S(gamma) - S(gamma_f) - S'(gamma_f) Q]"),
    "relative_free_energy": ("energy", "relative_entropy + interaction"),
    "interaction": ("energy", "(L^d / 2) sum_q W(q) |rhohat(q)|^2"),
    "klein_quotient": ("1", "relative_entropy / tr[(1 - Delta) Q^2]"),
    "lt_quotient": ("1", "(relative_kinetic or relative_entropy) / LT functional of rho_Q"),
    "x_mu_norm": ("mixed", "||Q|| + ||Q|D|^1/2||_S2 + |||D|^1/2 Q++ |D|^1/2||_S1 + |||D|^1/2 Q-- |D|^1/2||_S1"),
    "y_mu_norm": ("mixed", "||Q|| + ||Q+-||_S2 + ||Q++||_S1 + ||rho(Q--)||_L2, cut at 2 mu"),
    "constraint_violation": ("1", "distance of spec(gamma_f + Q) from [0, 1]"),
}


def kinetic_constraint_holds(ref: ReferenceState, Q: np.ndarray, mu: Optional[float] = None, tol: float = CLAMP_TOL):
    """Whether ``-Pi^- <= Q <= Pi^+``, i.e. ``0 <= 1(-Delta < mu) + Q <= 1``.

    Off this constraint the relative kinetic energy is still evaluated but
    may be negative.
    """
    grid = ref.grid
    mu = ref.mu if mu is None else mu
    sea = (grid.dispersion < mu).astype(float)
    w = np.linalg.eigvalsh(np.diag(sea) + check_shape(Q, grid.N))
    return bool(w.min() >= -tol and w.max() <= 1.0 + tol)


@dataclass
class DiagnosticLedger:
    """One row of diagnostics; entries that do not apply to the reference state are NaN.

    ``flags["kinetic_off_constraint"]`` marks rows whose kinetic entry was
    evaluated outside ``-Pi^- <= Q <= Pi^+``.
    """

    values: dict
    high_momentum_profile: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def row(self) -> list:
        row = [self.values[name] for name in LEDGER_FIELDS]
        for _, tails in self.high_momentum_profile:
            row.extend(tails)
        return row


def evaluate_ledger(
    ref: ReferenceState, Q: np.ndarray, w: InteractionPotential, cutoffs: Sequence[float] = ()
) -> DiagnosticLedger:
    grid = ref.grid
    rho = density_of(grid, Q)
    interaction = interaction_energy(w, rho)
    kinetic = relative_kinetic_energy(ref, Q, check=False)
    nan = float("nan")
    values = {
        "relative_particle_number": relative_particle_number(Q),
        "relative_kinetic": kinetic,
        "relative_hartree": kinetic + interaction,
        "relative_entropy": nan,
        "relative_free_energy": nan,
        "interaction": interaction,
        "klein_quotient": nan,
        "lt_quotient": nan,
        "x_mu_norm": x_mu_norm(ref, Q),
        "y_mu_norm": y_mu_norm(ref, Q),
        "constraint_violation": constraint_violation(ref, Q),
    }
    if not ref.zero_temperature:
        H = relative_entropy(ref, Q)
        values["relative_entropy"] = H
        values["relative_free_energy"] = H + interaction
        denom = weighted_hs_square(ref, Q)
        if denom > 0:
            values["klein_quotient"] = H / denom
    lt = lieb_thirring_functional(rho, ref.density)
    if lt > 0:
        num = kinetic if ref.zero_temperature else values["relative_entropy"]
        values["lt_quotient"] = num / lt
    profile = high_momentum_profile(ref, Q, cutoffs) if cutoffs else []
    flags = {"kinetic_off_constraint": not kinetic_constraint_holds(ref, Q)}
    return DiagnosticLedger(values, profile, flags)
