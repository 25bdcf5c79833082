"""Time evolution of ``Q = gamma - gamma_f`` under ``i dQ/dt = [-Delta + w * rho_Q, gamma_f + Q]``.

Three routes are provided:

* :func:`strang_step` / :func:`propagate` -- unitary split-step propagation,
* :func:`picard_duhamel_solve` -- fixed-point iteration of the Duhamel formula,
* :func:`dyson_wave_operator` + :func:`reconstruct_from_wave_operator` -- the
  interaction-picture wave operator summed as a truncated Dyson series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .functionals import constraint_violation, evaluate_ledger
from .mean_field import DensityField, InteractionPotential, mean_field_operator, potential_operator
from .operators import CLAMP_TOL, check_shape, eigh, free_evolve, schatten_norm
from .states import ReferenceState

INTEGRATORS = ("strang", "picard", "dyson-check")
MODES = ("midpoint", "frozen")


class NumericalAbort(RuntimeError):
    """A run stopped because a numerical invariant failed."""

    reason = "numerical-abort"
    record = None


class BlowUpError(NumericalAbort):
    reason = "constraint-violation"

    def __init__(self, message, time, violation):
        super().__init__(message)
        self.time = time
        self.violation = violation


class PicardDivergence(NumericalAbort):
    reason = "picard-divergence"

    def __init__(self, message, increments):
        super().__init__(message)
        self.increments = list(increments)

    @property
    def last_increment(self):
        return self.increments[-1] if self.increments else float("nan")


class DysonError(NumericalAbort):
    reason = "dyson-tail"


@dataclass
class PropagatorConfig:
    integrator: str = "strang"
    tau: float = 1e-2
    mode: str = "midpoint"
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    quadrature_nodes: int = 5
    dyson_n_max: int = 8

    def __post_init__(self):
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.tau > 0:
            raise ValueError(f"step size must be positive, got {self.tau}")
        if not self.picard_tol > 0:
            raise ValueError("Picard tolerance must be positive")
        if self.picard_max_iter < 1 or self.dyson_n_max < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.quadrature_nodes < 2:
            raise ValueError("need at least two quadrature nodes")


@dataclass
class TrajectoryRecord:
    times: List[float] = field(default_factory=list)
    snapshots: List[np.ndarray] = field(default_factory=list)
    ledger: list = field(default_factory=list)
    ledger_times: List[float] = field(default_factory=list)
    potential_times: List[float] = field(default_factory=list)
    potentials: List[np.ndarray] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1]

    def series(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.ledger])


@dataclass
class WaveOperator:
    value: np.ndarray
    n_max: int
    unitarity_defect: float
    last_term_norm: float
    tail_bound: float
    t: float
    t0: float


def _hermitize(A):
    return 0.5 * (A + A.conj().T)


def unitary_exponential(V: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i t V)`` for Hermitian ``V`` via its eigendecomposition (exactly unitary)."""
    if not np.any(V):
        return np.eye(V.shape[0], dtype=complex)
    lam, vec = eigh(_hermitize(V))
    return (vec * np.exp(-1j * t * lam)[None, :]) @ vec.conj().T


def strang_step(
    ref: ReferenceState,
    Q: np.ndarray,
    w: InteractionPotential,
    tau: float,
    mode: str = "midpoint",
    shift: float = 0.0,
) -> np.ndarray:
    """One split step ``gamma -> U gamma U*`` with ``U = e^{-i tau V/2} e^{i tau Delta} e^{-i tau V/2}``.

    ``V = w * rho`` is built from ``Q`` itself (``frozen``) or from the free
    half-step predictor ``e^{i tau Delta/2} Q e^{-i tau Delta/2}`` (``midpoint``).
    ``shift`` adds a constant to ``V``; it only contributes a global phase.
    ``tau`` may be negative (time reversal).
    """
    grid = ref.grid
    Q = check_shape(Q, grid.N)
    if mode == "frozen":
        source = Q
    elif mode == "midpoint":
        source = free_evolve(grid, Q, 0.5 * tau)
    else:
        raise ValueError(f"unknown mean-field mode {mode!r}")
    V = mean_field_operator(grid, w, source)
    if shift:
        V = V + shift * np.eye(grid.N)
    gamma_f = ref.matrix()
    E = unitary_exponential(V, 0.5 * tau)
    X = E @ (gamma_f + Q) @ E.conj().T
    X = free_evolve(grid, X, tau)
    X = E @ X @ E.conj().T
    return _hermitize(X) - gamma_f


def _picard_step(ref, Q, w, h, config):
    return picard_duhamel_solve(
        Q, ref, w, h, config.quadrature_nodes, config.picard_tol, config.picard_max_iter, _allow_negative=True
    ).final


def propagate(
    Q0: np.ndarray,
    ref: ReferenceState,
    w: InteractionPotential,
    config: PropagatorConfig,
    t_final: float,
    stride: int = 1,
    snapshot_stride: Optional[int] = 1,
    cutoffs: Sequence[float] = (),
    record_potentials: bool = False,
    ledger: bool = True,
    abort_tol: float = CLAMP_TOL,
    shift: float = 0.0,
) -> TrajectoryRecord:
    """Integrate from ``t = 0`` to ``t_final`` (either sign) with fixed steps.

    The diagnostic ledger is evaluated every ``stride`` steps and at the end;
    snapshots are kept every ``snapshot_stride`` steps (``None`` keeps only the
    first and last).  A constraint violation above ``abort_tol`` at a
    diagnostic time raises :class:`BlowUpError`.
    """
    grid = ref.grid
    Q = check_shape(np.asarray(Q0, dtype=complex), grid.N).copy()
    tau = config.tau
    n_full = int(math.floor(abs(t_final) / tau + 1e-9))
    remainder = abs(t_final) - n_full * tau
    partial = remainder > 1e-12 * max(1.0, abs(t_final))
    direction = 1.0 if t_final >= 0 else -1.0
    steps = [direction * tau] * n_full + ([direction * remainder] if partial else [])

    record = TrajectoryRecord()
    record.metadata.update(
        integrator=config.integrator,
        mode=config.mode,
        tau=tau,
        steps=len(steps),
        partial_final_step=bool(partial),
        t_final=float(t_final),
    )

    def observe(i, t, Q, final):
        keep = final or i == 0 or (snapshot_stride is not None and i % snapshot_stride == 0)
        if keep:
            record.times.append(t)
            record.snapshots.append(Q.copy())
        if ledger and (final or i % stride == 0):
            violation = constraint_violation(ref, Q)
            if violation > abort_tol:
                raise BlowUpError(f"0 <= gamma <= 1 violated by {violation:.3e} at t = {t:.6g}", t, violation)
            record.ledger.append(evaluate_ledger(ref, Q, w, cutoffs))
            record.ledger_times.append(t)
        if record_potentials:
            record.potential_times.append(t)
            record.potentials.append(mean_field_operator(grid, w, Q))

    t = 0.0
    try:
        observe(0, t, Q, not steps)
        for i, h in enumerate(steps, start=1):
            if config.integrator == "picard":
                Q = _picard_step(ref, Q, w, h, config)
            else:
                Q = strang_step(ref, Q, w, h, config.mode, shift)
            t = direction * tau * i if i <= n_full and i < len(steps) else float(t_final)
            observe(i, t, Q, i == len(steps))
    except NumericalAbort as exc:
        # the caller still gets everything recorded before the abort
        exc.record = record
        raise

    if config.integrator == "dyson-check" and steps:
        n_max = config.dyson_n_max
        path = record.potentials if record_potentials else None
        if path is None:
            raise ValueError("dyson-check needs record_potentials=True")
        W = dyson_wave_operator(grid, path, record.potential_times, n_max)
        Qd = reconstruct_from_wave_operator(W, ref, np.asarray(Q0, dtype=complex), record.potential_times[-1])
        record.metadata.update(
            dyson_distance=schatten_norm(Qd - Q, 2),
            dyson_unitarity_defect=W.unitarity_defect,
            dyson_last_term=W.last_term_norm,
        )
    return record


def cumulative_simpson(F: np.ndarray, h: float) -> np.ndarray:
    """``I[j] = int_{t_0}^{t_j} F`` for samples ``F[j]`` on equispaced nodes with signed spacing ``h``.

    Composite Simpson on an even number of intervals, Simpson plus the 3/8
    rule on an odd number, and the quadratic-interpolation rule
    ``(5, 8, -1) h / 12`` on the first interval.  Works on complex arrays.
    """
    F = np.asarray(F)
    n = F.shape[0]
    out = np.zeros_like(F, dtype=np.result_type(F, float))
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * h * (F[0] + F[1])
        return out
    pairs = h / 3.0 * (F[0:-2:2] + 4.0 * F[1:-1:2] + F[2::2])
    out[2::2] = np.cumsum(pairs, axis=0)
    out[1] = h / 12.0 * (5.0 * F[0] + 8.0 * F[1] - F[2])
    if n > 3:
        odd = np.arange(3, n, 2)
        out[odd] = out[odd - 3] + 3.0 * h / 8.0 * (F[odd - 3] + 3.0 * F[odd - 2] + 3.0 * F[odd - 1] + F[odd])
    return out


def picard_duhamel_solve(
    Q0: np.ndarray,
    ref: ReferenceState,
    w: InteractionPotential,
    horizon: float,
    nodes: int,
    tol: float = 1e-10,
    max_iter: int = 50,
    _allow_negative: bool = False,
) -> TrajectoryRecord:
    """Solve the Duhamel formula on ``[0, horizon]`` by Picard iteration.

    Each sweep evaluates ``Q(t) = e^{it Delta}(Q0 - i int_0^t e^{-is Delta} C(s) e^{is Delta} ds)e^{-it Delta}``
    with ``C(s) = [w * rho_Q(s), gamma_f + Q(s)]`` from the previous iterate,
    starting from the free flow.  Iteration stops once the largest
    Hilbert-Schmidt change over the nodes drops below ``tol``.

    Raises
    ------
    PicardDivergence
        If ``max_iter`` sweeps do not reach ``tol``; the increments are attached
        so the caller can shorten the horizon.
    """
    grid = ref.grid
    Q0 = check_shape(np.asarray(Q0, dtype=complex), grid.N)
    if not (horizon > 0 or (_allow_negative and horizon != 0)):
        raise ValueError(f"horizon must be positive, got {horizon}")
    if nodes < 2:
        raise ValueError("need at least two quadrature nodes")
    times = np.linspace(0.0, horizon, nodes)
    h = times[1] - times[0]
    gamma_f = ref.matrix()
    Q = np.stack([free_evolve(grid, Q0, t) for t in times])
    increments = []
    converged = False
    for _ in range(max_iter):
        Y = np.empty_like(Q)
        for j, t in enumerate(times):
            V = mean_field_operator(grid, w, Q[j])
            G = gamma_f + Q[j]
            Y[j] = free_evolve(grid, V @ G - G @ V, -t)
        I = cumulative_simpson(Y, h)
        new = np.stack([free_evolve(grid, Q0 - 1j * I[j], t) for j, t in enumerate(times)])
        new = 0.5 * (new + np.conj(np.transpose(new, (0, 2, 1))))
        inc = max(schatten_norm(new[j] - Q[j], 2) for j in range(nodes))
        Q = new
        increments.append(inc)
        if not np.isfinite(inc):
            break
        if inc < tol:
            converged = True
            break
    if not converged:
        raise PicardDivergence(
            f"Picard iteration did not reach tol={tol:.1e} in {len(increments)} sweeps "
            f"(last increment {increments[-1]:.3e}); shorten the horizon",
            increments,
        )
    ratios = [b / a for a, b in zip(increments[:-1], increments[1:]) if a > 0]
    record = TrajectoryRecord(times=list(times), snapshots=list(Q))
    record.metadata.update(
        integrator="picard",
        iterations=len(increments),
        increments=increments,
        contraction_factor=max(ratios) if ratios else 0.0,
        nodes=nodes,
    )
    return record


def _as_matrix(grid, V):
    if isinstance(V, DensityField):
        return potential_operator(V)
    return check_shape(np.asarray(V), grid.N)


def potential_l1_norm(grid, V_path: Sequence, times: Sequence[float]) -> float:
    """Trapezoid estimate of ``int ||V(s)||_op ds``."""
    norms = np.array([schatten_norm(_as_matrix(grid, V), np.inf) for V in V_path])
    return float(abs(np.trapezoid(norms, np.asarray(times, dtype=float))))


def dyson_tail_bound(a: float, n: int) -> float:
    return a**n / math.factorial(n)


def dyson_order_for_tail(grid, V_path: Sequence, times: Sequence[float], tol: float, n_cap: int = 200) -> int:
    """Smallest ``n`` with ``(int ||V||)^n / n! <= tol``."""
    a = potential_l1_norm(grid, V_path, times)
    for n in range(1, n_cap + 1):
        if dyson_tail_bound(a, n) <= tol:
            return n
    raise DysonError(f"no Dyson order <= {n_cap} reaches tail bound {tol:.1e} (int ||V|| = {a:.3g})")


def dyson_wave_operator(
    grid,
    V_path: Sequence,
    times: Sequence[float],
    n_max: int,
    tail_tol: Optional[float] = None,
) -> WaveOperator:
    """Truncated Dyson series ``W(t, t0) = 1 + sum_{n <= n_max} W^(n)(t, t0)``.

    ``times[0]`` is ``t0`` and ``times[-1]`` is ``t``; ``V_path[j]`` is the
    potential (matrix or :class:`PotentialField`) at ``times[j]``.  The
    recursion ``W^(n)(t) = -i int_{t0}^t e^{i(t0-s)Delta} V(s) e^{i(s-t0)Delta} W^(n-1)(s) ds``
    is carried out with :func:`cumulative_simpson` on the given equispaced nodes.
    """
    times = np.asarray(times, dtype=float)
    if len(V_path) != len(times):
        raise ValueError("one potential per time node is required")
    if len(times) < 2:
        raise DysonError("need at least two time nodes")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    t0 = times[0]
    VI = np.stack([free_evolve(grid, _as_matrix(grid, V), t0 - s) for V, s in zip(V_path, times)])
    h = times[1] - times[0]
    if not np.allclose(np.diff(times), h, rtol=1e-9, atol=0):
        raise DysonError("time nodes must be equispaced")
    eye = np.eye(grid.N, dtype=complex)
    prev = np.broadcast_to(eye, VI.shape)
    total = eye.copy()
    last = 0.0
    for _ in range(n_max):
        F = VI @ prev
        term = -1j * cumulative_simpson(F, h)
        total = total + term[-1]
        last = schatten_norm(term[-1], 2)
        prev = term
    a = potential_l1_norm(grid, V_path, times)
    bound = dyson_tail_bound(a, n_max)
    if tail_tol is not None and last > tail_tol:
        raise DysonError(f"last Dyson term {last:.3e} exceeds tail tolerance {tail_tol:.1e}")
    defect = schatten_norm(total.conj().T @ total - eye, 2)
    return WaveOperator(total, n_max, defect, last, bound, float(times[-1]), float(t0))


def reconstruct_from_wave_operator(W: WaveOperator, ref: ReferenceState, Q0: np.ndarray, t: Optional[float] = None):
    """``e^{it Delta} W (gamma_f + Q0) W* e^{-it Delta} - gamma_f``."""
    grid = ref.grid
    t = W.t - W.t0 if t is None else t
    gamma_f = ref.matrix()
    X = W.value @ (gamma_f + check_shape(Q0, grid.N)) @ W.value.conj().T
    return _hermitize(free_evolve(grid, X, t)) - gamma_f


def identity_wave_operator(grid) -> WaveOperator:
    return WaveOperator(np.eye(grid.N, dtype=complex), 0, 0.0, 0.0, 0.0, 0.0, 0.0)
