"""Mean-field dynamics of infinite quantum gases on a periodic plane-wave basis."""

from .dynamics import (
    PropagatorConfig,
    TrajectoryRecord,
    WaveOperator,
    dyson_wave_operator,
    picard_duhamel_solve,
    propagate,
    reconstruct_from_wave_operator,
    strang_step,
)
from .functionals import LEDGER_FIELDS, evaluate_ledger
from .lattice import MomentumGrid, build_grid
from .mean_field import gaussian_potential, yukawa_potential, zero_potential
from .operators import random_admissible_perturbation
from .states import fermi_sea, make_entropy, reference_state

__version__ = "0.1.0"

__all__ = [
    "LEDGER_FIELDS",
    "MomentumGrid",
    "PropagatorConfig",
    "TrajectoryRecord",
    "WaveOperator",
    "build_grid",
    "dyson_wave_operator",
    "evaluate_ledger",
    "fermi_sea",
    "gaussian_potential",
    "make_entropy",
    "picard_duhamel_solve",
    "propagate",
    "random_admissible_perturbation",
    "reconstruct_from_wave_operator",
    "reference_state",
    "strang_step",
    "yukawa_potential",
    "zero_potential",
]
