"""Exact solutions of the two-phase Hele-Shaw problem with a time-dependent gap.

Interfaces from three families (circles, ellipses, Cassini ovals) are evolved
in closed form; pressures, complex potentials and sink/source densities are
evaluated from their Schwarz functions, and :mod:`hsgap.validation` checks the
governing equations numerically.
"""
from ._kernels import BACKEND
from .config import dump_scenario, load_scenario, scenario_from_dict, scenario_to_dict
from .core import (
    Distribution,
    Family,
    FluidPair,
    FocalSchedule,
    GapSchedule,
    InterfaceState,
    PressureOffset,
    RayPair,
    Region,
    Scenario,
    Segment,
    Singularity,
    SingularityKind,
    mobility,
)
from .errors import (
    AccuracyError,
    BracketError,
    BranchError,
    ConfigError,
    CutError,
    DomainError,
    HeleShawError,
    IndeterminateDirectionError,
    PreconditionError,
    SingularPointError,
    StiffnessError,
    TopologyError,
)
from .presets import PRESETS, preset, preset_times
from .schwarz import cut_direction, normal_velocity, schwarz_eval, singularities
from .solutions import (
    alpha_triple,
    area,
    boundary_sample,
    complex_potential,
    distributions,
    evolve,
    pressure,
    pressure_field,
)

__version__ = "0.1.0"
