"""Grover search with lackadaisical quantum walks on the complete graph."""

from .analytics import (
    Branch,
    EigenSystem,
    Prediction,
    RegimeClassification,
    Speedup,
    asymptotic_prediction,
    classify_regime,
    eigen_system,
    predict,
)
from .angles import AngleSet, angles
from .ctqw import CtqwModel, build_hamiltonian, ctqw_evolve, ctqw_full_evolve, loop_invariance_check
from .errors import CapacityExceeded, DimensionMismatch, DomainError
from .fullspace import (
    FullState,
    full_evolve,
    full_initial_state,
    full_step,
    full_success_probability,
    grover_equivalence_check,
)
from .instance import CoinKind, SearchInstance, WalkKind, make_instance, validate
from .subspace import (
    SubspaceBasis,
    SubspaceOperator,
    SubspaceState,
    build_operator,
    evolve,
    initial_state,
    step,
    success_probability,
)
from .trace import CtqwTrace, EvolutionTrace

__version__ = "0.1.0"
