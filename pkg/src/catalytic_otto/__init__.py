"""Two-stroke Otto engines assisted by a d-level catalyst.

Simulation of swap protocols on two thermal qubits plus a diagonal
catalyst, the catalyst cyclicity constraint, heat/work bookkeeping,
closed forms for the d-Otto family and exhaustive protocol search.
"""
from ._kernels import available_backends, backend_name, use_backend
from .catalysis import (
    CycleMap,
    CyclicityError,
    FixedPointSet,
    check_cyclicity,
    cycle_map,
    fixed_points,
)
from .protocol import (
    PERMUTATIONS,
    TRANSPOSITIONS,
    EnumerationCapError,
    ProtocolError,
    SwapProtocol,
    Transposition,
    apply_protocol,
    d_otto_protocol,
    enumerate_protocols,
    parse_protocol,
    validate_protocol,
)
from .search import SearchTask, external_swap_census, optimize
from .state import (
    Catalyst,
    CompositeState,
    DomainError,
    ThermalQubit,
    catalyst,
    catalyst_marginal,
    composite_initial,
    thermal_qubit,
)
from .thermo import (
    MAX_EFFICIENCY,
    MAX_WORK,
    CycleResult,
    carnot_efficiency,
    closed_form,
    dimension_range,
    engine_regime,
    laws_check,
    run_cycle,
    tradeoff_scan,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
