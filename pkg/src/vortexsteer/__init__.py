"""Loss-tolerant quantum steering with rotation-invariant vector vortex qubits."""

from .qmath import (
    BlochVector,
    DensityMatrix,
    ModeOperator,
    OperatorKind,
    StateVector,
    expectation,
    fidelity_pure,
    partial_trace,
    purity,
    tensor,
    trace_distance,
)
from .encoding import (
    DEFAULT_SPACE,
    LogicalVortexQubit,
    NonClosureError,
    OamSpace,
    QPlate,
    bob_analyzer,
    encode_to_vortex,
    logical_vortex_qubit,
    qplate_operator,
    rotation_operator,
    singlet_pol,
)
from .steering import (
    MeasurementSet,
    SteeringEstimate,
    platonic_set,
    steering_parameter_counts,
    steering_parameter_exact,
)
from .bounds import (
    BoundCurve,
    CheatStrategy,
    bound_curve,
    bound_oracle,
    deterministic_bound,
    loss_tolerant_bound,
    strategy_payoff,
)
from .experiment import (
    ChannelModel,
    NoiseModel,
    SteeringRunResult,
    ThetaPolicy,
    dynamic_rotation_run,
    prepare_state,
    run_experiment,
    sweep_theta,
    visibility_for_fidelity,
    werner_state,
)
from .tomography import (
    ReconstructionReport,
    TomographySpec,
    reconstruct,
    simulate_counts,
    standard_settings,
)

__version__ = "0.1.0"
