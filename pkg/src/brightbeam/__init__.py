"""brightbeam: Gaussian simulation and entanglement verification for bright beams."""

from .detection import (
    DetectionResult,
    LossBudget,
    MzGeometry,
    correct_electronic_noise,
    method_a_joint,
    method_a_measure,
    method_b_channels,
    method_c_single_port,
    mz_geometry,
    shot_noise_reference,
)
from .entangle import (
    GeneralizedCombination,
    WitnessReport,
    duan_simon,
    generalized_witness,
    generate_entangled,
    normalized_combination_variances,
    optimal_gains_for_theta,
    optimize_gain,
    squeezing_variances,
    theta_adapted_bound,
)
from .errors import (
    BrightBeamError,
    DegenerateModeError,
    DomainError,
    ScenarioError,
)
from .harness import ReportRow, compare_methods, run_scenario, sweep, sweep_csv
from .scenario import Scenario, load_scenario, save_scenario, scenario_from_dict, scenario_to_dict
from .states import (
    BrightGaussianState,
    DetectionBand,
    SqueezedInputSpec,
    apply_beamsplitter,
    apply_loss,
    apply_phase,
    compose,
    direct_detect_variance,
    make_coherent,
    make_squeezed,
    sample_fluctuations,
)
from .units import db_to_var, var_to_db

__version__ = "0.1.0"
