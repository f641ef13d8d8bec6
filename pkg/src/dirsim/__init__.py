"""dirsim: distributed reflecting surfaces shared between mobile operators.

A numpy/scipy toolkit pairing a slot-level Monte Carlo link simulator with
the matching closed-form performance laws: ergodic spectral efficiency of
the operator controlling the surfaces and of out-of-band operators, surface
alignment statistics, bystander outage, and the sizing rule that maximizes
the out-of-band growth rate.
"""

__version__ = "0.1.0"

from .analysis import (
    DesignRule,
    NumericalError,
    RateLawParams,
    alignment_probability,
    binomial_pmf,
    design_rule,
    i0_integral,
    outage_closed_form,
    prelog_factor,
    se_inband,
    se_oob,
)
from .channel import (
    AngleBook,
    ChannelRealization,
    PathSet,
    angle_book,
    array_response,
    cascaded_angle,
    sample_channel,
    sample_direct,
    sample_path_set,
    wrap_angle,
)
from .control import (
    EffectiveChannel,
    PhaseConfig,
    alignment_count,
    effective_channel_inband,
    effective_channel_oob,
    optimal_phase_config,
    optimal_phase_factors,
    random_phase_config,
)
from .engine import (
    AlignmentHistogram,
    OutageReport,
    SweepResult,
    TermDecomposition,
    closed_form_sum_se,
    run_alignment,
    run_outage,
    run_sum_se,
    run_term_decomposition,
    tv_distance,
    wilson_interval,
)
from .rng import stream
from .scenario import (
    ConfigError,
    ScenarioConfig,
    Topology,
    build_topology,
    flat_topology,
    load_config,
    path_loss,
    place_irs_semicircle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
