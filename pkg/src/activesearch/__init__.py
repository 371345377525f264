"""Decentralized multi-robot active search: belief, planners, trajectories,
communications, and a deterministic simulation harness."""

from .actions import CandidateAction, enumerate_candidates
from .belief import (
    BeliefPosterior,
    EmConfig,
    em_posterior,
    gamma_update,
    jittered_cholesky,
    sample_posterior,
)
from .comms import (
    ChannelConfig,
    FusionConfig,
    MessageKind,
    MessageQueue,
    PeerMessage,
    deliver,
    fuse_message,
)
from .config import (
    PlannerConfig,
    RobotSpec,
    ScenarioConfig,
    TargetSpec,
    from_dict,
    load_config,
)
from .coverage import DONE, Done, VisitedMask, select_coverage_action
from .errors import (
    ActiveSearchError,
    ConfigError,
    DegenerateZone,
    InvalidCell,
    NoCandidates,
    NonPositiveConfidence,
    NonPositiveHorizon,
    NumericalFailure,
    OutOfBounds,
    OutOfHorizon,
    Unreachable,
)
from .geometry import ZonePolygon, cells_in_zone, clip_segment_to_zone, supercover_trace
from .grid import GridSpec
from .guts import (
    GutsConfig,
    LossBreakdown,
    evaluate_loss,
    hypothetical_estimate,
    indicator,
    select_action,
)
from .sensing import RecordKind, SensingDataset, SensingRecord
from .sim import MetricsRow, Target, TrialResult, run_batch, run_trial, sense
from .trajectory import (
    AxisBoundary,
    AxisState,
    LimitReport,
    TrajectorySegment,
    check_limits,
    evaluate,
    minimal_horizon,
    plan_leg,
    rescale_time,
    solve_quintic,
    wrap_angle,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveSearchError",
    "AxisBoundary",
    "AxisState",
    "BeliefPosterior",
    "CandidateAction",
    "ChannelConfig",
    "ConfigError",
    "DegenerateZone",
    "DONE",
    "Done",
    "EmConfig",
    "FusionConfig",
    "GridSpec",
    "GutsConfig",
    "InvalidCell",
    "LimitReport",
    "LossBreakdown",
    "MessageKind",
    "MessageQueue",
    "MetricsRow",
    "NoCandidates",
    "NonPositiveConfidence",
    "NonPositiveHorizon",
    "NumericalFailure",
    "OutOfBounds",
    "OutOfHorizon",
    "PeerMessage",
    "PlannerConfig",
    "RecordKind",
    "RobotSpec",
    "ScenarioConfig",
    "SensingDataset",
    "SensingRecord",
    "Target",
    "TargetSpec",
    "TrajectorySegment",
    "TrialResult",
    "Unreachable",
    "VisitedMask",
    "ZonePolygon",
    "cells_in_zone",
    "check_limits",
    "clip_segment_to_zone",
    "deliver",
    "em_posterior",
    "enumerate_candidates",
    "evaluate",
    "evaluate_loss",
    "from_dict",
    "fuse_message",
    "gamma_update",
    "hypothetical_estimate",
    "indicator",
    "jittered_cholesky",
    "load_config",
    "minimal_horizon",
    "plan_leg",
    "rescale_time",
    "run_batch",
    "run_trial",
    "sample_posterior",
    "select_action",
    "select_coverage_action",
    "sense",
    "solve_quintic",
    "supercover_trace",
    "wrap_angle",
]
