"""Corridor beam-steering simulator: geometry, schedules, tracing, sweeps."""

from .experiment import (
    ConfigError,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    csv_text,
    dbm_to_watts,
    emit_config,
    emit_csv,
    load_config,
    parse_config,
    run_sweep,
)
from .geometry import (
    Circle,
    Ray,
    Vec2,
    angle_between,
    ray_circle_intersection,
    ray_segment_intersection,
    reflect,
)
from .latency import LatencyBudget, MobilityModel, dislocation, total_latency
from .scene import (
    Antenna,
    HsfPanel,
    Scene,
    build_default_scene,
    fan_directions,
    mirror_panel,
    rx_accepts,
    subunit_center,
    tx_ray_fan,
)
from .steering import (
    Biased,
    Schedule,
    Static,
    SteeringMode,
    Unbiased,
    build_schedule,
    materialize_normals,
    optimal_normal,
    schedule_stats,
)
from .tracer import (
    Captured,
    Escaped,
    RayFate,
    Spreading,
    Terminated,
    TraceOutcome,
    TracerConfig,
    analytic_received_power,
    efficiency,
    received_power,
    trace_ray,
)

__version__ = "0.1.0"

__all__ = [
    "Antenna",
    "Biased",
    "Captured",
    "Circle",
    "ConfigError",
    "Escaped",
    "ExperimentConfig",
    "HsfPanel",
    "LatencyBudget",
    "MobilityModel",
    "Ray",
    "RayFate",
    "Scene",
    "Schedule",
    "Spreading",
    "Static",
    "SteeringMode",
    "SweepResult",
    "SweepRow",
    "TraceOutcome",
    "TracerConfig",
    "Terminated",
    "Unbiased",
    "Vec2",
    "analytic_received_power",
    "angle_between",
    "build_default_scene",
    "build_schedule",
    "csv_text",
    "dbm_to_watts",
    "dislocation",
    "efficiency",
    "emit_config",
    "emit_csv",
    "fan_directions",
    "load_config",
    "materialize_normals",
    "mirror_panel",
    "optimal_normal",
    "parse_config",
    "ray_circle_intersection",
    "ray_segment_intersection",
    "received_power",
    "reflect",
    "run_sweep",
    "rx_accepts",
    "schedule_stats",
    "subunit_center",
    "total_latency",
    "trace_ray",
    "tx_ray_fan",
]
