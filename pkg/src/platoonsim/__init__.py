"""Deterministic discrete-event simulation of platoon message relaying.

Compares the end-to-end latency of a leader-to-tail measured stream
under three relay architectures — hop-by-hop chaining over the radio
(``plf``), a long radio hop to the platoon middle plus chaining
(``bdl``), and the same split with an optical first hop (``hybrid``) —
on top of an autonomous sensing-based scheduler model of the radio MAC.
"""

from .config import (
    DEFAULTS,
    build_engine_config,
    load_config,
    load_values,
    make_config,
    with_overrides,
)
from .cv2x import Cv2xParams, RxAttempt, decode_success, pathloss_db, rx_power_dbm, sinr_db
from .engine import (
    ARCHITECTURES,
    ConfigError,
    Edge,
    EngineConfig,
    RelayPlan,
    Simulation,
    build_relay_plan,
    run,
)
from .events import EventLog, parse_log, read_log
from .lifi import LifiParams, LinkUnavailable, hop_latency_s, snr_linear, total_loss
from .metrics import (
    RunSummary,
    e2e_delay_ms,
    export_csv,
    percentile,
    read_results_csv,
    recount_from_events,
    summarize,
)
from .packet import Packet
from .scenario import ScenarioLayout, VehicleId, distance_m, parse_vehicle, position_of
from .sps import Grant, MacState, SpsParams, new_mac_state, select_resource

__version__ = "0.1.0"

__all__ = [
    "ARCHITECTURES",
    "ConfigError",
    "Cv2xParams",
    "DEFAULTS",
    "Edge",
    "EngineConfig",
    "EventLog",
    "Grant",
    "LifiParams",
    "LinkUnavailable",
    "MacState",
    "Packet",
    "RelayPlan",
    "RunSummary",
    "RxAttempt",
    "ScenarioLayout",
    "Simulation",
    "SpsParams",
    "VehicleId",
    "build_engine_config",
    "build_relay_plan",
    "decode_success",
    "distance_m",
    "e2e_delay_ms",
    "export_csv",
    "hop_latency_s",
    "load_config",
    "load_values",
    "make_config",
    "new_mac_state",
    "parse_log",
    "parse_vehicle",
    "pathloss_db",
    "percentile",
    "position_of",
    "read_log",
    "read_results_csv",
    "recount_from_events",
    "run",
    "rx_power_dbm",
    "select_resource",
    "sinr_db",
    "snr_linear",
    "summarize",
    "total_loss",
    "with_overrides",
    "__version__",
]
