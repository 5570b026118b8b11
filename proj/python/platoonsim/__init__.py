"""Python access to the platoon latency simulator core."""

from ._core import (
    CSV_HEADER,
    LOG_SCHEMA_HEADER,
    ConfigError,
    EngineConfig,
    LinkUnavailable,
    config_keys,
    distance_m,
    lifi_hop_latency_s,
    lifi_total_loss,
    load_config,
    parse_config_text,
    pathloss_db,
    relay_plan,
    run,
    sinr_db,
    summarize,
)

__all__ = [
    "CSV_HEADER",
    "LOG_SCHEMA_HEADER",
    "ConfigError",
    "EngineConfig",
    "LinkUnavailable",
    "config_keys",
    "distance_m",
    "lifi_hop_latency_s",
    "lifi_total_loss",
    "load_config",
    "parse_config_text",
    "pathloss_db",
    "relay_plan",
    "run",
    "sinr_db",
    "summarize",
]
