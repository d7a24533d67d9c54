"""
Configuration management for the planar congestion router.

This module provides centralized configuration using a Pydantic model with
YAML import/export, module-level constants shared by the parsers, and the
message templates used for every error raised by the library.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator


class Settings(BaseModel):
    """Tunable limits and defaults for the library and the CLI."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Logging
    log_level: str = Field(default="WARNING", description="Root logging level")

    # Exhaustive cut enumeration
    cut_enumeration_limit: int = Field(
        default=24, ge=1, le=40, description="Largest |V| accepted by the cut oracle"
    )
    cut_chunk_size: int = Field(
        default=1 << 16, ge=1, description="Bit masks evaluated per numpy block"
    )

    # Exact multiflow search
    router_budget: int = Field(
        default=10_000_000, ge=1, description="Node expansions before giving up"
    )
    router_cut_table_limit: int = Field(
        default=18, ge=1, le=24, description="Largest |V| whose cuts the router tracks"
    )
    router_memo_limit: int = Field(
        default=1_000_000, ge=0, description="Failed search states remembered"
    )

    # Counting bounds
    exact_bound_limit: int = Field(
        default=64, ge=1, description="Largest n cross-checked with big integers"
    )

    # Instance generator defaults
    default_vertex_budget: int = Field(default=8, ge=3)
    default_face_demand_budget: int = Field(default=2, ge=0)
    default_max_request: int = Field(default=2, ge=1)
    default_slack: int = Field(default=1, ge=0)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate the logging level name."""
        level = v.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Unknown log level '{v}'")
        return level

    def export_yaml(self, file_path: Union[str, Path]) -> None:
        """
        Export the settings to a YAML file.

        Args:
            file_path: Path to save the configuration
        """
        with open(file_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.model_dump(), f, default_flow_style=False, sort_keys=True)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def set_settings(settings: Settings) -> None:
    """Replace the global settings instance."""
    global _settings
    _settings = settings


def load_settings(file_path: Union[str, Path]) -> Settings:
    """
    Load settings from a YAML file and install them globally.

    Args:
        file_path: Path to a YAML mapping of setting names to values

    Returns:
        The validated settings

    Raises:
        ValueError: If the file cannot be read or holds invalid values
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            raw: Any = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ValueError(ERROR_MESSAGES["config_unreadable"].format(path=file_path, error=e))

    if not isinstance(raw, dict):
        raise ValueError(ERROR_MESSAGES["config_not_mapping"].format(path=file_path))

    try:
        settings = Settings(**raw)
    except ValidationError as e:
        raise ValueError(ERROR_MESSAGES["config_invalid"].format(path=file_path, error=e))

    set_settings(settings)
    return settings


def configure_logging(level: Optional[str] = None) -> None:
    """Route library logging to stderr at the configured level."""
    name = (level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# Instance and routing document keywords
INSTANCE_KEYWORDS = ("vertex", "edge", "face", "demand")
ROUTING_KEYWORDS = ("path", "load", "alpha")
OUTER_TOKEN = "outer"
UNBOUNDED_ALPHA_TOKEN = "inf"
COMMENT_CHAR = "#"

# Identifiers minted by the level planner
CHORD_SUFFIX = ".chord"
SPLIT_FACE_SUFFIXES = (".1", ".2")
WHITE_DEMAND_PREFIX = "w"
RESIDUAL_DEMAND_PREFIX = "r"
STAGED_RED_PREFIX = "red:"

# File paths
ROOT_DIR = Path(__file__).resolve().parent.parent
SAMPLE_DATA_DIR = ROOT_DIR / "sample_data"
FIGURE_ONE_PATH = SAMPLE_DATA_DIR / "figure1.inst"
FOUR_CYCLE_PATH = SAMPLE_DATA_DIR / "four_cycle.inst"

# CLI exit codes
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

# Error messages
ERROR_MESSAGES: Dict[str, str] = {
    "config_unreadable": "Could not read configuration '{path}': {error}",
    "config_not_mapping": "Configuration '{path}' must be a YAML mapping",
    "config_invalid": "Invalid configuration in '{path}': {error}",
    "syntax": "line {line}: {detail}",
    "unknown_keyword": "unknown keyword '{keyword}'",
    "arity": "'{keyword}' expects {expected} tokens, got {got}",
    "not_integer": "'{token}' is not a nonnegative integer",
    "duplicate_id": "duplicate {kind} identifier '{ident}'",
    "unknown_vertex": "unknown vertex '{vertex}' in {kind} '{ident}'",
    "unknown_face": "demand '{ident}' refers to unknown face '{face}'",
    "reserved_vertex": "'{token}' is reserved and cannot name a vertex",
    "outer_count": "exactly one face must be marked outer, found {count}",
    "demand_off_face": "demand '{ident}' endpoint '{vertex}' is not on face '{face}'",
    "invalid_record": "invalid {kind} '{ident}': {error}",
    "unreadable": "Could not read '{path}': {error}",
    "face_not_found": "face '{face}' does not exist",
    "chord_endpoint": "chord endpoint '{vertex}' is not on face '{face}'",
    "chord_degenerate": "chord endpoints must differ, got '{vertex}' twice",
    "chord_straddle": "demand '{ident}' straddles the chord {a}-{b} on face '{face}'",
    "cut_budget": "{count} vertices exceed the cut enumeration limit of {limit}",
    "cut_set": "cut side must be a nonempty proper vertex subset: {detail}",
    "not_on_face": "vertex '{vertex}' is not a terminal of face '{face}'",
    "not_crossed": "demands {d1} and {d2} do not cross on face '{face}'",
    "no_common_face": "no face carries both {d1} and {d2}",
    "no_terminals": "face '{face}' has no terminals",
    "router_budget": "search abandoned after {expansions} node expansions",
    "router_contract": (
        "Eulerian planar instance satisfies the cut condition but no integer "
        "routing was found ({units} demand units)"
    ),
    "invalid_instance": "instance is not valid: {violations}",
    "cut_violated": "cut condition violated at X={side} (capacity {capacity} < request {request})",
    "bound_violated": "composed routing breaks the congestion bound {bound}: {detail}",
    "depth_exceeded": "recursion reached level {level}, limit is {limit}",
    "level_unroutable": "level {level} {phase} instance has no routing",
    "k_positive": "k must be positive, got {k}",
    "c_positive": "c must be positive, got {c}",
    "n_positive": "n must be at least {minimum}, got {n}",
    "n_too_small": "n too small: chain invocation count would be {c}",
    "generator_budget": "budget too small: {detail}",
}

# Success messages
SUCCESS_MESSAGES: Dict[str, str] = {
    "valid": "ok",
    "cut_ok": "ok",
    "routing_ok": "ok",
    "generated": "generated {vertices} vertices, {edges} edges, {demands} demands",
}
