"""Python bindings for the slice orchestrator core."""

from ._core import (
    DEFAULT_ENV_CHAR_LIMIT,
    UPGRADED_ENV_CHAR_LIMIT,
    SlicerError,
    compose_slas,
    demo_slice_a,
    environment_char_count,
    lint_template,
    run_cli,
)

__all__ = [
    "DEFAULT_ENV_CHAR_LIMIT",
    "UPGRADED_ENV_CHAR_LIMIT",
    "SlicerError",
    "compose_slas",
    "demo_slice_a",
    "environment_char_count",
    "lint_template",
    "run_cli",
]
