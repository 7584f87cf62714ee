"""Welfare equilibria in differentiable games.

Thin wrapper over the compiled ``_core`` module. Functions that produce
trajectories, reports or WelFuSe histories return the schema-1 documents the
command-line tool writes; ``load`` turns them into Python objects.
"""

import json

from ._core import (
    ConfigError,
    DomainError,
    Game,
    GameAnalysis,
    LearnerConfig,
    game_names,
    make_game,
    phase_portrait,
    rule_names,
    run_cli,
    run_trials,
    welfuse,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Game",
    "GameAnalysis",
    "LearnerConfig",
    "game_names",
    "load",
    "make_game",
    "phase_portrait",
    "rule_names",
    "run_cli",
    "run_trials",
    "welfuse",
]


def load(document):
    """Parse a JSON document and check its schema version."""
    doc = json.loads(document)
    if doc.get("schema") != 1:
        raise ValueError(f"unsupported schema: {doc.get('schema')!r}")
    return doc
