"""Potion-brewing serious game engine plus its evaluation pipeline.

The package has four parts: authored content with a reading-difficulty
presentation layer (``content``), a deterministic event-sourced game engine
(``engine`` / ``eventlog``), questionnaire scoring and paired statistics
(``psychometrics``), and a harness (``bots``, ``analysis``, ``service``,
``cli``) that binds them into runnable experiments.
"""

__version__ = "0.1.0"

from potionlab.content import (
    ContentPack,
    DisplayLabel,
    DistortionSpec,
    Ingredient,
    Tool,
    default_pack,
    distort,
    render_label,
    reveal,
    validate_pack,
)
from potionlab.engine import (
    Difficulty,
    GameState,
    SessionConfig,
    SessionEvent,
    apply_event,
    level_spec,
    new_session,
    replay,
)

__all__ = [
    "__version__",
    "ContentPack",
    "DisplayLabel",
    "DistortionSpec",
    "Ingredient",
    "Tool",
    "default_pack",
    "distort",
    "render_label",
    "reveal",
    "validate_pack",
    "Difficulty",
    "GameState",
    "SessionConfig",
    "SessionEvent",
    "apply_event",
    "level_spec",
    "new_session",
    "replay",
]
