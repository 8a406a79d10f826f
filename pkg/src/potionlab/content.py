"""Authored game content and the reading-difficulty presentation layer.

Holds the potion recipe, ingredient roster, shelf layout and teacher dialogue
(the content pack), plus the deterministic text distortion that stands in for
a degraded dyslexia-simulation typeface. The model never mutates source text:
distortion happens only in the presented form, and the original word stays
recoverable for audio narration.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping

from potionlab import _kernels

__all__ = [
    "Tool",
    "DialogueKey",
    "Ingredient",
    "RecipeStep",
    "Recipe",
    "Shelf",
    "ContentPack",
    "DistortionSpec",
    "DisplayLabel",
    "Violation",
    "PackFormatError",
    "UnknownGlyphMapError",
    "glyph_map",
    "distort",
    "render_label",
    "reveal",
    "validate_pack",
    "pack_from_dict",
    "pack_to_dict",
    "pack_hash",
    "load_pack",
    "default_pack",
    "canonical_json",
]

GLYPH_MAP_V1 = "glyphs-v1"


class Tool(str, Enum):
    """Compensatory tools unlocked as the player fails levels."""

    TIME_EXTENSION = "time_extension"
    WORD_ABBREVIATION = "word_abbreviation"
    AUDIO_GUIDE = "audio_guide"


class DialogueKey(str, Enum):
    LEVEL_INTRO = "level_intro"
    FAIL_REPRIMAND = "fail_reprimand"
    SUCCESS_PRAISE = "success_praise"
    TUTORIAL_TEXT = "tutorial_text"


class PackFormatError(ValueError):
    """Raised when a content pack document cannot be interpreted at all."""


class UnknownGlyphMapError(ValueError):
    """Raised for a DistortionSpec naming a glyph map version we do not ship."""


@dataclass(frozen=True)
class Ingredient:
    id: str
    long_name: str
    short_name: str
    flask_shape: str
    flask_color: str


@dataclass(frozen=True)
class RecipeStep:
    ingredient_id: str
    quantity: int


@dataclass(frozen=True)
class Recipe:
    steps: tuple[RecipeStep, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Shelf:
    id: str
    ingredient_ids: tuple[str, ...]


@dataclass(frozen=True)
class ContentPack:
    """The full authored world: ingredients, recipe, shelves, dialogue."""

    ingredients: tuple[Ingredient, ...]
    recipe: Recipe
    shelves: tuple[Shelf, ...]
    # dialogue[key] maps a level number ("1".."3") or the wildcard "*" to text
    dialogue: Mapping[str, Mapping[str, str]]
    language: str = "en"

    def ingredient(self, ingredient_id: str) -> Ingredient:
        for ing in self.ingredients:
            if ing.id == ingredient_id:
                return ing
        raise KeyError(ingredient_id)

    def has_ingredient(self, ingredient_id: str) -> bool:
        return any(ing.id == ingredient_id for ing in self.ingredients)

    def line(self, key: DialogueKey, level: int | None = None) -> str:
        """Dialogue lookup: exact level entry first, then the wildcard."""
        entries = self.dialogue.get(key.value, {})
        if level is not None and str(level) in entries:
            return entries[str(level)]
        if "*" in entries:
            return entries["*"]
        raise KeyError((key.value, level))


@dataclass(frozen=True)
class DistortionSpec:
    """How hard the presented text is to read.

    severity 0 is the identity presentation; 1 degrades every mapped letter.
    The seed feeds a counter-based stream so the same spec always distorts the
    same text the same way.
    """

    severity: float = 1.0
    seed: int = 0
    glyph_map_version: str = GLYPH_MAP_V1

    def __post_init__(self) -> None:
        if not 0.0 <= self.severity <= 1.0:
            raise ValueError(f"severity must be in [0, 1], got {self.severity}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class DisplayLabel:
    """One rendered word: what the player sees plus the recoverable source."""

    original: str
    presented: str
    abbreviated: bool = False
    audio_available: bool = False


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.message} [{self.rule}]"


_GLYPH_MAPS: dict[str, dict[str, str]] = {}


def glyph_map(version: str = GLYPH_MAP_V1) -> dict[str, str]:
    """Versioned degradation table; raises UnknownGlyphMapError if missing."""
    if version not in _GLYPH_MAPS:
        try:
            raw = resources.files("potionlab.data").joinpath(f"{version}.json").read_text("utf-8")
        except FileNotFoundError:
            raise UnknownGlyphMapError(f"unknown glyph map version: {version!r}") from None
        _GLYPH_MAPS[version] = json.loads(raw)["map"]
    return _GLYPH_MAPS[version]


def distort(text: str, spec: DistortionSpec) -> str:
    """Degrade ``text`` per the spec's glyph map, severity and seed.

    Each mapped character is independently replaced with probability
    ``spec.severity``; the decision for position i depends only on
    (seed, i), so repeated calls agree exactly. Character count is
    preserved and unmapped characters pass through.
    """
    table = glyph_map(spec.glyph_map_version)
    return _kernels.distort_text(text, spec.seed, spec.severity, table)


def render_label(
    ingredient: Ingredient,
    tools: Iterable[Tool],
    spec: DistortionSpec,
) -> DisplayLabel:
    """Produce the label the player sees for one ingredient.

    With the word-abbreviation tool active the simple synonym is shown
    (distorted like everything else); the audio-guide tool only flags that
    narration is available, it never changes the glyphs.
    """
    toolset = set(tools)
    abbreviated = Tool.WORD_ABBREVIATION in toolset
    source = ingredient.short_name if abbreviated else ingredient.long_name
    return DisplayLabel(
        original=source,
        presented=distort(source, spec),
        abbreviated=abbreviated,
        audio_available=Tool.AUDIO_GUIDE in toolset,
    )


def reveal(label: DisplayLabel) -> str:
    """Plain text handed to speech synthesis: always the undistorted source."""
    return label.original


def validate_pack(pack: ContentPack) -> list[Violation]:
    """Check every content invariant; an empty list means the pack is sound."""
    violations: list[Violation] = []
    seen_ids: set[str] = set()
    for ing in pack.ingredients:
        if ing.id in seen_ids:
            violations.append(Violation(ing.id, "ingredient-id-unique", f"duplicate ingredient id {ing.id!r}"))
        seen_ids.add(ing.id)
        if not ing.long_name:
            violations.append(Violation(ing.id, "long-name-nonempty", "long_name is empty"))
        if not ing.short_name:
            violations.append(Violation(ing.id, "short-name-nonempty", "short_name is empty"))
        elif len(ing.short_name) > len(ing.long_name):
            violations.append(
                Violation(
                    ing.id,
                    "short-name-length",
                    f"short_name {ing.short_name!r} is longer than long_name {ing.long_name!r}",
                )
            )

    if not pack.recipe.steps:
        violations.append(Violation("recipe", "recipe-nonempty", "recipe has no steps"))
    for idx, step in enumerate(pack.recipe.steps, start=1):
        if step.ingredient_id not in seen_ids:
            violations.append(
                Violation(
                    step.ingredient_id,
                    "recipe-ingredient-known",
                    f"recipe step {idx} references unknown ingredient {step.ingredient_id!r}",
                )
            )
        if step.quantity < 1:
            violations.append(
                Violation(
                    step.ingredient_id,
                    "recipe-quantity-positive",
                    f"recipe step {idx} has quantity {step.quantity}",
                )
            )

    for shelf in pack.shelves:
        for ing_id in shelf.ingredient_ids:
            if ing_id not in seen_ids:
                violations.append(
                    Violation(
                        ing_id,
                        "shelf-ingredient-known",
                        f"shelf {shelf.id!r} references unknown ingredient {ing_id!r}",
                    )
                )

    for key in (DialogueKey.LEVEL_INTRO, DialogueKey.FAIL_REPRIMAND):
        entries = pack.dialogue.get(key.value, {})
        for level in (1, 2, 3):
            if str(level) not in entries and "*" not in entries:
                violations.append(
                    Violation(
                        f"({key.value}, {level})",
                        "dialogue-per-level",
                        f"missing {key.value} dialogue for level {level}",
                    )
                )
    if not pack.dialogue.get(DialogueKey.SUCCESS_PRAISE.value):
        violations.append(
            Violation(
                f"({DialogueKey.SUCCESS_PRAISE.value},)",
                "dialogue-success-praise",
                "missing success_praise dialogue",
            )
        )
    return violations


def pack_from_dict(doc: Mapping) -> ContentPack:
    """Build a ContentPack from its JSON document form."""
    try:
        ingredients = tuple(
            Ingredient(
                id=item["id"],
                long_name=item["long_name"],
                short_name=item["short_name"],
                flask_shape=item.get("flask_shape", "round"),
                flask_color=item.get("flask_color", "plain"),
            )
            for item in doc["ingredients"]
        )
        recipe = Recipe(
            steps=tuple(
                RecipeStep(ingredient_id=s["ingredient_id"], quantity=int(s["quantity"]))
                for s in doc["recipe"]
            )
        )
        shelves = tuple(
            Shelf(id=s["id"], ingredient_ids=tuple(s["ingredients"])) for s in doc["shelves"]
        )
        dialogue = {k: dict(v) for k, v in doc["dialogue"].items()}
        language = doc.get("language", "en")
    except (KeyError, TypeError) as exc:
        raise PackFormatError(f"malformed content pack document: {exc}") from exc
    return ContentPack(
        ingredients=ingredients,
        recipe=recipe,
        shelves=shelves,
        dialogue=dialogue,
        language=language,
    )


def pack_to_dict(pack: ContentPack) -> dict:
    return {
        "language": pack.language,
        "ingredients": [
            {
                "id": ing.id,
                "long_name": ing.long_name,
                "short_name": ing.short_name,
                "flask_shape": ing.flask_shape,
                "flask_color": ing.flask_color,
            }
            for ing in pack.ingredients
        ],
        "recipe": [
            {"ingredient_id": s.ingredient_id, "quantity": s.quantity} for s in pack.recipe.steps
        ],
        "shelves": [
            {"id": shelf.id, "ingredients": list(shelf.ingredient_ids)} for shelf in pack.shelves
        ],
        "dialogue": {k: dict(v) for k, v in pack.dialogue.items()},
    }


def canonical_json(obj) -> str:
    """Stable, compact JSON used wherever byte-identical output matters."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def pack_hash(pack: ContentPack) -> str:
    """sha256 of the canonical pack document; identifies content for replays."""
    return hashlib.sha256(canonical_json(pack_to_dict(pack)).encode("utf-8")).hexdigest()


def load_pack(path) -> ContentPack:
    with open(path, encoding="utf-8") as fh:
        return pack_from_dict(json.load(fh))


def default_pack() -> ContentPack:
    """The bundled English pack (authored content, validated in tests)."""
    raw = resources.files("potionlab.data").joinpath("default_pack.json").read_text("utf-8")
    return pack_from_dict(json.loads(raw))
