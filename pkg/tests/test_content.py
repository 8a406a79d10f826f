"""Content pack validation and the label presentation layer."""

import dataclasses

import pytest

from potionlab.content import (
    ContentPack,
    DistortionSpec,
    Ingredient,
    Recipe,
    RecipeStep,
    Tool,
    UnknownGlyphMapError,
    default_pack,
    distort,
    glyph_map,
    render_label,
    reveal,
    validate_pack,
)


def test_default_pack_is_valid(pack):
    assert validate_pack(pack) == []


def test_unknown_recipe_ingredient_is_flagged(pack):
    bad_recipe = Recipe(steps=pack.recipe.steps + (RecipeStep("ghost", 1),))
    bad = dataclasses.replace(pack, recipe=bad_recipe)
    violations = validate_pack(bad)
    assert len(violations) == 1
    assert violations[0].entity == "ghost"
    assert "ghost" in violations[0].message


def test_missing_level2_reprimand_is_flagged(pack):
    dialogue = {k: dict(v) for k, v in pack.dialogue.items()}
    del dialogue["fail_reprimand"]["2"]
    bad = dataclasses.replace(pack, dialogue=dialogue)
    violations = validate_pack(bad)
    assert len(violations) == 1
    assert violations[0].entity == "(fail_reprimand, 2)"


def test_short_name_longer_than_long_name_is_flagged(pack):
    longer = Ingredient("odd", "Ab", "Abcdef", "round", "plain")
    bad = dataclasses.replace(pack, ingredients=pack.ingredients + (longer,))
    violations = validate_pack(bad)
    assert [v.rule for v in violations] == ["short-name-length"]


def test_empty_recipe_and_duplicate_id_are_flagged(pack):
    dup = dataclasses.replace(pack, ingredients=pack.ingredients + (pack.ingredients[0],))
    assert any(v.rule == "ingredient-id-unique" for v in validate_pack(dup))
    empty = dataclasses.replace(pack, recipe=Recipe(steps=()))
    assert any(v.rule == "recipe-nonempty" for v in validate_pack(empty))


def test_distort_empty_string():
    assert distort("", DistortionSpec(severity=1.0, seed=3)) == ""


def test_distort_severity_zero_is_identity():
    spec = DistortionSpec(severity=0.0, seed=99)
    assert distort("DYSLEXIA", spec) == "DYSLEXIA"


def test_distort_deterministic_and_length_preserving(spec):
    first = distort("DYSLEXIA", spec)
    second = distort("DYSLEXIA", spec)
    assert first == second
    assert len(first) == 8
    assert first != "DYSLEXIA"  # severity 1 replaces every letter


def test_distort_unknown_glyph_map_version():
    spec = DistortionSpec(severity=1.0, seed=0, glyph_map_version="glyphs-v99")
    with pytest.raises(UnknownGlyphMapError):
        distort("abc", spec)


def test_distortion_spec_bounds():
    with pytest.raises(ValueError):
        DistortionSpec(severity=1.5)
    with pytest.raises(ValueError):
        DistortionSpec(severity=-0.1)
    with pytest.raises(ValueError):
        DistortionSpec(seed=-1)


def test_glyph_map_total_and_fixed_point_free():
    table = glyph_map()
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    for ch in letters:
        assert ch in table
        assert len(table[ch]) == 1
        assert table[ch] != ch


def test_render_label_no_tools(pack, spec):
    ing = pack.ingredient("testudinidae")
    label = render_label(ing, set(), spec)
    assert label.presented == distort("Testudinidae", spec)
    assert label.abbreviated is False
    assert label.audio_available is False
    assert label.original == "Testudinidae"


def test_render_label_abbreviation(pack, spec):
    ing = pack.ingredient("testudinidae")
    label = render_label(ing, {Tool.WORD_ABBREVIATION}, spec)
    assert label.presented == distort("Turtle", spec)
    assert label.abbreviated is True
    assert label.original == "Turtle"


def test_render_label_abbreviation_and_audio(pack, spec):
    ing = pack.ingredient("testudinidae")
    label = render_label(ing, {Tool.WORD_ABBREVIATION, Tool.AUDIO_GUIDE}, spec)
    assert label.abbreviated is True
    assert label.audio_available is True
    # original tracks the chosen source name exactly
    assert reveal(label) == label.original == "Turtle"


def test_reveal_returns_undistorted_source(pack, spec):
    ing = pack.ingredient("testudinidae")
    assert reveal(render_label(ing, set(), spec)) == "Testudinidae"
    assert reveal(render_label(ing, {Tool.WORD_ABBREVIATION}, spec)) == "Turtle"


def test_reveal_never_contains_substitution_characters(pack, spec):
    substitutions = set(glyph_map().values())
    for ing in pack.ingredients:
        for tools in (set(), {Tool.WORD_ABBREVIATION}, {Tool.WORD_ABBREVIATION, Tool.AUDIO_GUIDE}):
            text = reveal(render_label(ing, tools, spec))
            assert not set(text) & substitutions


def test_render_label_does_not_mutate_ingredient(pack, spec):
    ing = pack.ingredient("belladonna")
    before = dataclasses.asdict(ing)
    render_label(ing, {Tool.WORD_ABBREVIATION}, spec)
    assert dataclasses.asdict(ing) == before


def test_dialogue_lookup_wildcard_and_level(pack):
    from potionlab.content import DialogueKey

    assert pack.line(DialogueKey.LEVEL_INTRO, 2)
    assert pack.line(DialogueKey.SUCCESS_PRAISE)
    with pytest.raises(KeyError):
        pack.line(DialogueKey.LEVEL_INTRO, 9)
