"""Property tests for the distortion layer."""

import string

from hypothesis import given, strategies as st

from potionlab.content import DistortionSpec, distort, glyph_map

seeds = st.integers(min_value=0, max_value=2**64 - 1)
severities = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
texts = st.text(max_size=80)
letter_texts = st.text(alphabet=string.ascii_letters, max_size=60)


@given(text=texts, seed=seeds)
def test_severity_zero_is_identity(text, seed):
    assert distort(text, DistortionSpec(severity=0.0, seed=seed)) == text


@given(text=texts, seed=seeds, severity=severities)
def test_length_is_preserved(text, seed, severity):
    spec = DistortionSpec(severity=severity, seed=seed)
    assert len(distort(text, spec)) == len(text)


@given(text=texts, seed=seeds, severity=severities)
def test_distort_is_pure(text, seed, severity):
    spec = DistortionSpec(severity=severity, seed=seed)
    assert distort(text, spec) == distort(text, spec)


@given(text=letter_texts, seed=seeds)
def test_severity_one_replaces_every_letter(text, seed):
    out = distort(text, DistortionSpec(severity=1.0, seed=seed))
    for original, produced in zip(text, out):
        assert produced != original


@given(text=texts, seed=seeds, severity=severities)
def test_unmapped_characters_pass_through(text, seed, severity):
    table = glyph_map()
    out = distort(text, DistortionSpec(severity=severity, seed=seed))
    for original, produced in zip(text, out):
        if original not in table:
            assert produced == original
        else:
            assert produced in (original, table[original])
