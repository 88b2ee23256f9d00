import pytest
from hypothesis import given, strategies as st

from distgini.config import Range, RunConfig, parse_config
from distgini.errors import ConfigError

SAMPLE = """\
# model block
[model]
dist = "exp(1)"
distortion = "gah:K=t^2/2"   # additive hazard
copula = fgm

[grid]
alpha = 0.1:10:0.1
theta = -1:1:0.5
window = 0.5:4
n = 1000
abs_tol = 1e-12
"""


def test_parse_sample():
    cfg = parse_config(SAMPLE)
    assert cfg.dist == "exp(1)" and cfg.distortion == "gah:K=t^2/2" and cfg.copula == "fgm"
    assert cfg.alpha == Range(0.1, 10.0, 0.1) and len(cfg.alpha.points()) == 100
    assert list(cfg.theta.points()) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert cfg.window == Range(0.5, 4.0) and cfg.n == 1000 and cfg.abs_tol == 1e-12


def test_canonical_form_is_a_fixed_point():
    once = parse_config(SAMPLE).serialize()
    assert parse_config(once).serialize() == once
    assert parse_config(once) == parse_config(SAMPLE)


@pytest.mark.parametrize("text, line, column", [
    ("dist = exp(1)\nbogus = 3\n", 2, 1),
    ("dist = exp(1)\ndist = exp(2)\n", 2, 1),
    ("n = 2.5\n", 1, 5),
    ("alpha = 1:x:0.1\n", 1, 9),
    ("  alpha = 3:1:0.1\n", 1, 11),
    ("[model\n", 1, 1),
    ("just words\n", 1, 1),
    ('dist = "exp(1)\n', 1, 8),
    ("alpha =\n", 1, 8),
])
def test_errors_carry_line_and_column(text, line, column):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}:")


def test_merge_prefers_other():
    a = RunConfig(dist="exp(1)", alpha=2.0, n=10)
    b = RunConfig(alpha=3.0, seed=4)
    m = a.merged(b)
    assert (m.dist, m.alpha, m.n, m.seed) == ("exp(1)", 3.0, 10, 4)


def test_range_points_inclusive_and_rounded():
    assert list(Range(0.1, 0.5, 0.1).points()) == [0.1, 0.2, 0.3, 0.4, 0.5]
    with pytest.raises(ConfigError):
        Range(0.0, 1.0).points()


finite = st.floats(-1e6, 1e6, allow_nan=False)
words = st.text(st.characters(whitelist_categories=("Ll", "Lu", "Nd"), whitelist_characters="()_:,.^/*=-+ "),
                min_size=1, max_size=20).filter(lambda s: s.strip() == s and '"' not in s)


@st.composite
def ranges(draw):
    start = draw(finite)
    span = draw(st.floats(0, 1e3))
    step = draw(st.one_of(st.none(), st.floats(1e-3, 10)))
    return Range(start, start + span, step)


@given(
    dist=st.one_of(st.none(), words),
    distortion=st.one_of(st.none(), words),
    alpha=st.one_of(st.none(), finite, ranges()),
    theta=st.one_of(st.none(), finite, ranges()),
    n=st.one_of(st.none(), st.integers(1, 10**9)),
    seed=st.one_of(st.none(), st.integers(0, 2**63)),
    rel_tol=st.one_of(st.none(), st.floats(1e-15, 1.0)),
    out=st.one_of(st.none(), words),
)
def test_roundtrip(**fields):
    cfg = RunConfig(**fields)
    text = cfg.serialize()
    assert parse_config(text) == cfg
    assert parse_config(text).serialize() == text
