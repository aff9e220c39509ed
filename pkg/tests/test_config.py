import pytest

from sgl.config import (
    REQUIRED,
    apply_schema,
    config_hash,
    parse_config,
    with_overrides,
)
from sgl.errors import ConfigError

SAMPLE = """
# run parameters
eps = 0.25    # inline comment
m = 5
label = toy run
"""


def test_parse_basic():
    entries = parse_config(SAMPLE)
    assert entries == [
        ("eps", "0.25", 3),
        ("m", "5", 4),
        ("label", "toy run", 5),
    ]


def test_parse_blank_and_comment_only_lines_skipped():
    assert parse_config("# nothing\n\n   \n") == []


def test_parse_duplicate_cites_both_lines():
    with pytest.raises(ConfigError) as exc:
        parse_config("a = 1\na = 2\n")
    assert exc.value.line == 2
    assert "line 1" in str(exc.value)


def test_parse_missing_equals():
    with pytest.raises(ConfigError) as exc:
        parse_config("just words\n")
    assert exc.value.line == 1


def test_parse_missing_value_or_key():
    with pytest.raises(ConfigError):
        parse_config("a =\n")
    with pytest.raises(ConfigError):
        parse_config("= 3\n")


def test_schema_coercions():
    entries = parse_config(
        "n = 12\nrate = 2.0\nflag = true\nspan = -3..5\n"
        "vals = 1, 2.5, -0.5\ns = [0,0.5; 1,1.25]\n"
    )
    schema = {
        "n": ("int", 0),
        "rate": ("float", 0.0),
        "flag": ("bool", False),
        "span": ("intrange", (0, 0)),
        "vals": ("floats", ()),
        "s": ("spectrum", None),
    }
    cfg = apply_schema(entries, schema)
    assert cfg["n"] == 12 and cfg["rate"] == 2.0 and cfg["flag"] is True
    assert cfg["span"] == (-3, 5)
    assert cfg["vals"] == (1.0, 2.5, -0.5)
    assert cfg["s"].measure == pytest.approx(0.75)


def test_schema_defaults_fill_in():
    cfg = apply_schema([], {"n": ("int", 7)})
    assert cfg == {"n": 7}


def test_schema_required_missing():
    with pytest.raises(ConfigError, match="required"):
        apply_schema([], {"n": ("int", REQUIRED)})


def test_schema_unknown_key_line():
    with pytest.raises(ConfigError) as exc:
        apply_schema(parse_config("whoops = 1\n"), {"n": ("int", 0)})
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "raw,kind",
    [
        ("maybe", "bool"),
        ("5..1", "intrange"),
        ("5", "intrange"),
        ("1,,2", "floats"),
        ("abc", "int"),
        ("[0,1", "spectrum"),
    ],
)
def test_schema_bad_values(raw, kind):
    entries = [("k", raw, 3)]
    with pytest.raises(ConfigError) as exc:
        apply_schema(entries, {"k": (kind, None)})
    assert exc.value.line == 3


def test_intrange_negatives():
    cfg = apply_schema([("r", "-10..-2", 1)], {"r": ("intrange", None)})
    assert cfg["r"] == (-10, -2)


def test_overrides_replace_and_append():
    entries = parse_config("a = 1\nb = 2\n")
    out = with_overrides(entries, {"b": "9", "c": "3", "d": None})
    assert out == [("a", "1", 1), ("b", "9", 2), ("c", "3", 0)]


def test_hash_stable_and_order_free():
    e1 = parse_config("a = 1\nb = 2\n")
    e2 = parse_config("b = 2\na = 1\n")
    assert config_hash("frame", e1) == config_hash("frame", e2)
    assert len(config_hash("frame", e1)) == 12


def test_hash_sensitive_to_values_and_subcommand():
    e = parse_config("a = 1\n")
    assert config_hash("frame", e) != config_hash("gaps", e)
    assert config_hash("frame", e) != config_hash("frame", parse_config("a = 2\n"))
