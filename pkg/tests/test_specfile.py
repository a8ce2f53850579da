import numpy as np
import pytest

from cocycle_lab import make_builtin
from cocycle_lab.errors import SpecParseError
from cocycle_lab.specfile import dump_spec, format_point, load_spec, parse_point, parse_spec, spec_digest
from cocycle_lab.symbolic import SymbolSequence

from corpus import GOLDEN, window_spec

ROT = """
[sft]
size = 2
base = 0
row = 1 1
row = 1 1

[cocycle]
kind = locally-constant
alpha = 0.5
0 = 0.8 -0.6 0.6 0.8   # rotation
1 = 0.8 -0.6 0.6 0.8
"""


def test_builtin_two_lines():
    spec = parse_spec("[builtin]\nname = diag-rotation\n")
    assert spec == make_builtin("diag-rotation")


def test_builtin_params():
    spec = parse_spec("[builtin]\nname = diag-rotation\nk0 = 20\nalpha = 0.1\n")
    assert spec.k0 == 20 and spec.alpha == 0.1


def test_locally_constant():
    spec = parse_spec(ROT)
    assert spec.window == (0, 0) and spec.alpha == 0.5 and spec.sft.size == 2


def test_fill_and_window():
    text = "[sft]\nrow = 1 1\nrow = 1 0\n[cocycle]\nwindow = -1 0\n1 2 = 2 0 0 0.5\nfill = 1 0 0 1\n"
    spec = parse_spec(text)
    assert spec.sft == GOLDEN
    assert spec.table[(1, 2)].a == 2.0 and spec.table[(2, 1)].a == 1.0


@pytest.mark.parametrize("text, line", [
    ("[sft]\nrow = 1 1\nrow = 1 1\nbogus = 3\n", 4),
    ("[nope]\n", 1),
    ("[sft]\nbase = 0\nrow = 1 1\nrow = 1 1\n[cocycle]\n0 = 1.1 0 0 1\n1 = 1 0 0 1\n", 6),
    ("[builtin]\nname = nothing\n", 2),
    ("[sft]\nrow = 1 1\nrow = 1 x\n", 3),
    ("size = 2\n", 1),
    ("[sft]\nsize = 3\nrow = 1 1\nrow = 1 1\n", 2),
])
def test_errors_carry_line(text, line):
    with pytest.raises(SpecParseError) as info:
        parse_spec(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_words():
    with pytest.raises(SpecParseError):
        parse_spec("[sft]\nbase = 0\nrow = 1 1\nrow = 1 1\n[cocycle]\n0 = 1 0 0 1\n")


def test_round_trip():
    rng = np.random.default_rng(71)
    for spec in [window_spec(rng, window=(-1, 2)), parse_spec(ROT), make_builtin("diag-rotation", k0=15)]:
        again = parse_spec(dump_spec(spec))
        assert again == spec
        assert dump_spec(again) == dump_spec(spec)
        assert spec_digest(again) == spec_digest(spec)


def test_load(tmp_path):
    p = tmp_path / "rot.spec"
    p.write_text(ROT)
    assert load_spec(p) == parse_spec(ROT)
    with pytest.raises(SpecParseError):
        load_spec(tmp_path / "missing.spec")


def test_points():
    x = parse_point("0:1:0@3")
    assert x == SymbolSequence((0,), (1,), (0,), 3)
    assert parse_point(format_point(x)) == x
    y = SymbolSequence((10, 2), (), (11,), 0)
    assert parse_point(format_point(y)) == y
    with pytest.raises(ValueError):
        parse_point("0:1")
    with pytest.raises(ValueError):
        parse_point(":1:0")
