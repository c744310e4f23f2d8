from fractions import Fraction
from importlib import resources

import pytest

from pbwdeform.parser import ParseError, parse

WEYL = "generators x,y; N=2; rel r = x*y - y*x; phi r -> 1;"


def bundled_texts():
    folder = resources.files("pbwdeform") / "data"
    return sorted((p.name, p.read_text()) for p in folder.iterdir() if p.name.endswith(".alg"))


def test_weyl_source():
    alg = parse(WEYL)
    assert alg.generators == ["x", "y"] and alg.N == 2
    assert alg.relations == {"r": {(0, 1): 1, (1, 0): -1}}
    assert alg.phi == {"r": {(): 1}}
    pres = alg.presentation(4)
    assert alg.phi_map(pres).row_values == [{(): 1}]


def test_truncated_power_source():
    alg = parse("generators x; N=3; rel r = x^3; phi r -> 1 + 2*x + 3*x^2;")
    assert alg.relations["r"] == {(0, 0, 0): 1}
    assert alg.phi["r"] == {(): 1, (0,): 2, (0, 0): 3}


def test_precedence_and_literals():
    alg = parse("generators x, y; N = 4; rel a = x*y^3 - (x*y)^2 + 3/2*y^2*x^2;"
                " rel b = -(x + y)^2*x*y;")
    assert alg.relations["a"] == {(0, 1, 1, 1): 1, (0, 1, 0, 1): -1, (1, 1, 0, 0): Fraction(3, 2)}
    assert alg.relations["b"] == {(0, 0, 0, 1): -1, (0, 1, 0, 1): -1, (1, 0, 0, 1): -1,
                                  (1, 1, 0, 1): -1}


def test_comments_caps_and_field():
    alg = parse("# header\nfield QQ;\ngenerators x; # one letter\nN = 2;\n"
                "rel r = x^2;\ncap degree = 5;\ncap level = 2;\n")
    assert alg.caps == {"degree": 5, "level": 2}
    assert alg.field_tag == "QQ"


@pytest.mark.parametrize("name, text", bundled_texts())
def test_pretty_print_round_trip(name, text):
    alg = parse(text)
    assert parse(alg.pretty()) == alg
    assert parse(alg.pretty()).pretty() == alg.pretty()


@pytest.mark.parametrize("text, message, line", [
    ("generators x,y; N=2; rel r = x*y - y;", "not homogeneous", 1),
    ("generators x; N=2;\nrel r = z*x;", "unknown generator 'z'", 2),
    ("generators x; N=2; rel r = x^2; phi r -> x^2;", "degree below N", 1),
    ("generators x; N=2; rel r = x^2 $;", "unexpected character", 1),
    ("generators x; N=2; rel r = x^2; phi s -> 1;", "unknown relation 's'", 1),
    ("generators x; N=2; rel r = x^2", "expected ';'", 1),
    ("field GF2; generators x; N=2; rel r = x^2;", "only the field QQ", 1),
    ("generators x; N=1; rel r = x;", "N must be at least 2", 1),
    ("generators x, x; N=2; rel r = x^2;", "duplicate generator", 1),
    ("generators x; N=2; rel r = x^2;\n\ncap speed = 3;", "unknown cap", 3),
    ("generators x; N=2; rel r = x*x - x^2;", "is zero", 1),
])
def test_errors_carry_positions(text, message, line):
    with pytest.raises(ParseError, match=message) as info:
        parse(text)
    assert info.value.line == line
    assert info.value.col >= 1


def test_missing_declarations():
    for text in ("N=2;", "generators x;", "generators x; N=2;"):
        with pytest.raises(ParseError):
            parse(text)
