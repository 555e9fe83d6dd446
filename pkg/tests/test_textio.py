import pytest

from gen import rand_mixed_word
from polyauto.errors import ArityError, ParseError
from polyauto.poly import Polynomial
from polyauto.textio import (endo_to_text, factored_to_text,
                             derivation_to_text, parse_automorphism,
                             parse_derivation, parse_endo, parse_factored,
                             parse_field, parse_polynomial, poly_to_text)


def test_parse_endo_example(Q):
    phi = parse_endo("[Q,3] (x1+2, x2+x1^2, x3-x1^2+x1*x2^4)")
    assert phi.nvars == 3
    assert poly_to_text(phi.components[0]) == "x1+2"


def test_parse_linear_over_f4():
    phi = parse_endo("[F4,2] (x1+t*x2, x2)")
    assert phi.field.order == 4


def test_parse_error_on_truncated():
    with pytest.raises((ParseError, ArityError)):
        parse_endo("[Q,2] (x1,")


def test_parse_error_positions(Q):
    with pytest.raises(ParseError):
        parse_polynomial("x1 + + *", Q, 2)
    with pytest.raises(ParseError):
        parse_polynomial("x9", Q, 2)
    with pytest.raises(ParseError):
        parse_polynomial("t+1", Q, 2)  # t needs an extension field


def test_factored_round_trip():
    import random
    rng = random.Random(77)
    for _ in range(25):
        n = rng.randint(2, 3)
        word = rand_mixed_word(rng, n, 3)
        text = f"[Q,{n}] {factored_to_text(word)}"
        again = parse_factored(text)
        assert again.expand() == word.expand()
        assert factored_to_text(again) == factored_to_text(word)


def test_exp_factor_round_trip(Q):
    from polyauto.autos import ExpLND, FactoredAuto
    from polyauto.derivations import TriDerivation
    n = 3
    x1 = Polynomial.variable(Q, n, 1)
    zero = Polynomial.zero(Q, n)
    D = TriDerivation(Q, n, (zero, zero, x1))
    F = Polynomial.variable(Q, n, 2)
    word = FactoredAuto(Q, n, [(ExpLND(Q, n, F, D), -1)])
    text = f"[Q,{n}] {factored_to_text(word)}"
    again = parse_factored(text)
    assert again.expand() == word.expand()


def test_derivation_round_trip(Q):
    D = parse_derivation("D(0, x1, -x2*x1)", Q, 3)
    canonical = derivation_to_text(D)
    assert canonical == "D(0, x1, -x1*x2)"  # variables print in index order
    assert parse_derivation(canonical, Q, 3) == D
    with pytest.raises(ArityError):
        parse_derivation("D(0, x1)", Q, 3)


def test_parse_automorphism_detects_shape(Q):
    e = parse_automorphism("[Q,2] (x1+1, x2)")
    w = parse_automorphism("[Q,2] E(1; 1)")
    assert e == w.expand()


def test_field_tag_errors():
    with pytest.raises(ParseError):
        parse_field("G7")
    with pytest.raises(Exception):
        parse_field("F12")


def test_endo_text_round_trip(F9):
    t = F9.generator()
    phi = parse_endo("[F9/t^2+1,2] (x1+(2*t+1)*x2^2, 2*x2)")
    text = endo_to_text(phi)
    assert parse_endo(text) == phi
