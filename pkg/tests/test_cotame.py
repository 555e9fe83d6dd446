import random

import pytest

from gen import (rand_m_triangular_word, rand_mixed_word, rand_sl_word,
                 rand_translation, rand_triangular)
from polyauto.autos import (Endo, FactoredAuto, classify, compose,
                            elementary, jacobian_det, linear_elementary,
                            translation, vector_degree)
from polyauto.certificates import verify_certificate
from polyauto.cotame import (certify_normally_cotame, find_noncommuting_c,
                             normalize_m_triangular, reduce_m_triangular,
                             reduce_parabolic, reduce_triangular)
from polyauto.errors import (IdentityInput, NotSpecial, NotTriangular,
                             UnsupportedCharacteristic, UnsupportedM)
from polyauto.fields import Field
from polyauto.poly import Polynomial
from polyauto.textio import parse_factored

Q = Field.rationals()


# -- normalization ---------------------------------------------------------


def test_normalize_sl_only_gives_m0():
    rng = random.Random(1)
    word = rand_sl_word(rng, 3)
    form = normalize_m_triangular(word)
    assert form.m == 0
    assert form.expand() == word.expand()


def test_normalize_translation_absorbed():
    word = translation(Q, 2, [1, 2])
    form = normalize_m_triangular(word)
    assert form.m == 1
    assert form.expand() == word.expand()
    assert classify(form.taus[0]).translation


def test_normalize_gl_factor_split():
    # determinant-2 linear factor balanced against a diagonal inside tau
    from polyauto.autos import dilation
    word = (dilation(Q, 2, 1, 2)
            * parse_factored("[Q,2] T(1; 1, x1^2)")
            * dilation(Q, 2, 1, Q.from_int(2).inv()))
    form = normalize_m_triangular(word)
    assert form.expand() == word.expand()
    for a in form.alphas:
        parts = jacobian_det(a).constant_value()
        assert parts.is_one()


def test_normalize_rejects_nonspecial():
    from polyauto.autos import dilation
    with pytest.raises(NotSpecial):
        normalize_m_triangular(dilation(Q, 2, 1, 2))


def test_normalize_random_round_trip():
    rng = random.Random(2024)
    for _ in range(40):
        n = rng.randint(2, 3)
        word = rand_mixed_word(rng, n, rng.randint(1, 5))
        form = normalize_m_triangular(word)
        assert form.expand() == word.expand()


# -- probes ---------------------------------------------------------------------


def test_probe_finds_c_equal_one():
    phi = elementary(Q, 2, 1, Polynomial.variable(Q, 2, 2) ** 2).expand()
    probe = find_noncommuting_c(phi, None, 2)
    assert probe.c == 1
    assert probe.witness is None


def test_probe_translation_gives_witness():
    phi = translation(Q, 3, [1, 2, 3]).expand()
    probe = find_noncommuting_c(phi, None, 2)
    assert probe.witness is not None


def test_probe_identity_gives_witness():
    probe = find_noncommuting_c(Endo.identity(Q, 2), None, 1)
    assert probe.witness is not None


def test_probe_positive_characteristic_rejected(F5):
    with pytest.raises(UnsupportedCharacteristic):
        find_noncommuting_c(Endo.identity(F5, 2), None, 1)


# -- triangular reduction -----------------------------------------------------------


def test_reduce_triangular_spec_example():
    word = parse_factored("[Q,2] E(2; x1^2)")
    cert = reduce_triangular(word)
    rep = verify_certificate(cert)
    assert rep.verdict == "PASS", rep.format()
    # one vd-descent step from (0,2) to an affine value, then the affine tail
    first = cert.steps[0]
    assert vector_degree(first.value) < (0, 2)


def test_reduce_triangular_df_base():
    word = parse_factored("[Q,2] T(2, 1; 1/2)")
    cert = reduce_triangular(word)
    assert verify_certificate(cert).verdict == "PASS"


def test_reduce_triangular_translation_input():
    cert = reduce_triangular(translation(Q, 2, [0, 3]))
    assert verify_certificate(cert).verdict == "PASS"


def test_reduce_triangular_errors():
    with pytest.raises(IdentityInput):
        reduce_triangular(FactoredAuto.identity(Q, 2))
    with pytest.raises(NotTriangular):
        reduce_triangular(parse_factored("[Q,2] E(1; x2^2)"))


def test_reduce_triangular_random():
    rng = random.Random(5)
    done = 0
    while done < 15:
        n = rng.randint(2, 3)
        tau = rand_triangular(rng, n, 2, special=True)
        word = FactoredAuto(Q, n, [(tau, 1)])
        if word.expand().is_identity():
            continue
        cert = reduce_triangular(word)
        rep = verify_certificate(cert)
        assert rep.verdict == "PASS", rep.format()
        done += 1


# -- parabolic reduction ---------------------------------------------------------------


def test_reduce_parabolic_direct():
    # (x2+x1, x1, x3 + x1 x2) is parabolic with a nontrivial head part
    word = parse_factored(
        "[Q,3] S(2,1,3; 1,-1,1) * E(3; x1*x2)")
    val = word.expand()
    assert classify(val).parabolic and classify(val).special
    cert = reduce_parabolic(word)
    rep = verify_certificate(cert)
    assert rep.verdict == "PASS", rep.format()


def test_reduce_parabolic_triangular_delegation():
    word = parse_factored("[Q,3] E(3; x1^2+x2)")
    cert = reduce_parabolic(word)
    assert verify_certificate(cert).verdict == "PASS"


def test_reduce_parabolic_identity_rejected():
    with pytest.raises(IdentityInput):
        reduce_parabolic(In := FactoredAuto.identity(Q, 3))


# -- m-triangular -------------------------------------------------------------------------


def test_m2_engine_elementary_conjugates():
    # eps_{1,x2^2} * lambda * eps_{2,x1^3} * lambda^{-1} with lambda in SL_2
    lam = linear_elementary(Q, 2, 2, 1, 1)
    word = (parse_factored("[Q,2] E(1; x2^2)") * lam
            * parse_factored("[Q,2] E(2; x1^3)") * lam.inverse())
    cert = reduce_m_triangular(word)
    rep = verify_certificate(cert)
    assert rep.verdict == "PASS", rep.format()


def test_m_engines_random():
    rng = random.Random(11)
    for m in (1, 2, 3, 4):
        for _ in range(3):
            n = rng.randint(2, 3)
            word = rand_m_triangular_word(rng, n, m, deg=1 if m >= 3 else 2)
            if word.expand().is_identity():
                continue
            cert = certify_normally_cotame(word)
            rep = verify_certificate(cert)
            assert rep.verdict == "PASS", (m, rep.format())


def test_m_engine_witness_route():
    # phi = beta0 * tau with all moving parts away from the probe axis: the
    # conjugated last-axis translations commute with phi, so the engines must
    # take the parabolic-witness route and still finish
    word = parse_factored("[Q,3] E(1; x2) * E(2; x1^2)")
    val = word.expand()
    assert not classify(val).triangular
    cert = certify_normally_cotame(word)
    rep = verify_certificate(cert)
    assert rep.verdict == "PASS", rep.format()


def test_m2_engine_nonunit_scalars():
    # tau_1 with x_n-scalar != 1 exercises the scaled pass-through
    word = (parse_factored("[Q,2] T(2; 1/2, x1^2)")
            * parse_factored("[Q,2] E(1; x2)")
            * parse_factored("[Q,2] T(1/3; 3, -x1^3)"))
    cert = certify_normally_cotame(word)
    rep = verify_certificate(cert)
    assert rep.verdict == "PASS", rep.format()


def test_m5_rejected():
    # five nonlinear triangular slots separated by an upper elementary
    # matrix cannot merge, so the normal form keeps m = 5
    sep = parse_factored("[Q,2] E(1; x2)")
    factors = []
    for k in range(5):
        factors.extend(parse_factored(f"[Q,2] E(2; {k + 1}*x1^2)").factors)
        factors.extend(sep.factors)
    word = FactoredAuto(Q, 2, factors)
    form = normalize_m_triangular(word)
    assert form.m == 5
    with pytest.raises(UnsupportedM):
        reduce_m_triangular(word)


def test_identity_input_rejected():
    word = parse_factored("[Q,2] E(2; x1^2)") \
        * parse_factored("[Q,2] E(2; x1^2)").inverse()
    with pytest.raises(IdentityInput):
        reduce_m_triangular(word)


def test_dispatcher_rejects_nonspecial():
    from polyauto.autos import dilation
    with pytest.raises(NotSpecial):
        certify_normally_cotame(dilation(Q, 2, 1, 2))


def test_dispatcher_rejects_finite_fields(F5):
    with pytest.raises(UnsupportedCharacteristic):
        certify_normally_cotame(elementary(F5, 2, 1, F5.one))


def test_vd_descent_property():
    rng = random.Random(17)
    checked = 0
    while checked < 200:
        n = rng.randint(2, 4)
        tau = rand_triangular(rng, n, 3, special=True).expand()
        if vector_degree(tau) == (0,) * n:
            continue
        gamma = rand_translation(rng, n).expand()
        from polyauto.autos import invert_endo
        conj = compose(compose(invert_endo(tau), gamma), tau)
        assert vector_degree(conj) < vector_degree(tau)
        checked += 1
