"""The compiled kernel and the pure-Python fallback must agree exactly."""

import random
from fractions import Fraction

from polyauto import _kernels_py, kernels
from polyauto.fields import Field


def rand_terms_fp(rng, n, p, count):
    return {tuple(rng.randint(0, 4) for _ in range(n)):
            rng.randrange(1, p) for _ in range(count)}


def rand_terms_obj(rng, n, count):
    return {tuple(rng.randint(0, 4) for _ in range(n)):
            Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
            for _ in range(count)}


def rand_terms_ext(rng, n, p, s, count):
    out = {}
    for _ in range(count):
        vec = tuple(rng.randrange(p) for _ in range(s))
        if not any(vec):
            vec = (1,) + (0,) * (s - 1)
        out[tuple(rng.randint(0, 4) for _ in range(n))] = vec
    return out


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_fp_backends_agree():
    rng = random.Random(1)
    for _ in range(50):
        a = rand_terms_fp(rng, 3, 7, rng.randint(1, 12))
        b = rand_terms_fp(rng, 3, 7, rng.randint(1, 12))
        assert kernels.mul_terms_fp(a, b, 7) == \
            _kernels_py.mul_terms_fp(a, b, 7)


def test_obj_backends_agree():
    rng = random.Random(2)
    for _ in range(50):
        a = rand_terms_obj(rng, 2, rng.randint(1, 10))
        b = rand_terms_obj(rng, 2, rng.randint(1, 10))
        assert kernels.mul_terms_obj(a, b) == _kernels_py.mul_terms_obj(a, b)


def test_ext_backends_agree():
    rng = random.Random(3)
    F9 = Field.of_order(9)
    for _ in range(50):
        a = rand_terms_ext(rng, 2, 3, 2, rng.randint(1, 10))
        b = rand_terms_ext(rng, 2, 3, 2, rng.randint(1, 10))
        assert kernels.mul_terms_ext(a, b, 3, F9.modulus) == \
            _kernels_py.mul_terms_ext(a, b, 3, F9.modulus)


def test_cancellation_removes_keys():
    # (x + 1)(x + 4) = x^2 + 5x + 4 = x^2 + 4 mod 5: the x key must vanish
    a = {(1,): 1, (0,): 1}
    b = {(1,): 1, (0,): 4}
    for impl in (kernels, _kernels_py):
        out = impl.mul_terms_fp(a, b, 5)
        assert out == {(2,): 1, (0,): 4}
    # same shape over Q with Fractions
    aq = {(1,): Fraction(1), (0,): Fraction(1)}
    bq = {(1,): Fraction(1), (0,): Fraction(-1)}
    for impl in (kernels, _kernels_py):
        assert impl.mul_terms_obj(aq, bq) == {(2,): Fraction(1),
                                              (0,): Fraction(-1)}
