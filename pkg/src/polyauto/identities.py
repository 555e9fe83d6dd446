"""The executable identity suite: the displayed group identities that the
constructions rely on, checked by exact expansion over configurable fields.

Each check returns an IdentityResult; the CLI `identities` subcommand and
the acceptance tests share this module, so a failure anywhere is a failure
everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import islice, product
from typing import Iterable, List, Optional, Sequence, Tuple

from .autos import (Endo, FactoredAuto, compose, dilation, elementary,
                    sl_dilation)
from .derivations import TriDerivation, exp_images, kernel_check
from .fields import Field, FieldElement
from .poly import Polynomial

DEFAULT_FIELD_TAGS = ("Q", "F5", "F4", "F9")


@dataclass(frozen=True)
class IdentityResult:
    family: str
    field_tag: str
    detail: str
    ok: bool


def _fields_from_tags(tags: Sequence[str]) -> List[Field]:
    from .textio import parse_field
    return [parse_field(t) for t in tags]


# -- (a) the commutator formula ---------------------------------------------


def commutator_formula_checks(field: Field, n: int = 2,
                              limit: int = 50) -> List[IdentityResult]:
    """eps_{i,a}^{-1} delta_{i,j,b} eps_{i,a} delta_{i,j,b}^{-1} = eps_{i,ab-a}."""
    out = []
    pairs: Iterable[Tuple[FieldElement, FieldElement]]
    if field.order is None:
        a_stream = [field.from_int(0)] + list(field.units(bound=9))
        b_stream = list(field.units(bound=5))
        pairs = islice(product(a_stream, b_stream), limit)
    else:
        pairs = ((a, b) for a in field.elements() for b in field.units())
    for a, b in pairs:
        eps = elementary(field, n, 1, a)
        dil = sl_dilation(field, n, 1, 2, b)
        got = (eps.inverse() * dil * eps * dil.inverse()).expand()
        want = elementary(field, n, 1, a * b - a).expand()
        out.append(IdentityResult(
            "commutator-formula", field.tag(), f"a={a} b={b}", got == want))
    return out


# -- (b) the odd-characteristic square trick ----------------------------------


def square_trick_checks(field: Field, n: int = 2,
                        limit: int = 20) -> List[IdentityResult]:
    """eps_{i,a x_j} as a product of translations conjugated by eps_{i,x_j^2};
    valid away from characteristic two."""
    assert field.characteristic != 2
    out = []
    units = list(field.units(bound=limit)) if field.order is None else \
        list(field.units())
    for a in units[:limit]:
        i, j = 1, 2
        xj = Polynomial.variable(field, n, j)
        two = field.from_int(2)
        four = field.from_int(4)
        conj = elementary(field, n, i, xj * xj)
        word = (elementary(field, n, i, -(a * a) / four)
                * elementary(field, n, j, -(a / two))
                * conj * elementary(field, n, j, a / two) * conj.inverse())
        want = elementary(field, n, i, xj.scale(a)).expand()
        out.append(IdentityResult(
            "square-trick", field.tag(), f"a={a}", word.expand() == want))
    return out


# -- (c) the characteristic-two cubic claim -------------------------------------


def char2_claim_checks(field: Field, n: int = 2) -> List[IdentityResult]:
    """All valid (a, b): the cubic conjugation word equals eps_{i, a x_j},
    including the two displayed sub-identities with their exact f_1, f_2."""
    assert field.characteristic == 2 and field.order > 2
    out = []
    i, j = 1, 2
    xj = Polynomial.variable(field, n, j)
    for a in field.units():
        for b in field.units():
            if b == a:
                continue
            c = (b * b) / (a - b)
            cube = xj ** 3

            def half(mult: FieldElement, shift: FieldElement) -> FactoredAuto:
                conj = elementary(field, n, i, cube.scale(mult))
                return (elementary(field, n, i, -(mult * shift ** 3))
                        * elementary(field, n, j, -shift)
                        * conj * elementary(field, n, j, shift)
                        * conj.inverse())

            h1, h2 = half(c, b), half(b, c)
            f1 = (xj * xj).scale(c * b) + xj.scale(c * b * b)
            f2 = (xj * xj).scale(b * c) + xj.scale(b * c * c)
            ok1 = h1.expand() == elementary(field, n, i, f1).expand()
            ok2 = h2.expand() == elementary(field, n, i, f2).expand()
            delta = sl_dilation(field, n, i, j, c)
            whole = delta.inverse() * h1 * h2 * delta
            want = elementary(field, n, i, xj.scale(a)).expand()
            ok3 = whole.expand() == want
            out.append(IdentityResult(
                "char2-claim", field.tag(), f"a={a} b={b}",
                ok1 and ok2 and ok3))
    return out


# -- (d) the scaling observation ---------------------------------------------------


def scaling_observation_checks(field: Field, n: int = 2, count: int = 50,
                               seed: int = 2024) -> List[IdentityResult]:
    """eps_{1,aM} = delta_{1,2}^{-1} (eps_{1,2aM}^{-1} delta_{1,2} eps_{1,2aM})
    for monomials M free of x_1; needs 2 != 0."""
    assert field.characteristic != 2
    rng = random.Random(seed)
    units = list(field.units(bound=24)) if field.order is None \
        else list(field.units())
    out = []
    for _ in range(count):
        a = rng.choice(units)
        exps = [0] + [rng.randint(0, 3) for _ in range(n - 1)]
        M = Polynomial.monomial(field, n, field.one, exps)
        eps2 = elementary(field, n, 1, M.scale(a * field.from_int(2)))
        delta = dilation(field, n, 1, 2)
        word = delta.inverse() * eps2.inverse() * delta * eps2
        want = elementary(field, n, 1, M.scale(a)).expand()
        out.append(IdentityResult(
            "scaling-observation", field.tag(),
            f"a={a} exps={tuple(exps)}", word.expand() == want))
    return out


# -- (e) the exponential commutator ---------------------------------------------------


def random_kernel_pairs(seed: int, count: int,
                        field: Optional[Field] = None,
                        max_deg: int = 2) -> List[Tuple[Polynomial, TriDerivation]]:
    """Deterministic (F, D) pairs with D triangular nonzero and F in ker D.

    Built from the closed-form invariants of two derivation shapes:
    D = (0, 0, Q3, Q4) has x_1, x_2 and W = Q4*x3 - Q3*x4 in its kernel;
    D = (0, Q2, 0) has x_1 and x_3 in its kernel.
    """
    field = field or Field.rationals()
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < count:
        n = rng.choice((3, 4))
        zero = Polynomial.zero(field, n)

        def rpoly(maxvar, deg=max_deg, allow_zero=False):
            p = zero
            for _ in range(rng.randint(0 if allow_zero else 1, 2)):
                exps = [0] * n
                for j in range(maxvar):
                    exps[j] = rng.randint(0, deg)
                coeff = field.from_int(rng.choice((-2, -1, 1, 2, 3)))
                p = p + Polynomial.monomial(field, n, coeff, exps)
            return p

        if n == 4:
            q3, q4 = rpoly(2), rpoly(2)
            if q3.is_zero() and q4.is_zero():
                continue
            D = TriDerivation(field, n, (zero, zero, q3, q4))
            x3 = Polynomial.variable(field, n, 3)
            x4 = Polynomial.variable(field, n, 4)
            W = q4 * x3 - q3 * x4
            basis = [Polynomial.variable(field, n, 1),
                     Polynomial.variable(field, n, 2), W]
        else:
            q2 = rpoly(1)
            if q2.is_zero():
                continue
            D = TriDerivation(field, n, (zero, q2, zero))
            basis = [Polynomial.variable(field, n, 1),
                     Polynomial.variable(field, n, 3)]
        F = zero
        for _ in range(rng.randint(1, 2)):
            term = Polynomial.one(field, n)
            for b in rng.sample(basis, rng.randint(1, len(basis))):
                term = term * b
            F = F + term.scale(field.from_int(rng.choice((-1, 1, 2))))
        if F.is_zero() or not kernel_check(D, F):
            continue
        if (F * D.images[-1]).is_zero() and all(
                (F * q).is_zero() for q in D.images):
            continue
        pairs.append((F, D))
    return pairs


def exp_commutator_checks(count: int = 20,
                          seed: int = 515) -> List[IdentityResult]:
    """eps_{n,1}^{-1} exp(-FD) eps_{n,1} exp(FD) = exp((F - (F)eps_{n,1}) D)."""
    field = Field.rationals()
    out = []
    for F, D in random_kernel_pairs(seed, count):
        n = F.nvars
        eps = elementary(field, n, n, field.one)
        exp_l = Endo(field, n, exp_images(F, D))
        exp_inv = Endo(field, n, exp_images(-F, D))
        left = compose(compose(compose(eps.inverse().expand(), exp_inv),
                               eps.expand()), exp_l)
        images = [Polynomial.variable(field, n, m + 1) for m in range(n)]
        images[n - 1] = images[n - 1] + Polynomial.one(field, n)
        shifted = F.substitute(images)
        right = Endo(field, n, exp_images(F - shifted, D))
        out.append(IdentityResult(
            "exp-commutator", field.tag(),
            f"n={n} degF={F.deg()}", left == right))
    return out


# -- suite ------------------------------------------------------------------------------


def run_identity_suite(tags: Sequence[str] = DEFAULT_FIELD_TAGS,
                       seed: int = 2024) -> List[IdentityResult]:
    fields = _fields_from_tags(tags)
    results: List[IdentityResult] = []
    for f in fields:
        results.extend(commutator_formula_checks(f))
    for f in fields:
        if f.characteristic != 2:
            results.extend(square_trick_checks(f))
    for f in fields:
        if f.characteristic == 2 and (f.order or 3) > 2:
            results.extend(char2_claim_checks(f))
    for f in fields:
        if f.characteristic != 2:
            results.extend(scaling_observation_checks(f, seed=seed))
    results.extend(exp_commutator_checks(seed=seed + 491))
    return results


def summarize(results: Sequence[IdentityResult]) -> str:
    lines = []
    by_family = {}
    for r in results:
        by_family.setdefault((r.family, r.field_tag), []).append(r)
    for (family, tag), items in sorted(by_family.items()):
        bad = [r for r in items if not r.ok]
        status = "ok" if not bad else "FAIL"
        lines.append(f"{status:4} {family:22} {tag:12} "
                     f"{len(items) - len(bad)}/{len(items)}")
        for r in bad:
            lines.append(f"     failed: {r.detail}")
    total_bad = sum(1 for r in results if not r.ok)
    lines.append(f"identities: {len(results) - total_bad}/{len(results)} passed")
    return "\n".join(lines)
