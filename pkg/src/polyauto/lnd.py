"""Exponential automorphisms of triangular derivations and their
normal-closure reductions.

The descent works on the x_n-degree of the kernel element F: commutating
exp(FD) with the last-axis unit translation replaces F by F - (F)shift,
dropping that degree by exactly one in characteristic zero.  Once F is free
of x_n the map is parabolic-shaped and a single commutator with eps_{n,x_i}
produces a nontrivial elementary map.

For tau * alpha * exp(FD) the chain of the corresponding theorem is
followed; when the descent invariant degenerates (F of x_n-degree <= 1
makes the second commutator collapse to the identity) the intermediate
value is itself parabolic and the engine hands over to the parabolic
reduction instead of failing.
"""

from __future__ import annotations

from .autos import (Endo, ExpLND, FactoredAuto, classify, compose,
                    elementary)
from .certificates import KIND_COTAME, Certificate
from .derivations import (NILPOTENCY_CAP, TriDerivation, apply_derivation,
                          exp_images, kernel_check)
from .errors import (DegenerateChain, IdentityInput, InternalIdentityFailure,
                     KernelViolation, NotSpecial, UnsupportedCharacteristic)
from .fields import RATIONALS
from .poly import Polynomial
from .reduce_core import (max_var_degree, reduce_parabolic_ref,
                          reduce_triangular_ref)
from .wordbuild import CertBuilder

__all__ = [
    "TriDerivation", "apply_derivation", "kernel_check", "exp_automorphism",
    "reduce_exponential", "reduce_triangular_exponential",
    "reduce_exponential_ref", "reduce_triangular_exponential_ref",
]


def exp_automorphism(F: Polynomial, D: TriDerivation,
                     cap: int = NILPOTENCY_CAP) -> Endo:
    """The automorphism exp(FD); always special (checked on construction)."""
    endo = Endo(F.field, F.nvars, exp_images(F, D, cap=cap))
    from .autos import jacobian_det
    if jacobian_det(endo) != Polynomial.one(F.field, F.nvars):
        raise InternalIdentityFailure(
            "exp(FD) produced a non-special map; this cannot happen")
    return endo


def _axis_shift_poly(poly: Polynomial, axis: int, amount) -> Polynomial:
    field, n = poly.field, poly.nvars
    images = [Polynomial.variable(field, n, m + 1) for m in range(n)]
    images[axis - 1] = images[axis - 1] + Polynomial.constant(field, n, amount)
    return poly.substitute(images)


def reduce_exponential_ref(builder: CertBuilder, ref: str,
                           F: Polynomial, D: TriDerivation) -> str:
    """Descent on deg_{x_n} F; `ref` must hold exp(FD)."""
    field, n = builder.field, builder.nvars
    if field.kind != RATIONALS:
        raise UnsupportedCharacteristic("exponential reduction needs char 0")
    if D.is_zero():
        raise KernelViolation("the derivation must be nonzero")
    val = builder.value(ref)
    if val.is_identity():
        raise IdentityInput("exp(FD) is the identity")
    if val != Endo(field, n, exp_images(F, D)):
        raise InternalIdentityFailure("base value is not exp(FD)")
    cur = ref
    F_t = F
    eps_unit = elementary(field, n, n, field.one)
    while F_t.deg_in(n) > 0:
        F_next = F_t - _axis_shift_poly(F_t, n, field.one)
        if F_next.deg_in(n) != F_t.deg_in(n) - 1:
            raise InternalIdentityFailure(
                "x_n-degree of F did not drop by one during the descent")
        expected = Endo(field, n, exp_images(F_next, D))
        cur = builder.add_step(
            [(eps_unit, cur, -1), (None, cur, 1)],
            expect=expected,
            note=f"exp descent deg_xn {F_t.deg_in(n)} -> {F_next.deg_in(n)}")
        F_t = F_next
    # base: F_t is free of x_n and nonzero, so exp(F_t D) != id
    val = builder.value(cur)
    if classify(val).triangular:
        return reduce_triangular_ref(builder, cur)
    pick = None
    for i in range(1, n):
        diff = val.components[i - 1] - Polynomial.variable(field, n, i)
        if not diff.is_zero():
            pick = (i, diff)
            break
    if pick is None:
        raise InternalIdentityFailure(
            "exp base case moves only x_n but was not triangular")
    i, q = pick
    eps_xi = elementary(field, n, n, Polynomial.variable(field, n, i))
    expected_comps = [Polynomial.variable(field, n, t)
                      for t in range(1, n + 1)]
    expected_comps[n - 1] = expected_comps[n - 1] + q
    expected = Endo(field, n, expected_comps)
    step = builder.add_step(
        [(eps_xi, cur, -1), (None, cur, 1)],
        expect=expected, note=f"exp base commutator with x{i}")
    return reduce_triangular_ref(builder, step)


def reduce_exponential(F: Polynomial, D: TriDerivation) -> Certificate:
    """Certificate that exp(FD) normally generates a nontrivial elementary."""
    field, n = F.field, F.nvars
    builder = CertBuilder(field, n, KIND_COTAME)
    word = FactoredAuto(field, n, [ExpLND(field, n, F, D)])
    if word.expand().is_identity():
        raise IdentityInput("exp(FD) is the identity")
    seed = builder.add_seed(word, label="theta")
    terminal = reduce_exponential_ref(builder, seed, F, D)
    builder.meta["path"] = "exponential"
    return builder.to_certificate(terminal, cite="exponential-reduction")


def reduce_triangular_exponential_ref(builder: CertBuilder, ref: str,
                                      tau: Endo, alpha: Endo,
                                      F: Polynomial, D: TriDerivation) -> str:
    """Reduction for tau * alpha * exp(FD) held in `ref`.

    Runs the commutator chain; the first commutator conjugated back through
    exp(FD) collapses to eps_c^{-1} exp(GD) gamma with G = (F)eps_c^{-1} - F.
    When G still involves x_n one more commutator yields exp(HD) and the
    exponential descent takes over; otherwise the value is parabolic and the
    parabolic reduction finishes.
    """
    field, n = builder.field, builder.nvars
    if field.kind != RATIONALS:
        raise UnsupportedCharacteristic("this reduction needs char 0")
    if D.is_zero():
        raise KernelViolation("the derivation must be nonzero")
    phi = builder.value(ref)
    if phi.is_identity():
        raise IdentityInput("input is the identity")
    if classify(phi).triangular:
        return reduce_triangular_ref(builder, ref)
    ta = compose(tau, alpha)
    if ta.is_identity():
        return reduce_exponential_ref(builder, ref, F, D)
    exp_val = Endo(field, n, exp_images(F, D))
    exp_word_inv = FactoredAuto(field, n, [(ExpLND(field, n, F, D), -1)])
    alpha_inv = _linear_inverse(alpha)
    tau_inv = _structured_inverse(tau)
    B = max(max_var_degree(phi) + 1, 2)
    phi_inv = builder.inverse(ref)
    for c in range(1, B + 1):
        c_el = field.from_int(c)
        eps_c = elementary(field, n, n, c_el)
        eps_val = eps_c.expand()
        phi0 = compose(compose(compose(eps_c.inverse().expand(), phi_inv),
                               eps_val), phi)
        if phi0.is_identity():
            continue
        step0 = builder.add_step(
            [(eps_c, ref, -1), (None, ref, 1)],
            expect=phi0, note=f"exp chain commutator c={c}")
        # conjugate through exp(FD)
        G = _axis_shift_poly(F, n, -c_el) - F
        passed = compose(compose(tau_inv, eps_val), tau)
        if not classify(passed).translation:
            raise InternalIdentityFailure(
                "axis translation did not pass through tau as a translation")
        gamma = compose(compose(alpha_inv, passed), alpha)
        if not classify(gamma).translation:
            raise InternalIdentityFailure(
                "conjugated translation is not a translation")
        predicted = compose(compose(eps_c.inverse().expand(),
                                    Endo(field, n, exp_images(G, D))), gamma)
        phi1 = builder.add_step(
            [(exp_word_inv, step0, 1)],
            expect=predicted, note="conjugate the commutator through exp(FD)")
        if builder.value(phi1).is_identity():
            continue
        if G.deg_in(n) == 0:
            # exp(GD) and both translations are parabolic-shaped
            if not classify(builder.value(phi1)).parabolic:
                raise DegenerateChain(
                    "chain collapsed but the intermediate value is not "
                    "parabolic; no reduction route remains")
            return reduce_parabolic_ref(builder, phi1, None)
        H = G - _axis_shift_poly(G, n, c_el)
        exp_H = Endo(field, n, exp_images(H, D))
        if exp_H.is_identity():
            raise DegenerateChain(
                "exp(HD) degenerated to the identity with deg_xn G > 0")
        step2 = builder.add_step(
            [(eps_c.inverse(), phi1, 1), (None, phi1, -1)],
            expect=exp_H, note="second commutator lands in exp form")
        return reduce_exponential_ref(builder, step2, H, D)
    # phi commutes with every eps_{n,c}: it is parabolic outright
    if not classify(phi).parabolic:
        raise InternalIdentityFailure(
            "probe exhausted but the map is not parabolic")
    return reduce_parabolic_ref(builder, ref, None)


def _linear_inverse(alpha: Endo) -> Endo:
    from .autos import invert_endo
    return invert_endo(alpha)


def _structured_inverse(tau: Endo) -> Endo:
    from .autos import invert_endo
    return invert_endo(tau)


def reduce_triangular_exponential(tau_word: FactoredAuto,
                                  alpha_word: FactoredAuto,
                                  F: Polynomial,
                                  D: TriDerivation) -> Certificate:
    """Certificate for tau * alpha * exp(FD), which must be special and
    different from the identity."""
    field, n = F.field, F.nvars
    word = tau_word * alpha_word * FactoredAuto(
        field, n, [ExpLND(field, n, F, D)])
    builder = CertBuilder(field, n, KIND_COTAME)
    val = word.expand()
    if val.is_identity():
        raise IdentityInput("the product is the identity")
    from .autos import jacobian_det
    if jacobian_det(val) != Polynomial.one(field, n):
        raise NotSpecial("the product must have Jacobian determinant 1")
    seed = builder.add_seed(word, label="theta")
    terminal = reduce_triangular_exponential_ref(
        builder, seed, tau_word.expand(), alpha_word.expand(), F, D)
    builder.meta["path"] = "triangular-exponential"
    return builder.to_certificate(terminal, cite="triangular-exponential-reduction")
