"""Sparse exact multivariate polynomials over a Field.

Terms are stored as a dict mapping exponent tuples (length nvars) to nonzero
coefficient payloads.  The zero polynomial is the empty dict.  Degrees follow
the deg(0) = 0 convention used throughout the engine.

Polynomials are immutable by contract: no method mutates `terms` after
construction, so instances can be shared freely.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence, Tuple

from . import kernels
from .errors import (ArityMismatch, DegreeCapExceeded, FieldMismatch,
                     IndexOutOfRange)
from .fields import EXTENSION, PRIME, Field, FieldElement

# Commutator expansion of long words can square degrees; the cap turns an
# explosion into a typed error rather than a hang.
DEFAULT_DEGREE_CAP = 1024


class Polynomial:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = terms

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(field: Field, nvars: int) -> "Polynomial":
        return Polynomial(field, nvars, {})

    @staticmethod
    def one(field: Field, nvars: int) -> "Polynomial":
        return Polynomial.constant(field, nvars, field.one)

    @staticmethod
    def constant(field: Field, nvars: int, value) -> "Polynomial":
        c = field.elem(value)
        if c.is_zero():
            return Polynomial.zero(field, nvars)
        return Polynomial(field, nvars, {(0,) * nvars: c.payload})

    @staticmethod
    def variable(field: Field, nvars: int, i: int) -> "Polynomial":
        """x_i, 1-based."""
        if not 1 <= i <= nvars:
            raise IndexOutOfRange(f"x{i} out of range for {nvars} variables")
        exps = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return Polynomial(field, nvars, {exps: field.one.payload})

    @staticmethod
    def monomial(field: Field, nvars: int, coeff, exps: Sequence[int]) -> "Polynomial":
        c = field.elem(coeff)
        exps = tuple(int(e) for e in exps)
        if len(exps) != nvars:
            raise ArityMismatch("exponent vector length != nvars")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        if c.is_zero():
            return Polynomial.zero(field, nvars)
        return Polynomial(field, nvars, {exps: c.payload})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> FieldElement:
        """Constant term as a field element."""
        z = (0,) * self.nvars
        payload = self.terms.get(z)
        if payload is None:
            return self.field.zero
        return FieldElement(self.field, payload)

    def coeff(self, exps: Sequence[int]) -> FieldElement:
        payload = self.terms.get(tuple(exps))
        if payload is None:
            return self.field.zero
        return FieldElement(self.field, payload)

    def deg(self) -> int:
        """Total degree, with deg(0) = 0."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def deg_in(self, i: int) -> int:
        """Degree in x_i (1-based), deg(0) = 0."""
        if not 1 <= i <= self.nvars:
            raise IndexOutOfRange(f"x{i} out of range")
        if not self.terms:
            return 0
        return max(e[i - 1] for e in self.terms)

    def degrees(self) -> Tuple[int, Tuple[int, ...]]:
        """(total degree, per-variable degrees), deg(0) = 0 convention."""
        if not self.terms:
            return 0, (0,) * self.nvars
        total = max(sum(e) for e in self.terms)
        per = tuple(max(e[j] for e in self.terms) for j in range(self.nvars))
        return total, per

    def involves(self, i: int) -> bool:
        return any(e[i - 1] for e in self.terms)

    def variables(self) -> Tuple[int, ...]:
        """1-based indices of variables that actually occur."""
        out = []
        for j in range(self.nvars):
            if any(e[j] for e in self.terms):
                out.append(j + 1)
        return tuple(out)

    def sorted_terms(self) -> Iterator[Tuple[Tuple[int, ...], FieldElement]]:
        """Graded-lexicographic order, highest first: serialization is
        byte-stable because of this."""
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            yield e, FieldElement(self.field, self.terms[e])

    def monomials(self) -> Iterator["Polynomial"]:
        for e, c in self.sorted_terms():
            yield Polynomial(self.field, self.nvars, {e: c.payload})

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatch("polynomials over different fields")
            if other.nvars != self.nvars:
                raise ArityMismatch(
                    f"arity {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial.constant(self.field, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        field = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            if acc is None:
                out[e] = c
            else:
                acc = field._padd(acc, c)
                if field._pis_zero(acc):
                    del out[e]
                else:
                    out[e] = acc
        return Polynomial(field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        field = self.field
        return Polynomial(field, self.nvars,
                          {e: field._pneg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        field = self.field
        if field.kind == PRIME:
            if field.p < 2 ** 31:
                terms = kernels.mul_terms_fp(self.terms, other.terms, field.p)
            else:
                # compiled fast path assumes products fit a C long
                from . import _kernels_py
                terms = _kernels_py.mul_terms_fp(self.terms, other.terms,
                                                 field.p)
        elif field.kind == EXTENSION:
            terms = kernels.mul_terms_ext(self.terms, other.terms,
                                          field.p, field.modulus)
        else:
            terms = kernels.mul_terms_obj(self.terms, other.terms)
        return Polynomial(field, self.nvars, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Polynomial":
        c = self.field.elem(c)
        if c.is_zero():
            return Polynomial.zero(self.field, self.nvars)
        field = self.field
        out = {}
        for e, payload in self.terms.items():
            v = field._pmul(payload, c.payload)
            if not field._pis_zero(v):
                out[e] = v
        return Polynomial(field, self.nvars, out)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one(self.field, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.field, self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.nvars,
                     frozenset(self.terms.items())))

    def __repr__(self):
        from .textio import poly_to_text
        return f"Poly[{self.field.tag()},{self.nvars}]({poly_to_text(self)})"

    # -- calculus and substitution -------------------------------------------

    def partial_derivative(self, i: int) -> "Polynomial":
        """Formal partial by x_i; exponent coefficients reduce in the field's
        characteristic (so d(x^p)/dx = 0 over F_p)."""
        if not 1 <= i <= self.nvars:
            raise IndexOutOfRange(f"x{i} out of range")
        field = self.field
        out = {}
        j = i - 1
        for e, c in self.terms.items():
            k = e[j]
            if k == 0:
                continue
            v = field._pmul_int(c, k)
            if field._pis_zero(v):
                continue
            ne = e[:j] + (k - 1,) + e[j + 1:]
            acc = out.get(ne)
            if acc is None:
                out[ne] = v
            else:
                acc = field._padd(acc, v)
                if field._pis_zero(acc):
                    del out[ne]
                else:
                    out[ne] = acc
        return Polynomial(field, self.nvars, out)

    def substitute(self, images: Sequence["Polynomial"],
                   cap: Optional[int] = DEFAULT_DEGREE_CAP) -> "Polynomial":
        """Replace x_j by images[j-1]; the result arity is the images' arity.

        The optional cap bounds the total degree of every term's expansion.
        Over a field deg(prod) = sum of degs exactly, so the check fires iff
        the true result of some term would exceed the cap.
        """
        if len(images) != self.nvars:
            raise ArityMismatch(
                f"need {self.nvars} images, got {len(images)}")
        field = self.field
        if not images:
            raise ArityMismatch("substitution needs at least one variable")
        m = images[0].nvars
        for img in images:
            if img.field != field:
                raise FieldMismatch("image over a different field")
            if img.nvars != m:
                raise ArityMismatch("images of mixed arity")
        img_degs = [img.deg() for img in images]
        img_zero = [img.is_zero() for img in images]
        powers = [dict() for _ in images]

        def img_pow(j: int, e: int) -> Polynomial:
            memo = powers[j]
            got = memo.get(e)
            if got is None:
                if e == 1:
                    got = images[j]
                else:
                    half = img_pow(j, e // 2)
                    got = half * half
                    if e & 1:
                        got = got * images[j]
                memo[e] = got
            return got

        if cap is not None:
            # check every term before doing any work: a single over-cap term
            # means the whole expansion is doomed, so fail fast
            for e in self.terms:
                if any(img_zero[j] and e[j] for j in range(self.nvars)):
                    continue
                est = sum(e[j] * img_degs[j] for j in range(self.nvars))
                if est > cap:
                    raise DegreeCapExceeded(
                        f"substitution term degree {est} exceeds cap {cap}")
        result = Polynomial.zero(field, m)
        for e, c in self.terms.items():
            if any(img_zero[j] and e[j] for j in range(self.nvars)):
                continue
            term = None
            for j in range(self.nvars):
                if e[j]:
                    q = img_pow(j, e[j])
                    term = q if term is None else term * q
            if term is None:
                term = Polynomial.one(field, m)
            result = result + term.scale(FieldElement(field, c))
        return result


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {op!r}")


def identity_images(field: Field, nvars: int) -> Tuple[Polynomial, ...]:
    return tuple(Polynomial.variable(field, nvars, i)
                 for i in range(1, nvars + 1))
