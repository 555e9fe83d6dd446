# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of polyauto._kernels_py: sparse term-map multiplication.

Semantics must match the pure-Python module exactly; tests compare the two
backends term by term.  Coefficients mod p use C integer arithmetic when
p fits comfortably in 31 bits (products stay below 2^63), which is every
field this package targets.
"""


BACKEND = "cython"


def mul_terms_fp(dict a, dict b, long p):
    cdef dict out = {}
    cdef long ca, cb, c, acc
    cdef tuple ea, eb, key
    cdef Py_ssize_t i, m
    for ea, ca_obj in a.items():
        ca = <long> ca_obj
        for eb, cb_obj in b.items():
            cb = <long> cb_obj
            c = (ca * cb) % p
            if c == 0:
                continue
            m = len(ea)
            key = tuple([<long> ea[i] + <long> eb[i] for i in range(m)])
            got = out.get(key)
            if got is None:
                out[key] = c
            else:
                acc = ((<long> got) + c) % p
                if acc:
                    out[key] = acc
                else:
                    del out[key]
    return out


def mul_terms_obj(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, key
    cdef Py_ssize_t i, m
    for ea, ca in a.items():
        for eb, cb in b.items():
            c = ca * cb
            m = len(ea)
            key = tuple([ea[i] + eb[i] for i in range(m)])
            got = out.get(key)
            if got is None:
                out[key] = c
            else:
                acc = got + c
                if acc == 0:
                    del out[key]
                else:
                    out[key] = acc
    return out


def mul_terms_ext(dict a, dict b, long p, tuple modulus):
    cdef Py_ssize_t s = len(modulus) - 1
    cdef dict out = {}
    cdef tuple ea, eb, ca, cb, key, cof
    cdef Py_ssize_t i, j, m
    cdef long ci, c
    cdef list prod
    cdef list mod = [<long> modulus[i] for i in range(s + 1)]
    for ea, ca in a.items():
        for eb, cb in b.items():
            prod = [0] * (2 * s - 1)
            for i in range(s):
                ci = <long> ca[i]
                if ci:
                    for j in range(s):
                        prod[i + j] = (prod[i + j] + ci * <long> cb[j]) % p
            for i in range(2 * s - 2, s - 1, -1):
                c = prod[i]
                if c:
                    prod[i] = 0
                    for j in range(s):
                        prod[i - s + j] = (prod[i - s + j]
                                           - c * mod[j]) % p
            cof = tuple([prod[i] % p for i in range(s)])
            if not any(cof):
                continue
            m = len(ea)
            key = tuple([<long> ea[i] + <long> eb[i] for i in range(m)])
            got = out.get(key)
            if got is None:
                out[key] = cof
            else:
                acc = tuple([((<long> got[i]) + (<long> cof[i])) % p
                             for i in range(s)])
                if any(acc):
                    out[key] = acc
                else:
                    del out[key]
    return out
