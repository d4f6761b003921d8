"""Independent reference implementations used to freeze expected values."""

from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np


def simplex_quadrature(exps, points=12):
    """Float integral of prod t_i^e_i over the standard simplex by a Duffy map of the unit cube.

    t_j = u_j prod_{k<j} (1 - u_k); the Jacobian is the product of those prefactors.
    """
    n = len(exps)
    x, w = np.polynomial.legendre.leggauss(points)
    x = (x + 1) / 2
    w = w / 2
    total = 0.0
    for idx in product(range(points), repeat=n):
        weight = 1.0
        value = 1.0
        prefix = 1.0
        for j, i in enumerate(idx):
            weight *= w[i] * prefix
            value *= (prefix * x[i]) ** exps[j]
            prefix *= 1 - x[i]
        total += weight * value
    return total


# -- free associative algebra over Q on letters X, Y -----------------------------------


def _mul(a, b, order):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            if len(w) > order:
                continue
            out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


def _add(a, b, c=1):
    out = dict(a)
    for w, v in b.items():
        out[w] = out.get(w, 0) + c * v
    return {w: v for w, v in out.items() if v}


def _exp(a, order):
    out = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for k in range(1, order + 1):
        power = _mul(power, a, order)
        out = _add(out, power, Fraction(1, factorial(k)))
    return out


def _log(a, order):
    z = _add(a, {(): 1}, -1)
    out = {}
    power = {(): Fraction(1)}
    for k in range(1, order + 1):
        power = _mul(power, z, order)
        out = _add(out, power, Fraction((-1) ** (k + 1), k))
    return out


def bch_free(order):
    """log(exp(X) exp(Y)) truncated at word length ``order``, as {word: coefficient}."""
    X = {("X",): Fraction(1)}
    Y = {("Y",): Fraction(1)}
    return _log(_mul(_exp(X, order), _exp(Y, order), order), order)


def expand_nested(word):
    """Right-nested bracket [w_1, [w_2, ..., w_k]] of a word, expanded as {word: coefficient}."""
    if len(word) == 1:
        return {tuple(word): 1}
    inner = expand_nested(word[1:])
    left = {(word[0],): 1}
    return _add(_mul(left, inner, 10 ** 6), _mul(inner, left, 10 ** 6), -1)
