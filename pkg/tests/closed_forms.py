"""Closed-form cochains for the two deformations of the polynomial ring k[x, y].

Standard words of k[x, y] are y^n x^m, i.e. tuples of n ones followed by m zeros.
"""

from fractions import Fraction
from math import comb, factorial


def exponents(word):
    """(n, m) for the standard word y^n x^m."""
    n = word.count(1)
    assert word == (1,) * n + (0,) * (len(word) - n)
    return n, len(word) - n


def standard_word(n, m):
    return (1,) * n + (0,) * m


def derivation_psi(level, a, b):
    """[x, y] = y: psi_l(y^n1 x^m1, y^n2 x^m2) = C(m1, l) n2^l y^(n1+n2) x^(m1+m2-l)."""
    (n1, m1), (n2, m2) = exponents(a), exponents(b)
    c = comb(m1, level) * n2 ** level
    return {standard_word(n1 + n2, m1 + m2 - level): Fraction(c)} if c else {}


def weyl_psi(level, a, b):
    """[x, y] = 1: psi_2i = i! C(m1, i) C(n2, i) y^(n1+n2-i) x^(m1+m2-i), odd levels vanish."""
    if level % 2:
        return {}
    i = level // 2
    (n1, m1), (n2, m2) = exponents(a), exponents(b)
    c = factorial(i) * comb(m1, i) * comb(n2, i)
    return {standard_word(n1 + n2 - i, m1 + m2 - i): Fraction(c)} if c else {}


def truncated_power_psi(coeffs, level, m1, m2):
    """The closed form a_{N-l} x^(m1+m2-l) for m1+m2 >= N, zero below, for k<x>/(x^N - f)."""
    N = len(coeffs)
    if m1 + m2 < N or not 0 <= N - level < N:
        return {}
    a = Fraction(coeffs[N - level])
    return {(0,) * (m1 + m2 - level): a} if a else {}
