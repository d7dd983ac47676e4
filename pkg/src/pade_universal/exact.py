"""Exact arithmetic over Gaussian rationals for oracle-grade computations.

The float pipeline is the production path; this module exists so that small
Hankel determinants and Taylor expansions of rational functions can be
computed with no rounding at all.  It anchors the tolerances used by the
float tests and settles membership questions exactly.  Intended for degrees
up to about 8; beyond that the fractions grow without bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateDenominatorError, TruncationExceededError


@dataclass(frozen=True)
class QComplex:
    """A Gaussian rational ``re + im*i`` with exact Fraction parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re, im=0) -> "QComplex":
        return cls(Fraction(re), Fraction(im))

    @classmethod
    def zero(cls) -> "QComplex":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "QComplex":
        return cls(Fraction(1), Fraction(0))

    def __add__(self, other: "QComplex") -> "QComplex":
        return QComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QComplex") -> "QComplex":
        return QComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QComplex":
        return QComplex(-self.re, -self.im)

    def __mul__(self, other: "QComplex") -> "QComplex":
        return QComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "QComplex") -> "QComplex":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QComplex(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]

    @classmethod
    def from_json(cls, pair) -> "QComplex":
        return cls(Fraction(pair[0]), Fraction(pair[1]))


def exact_poly_eval(coeffs: list[QComplex], z: QComplex) -> QComplex:
    acc = QComplex.zero()
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def exact_recenter(coeffs: list[QComplex], delta: QComplex) -> list[QComplex]:
    """Taylor shift: coefficients of ``p(w + delta)`` given those of ``p``."""
    a = list(coeffs)
    n = len(a)
    for j in range(n - 1):
        for i in range(n - 2, j - 1, -1):
            a[i] = a[i] + delta * a[i + 1]
    return a


def exact_series_divide(
    numer: list[QComplex], denom: list[QComplex], length: int
) -> list[QComplex]:
    """First ``length`` Taylor coefficients of ``numer/denom`` about 0.

    ``denom[0]`` must be nonzero (no pole at the expansion point).
    """
    if not denom or denom[0].is_zero():
        raise DegenerateDenominatorError("denominator vanishes at the center")
    out: list[QComplex] = []
    for k in range(length):
        acc = numer[k] if k < len(numer) else QComplex.zero()
        for i in range(1, min(k, len(denom) - 1) + 1):
            acc = acc - denom[i] * out[k - i]
        out.append(acc / denom[0])
    return out


def exact_rational_taylor(
    numer: list[QComplex], denom: list[QComplex], zeta: QComplex, length: int
) -> list[QComplex]:
    """Exact Taylor prefix of the rational ``numer/denom`` about ``zeta``."""
    return exact_series_divide(
        exact_recenter(numer, zeta), exact_recenter(denom, zeta), length
    )


def exact_determinant(matrix: list[list[QComplex]]) -> QComplex:
    """Exact determinant by fraction Gaussian elimination with pivoting."""
    n = len(matrix)
    if n == 0:
        return QComplex.one()
    m = [row[:] for row in matrix]
    det = QComplex.one()
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if not m[row][col].is_zero():
                pivot = row
                break
        if pivot is None:
            return QComplex.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = QComplex.one() / m[col][col]
        for row in range(col + 1, n):
            factor = m[row][col] * inv
            if factor.is_zero():
                continue
            for c in range(col, n):
                m[row][c] = m[row][c] - factor * m[col][c]
    return det


def exact_hankel_determinant(coeffs: list[QComplex], p: int, q: int) -> QComplex:
    """Exact ``q x q`` Hankel determinant with entries ``a_{p-q+i+j-1}``.

    Indices below zero read as exact zeros; indices beyond the stored prefix
    raise, mirroring the float-side truncation contract.
    """
    if q == 0:
        return QComplex.one()
    if len(coeffs) < p + q + 1:
        raise TruncationExceededError(p + q, len(coeffs))

    def entry(k: int) -> QComplex:
        if k < 0:
            return QComplex.zero()
        return coeffs[k]

    matrix = [
        [entry(p - q + i + j + 1) for j in range(q)] for i in range(q)
    ]
    return exact_determinant(matrix)
