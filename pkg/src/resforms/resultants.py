"""Resultants of univariate polynomials with symbolic complex coefficients.

Coefficients are complex-valued polynomials in real chart variables, stored
as (real, imaginary) pairs of :class:`~resforms.poly.MultiPoly`; there is no
complex coefficient type below this level.  Resultants are always taken with
respect to the *declared* degrees, so a vanishing leading coefficient is
the caller's business - that is exactly what makes the restricted resultant
a polynomial in all chart variables.

Two routes are provided for pairs of cubics: the generic elimination
determinant and the 3x3 determinant built from the coefficient minors
``[i, j] = a_i * b_j - b_i * a_j``.  The two agree up to one global sign,
fixed empirically once (see :func:`bezout3_sign`) and asserted constant by
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .linalg import Matrix, det_symbolic
from .poly import ComplexScalar, MultiPoly, Scalar


class ComplexPoly:
    """A complex-valued polynomial as an immutable (re, im) pair."""

    __slots__ = ("re", "im")

    def __init__(self, re: MultiPoly, im: MultiPoly):
        if re.var_count != im.var_count:
            raise ValueError("real and imaginary parts live in different rings")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPoly is immutable")

    @classmethod
    def zero(cls, var_count: int) -> "ComplexPoly":
        z = MultiPoly.zero(var_count)
        return cls(z, z)

    @classmethod
    def real(cls, p: MultiPoly) -> "ComplexPoly":
        return cls(p, MultiPoly.zero(p.var_count))

    @classmethod
    def from_scalar(cls, var_count: int, value: ComplexScalar) -> "ComplexPoly":
        return cls(
            MultiPoly.constant(var_count, value.re),
            MultiPoly.constant(var_count, value.im),
        )

    @property
    def var_count(self) -> int:
        return self.re.var_count

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self.re, -self.im)

    def __mul__(self, other: Union["ComplexPoly", Scalar]) -> "ComplexPoly":
        if isinstance(other, (int, Fraction)):
            return ComplexPoly(self.re * other, self.im * other)
        return ComplexPoly(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __rmul__(self, other: Scalar) -> "ComplexPoly":
        return self.__mul__(other)

    def conjugate(self) -> "ComplexPoly":
        return ComplexPoly(self.re, -self.im)

    def abs_squared(self) -> MultiPoly:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def evaluate(self, point: Sequence[Scalar]) -> ComplexScalar:
        return ComplexScalar(self.re.evaluate(point), self.im.evaluate(point))

    def __repr__(self) -> str:
        return f"ComplexPoly(re={self.re!r}, im={self.im!r})"


class ComplexUniPoly:
    """Univariate polynomial in an abstract variable with ComplexPoly coefficients.

    ``coeffs[i]`` is the coefficient of the i-th power; the declared degree is
    ``len(coeffs) - 1`` and is honored even when leading entries vanish.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[ComplexPoly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("coefficient list must be nonempty")
        var_count = coeffs[0].var_count
        if any(c.var_count != var_count for c in coeffs):
            raise ValueError("mixed variable counts in coefficient list")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexUniPoly is immutable")

    @classmethod
    def from_scalars(cls, var_count: int, scalars: Sequence[ComplexScalar]) -> "ComplexUniPoly":
        return cls([ComplexPoly.from_scalar(var_count, s) for s in scalars])

    @property
    def declared_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def var_count(self) -> int:
        return self.coeffs[0].var_count

    def __mul__(self, other: "ComplexUniPoly") -> "ComplexUniPoly":
        n = self.var_count
        out = [ComplexPoly.zero(n) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return ComplexUniPoly(out)

    def evaluate_at(self, z: ComplexScalar, point: Sequence[Scalar]) -> ComplexScalar:
        """Value of the specialized polynomial at the complex number z."""
        acc = ComplexScalar.of(0)
        power = ComplexScalar.of(1)
        for coeff in self.coeffs:
            acc = acc + coeff.evaluate(point) * power
            power = power * z
        return acc


@dataclass(frozen=True)
class Bracket:
    """Coefficient minor a_i b_j - b_i a_j of a section pair."""

    i: int
    j: int
    value: ComplexPoly


def sylvester_matrix(f: ComplexUniPoly, g: ComplexUniPoly) -> Tuple[Matrix, Matrix]:
    """The (m+n) x (m+n) elimination matrix, split into real and imaginary parts.

    Rows hold shifted coefficient lists in descending power order: n rows for
    f, then m rows for g.  Its determinant is the resultant with respect to
    the declared degrees m, n.
    """
    m = f.declared_degree
    n = g.declared_degree
    if m == 0 and n == 0:
        raise ValueError("resultant of two declared-degree-0 polynomials is undefined")
    if f.var_count != g.var_count:
        raise ValueError("coefficient rings differ")
    size = m + n
    var_count = f.var_count
    zero = MultiPoly.zero(var_count)
    re_rows = [[zero] * size for _ in range(size)]
    im_rows = [[zero] * size for _ in range(size)]
    f_desc = list(reversed(f.coeffs))  # a_m, ..., a_0
    g_desc = list(reversed(g.coeffs))
    for shift in range(n):
        for k, coeff in enumerate(f_desc):
            re_rows[shift][shift + k] = coeff.re
            im_rows[shift][shift + k] = coeff.im
    for shift in range(m):
        for k, coeff in enumerate(g_desc):
            re_rows[n + shift][shift + k] = coeff.re
            im_rows[n + shift][shift + k] = coeff.im
    return Matrix(re_rows), Matrix(im_rows)


def _complex_det(re_matrix: Matrix, im_matrix: Matrix) -> ComplexPoly:
    entries = [
        [
            ComplexPoly(re_matrix.entries[i][j], im_matrix.entries[i][j])
            for j in range(re_matrix.cols)
        ]
        for i in range(re_matrix.rows)
    ]
    return det_symbolic(Matrix(entries))


def resultant(f: ComplexUniPoly, g: ComplexUniPoly) -> ComplexPoly:
    """Exact resultant of f and g with respect to their declared degrees."""
    re_matrix, im_matrix = sylvester_matrix(f, g)
    return _complex_det(re_matrix, im_matrix)


def bracket(f: ComplexUniPoly, g: ComplexUniPoly, i: int, j: int) -> Bracket:
    """The minor a_i b_j - b_i a_j of the coefficient 2 x (deg+1) array."""
    if not (0 <= i < len(f.coeffs) and 0 <= i < len(g.coeffs)):
        raise IndexError(f"index {i} out of range")
    if not (0 <= j < len(f.coeffs) and 0 <= j < len(g.coeffs)):
        raise IndexError(f"index {j} out of range")
    value = f.coeffs[i] * g.coeffs[j] - g.coeffs[i] * f.coeffs[j]
    return Bracket(i, j, value)


def bezout3_resultant(f: ComplexUniPoly, g: ComplexUniPoly) -> ComplexPoly:
    """3x3 coefficient-minor determinant for a pair of declared cubics.

    Equals the elimination resultant times the fixed global sign
    :func:`bezout3_sign`.
    """
    if f.declared_degree != 3 or g.declared_degree != 3:
        raise ValueError(
            f"requires declared degree 3, got {f.declared_degree} and {g.declared_degree}"
        )
    b = {(i, j): bracket(f, g, i, j).value for (i, j) in [(3, 0), (3, 1), (3, 2), (2, 0), (2, 1), (1, 0)]}
    rows = [
        [b[(3, 0)], b[(3, 1)], b[(3, 2)]],
        [b[(2, 0)], b[(3, 0)] + b[(2, 1)], b[(3, 1)]],
        [b[(1, 0)], b[(2, 0)], b[(3, 0)]],
    ]
    return det_symbolic(Matrix(rows))


_BEZOUT3_SIGN = None


def bezout3_sign() -> int:
    """Global sign relating the 3x3 minor determinant to the elimination resultant.

    Determined once on the probe pair (z^3 + 1, 1 - z^3), whose elimination
    resultant is 8, and cached; the property suite asserts the same sign on
    randomized cubic pairs.
    """
    global _BEZOUT3_SIGN
    if _BEZOUT3_SIGN is None:
        one = ComplexScalar.of(1)
        zero = ComplexScalar.of(0)
        f = ComplexUniPoly.from_scalars(1, [one, zero, zero, one])
        g = ComplexUniPoly.from_scalars(1, [one, zero, zero, ComplexScalar.of(-1)])
        sylv = resultant(f, g).re.evaluate([0])
        bez = bezout3_resultant(f, g).re.evaluate([0])
        if sylv == 0 or bez == 0 or abs(sylv) != abs(bez):
            raise AssertionError("sign probe failed: |minor determinant| != |resultant|")
        _BEZOUT3_SIGN = 1 if sylv == bez else -1
    return _BEZOUT3_SIGN
