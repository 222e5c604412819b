"""Numeric characteristic-class checks on the symmetric square of a curve.

Everything here is small exact arithmetic in the degree-truncated ring
Q[x, delta] / (degree > 2), where x and delta are the two standard degree-1
generators on the symmetric square C_2 of a genus-g curve and the top
pairing sends

    x*x -> 1,    x*delta -> 2,    delta*delta -> 4*(1-g).

From the Chern character of the rank-2r tautological bundle on C_2 one
recovers the first and second Chern classes, the degree of the variety of
sections vanishing on a length-2 divisor, and the arithmetic obstruction
used by the sum-of-squares verdict.  No curve objects exist at this level;
the genus enters only through the pairing and the character.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class CohomologyClass:
    """Element of the truncated ring: c0 + cx*x + cdelta*delta + (degree-2 part)."""

    c0: Fraction = Fraction(0)
    cx: Fraction = Fraction(0)
    cdelta: Fraction = Fraction(0)
    cxx: Fraction = Fraction(0)
    cxdelta: Fraction = Fraction(0)
    cdeltadelta: Fraction = Fraction(0)

    @classmethod
    def scalar(cls, value: Scalar) -> "CohomologyClass":
        return cls(c0=Fraction(value))

    @classmethod
    def x(cls) -> "CohomologyClass":
        return cls(cx=Fraction(1))

    @classmethod
    def delta(cls) -> "CohomologyClass":
        return cls(cdelta=Fraction(1))

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(
            self.c0 + other.c0,
            self.cx + other.cx,
            self.cdelta + other.cdelta,
            self.cxx + other.cxx,
            self.cxdelta + other.cxdelta,
            self.cdeltadelta + other.cdeltadelta,
        )

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> "CohomologyClass":
        factor = Fraction(factor)
        return CohomologyClass(
            self.c0 * factor,
            self.cx * factor,
            self.cdelta * factor,
            self.cxx * factor,
            self.cxdelta * factor,
            self.cdeltadelta * factor,
        )

    def __mul__(self, other: "CohomologyClass") -> "CohomologyClass":
        """Graded product, truncated above total degree 2."""
        return CohomologyClass(
            c0=self.c0 * other.c0,
            cx=self.c0 * other.cx + self.cx * other.c0,
            cdelta=self.c0 * other.cdelta + self.cdelta * other.c0,
            cxx=self.c0 * other.cxx + self.cx * other.cx + self.cxx * other.c0,
            cxdelta=(
                self.c0 * other.cxdelta
                + self.cx * other.cdelta
                + self.cdelta * other.cx
                + self.cxdelta * other.c0
            ),
            cdeltadelta=(
                self.c0 * other.cdeltadelta
                + self.cdelta * other.cdelta
                + self.cdeltadelta * other.c0
            ),
        )

    def degree1_equals(self, cx: Scalar, cdelta: Scalar) -> bool:
        return self.cx == Fraction(cx) and self.cdelta == Fraction(cdelta)


def class_multiply(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    return a * b


def pair_with_fundamental(a: CohomologyClass, genus: int) -> Fraction:
    """Evaluate the degree-2 part against the fundamental class of C_2."""
    return a.cxx * 1 + a.cxdelta * 2 + a.cdeltadelta * 4 * (1 - genus)


@dataclass(frozen=True)
class CurveBundleParams:
    """Degree, genus and rank; the formulas consume them raw."""

    d: int
    g: int
    r: int


def chern_character_sym2(params: CurveBundleParams) -> CohomologyClass:
    """Chern character of the rank-2r tautological bundle on C_2.

        d*(1 - e^-x) - r*(g-1) + r*((g+1)*(1+x) - delta/2) * e^-x

    with e^-x truncated to 1 - x + x^2/2.  The degree-0 part is 2r.
    """
    d, g, r = params.d, params.g, params.r
    one = CohomologyClass.scalar(1)
    x = CohomologyClass.x()
    delta = CohomologyClass.delta()
    exp_minus_x = one - x + (x * x).scale(Fraction(1, 2))
    part1 = (one - exp_minus_x).scale(d)
    part2 = CohomologyClass.scalar(-r * (g - 1))
    bracket_term = (one + x).scale(g + 1) - delta.scale(Fraction(1, 2))
    part3 = (bracket_term * exp_minus_x).scale(r)
    return part1 + part2 + part3


def chern_classes_sym2(params: CurveBundleParams) -> tuple[CohomologyClass, CohomologyClass]:
    """(c1, c2) recovered from the character: c1 = ch1, c2 = (c1^2 - 2 ch2) / 2."""
    ch = chern_character_sym2(params)
    c1 = CohomologyClass(cx=ch.cx, cdelta=ch.cdelta)
    ch2 = CohomologyClass(cxx=ch.cxx, cxdelta=ch.cxdelta, cdeltadelta=ch.cdeltadelta)
    c2 = (c1 * c1 - ch2.scale(2)).scale(Fraction(1, 2))
    c2 = CohomologyClass(cxx=c2.cxx, cxdelta=c2.cxdelta, cdeltadelta=c2.cdeltadelta)
    return c1, c2


def c2_number_sym2(params: CurveBundleParams) -> Fraction:
    """The second Chern number of the tautological bundle on C_2."""
    _, c2 = chern_classes_sym2(params)
    return pair_with_fundamental(c2, params.g)


def degree_v2(d: int, g: int) -> int:
    """Degree of the locus of sections vanishing on a length-2 divisor (rank 2)."""
    twice = d * (d - 3)
    assert twice % 2 == 0  # d and d-3 have opposite parity
    return twice // 2 + 1 - g


@dataclass(frozen=True)
class ObstructionReport:
    """Arithmetic data deciding whether a sum-of-squares form is impossible."""

    d: int
    g: int
    deg_v2: int
    bound: Fraction           # d^2 / 4
    obstructed: bool          # deg_v2 >= bound, so no SOS form can exist
    hypothesis_holds: bool    # d*(d-6) >= 4*(g-1)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "g": self.g,
            "deg_v2": self.deg_v2,
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "obstructed": self.obstructed,
            "hypothesis_holds": self.hypothesis_holds,
        }


def sos_obstruction(d: int, g: int) -> ObstructionReport:
    deg = degree_v2(d, g)
    bound = Fraction(d * d, 4)
    return ObstructionReport(
        d=d,
        g=g,
        deg_v2=deg,
        bound=bound,
        obstructed=Fraction(deg) >= bound,
        hypothesis_holds=d * (d - 6) >= 4 * (g - 1),
    )
