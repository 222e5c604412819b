"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a finitely supported map from exponent tuples to Fraction
coefficients.  Everything downstream (section charts, resultants, Gram
constraint systems, Hessians) is built on this representation, so all
identities asserted elsewhere in the package are exact statements, never
floating-point approximations.

Representation:

  Exponent = tuple[int, ...]    one nonnegative entry per variable
  terms    = dict[Exponent, Fraction]   zero coefficients never stored

The canonical term order is graded lexicographic, largest first: compare
total degree, then the exponent tuple itself.  Serialization, term counts
and iteration all use this order.

The degree of the zero polynomial is ``None`` (a sentinel, deliberately not
-1, so it cannot silently take part in size arithmetic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


def grlex_key(exponent: Exponent) -> Tuple[int, Exponent]:
    """Sort key realizing graded lexicographic order (ascending)."""
    return (sum(exponent), exponent)


class MultiPoly:
    """Immutable exact multivariate polynomial.

    Instances must never be mutated after construction; all arithmetic
    returns new objects, which makes values safe to share between threads
    and to use as cached intermediates.
    """

    __slots__ = ("var_count", "_terms")

    def __init__(self, var_count: int, terms: Mapping[Exponent, Scalar] = ()):
        if var_count < 1:
            raise ValueError(f"var_count must be positive, got {var_count}")
        self.var_count = var_count
        clean: Dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exponent, coeff in items:
            exponent = tuple(exponent)
            if len(exponent) != var_count:
                raise ValueError(
                    f"exponent {exponent} has length {len(exponent)}, expected {var_count}"
                )
            if any(e < 0 for e in exponent):
                raise ValueError(f"negative exponent in {exponent}")
            coeff = Fraction(coeff)
            if coeff != 0:
                acc = clean.get(exponent)
                if acc is None:
                    clean[exponent] = coeff
                else:
                    acc = acc + coeff
                    if acc == 0:
                        del clean[exponent]
                    else:
                        clean[exponent] = acc
        self._terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, var_count: int) -> "MultiPoly":
        return cls(var_count, {})

    @classmethod
    def constant(cls, var_count: int, value: Scalar) -> "MultiPoly":
        return cls(var_count, {(0,) * var_count: Fraction(value)})

    @classmethod
    def variable(cls, var_count: int, index: int) -> "MultiPoly":
        if not 0 <= index < var_count:
            raise IndexError(f"variable index {index} out of range for {var_count} variables")
        exponent = [0] * var_count
        exponent[index] = 1
        return cls(var_count, {tuple(exponent): Fraction(1)})

    @classmethod
    def monomial(cls, var_count: int, exponent: Exponent, coeff: Scalar = 1) -> "MultiPoly":
        return cls(var_count, {tuple(exponent): Fraction(coeff)})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def term_count(self) -> int:
        return len(self._terms)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def terms(self) -> Dict[Exponent, Fraction]:
        """Copy of the underlying term map."""
        return dict(self._terms)

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms in canonical order: graded lexicographic, largest first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def degree(self) -> Optional[int]:
        """Total degree; None for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def homogeneous_degree(self) -> Optional[int]:
        """Common total degree of all terms, or None if inhomogeneous or zero."""
        if not self._terms:
            return None
        degrees = {sum(e) for e in self._terms}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() is not None or self.is_zero()

    # -- ring operations ----------------------------------------------------

    def _check_compatible(self, other: "MultiPoly") -> None:
        if self.var_count != other.var_count:
            raise ValueError(
                f"variable count mismatch: {self.var_count} vs {other.var_count}"
            )

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.var_count, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exponent, coeff in other._terms.items():
            acc = out.get(exponent, Fraction(0)) + coeff
            if acc == 0:
                out.pop(exponent, None)
            else:
                out[exponent] = acc
        return MultiPoly._raw(self.var_count, out)

    def __radd__(self, other: Scalar) -> "MultiPoly":
        return self.__add__(other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.var_count, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.var_count, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return self.__neg__().__add__(MultiPoly.constant(self.var_count, other))

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_compatible(other)
        if not self._terms or not other._terms:
            return MultiPoly.zero(self.var_count)
        shorter, longer = (
            (self._terms, other._terms)
            if len(self._terms) <= len(other._terms)
            else (other._terms, self._terms)
        )
        out: Dict[Exponent, Fraction] = {}
        for ea, ca in shorter.items():
            for eb, cb in longer.items():
                exponent = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(exponent, Fraction(0)) + ca * cb
                if acc == 0:
                    out.pop(exponent, None)
                else:
                    out[exponent] = acc
        return MultiPoly._raw(self.var_count, out)

    def __rmul__(self, other: Scalar) -> "MultiPoly":
        return self.__mul__(other)

    def scale(self, factor: Scalar) -> "MultiPoly":
        factor = Fraction(factor)
        if factor == 0:
            return MultiPoly.zero(self.var_count)
        return MultiPoly._raw(
            self.var_count, {e: c * factor for e, c in self._terms.items()}
        )

    def __pow__(self, power: int) -> "MultiPoly":
        if not isinstance(power, int) or power < 0:
            raise ValueError(f"power must be a nonnegative integer, got {power}")
        result = MultiPoly.constant(self.var_count, 1)
        base = self
        k = power
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.var_count, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.var_count == other.var_count and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.var_count, frozenset(self._terms.items())))

    @classmethod
    def _raw(cls, var_count: int, terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        """Internal constructor for already-canonical term dicts."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "var_count", var_count)
        object.__setattr__(obj, "_terms", terms)
        return obj

    def __setattr__(self, name, value):
        if name in self.__slots__ and hasattr(self, "_terms"):
            raise AttributeError("MultiPoly is immutable")
        object.__setattr__(self, name, value)

    # -- calculus and evaluation ---------------------------------------------

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point.  Ring homomorphism by construction."""
        if len(point) != self.var_count:
            raise ValueError(
                f"point has length {len(point)}, expected {self.var_count}"
            )
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for exponent, coeff in self._terms.items():
            term = coeff
            for value, e in zip(values, exponent):
                if e:
                    term *= value**e
            total += term
        return total

    def partial_derivative(self, var: int) -> "MultiPoly":
        """Formal derivative with respect to variable ``var``."""
        if not 0 <= var < self.var_count:
            raise IndexError(f"variable index {var} out of range for {self.var_count} variables")
        out: Dict[Exponent, Fraction] = {}
        for exponent, coeff in self._terms.items():
            e = exponent[var]
            if e == 0:
                continue
            lowered = exponent[:var] + (e - 1,) + exponent[var + 1 :]
            acc = out.get(lowered, Fraction(0)) + coeff * e
            if acc == 0:
                out.pop(lowered, None)
            else:
                out[lowered] = acc
        return MultiPoly._raw(self.var_count, out)

    # -- normalization ---------------------------------------------------------

    def primitive_integer_form(self) -> Tuple["MultiPoly", Fraction]:
        """Clear denominators and divide out the integer content.

        Returns (primitive, factor) with primitive = factor * self, where
        primitive has integer coefficients of content 1 and factor > 0.
        The sign of the polynomial is preserved.
        """
        if not self._terms:
            return self, Fraction(1)
        denom_lcm = 1
        for coeff in self._terms.values():
            denom_lcm = denom_lcm * coeff.denominator // gcd(denom_lcm, coeff.denominator)
        content = 0
        for coeff in self._terms.values():
            content = gcd(content, abs(coeff.numerator * (denom_lcm // coeff.denominator)))
        factor = Fraction(denom_lcm, content)
        return self.scale(factor), factor

    # -- fast exact evaluation -------------------------------------------------

    def int_evaluator(self):
        """Compile an exact evaluator over integer points.

        Returns a function taking ``var_count`` Python ints and returning the
        exact integer/Fraction value.  Compilation pays off when the same
        polynomial is evaluated at many sample points (bulk nonnegativity
        scans); results agree bit-for-bit with :meth:`evaluate`.
        """
        if not self._terms:
            return lambda *args: 0
        names = [f"x{i}" for i in range(self.var_count)]
        parts = []
        for exponent, coeff in self.sorted_terms():
            factors = []
            if coeff.denominator == 1:
                factors.append(str(coeff.numerator))
            else:
                factors.append(f"F({coeff.numerator},{coeff.denominator})")
            for i, e in enumerate(exponent):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}**{e}")
            parts.append("*".join(factors))
        source = f"def _eval({', '.join(names)}):\n    return {' + '.join(parts)}\n"
        namespace = {"F": Fraction}
        exec(source, namespace)  # noqa: S102 - generated from trusted term data
        return namespace["_eval"]

    # -- display ---------------------------------------------------------------

    def __repr__(self) -> str:
        if not self._terms:
            return f"MultiPoly.zero({self.var_count})"
        shown = ", ".join(
            f"{tuple(e)}: {c}" for e, c in self.sorted_terms()[:4]
        )
        extra = "" if len(self._terms) <= 4 else f", ... ({len(self._terms)} terms)"
        return f"MultiPoly({self.var_count}, {{{shown}{extra}}})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exponent, coeff in self.sorted_terms():
            factors = [] if abs(coeff) != 1 or sum(exponent) == 0 else None
            body = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}"
                for i, e in enumerate(exponent)
                if e
            )
            if factors is None:
                text = body if body else "1"
                text = ("-" if coeff < 0 else "") + text
            else:
                text = str(coeff) + ("*" + body if body else "")
            pieces.append(text)
        out = " + ".join(pieces)
        return out.replace("+ -", "- ")


@dataclass(frozen=True)
class ComplexScalar:
    """Exact Gaussian-rational number, stored as (real, imaginary) Fractions."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re: Scalar, im: Scalar = 0) -> "ComplexScalar":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "ComplexScalar") -> "ComplexScalar":
        return ComplexScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexScalar") -> "ComplexScalar":
        return ComplexScalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexScalar":
        return ComplexScalar(-self.re, -self.im)

    def __mul__(self, other: "ComplexScalar") -> "ComplexScalar":
        return ComplexScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "ComplexScalar":
        return ComplexScalar(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __pow__(self, power: int) -> "ComplexScalar":
        result = ComplexScalar.of(1)
        for _ in range(power):
            result = result * self
        return result


ZERO_COMPLEX = ComplexScalar.of(0)
ONE_COMPLEX = ComplexScalar.of(1)


def poly_vector_eval(polys: Iterable[MultiPoly], point: Sequence[Scalar]) -> List[Fraction]:
    return [p.evaluate(point) for p in polys]
