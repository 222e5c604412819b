"""Real section charts on the line with the antipodal involution.

The antipodal map z -> -1/conj(z) on the projective line lifts to an
antilinear involution on degree-k polynomial sections:

    (Jc)_i = (-1)**(i+1) * conj(c_{k-i})

which squares to +1 for even k and -1 for odd k.  Rank-2 equivariant bundles
therefore come in two flavors: a sum of two even-degree line bundles with
the diagonal lift, or two copies of the same odd degree with the twisted
lift (u, v) -> (Jv, -Ju).

A *real chart* parametrizes the conjugation-fixed section pairs (f, g) by
real coordinates.  Restricting the resultant of (f, g) to the chart gives a
real homogeneous polynomial of degree m+n; normalized to take a positive
value, this is the nonnegative form the rest of the package studies.

Chart coordinate conventions (fixed so term counts are reproducible):

* odd-diagonal flavor: variable 2j is Re(a_j), variable 2j+1 is Im(a_j),
  where f = sum a_j z^j and g is the forced partner
  g_i = (-1)**i * conj(a_{m-i});
* even flavor: the fixed subspace of each summand is extracted as the exact
  kernel of (J - id) acting on interleaved (re, im) coordinates, basis
  vectors ordered by coefficient index then (re, im); f-parameters come
  before g-parameters.
"""

from __future__ import annotations

import itertools
import re as _re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import Matrix, exact_kernel, scale_to_primitive_integer
from .poly import ComplexScalar, MultiPoly, Scalar
from .resultants import ComplexPoly, ComplexUniPoly, bracket, resultant


class ChartError(ValueError):
    """Invalid bundle data or chart usage."""


class InternalConsistencyError(RuntimeError):
    """An exact identity the construction relies on failed; never ignorable."""


class Flavor(Enum):
    EVEN = "even"
    ODD_DIAG = "odd-diagonal"


@dataclass(frozen=True)
class BundleSpec:
    """Degrees (m, n) of the two line-bundle summands, with the lift flavor."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ChartError(f"degrees must be nonnegative, got ({self.m}, {self.n})")
        even = self.m % 2 == 0 and self.n % 2 == 0
        odd_diag = self.m == self.n and self.m % 2 == 1
        if not even and not odd_diag:
            raise ChartError(
                f"no equivariant lift for O({self.m})+O({self.n}): degrees must both "
                "be even, or equal and odd"
            )

    @property
    def flavor(self) -> Flavor:
        return Flavor.EVEN if self.m % 2 == 0 else Flavor.ODD_DIAG

    @property
    def degree(self) -> int:
        return self.m + self.n

    @property
    def real_dim(self) -> int:
        return self.m + self.n + 2

    @classmethod
    def parse(cls, text: str) -> "BundleSpec":
        match = _re.fullmatch(r"\s*O\((\d+)\)\s*\+\s*O\((\d+)\)\s*", text)
        if not match:
            raise ChartError(f"cannot parse bundle spec {text!r}; expected 'O(m)+O(n)'")
        return cls(int(match.group(1)), int(match.group(2)))

    def __str__(self) -> str:
        return f"O({self.m})+O({self.n})"


def section_involution(k: int, coeffs: Sequence[ComplexScalar]) -> List[ComplexScalar]:
    """The antilinear lift on degree-k sections: c_i -> (-1)**(i+1) conj(c_{k-i})."""
    if len(coeffs) != k + 1:
        raise ChartError(f"expected {k + 1} coefficients for degree {k}, got {len(coeffs)}")
    out = []
    for i in range(k + 1):
        value = coeffs[k - i].conjugate()
        if i % 2 == 0:
            value = -value
        out.append(value)
    return out


def _coeffs_to_real(coeffs: Sequence[ComplexScalar]) -> List[Fraction]:
    vec: List[Fraction] = []
    for c in coeffs:
        vec.append(c.re)
        vec.append(c.im)
    return vec


def _real_to_coeffs(vec: Sequence[Fraction]) -> List[ComplexScalar]:
    return [ComplexScalar(vec[2 * i], vec[2 * i + 1]) for i in range(len(vec) // 2)]


def involution_matrix(k: int) -> Matrix:
    """The lift on degree-k sections as a real matrix on interleaved (re, im)."""
    size = 2 * (k + 1)
    columns = []
    for j in range(size):
        unit = [Fraction(0)] * size
        unit[j] = Fraction(1)
        image = section_involution(k, _real_to_coeffs(unit))
        columns.append(_coeffs_to_real(image))
    return Matrix([[columns[j][i] for j in range(size)] for i in range(size)])


def fixed_subspace_basis(k: int) -> List[List[ComplexScalar]]:
    """Exact basis of the conjugation-fixed sections of degree k (k even).

    Computed as the kernel of (J - id), not from per-degree formulas; the
    canonical kernel basis is ordered by coefficient index then (re, im).
    """
    if k % 2 != 0:
        raise ChartError(f"fixed subspace only exists for even degree, got {k}")
    size = 2 * (k + 1)
    matrix = involution_matrix(k)
    shifted = Matrix(
        [
            [matrix.entries[i][j] - Fraction(int(i == j)) for j in range(size)]
            for i in range(size)
        ]
    )
    return [_real_to_coeffs(vec) for vec in exact_kernel(shifted)]


@dataclass(frozen=True)
class RealChart:
    """Linear parametrization of the conjugation-fixed section pairs.

    ``f_sym``/``g_sym`` carry the pair symbolically: their coefficients are
    complex-valued polynomials, linear in the ``real_dim`` chart variables.
    """

    spec: BundleSpec
    real_dim: int
    f_sym: ComplexUniPoly
    g_sym: ComplexUniPoly

    def coefficients_at(
        self, params: Sequence[Scalar]
    ) -> Tuple[List[ComplexScalar], List[ComplexScalar]]:
        if len(params) != self.real_dim:
            raise ChartError(f"expected {self.real_dim} parameters, got {len(params)}")
        f = [c.evaluate(params) for c in self.f_sym.coeffs]
        g = [c.evaluate(params) for c in self.g_sym.coeffs]
        return f, g

    def section_value_at(
        self, params: Sequence[Scalar], z: ComplexScalar
    ) -> Tuple[ComplexScalar, ComplexScalar]:
        return (
            self.f_sym.evaluate_at(z, params),
            self.g_sym.evaluate_at(z, params),
        )


def _linear_coefficient_poly(real_dim: int, weights: Sequence[ComplexScalar]) -> ComplexPoly:
    re_terms = {}
    im_terms = {}
    for j, w in enumerate(weights):
        exponent = tuple(1 if t == j else 0 for t in range(real_dim))
        if w.re != 0:
            re_terms[exponent] = w.re
        if w.im != 0:
            im_terms[exponent] = w.im
    return ComplexPoly(MultiPoly(real_dim, re_terms), MultiPoly(real_dim, im_terms))


def build_chart(spec: BundleSpec) -> RealChart:
    real_dim = spec.real_dim
    zero = ComplexScalar.of(0)
    if spec.flavor is Flavor.ODD_DIAG:
        m = spec.m
        # f coefficient j weights: Re part from variable 2j, Im from 2j+1.
        f_weights = [
            [zero] * real_dim for _ in range(m + 1)
        ]
        for j in range(m + 1):
            f_weights[j][2 * j] = ComplexScalar.of(1)
            f_weights[j][2 * j + 1] = ComplexScalar.of(0, 1)
        g_weights = [[zero] * real_dim for _ in range(m + 1)]
        for i in range(m + 1):
            # g_i = (-1)**i * conj(a_{m-i})
            sign = 1 if i % 2 == 0 else -1
            g_weights[i][2 * (m - i)] = ComplexScalar.of(sign)
            g_weights[i][2 * (m - i) + 1] = ComplexScalar.of(0, -sign)
    else:
        f_basis = fixed_subspace_basis(spec.m)
        g_basis = fixed_subspace_basis(spec.n)
        f_weights = [[zero] * real_dim for _ in range(spec.m + 1)]
        g_weights = [[zero] * real_dim for _ in range(spec.n + 1)]
        for j, basis_vec in enumerate(f_basis):
            for i, c in enumerate(basis_vec):
                f_weights[i][j] = c
        offset = len(f_basis)
        for j, basis_vec in enumerate(g_basis):
            for i, c in enumerate(basis_vec):
                g_weights[i][offset + j] = c
    f_sym = ComplexUniPoly([_linear_coefficient_poly(real_dim, w) for w in f_weights])
    g_sym = ComplexUniPoly([_linear_coefficient_poly(real_dim, w) for w in g_weights])
    return RealChart(spec=spec, real_dim=real_dim, f_sym=f_sym, g_sym=g_sym)


@dataclass(frozen=True)
class ResultantForm:
    """The chart resultant, stored primitive-integer and positively normalized."""

    spec: BundleSpec
    poly: MultiPoly
    sign: int
    probe: Tuple[Fraction, ...]

    @property
    def real_dim(self) -> int:
        return self.poly.var_count

    def metadata(self) -> dict:
        return {
            "bundle": str(self.spec),
            "flavor": self.spec.flavor.value,
            "real_dim": self.real_dim,
            "degree": self.poly.homogeneous_degree(),
            "term_count": self.poly.term_count(),
            "normalization_sign": self.sign,
        }


def _sign_probe_candidates(spec: BundleSpec, real_dim: int):
    """Deterministic probe points for the positivity normalization.

    The odd-diagonal flavor starts from the section z**m + 1 (all other
    parameters zero); the even flavor has no such section in its chart, so
    it goes straight to the grid.  The grid enumerates integer parameter
    vectors of growing radius and provably reaches a nonzero value of any
    nonzero polynomial of bounded degree.
    """
    if spec.flavor is Flavor.ODD_DIAG:
        probe = [Fraction(0)] * real_dim
        probe[0] = Fraction(1)
        probe[2 * spec.m] = Fraction(1)
        yield tuple(probe)
    for radius in range(1, max(3, spec.degree) + 1):
        for vec in itertools.product(range(-radius, radius + 1), repeat=real_dim):
            if any(v != 0 for v in vec):
                yield tuple(Fraction(v) for v in vec)


def build_resultant_form(spec: BundleSpec) -> ResultantForm:
    """Restrict the resultant of the chart pair and normalize it.

    The imaginary part of the restricted resultant must vanish identically
    and the real part must be homogeneous of degree m+n; a failure of either
    is a construction bug and aborts.  The real part is scaled to integer
    coefficients of content 1 and negated if the deterministic probe point
    evaluates negative.
    """
    if spec.degree < 2:
        raise ChartError(f"resultant form needs total degree >= 2, got {spec.degree}")
    chart = build_chart(spec)
    res = resultant(chart.f_sym, chart.g_sym)
    if not res.im.is_zero():
        raise InternalConsistencyError(
            f"imaginary part of the chart resultant for {spec} is not identically zero"
        )
    raw = res.re
    if raw.is_zero() or raw.homogeneous_degree() != spec.degree:
        raise InternalConsistencyError(
            f"chart resultant for {spec} is not homogeneous of degree {spec.degree}"
        )
    primitive, _ = raw.primitive_integer_form()
    sign = 0
    probe_used: Optional[Tuple[Fraction, ...]] = None
    for probe in _sign_probe_candidates(spec, spec.real_dim):
        value = primitive.evaluate(probe)
        if value != 0:
            sign = 1 if value > 0 else -1
            probe_used = probe
            break
    if sign == 0 or probe_used is None:  # pragma: no cover - grid always succeeds
        raise InternalConsistencyError(f"no nonzero probe value found for {spec}")
    poly = primitive if sign == 1 else -primitive
    return ResultantForm(spec=spec, poly=poly, sign=sign, probe=probe_used)


@dataclass(frozen=True)
class BracketInvariants:
    """The four coefficient-minor invariants of the degree-3 diagonal chart.

    r and s are sums of squares of chart variables; u and v are complex.
    They satisfy |u|^2 + |v|^2 = r*s as an exact polynomial identity.
    """

    r: MultiPoly
    s: MultiPoly
    u: ComplexPoly
    v: ComplexPoly


def bracket_invariants(chart: RealChart) -> BracketInvariants:
    spec = chart.spec
    if spec.flavor is not Flavor.ODD_DIAG or spec.m != 3:
        raise ChartError(f"bracket invariants are defined for O(3)+O(3), got {spec}")
    f, g = chart.f_sym, chart.g_sym
    b30 = bracket(f, g, 3, 0).value
    b21 = bracket(f, g, 2, 1).value
    b31 = bracket(f, g, 3, 1).value
    b32 = bracket(f, g, 3, 2).value
    if not b30.im.is_zero() or not b21.im.is_zero():
        raise InternalConsistencyError("diagonal minors failed to be real on the chart")
    return BracketInvariants(r=b30.re, s=-b21.re, u=b31, v=b32)


def closed_bracket_form(inv: BracketInvariants) -> MultiPoly:
    """r^2 (r-s) + 2 r |u|^2 - (r-s) |v|^2 + (u^2 conj(v) + conj(u)^2 v), expanded."""
    r, s, u, v = inv.r, inv.s, inv.u, inv.v
    r_minus_s = r - s
    cross = (u * u * v.conjugate()).re * 2
    return r * r * r_minus_s + 2 * (r * u.abs_squared()) - r_minus_s * v.abs_squared() + cross


def positive_part_value(inv: BracketInvariants, point: Sequence[Scalar]) -> Fraction:
    """Value of ((r^2 - |v|^2)^2 + |r conj(u) + u conj(v)|^2) / r at a point.

    Defined only where r is nonzero; manifestly nonnegative there.  Agrees
    exactly with the value of the degree-6 form.
    """
    r_val = inv.r.evaluate(point)
    if r_val == 0:
        raise ValueError("the divided form is undefined where r vanishes")
    u_val = inv.u.evaluate(point)
    v_val = inv.v.evaluate(point)
    a = r_val * r_val - v_val.abs_squared()
    b_re = r_val * u_val.re + (u_val * v_val.conjugate()).re
    # conj through: r conj(u) + u conj(v) has real part r*u_re + Re(u conj(v))
    b = ComplexScalar(b_re, -r_val * u_val.im + (u_val * v_val.conjugate()).im)
    return (a * a + b.abs_squared()) / r_val


def kernel_direction_residual(inv: BracketInvariants, point: Sequence[Scalar]) -> ComplexScalar:
    """Exact value of r conj(u) + u conj(v) at a point; zero on the zero set."""
    r_val = inv.r.evaluate(point)
    u_val = inv.u.evaluate(point)
    v_val = inv.v.evaluate(point)
    return ComplexScalar.of(r_val, 0) * u_val.conjugate() + u_val * v_val.conjugate()


def common_zero_system(chart: RealChart, z0: ComplexScalar) -> Matrix:
    """The 4 x real_dim system forcing both chart sections to vanish at z0."""
    rows_re_f: List[Fraction] = []
    rows_im_f: List[Fraction] = []
    rows_re_g: List[Fraction] = []
    rows_im_g: List[Fraction] = []
    for j in range(chart.real_dim):
        unit = [Fraction(0)] * chart.real_dim
        unit[j] = Fraction(1)
        fz, gz = chart.section_value_at(unit, z0)
        rows_re_f.append(fz.re)
        rows_im_f.append(fz.im)
        rows_re_g.append(gz.re)
        rows_im_g.append(gz.im)
    return Matrix([rows_re_f, rows_im_f, rows_re_g, rows_im_g])


def common_zero_family(chart: RealChart, z0: ComplexScalar) -> List[Tuple[Fraction, ...]]:
    """Exact basis of the chart parameters whose section pair vanishes at z0.

    Every point of the span is an exact zero of the resultant form: both
    sections share the root z0, so the elimination determinant vanishes.
    """
    return exact_kernel(common_zero_system(chart, z0))


def random_zero_points(
    chart: RealChart,
    z0: ComplexScalar,
    count: int,
    rng,
    coeff_bound: int = 9,
) -> List[Tuple[Fraction, ...]]:
    """Random integer points in the common-zero family of z0 (primitive, nonzero)."""
    basis = common_zero_family(chart, z0)
    if not basis:
        raise ChartError(f"no common-zero directions at {z0}")
    points: List[Tuple[Fraction, ...]] = []
    while len(points) < count:
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in basis]
        if all(c == 0 for c in coeffs):
            continue
        combo = [
            sum((Fraction(c) * vec[k] for c, vec in zip(coeffs, basis)), Fraction(0))
            for k in range(chart.real_dim)
        ]
        if all(v == 0 for v in combo):
            continue
        points.append(tuple(Fraction(v) for v in scale_to_primitive_integer(combo)))
    return points


def random_gaussian_rational(rng, num_bound: int = 5, den_bound: int = 3) -> ComplexScalar:
    """Seeded Gaussian-rational sample for picking base points of zero families."""
    den = rng.randint(1, den_bound)
    re = Fraction(rng.randint(-num_bound, num_bound), den)
    im = Fraction(rng.randint(-num_bound, num_bound), den)
    return ComplexScalar(re, im)
