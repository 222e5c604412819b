"""Sum-of-squares certification of homogeneous forms at desk scale.

A homogeneous p of degree 2d is a sum of squares exactly when some positive
semidefinite Q satisfies p = m^T Q m over the full vector m of degree-d
monomials.  The affine part of that condition is a coefficient-matching
system whose groups partition the entries of Q; the conic part is handled
three ways, in decreasing order of authority:

* zero-driven facial reduction: at an exact zero z of p, any feasible PSD Q
  must kill the evaluated monomial vector m(z), so its column space lies in
  the orthogonal complement of span{m(z)} - computed exactly;
* an exact span test on the reduced face: if p is not even an affine
  combination of the products of face-basis polynomials, no Gram matrix of
  any signature exists and p is certifiably not a sum of squares, with a
  rational linear functional as the re-checkable witness;
* a dense alternating-projection feasibility solver (Dykstra correction on
  the cone side) for what the exact route leaves open, returning either a
  numeric PSD Gram matrix or a separating functional with a margin.

Certificates carry everything needed for independent verification and
never rely on solver-internal state.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .linalg import Matrix, exact_kernel, exact_rank, scale_to_primitive_integer
from .poly import Exponent, MultiPoly, grlex_key
from .serialize import fraction_to_str

MAX_BASIS_SIZE = 150
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 50_000
ZERO_BATCH_SIZE = 20
STABLE_BATCHES = 3


class GramUsageError(ValueError):
    """Invalid input to the Gram/certification machinery."""


def exponents_of_degree(var_count: int, degree: int) -> List[Exponent]:
    """All exponent tuples of the given total degree, graded-lex largest first."""
    if var_count < 1:
        raise GramUsageError("need at least one variable")
    combos = itertools.combinations_with_replacement(range(var_count), degree)
    exponents = []
    for combo in combos:
        exp = [0] * var_count
        for index in combo:
            exp[index] += 1
        exponents.append(tuple(exp))
    exponents.sort(key=grlex_key, reverse=True)
    return exponents


@dataclass(frozen=True)
class MonomialBasis:
    """All monomials of exact degree ``half_degree`` in ``var_count`` variables."""

    var_count: int
    half_degree: int
    monomials: Tuple[Exponent, ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    def evaluate(self, point: Sequence) -> List[Fraction]:
        values = [Fraction(v) for v in point]
        out = []
        for exponent in self.monomials:
            term = Fraction(1)
            for v, e in zip(values, exponent):
                if e:
                    term *= v**e
            out.append(term)
        return out

    def poly_from_vector(self, vector: Sequence) -> MultiPoly:
        terms = {}
        for exponent, coeff in zip(self.monomials, vector):
            coeff = Fraction(coeff)
            if coeff != 0:
                terms[exponent] = coeff
        return MultiPoly(self.var_count, terms)


def monomial_basis(var_count: int, half_degree: int) -> MonomialBasis:
    if var_count < 1 or half_degree < 0:
        raise GramUsageError(
            f"invalid basis parameters ({var_count}, {half_degree})"
        )
    return MonomialBasis(
        var_count, half_degree, tuple(exponents_of_degree(var_count, half_degree))
    )


@dataclass(frozen=True)
class GramConstraint:
    """One coefficient-matching constraint: sum of Q over ``pairs`` equals ``target``.

    ``pairs`` lists unordered index pairs (i <= j); the off-diagonal ones
    count twice in the matched coefficient.
    """

    gamma: Exponent
    pairs: Tuple[Tuple[int, int], ...]
    target: Fraction


@dataclass(frozen=True)
class GramProblem:
    """Symmetric-matrix feasibility instance for a homogeneous target form."""

    basis: MonomialBasis
    target: MultiPoly
    constraints: Tuple[GramConstraint, ...]
    zero_points: Tuple[Tuple[Fraction, ...], ...] = ()
    face: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    @property
    def face_dim(self) -> int:
        return self.basis.size if self.face is None else len(self.face)


def gram_system(p: MultiPoly) -> GramProblem:
    """Constraint system such that p = m^T Q m iff Q meets every constraint."""
    degree = p.homogeneous_degree()
    if degree is None or degree % 2 != 0 or degree == 0:
        raise GramUsageError(
            "target must be homogeneous of positive even degree"
        )
    half = degree // 2
    basis = monomial_basis(p.var_count, half)
    groups: Dict[Exponent, List[Tuple[int, int]]] = {}
    for i, alpha in enumerate(basis.monomials):
        for j in range(i, basis.size):
            beta = basis.monomials[j]
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            groups.setdefault(gamma, []).append((i, j))
    missing = [g for g in p.terms() if g not in groups]
    if missing:  # impossible for a homogeneous target of degree 2*half
        raise GramUsageError(f"target monomial {missing[0]} is not a sum of two basis monomials")
    constraints = tuple(
        GramConstraint(gamma, tuple(pairs), p.coefficient(gamma))
        for gamma, pairs in sorted(groups.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)
    )
    return GramProblem(basis=basis, target=p, constraints=constraints)


PRIME_FOR_RANK = (1 << 61) - 1
MAX_FLAT_DIM = 5


def facial_reduce(prob: GramProblem, zeros: Sequence[Sequence]) -> GramProblem:
    """Cut the admissible column space down using verified exact zeros.

    Each supplied point must be an exact zero of the target (checked; a
    nonzero value is a usage error naming the point).  Any PSD Q meeting
    the constraints must annihilate the evaluated monomial vector m(z) of
    every zero z, so its column space lies in the orthogonal complement of
    their span.

    Strengthening: consecutive supplied points are greedily grouped into
    subspaces on which the target is *proven* to vanish identically (exact
    evaluation on a full interpolation grid of the restricted polynomial).
    The same annihilation argument then applies to every point of such a
    subspace at once, so the face is cut by the whole monomial-vector image
    of the subspace, not just by the sampled points.  For points that do
    not lie in a common zero subspace this reduces to the plain span of the
    m(z) (for a homogeneous target, a single point and the line through it
    carry the same monomial direction), but for structured zero sets it
    shrinks the face far enough to make the exact span test effective.
    """
    new_points = []
    for point in zeros:
        point = tuple(Fraction(v) for v in point)
        value = prob.target.evaluate(point)
        if value != 0:
            raise GramUsageError(
                f"facial reduction requires exact zeros; target({point}) = {value}"
            )
        new_points.append(point)
    all_points = prob.zero_points + tuple(new_points)
    if not all_points:
        return prob
    groups = _group_zero_subspaces(prob.target, all_points)
    rows: List[List[int]] = []
    for group_basis in groups:
        rows.extend(_subspace_monomial_rows(prob.basis, group_basis))
    face = _kernel_with_fullrank_shortcut(rows, prob.basis.size)
    return GramProblem(
        basis=prob.basis,
        target=prob.target,
        constraints=prob.constraints,
        zero_points=all_points,
        face=face,
    )


def _in_span(vector: Sequence[int], basis: List[Tuple[int, ...]]) -> bool:
    if not basis:
        return all(v == 0 for v in vector)
    stacked = [list(b) for b in basis]
    rank_before = exact_rank(Matrix(stacked))
    rank_after = exact_rank(Matrix(stacked + [list(vector)]))
    return rank_before == rank_after


def _rank_mod(rows: List[List[int]], q: int) -> int:
    pivots: Dict[int, List[int]] = {}
    for row in rows:
        row = [v % q for v in row]
        for col in sorted(pivots):
            if row[col]:
                factor = row[col] * pow(pivots[col][col], q - 2, q) % q
                row = [(a - factor * b) % q for a, b in zip(row, pivots[col])]
        for col, value in enumerate(row):
            if value:
                pivots[col] = row
                break
    return len(pivots)


def _vanishes_on_span(target: MultiPoly, basis_vectors: List[Tuple[int, ...]]) -> bool:
    """Exact proof that the target vanishes identically on the span.

    The restriction of a degree-d form to a t-dimensional subspace has
    per-variable degree at most d, so vanishing on a (d+1)^t integer grid
    in the parameters forces the restriction to be the zero polynomial.
    A handful of cheap probe combinations runs first to reject fast.
    """
    degree = target.homogeneous_degree() or target.degree() or 0
    t = len(basis_vectors)
    evaluator = target.int_evaluator()
    n = target.var_count

    def value_at(params: Sequence[int]) -> int:
        point = [0] * n
        for coeff, vec in zip(params, basis_vectors):
            if coeff:
                for i in range(n):
                    point[i] += coeff * vec[i]
        return evaluator(*point)

    for probe in ((1,) * t, tuple(range(1, t + 1)), tuple((-2) ** k for k in range(t))):
        if value_at(probe) != 0:
            return False
    grid = range(-(degree // 2), degree // 2 + (degree % 2) + 1)  # degree+1 values
    for params in itertools.product(grid, repeat=t):
        if value_at(params) != 0:
            return False
    return True


def _group_zero_subspaces(
    target: MultiPoly, points: Sequence[Tuple[Fraction, ...]]
) -> List[List[Tuple[int, ...]]]:
    """Greedy grouping of zero points into proven zero subspaces.

    Deterministic in the point order.  Every emitted group carries an
    independent primitive-integer basis of a subspace on which the target
    provably vanishes; ungroupable points become singleton groups.
    """
    groups: List[List[Tuple[int, ...]]] = []
    current: List[Tuple[int, ...]] = []
    for point in points:
        vec = scale_to_primitive_integer(point)
        if not current:
            current = [vec]
            continue
        if _in_span(vec, current):
            continue
        candidate = current + [vec]
        if len(candidate) <= MAX_FLAT_DIM and _vanishes_on_span(target, candidate):
            current = candidate
        else:
            groups.append(current)
            current = [vec]
    if current:
        groups.append(current)
    return groups


def _subspace_monomial_rows(
    basis: MonomialBasis, flat_basis: List[Tuple[int, ...]]
) -> List[List[int]]:
    """Integer rows spanning {m(z) : z in span(flat_basis)}.

    Row tau holds, per basis monomial alpha, the coefficient of the
    parameter monomial tau in the expansion of (sum_k t_k b_k)^alpha.
    """
    t_dim = len(flat_basis)
    width = basis.size
    rows: Dict[Tuple[int, ...], List[int]] = {}
    for col, alpha in enumerate(basis.monomials):
        acc: Dict[Tuple[int, ...], int] = {(0,) * t_dim: 1}
        for i, e in enumerate(alpha):
            for _ in range(e):
                nxt: Dict[Tuple[int, ...], int] = {}
                for texp, coeff in acc.items():
                    for k in range(t_dim):
                        b = flat_basis[k][i]
                        if b == 0:
                            continue
                        lifted = list(texp)
                        lifted[k] += 1
                        key = tuple(lifted)
                        nxt[key] = nxt.get(key, 0) + coeff * b
                acc = {k: v for k, v in nxt.items() if v}
        for texp, coeff in acc.items():
            if texp not in rows:
                rows[texp] = [0] * width
            rows[texp][col] = coeff
    return [rows[key] for key in sorted(rows)]


def _kernel_with_fullrank_shortcut(
    rows: List[List[int]], width: int
) -> Tuple[Tuple[Fraction, ...], ...]:
    """Exact kernel; a full-column-rank detection runs mod a prime first.

    rank mod q never exceeds the rank over Q, so full rank mod q proves the
    kernel is trivial without any exact elimination.  Otherwise the exact
    fraction-free kernel runs.
    """
    if not rows:
        return tuple()
    if _rank_mod(rows, PRIME_FOR_RANK) == width:
        return tuple()
    return tuple(exact_kernel(Matrix(rows)))


@dataclass
class Certificate:
    """Outcome of certification, carrying re-checkable evidence.

    kinds: ``sos_witness`` (squares plus an independently recomputed
    recomposition residual), ``not_sos_exact`` (rational functional
    annihilating all face products but not the target), ``not_sos_numeric``
    (separating functional margin from the feasibility solver), or
    ``undecided``.
    """

    kind: str
    branch: Optional[str] = None
    squares: Optional[List[MultiPoly]] = None
    residual: Optional[float] = None
    zero_count: int = 0
    face_dim: Optional[int] = None
    witness: Optional[Dict[Exponent, Fraction]] = None
    margin: Optional[float] = None
    reason: Optional[str] = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        from .serialize import poly_to_text

        payload: dict = {
            "kind": self.kind,
            "branch": self.branch,
            "zero_count": self.zero_count,
            "face_dim": self.face_dim,
            "details": self.details,
        }
        if self.squares is not None:
            payload["squares"] = [poly_to_text(q) for q in self.squares]
            payload["square_count"] = len(self.squares)
        if self.residual is not None:
            payload["residual"] = self.residual
        if self.witness is not None:
            payload["witness"] = [
                {"exponent": list(e), "value": fraction_to_str(c)}
                for e, c in sorted(self.witness.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)
            ]
        if self.margin is not None:
            payload["margin"] = self.margin
        if self.reason is not None:
            payload["reason"] = self.reason
        return payload


def _target_vector(prob: GramProblem, gamma_index: Dict[Exponent, int]) -> List[Fraction]:
    vec = [Fraction(0)] * len(gamma_index)
    for exponent, coeff in prob.target.terms().items():
        vec[gamma_index[exponent]] = coeff
    return vec


def exact_span_check(prob: GramProblem) -> Optional[Certificate]:
    """Exact affine feasibility over the face; None means inconclusive.

    Decides by rational linear algebra whether the target lies in the span
    of the pairwise products of the face basis polynomials.  If it does
    not, *no* symmetric matrix supported on the face matches the target, in
    particular no PSD one, and a rational witness functional is returned
    after being re-verified from scratch.
    """
    if prob.face is None:
        return None  # full face: the products span every degree-2d monomial
    n = prob.basis.var_count
    degree = 2 * prob.basis.half_degree
    gammas = exponents_of_degree(n, degree)
    gamma_index = {g: i for i, g in enumerate(gammas)}
    width = len(gammas)
    target_row = _target_vector(prob, gamma_index)

    face_polys = [
        prob.basis.poly_from_vector(scale_to_primitive_integer(w)) for w in prob.face
    ]
    product_rows: List[List[int]] = []
    for k, wk in enumerate(face_polys):
        for wl in face_polys[k:]:
            product = wk * wl
            row = [0] * width
            for exponent, coeff in product.terms().items():
                row[gamma_index[exponent]] = int(coeff)
            product_rows.append(row)

    certificate = _span_membership_witness(product_rows, target_row, width)
    if certificate is None:
        return None
    witness_vec = certificate
    # Independent exact re-check of the witness, straight from the rows.
    for row in product_rows:
        if sum(a * b for a, b in zip(row, witness_vec)) != 0:
            raise AssertionError("witness fails to annihilate a face product")
    pairing = sum(a * b for a, b in zip(target_row, witness_vec))
    if pairing == 0:
        raise AssertionError("witness pairs to zero against the target")
    if pairing < 0:
        witness_vec = [-v for v in witness_vec]
    witness = {
        gammas[i]: Fraction(v) for i, v in enumerate(witness_vec) if v != 0
    }
    return Certificate(
        kind="not_sos_exact",
        branch="exact_span",
        zero_count=len(prob.zero_points),
        face_dim=prob.face_dim,
        witness=witness,
        details={"products_checked": len(product_rows)},
    )


def _span_membership_witness(
    rows: List[List[int]], target: List[Fraction], width: int
) -> Optional[List[int]]:
    """None if target is in the row span; else an integer functional.

    The functional annihilates every row and pairs nonzero with the target.
    Incremental integer echelon reduction with content normalization keeps
    entries bounded; the kernel vector comes from back-substitution over
    the pivot rows.
    """
    echelon: Dict[int, List[int]] = {}  # pivot column -> integer row

    def normalize(row: List[int]) -> List[int]:
        content = 0
        for v in row:
            content = math.gcd(content, v)
        return [v // content for v in row] if content > 1 else row

    def reduce_row(row: List[int]) -> List[int]:
        row = list(row)
        steps = 0
        for col in sorted(echelon):
            if row[col] == 0:
                continue
            pivot_row = echelon[col]
            p, q = pivot_row[col], row[col]
            row = [p * a - q * b for a, b in zip(row, pivot_row)]
            steps += 1
            if steps % 8 == 0:  # keep entry growth in check
                row = normalize(row)
        return normalize(row)

    for row in rows:
        reduced = reduce_row(row)
        for col, v in enumerate(reduced):
            if v != 0:
                echelon[col] = reduced
                break

    target_int = scale_to_primitive_integer(target) if any(target) else [0] * width
    residual = reduce_row(list(target_int))
    free_col = next((c for c, v in enumerate(residual) if v != 0), None)
    if free_col is None:
        return None
    # Back-substitute for a kernel functional: 1 on the chosen free column,
    # 0 on all other non-pivot columns.
    lam = [Fraction(0)] * width
    lam[free_col] = Fraction(1)
    for col in sorted(echelon, reverse=True):
        row = echelon[col]
        acc = sum((Fraction(row[j]) * lam[j] for j in range(col + 1, width)), Fraction(0))
        lam[col] = -acc / row[col]
    return list(scale_to_primitive_integer(lam))


@dataclass
class SdpOutcome:
    status: str  # "feasible" | "infeasible" | "undecided"
    gram: Optional[np.ndarray] = None
    margin: Optional[float] = None
    iterations: int = 0
    constraint_residual: Optional[float] = None
    min_eigenvalue: Optional[float] = None
    note: str = ""


def _constraint_arrays(prob: GramProblem):
    """Ordered-pair scatter arrays for the disjoint coefficient groups."""
    rows, cols, group_ids = [], [], []
    targets = []
    sizes = []
    for g, constraint in enumerate(prob.constraints):
        count = 0
        for (i, j) in constraint.pairs:
            rows.append(i)
            cols.append(j)
            group_ids.append(g)
            count += 1
            if i != j:
                rows.append(j)
                cols.append(i)
                group_ids.append(g)
                count += 1
        targets.append(float(constraint.target))
        sizes.append(count)
    return (
        np.array(rows),
        np.array(cols),
        np.array(group_ids),
        np.array(targets),
        np.array(sizes, dtype=float),
    )


def _psd_project(sym: np.ndarray) -> Tuple[np.ndarray, float]:
    eigenvalues, vectors = np.linalg.eigh(sym)
    clipped = np.clip(eigenvalues, 0.0, None)
    return (vectors * clipped) @ vectors.T, float(eigenvalues[0])


def sdp_feasible(
    prob: GramProblem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SdpOutcome:
    """Alternating projections between the PSD cone and the affine constraints.

    Dykstra's correction is applied on the cone side.  Feasibility is only
    declared after an independent re-check of the constraint residual and
    minimum eigenvalue of the returned Gram matrix; infeasibility only when
    the divergence direction yields a separating functional whose margin
    exceeds 10 * tol.
    """
    n = prob.basis.size
    if n > MAX_BASIS_SIZE:
        raise GramUsageError(
            f"basis size {n} exceeds the desk-scale limit {MAX_BASIS_SIZE}"
        )
    rows, cols, group_ids, targets, sizes = _constraint_arrays(prob)

    if prob.face is not None and len(prob.face) == 0:
        # Empty face: the only admissible Q is 0, feasible iff the target is 0.
        if prob.target.is_zero():
            return SdpOutcome(status="feasible", gram=np.zeros((n, n)),
                              constraint_residual=0.0, min_eigenvalue=0.0)
        margin = float(np.linalg.norm(targets))
        return SdpOutcome(status="infeasible", margin=margin,
                          note="face is zero-dimensional but the target is nonzero")

    if prob.face is None:
        return _sdp_full(prob, rows, cols, group_ids, targets, sizes, tol, max_iter)
    return _sdp_face(prob, rows, cols, group_ids, targets, sizes, tol, max_iter)


def _affine_project_full(q, rows, cols, group_ids, targets, sizes, n_groups):
    sums = np.zeros(n_groups)
    np.add.at(sums, group_ids, q[rows, cols])
    correction = (targets - sums) / sizes
    out = q.copy()
    out[rows, cols] += correction[group_ids]
    return out, sums


def _sdp_full(prob, rows, cols, group_ids, targets, sizes, tol, max_iter):
    n = prob.basis.size
    n_groups = len(prob.constraints)
    scale = max(1.0, float(np.abs(targets).max()) if len(targets) else 1.0)
    x = np.zeros((n, n))
    x, _ = _affine_project_full(x, rows, cols, group_ids, targets, sizes, n_groups)
    correction = np.zeros_like(x)
    for iteration in range(1, max_iter + 1):
        y, _ = _psd_project(x + correction)
        correction = x + correction - y
        x, _ = _affine_project_full(y, rows, cols, group_ids, targets, sizes, n_groups)
        gap = float(np.linalg.norm(x - y))
        if gap <= tol * scale:
            sums_check = np.zeros(n_groups)
            np.add.at(sums_check, group_ids, y[rows, cols])
            residual = float(np.abs(sums_check - targets).max())
            eig_min = float(np.linalg.eigvalsh((y + y.T) / 2)[0])
            if residual <= 10 * tol * scale and eig_min >= -10 * tol * scale:
                return SdpOutcome(
                    status="feasible", gram=y, iterations=iteration,
                    constraint_residual=residual, min_eigenvalue=eig_min,
                )
    # Plain alternating projections converge to the minimal-gap pair even
    # for disjoint sets (the Dykstra correction does not), so the
    # certificate direction comes from a correction-free phase.
    for _ in range(2000):
        y, _ = _psd_project(x)
        x, _ = _affine_project_full(y, rows, cols, group_ids, targets, sizes, n_groups)
    direction = x - _psd_project(x)[0]
    return _infeasibility_from_direction_full(
        direction, rows, cols, group_ids, targets, sizes, tol, scale, max_iter
    )


def _infeasibility_from_direction_full(
    direction, rows, cols, group_ids, targets, sizes, tol, scale, iterations
):
    n_groups = len(targets)
    norm = float(np.linalg.norm(direction))
    if norm <= 0:
        return SdpOutcome(status="undecided", iterations=iterations,
                          note="no divergence direction available")
    w = direction / norm
    # Project onto the span of the constraint indicator directions so the
    # functional is constant on the affine set.
    sums = np.zeros(n_groups)
    np.add.at(sums, group_ids, w[rows, cols])
    w_proj = np.zeros_like(w)
    w_proj[rows, cols] = (sums / sizes)[group_ids]
    w_proj = (w_proj + w_proj.T) / 2
    norm_proj = float(np.linalg.norm(w_proj))
    if norm_proj <= tol:
        return SdpOutcome(status="undecided", iterations=iterations,
                          note="divergence direction is orthogonal to the constraints")
    w_proj /= norm_proj
    eigenvalues = np.linalg.eigvalsh(w_proj)
    max_eig = float(eigenvalues[-1])
    # Margin: value of the functional on any affine point (all agree).
    affine_point = np.zeros_like(w)
    affine_point[rows, cols] = (targets / sizes)[group_ids]
    margin = float(np.sum(w_proj * affine_point))
    if max_eig <= 100 * tol and margin >= 10 * tol * scale:
        return SdpOutcome(status="infeasible", margin=margin, iterations=iterations,
                          note=f"separating functional: max eigenvalue {max_eig:.2e}")
    return SdpOutcome(status="undecided", iterations=iterations,
                      note=f"margin {margin:.2e}, max eigenvalue {max_eig:.2e}")


def _sdp_face(prob, rows, cols, group_ids, targets, sizes, tol, max_iter):
    n = prob.basis.size
    t = len(prob.face)
    face_matrix = np.array([[float(v) for v in w] for w in prob.face]).T  # n x t
    w_basis, _ = np.linalg.qr(face_matrix)
    n_groups = len(prob.constraints)
    scale = max(1.0, float(np.abs(targets).max()) if len(targets) else 1.0)

    # Constraint matrices C_g = W^T E_g W flattened into G (n_groups x t*t),
    # assembled from outer products of the rows of W (E_g is pair-sparse).
    g_rows = np.zeros((n_groups, t * t))
    for g, constraint in enumerate(prob.constraints):
        c_g = np.zeros((t, t))
        for (i, j) in constraint.pairs:
            outer = np.outer(w_basis[i], w_basis[j])
            c_g += outer + outer.T if i != j else outer
        g_rows[g] = c_g.reshape(-1)
    pinv_g = np.linalg.pinv(g_rows, rcond=1e-12)
    x_particular = pinv_g @ targets
    affine_residual = float(np.linalg.norm(g_rows @ x_particular - targets))
    if affine_residual > max(100 * tol * scale, 1e-9 * scale):
        # The affine set on the face is empty: the normal residual separates.
        lam = targets - g_rows @ x_particular
        margin = float(np.linalg.norm(lam))
        return SdpOutcome(
            status="infeasible",
            margin=margin,
            note="affine constraints are inconsistent on the face",
        )

    def affine_project(vec):
        return vec - pinv_g @ (g_rows @ vec - targets)

    x = x_particular.copy()
    correction = np.zeros_like(x)
    for iteration in range(1, max_iter + 1):
        a_mat = (x + correction).reshape(t, t)
        a_mat = (a_mat + a_mat.T) / 2
        y_mat, _ = _psd_project(a_mat)
        y = y_mat.reshape(-1)
        correction = x + correction - y
        x = affine_project(y)
        gap = float(np.linalg.norm(x - y))
        if gap <= tol * scale:
            q_full = w_basis @ y_mat @ w_basis.T
            sums_check = np.zeros(n_groups)
            np.add.at(sums_check, group_ids, q_full[rows, cols])
            residual = float(np.abs(sums_check - targets).max())
            min_eig = float(np.linalg.eigvalsh((q_full + q_full.T) / 2)[0])
            if residual <= 10 * tol * scale and min_eig >= -10 * tol * scale:
                return SdpOutcome(
                    status="feasible", gram=q_full, iterations=iteration,
                    constraint_residual=residual, min_eigenvalue=min_eig,
                )
    # Correction-free phase to settle on the minimal-gap direction.
    for _ in range(2000):
        y_mat, _ = _psd_project(x.reshape(t, t))
        x = affine_project(y_mat.reshape(-1))
    direction = x - _psd_project(x.reshape(t, t))[0].reshape(-1)
    norm = float(np.linalg.norm(direction))
    if norm <= 0:
        return SdpOutcome(status="undecided", iterations=max_iter,
                          note="no divergence direction available")
    w_dir = direction / norm
    w_row_space = pinv_g @ (g_rows @ w_dir)  # projection onto the row space
    norm_proj = float(np.linalg.norm(w_row_space))
    if norm_proj <= tol:
        return SdpOutcome(status="undecided", iterations=max_iter,
                          note="divergence direction is orthogonal to the constraints")
    w_row_space /= norm_proj
    w_mat = (w_row_space.reshape(t, t) + w_row_space.reshape(t, t).T) / 2
    max_eig = float(np.linalg.eigvalsh(w_mat)[-1])
    margin = float(w_row_space @ x_particular)
    if max_eig <= 100 * tol and margin >= 10 * tol * scale:
        return SdpOutcome(status="infeasible", margin=margin, iterations=max_iter,
                          note=f"separating functional on the face: max eigenvalue {max_eig:.2e}")
    return SdpOutcome(status="undecided", iterations=max_iter,
                      note=f"margin {margin:.2e}, max eigenvalue {max_eig:.2e}")


def extract_squares(
    gram: np.ndarray, basis: MonomialBasis, target: MultiPoly, tol: float = DEFAULT_TOL
) -> Tuple[List[MultiPoly], float]:
    """Squares from a PSD-projected eigenfactorization, plus the recomposition residual.

    The residual is the maximum coefficient error of sum(q_i^2) against the
    target, relative to the largest target coefficient; it is recomputed
    here by exact arithmetic on the extracted coefficients, independently
    of whatever the solver reported.
    """
    sym = (gram + gram.T) / 2
    eigenvalues, vectors = np.linalg.eigh(sym)
    if eigenvalues[0] < -100 * tol * max(1.0, float(np.abs(sym).max())):
        raise GramUsageError(
            f"matrix is indefinite beyond tolerance: min eigenvalue {eigenvalues[0]:.3e}"
        )
    squares = []
    for value, vector in zip(eigenvalues, vectors.T):
        if value <= tol:
            continue
        weight = float(np.sqrt(value))
        coeffs = [Fraction(weight * float(c)) for c in vector]
        poly = basis.poly_from_vector(coeffs)
        if not poly.is_zero():
            squares.append(poly)
    recomposed = MultiPoly.zero(basis.var_count)
    for q in squares:
        recomposed = recomposed + q * q
    diff = recomposed - target
    target_scale = max(
        [abs(c) for c in target.terms().values()] or [Fraction(1)]
    )
    max_err = max([abs(c) for c in diff.terms().values()] or [Fraction(0)])
    residual = float(max_err / max(Fraction(1), target_scale))
    return squares, residual


def _negativity_scan(p: MultiPoly, seed: int, samples: int = 10_000) -> Optional[Tuple]:
    """Seeded exact scan for a negative value; returns an offending point or None."""
    rng = random.Random(seed)
    evaluator = p.int_evaluator()
    for _ in range(samples):
        point = tuple(rng.randint(-100, 100) for _ in range(p.var_count))
        if evaluator(*point) < 0:
            return point
    return None


def certify(
    p: MultiPoly,
    mode: str = "auto",
    zeros: Optional[Sequence[Sequence]] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
    batch_size: int = ZERO_BATCH_SIZE,
) -> Certificate:
    """Full certification pipeline; deterministic given mode, seed and zeros.

    Zeros are consumed in batches; the face is declared stable after
    ``STABLE_BATCHES`` consecutive batches leave its dimension unchanged.
    ``mode`` is one of ``auto`` (exact span test, then the feasibility
    solver), ``exact-only`` or ``sdp-only``.
    """
    if mode not in ("auto", "exact-only", "sdp-only"):
        raise GramUsageError(f"unknown mode {mode!r}")
    prob = gram_system(p)
    details: dict = {"mode": mode, "face_history": []}

    if zeros:
        zeros = [tuple(Fraction(v) for v in z) for z in zeros]
        stable_run = 0
        consumed = 0
        for start in range(0, len(zeros), batch_size):
            batch = zeros[start : start + batch_size]
            before = prob.face_dim
            prob = facial_reduce(prob, batch)
            consumed += len(batch)
            details["face_history"].append(prob.face_dim)
            if prob.face_dim == 0:
                stable_run = STABLE_BATCHES  # the face cannot shrink further
                break
            if prob.face_dim == before:
                stable_run += 1
                if stable_run >= STABLE_BATCHES:
                    break
            else:
                stable_run = 0
        details["zeros_consumed"] = consumed
        details["face_stabilized"] = stable_run >= STABLE_BATCHES

    if mode in ("auto", "exact-only"):
        certificate = exact_span_check(prob)
        if certificate is not None:
            certificate.details.update(details)
            return certificate
        if mode == "exact-only":
            return Certificate(
                kind="undecided",
                branch="exact_span",
                zero_count=len(prob.zero_points),
                face_dim=prob.face_dim,
                reason="target lies in the span of the face products",
                details=details,
            )

    outcome = sdp_feasible(prob, tol=tol, max_iter=max_iter)
    details["iterations"] = outcome.iterations
    details["solver_note"] = outcome.note
    if outcome.status == "feasible":
        squares, residual = extract_squares(outcome.gram, prob.basis, p, tol=tol)
        if residual > 1e-4:
            return Certificate(
                kind="undecided",
                branch="sdp",
                zero_count=len(prob.zero_points),
                face_dim=prob.face_dim,
                reason=f"solver witness rejected: recomposition residual {residual:.2e}",
                details=details,
            )
        bad_point = _negativity_scan(p, seed)
        if bad_point is not None:
            raise AssertionError(
                f"claimed witness for a polynomial that is negative at {bad_point}"
            )
        details["constraint_residual"] = outcome.constraint_residual
        details["min_eigenvalue"] = outcome.min_eigenvalue
        return Certificate(
            kind="sos_witness",
            branch="sdp_primal",
            squares=squares,
            residual=residual,
            zero_count=len(prob.zero_points),
            face_dim=prob.face_dim,
            details=details,
        )
    if outcome.status == "infeasible":
        return Certificate(
            kind="not_sos_numeric",
            branch="sdp_dual",
            zero_count=len(prob.zero_points),
            face_dim=prob.face_dim,
            margin=outcome.margin,
            details=details,
        )
    return Certificate(
        kind="undecided",
        branch="sdp",
        zero_count=len(prob.zero_points),
        face_dim=prob.face_dim,
        reason=outcome.note or "iteration cap reached without a certificate",
        details=details,
    )
