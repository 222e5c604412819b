"""Text formats shared across the package, plus atomic file writes.

Polynomial files:

    vars: x0 x1 ... x{n-1}
    e0 e1 ... e{n-1} : numerator/denominator

one term per line, graded-lex order largest first, no zero terms, the
denominator always written explicitly.  Round-trips are bit-exact.

Zero-list files:

    dim: n
    p0/q0 p1/q1 ... p{n-1}/q{n-1}

one point per line, exact rationals.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly


def default_var_names(n: int) -> List[str]:
    return [f"x{i}" for i in range(n)]


def poly_to_text(p: MultiPoly, var_names: Optional[Sequence[str]] = None) -> str:
    names = list(var_names) if var_names is not None else default_var_names(p.var_count)
    if len(names) != p.var_count:
        raise ValueError(f"{len(names)} names for {p.var_count} variables")
    if any(" " in name or not name for name in names):
        raise ValueError("variable names must be nonempty and contain no spaces")
    lines = ["vars: " + " ".join(names)]
    for exponent, coeff in p.sorted_terms():
        exps = " ".join(str(e) for e in exponent)
        lines.append(f"{exps} : {coeff.numerator}/{coeff.denominator}")
    return "\n".join(lines) + "\n"


def poly_from_text(text: str) -> Tuple[MultiPoly, List[str]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("vars:"):
        raise ValueError("polynomial file must start with a 'vars:' line")
    names = lines[0][len("vars:") :].split()
    if not names:
        raise ValueError("no variable names declared")
    n = len(names)
    terms = {}
    for line in lines[1:]:
        left, _, right = line.partition(":")
        exponent = tuple(int(tok) for tok in left.split())
        if len(exponent) != n:
            raise ValueError(f"term line has {len(exponent)} exponents, expected {n}")
        num_str, _, den_str = right.strip().partition("/")
        coeff = Fraction(int(num_str), int(den_str) if den_str else 1)
        if exponent in terms:
            raise ValueError(f"duplicate exponent {exponent}")
        if coeff == 0:
            raise ValueError("zero coefficient stored in file")
        terms[exponent] = coeff
    return MultiPoly(n, terms), names


def fraction_to_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(token: str) -> Fraction:
    num, _, den = token.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def points_to_text(points: Sequence[Sequence[Fraction]]) -> str:
    if not points:
        raise ValueError("empty point list")
    dim = len(points[0])
    lines = [f"dim: {dim}"]
    for point in points:
        if len(point) != dim:
            raise ValueError("inconsistent point dimensions")
        lines.append(" ".join(fraction_to_str(Fraction(v)) for v in point))
    return "\n".join(lines) + "\n"


def points_from_text(text: str) -> List[Tuple[Fraction, ...]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("dim:"):
        raise ValueError("zero-list file must start with a 'dim:' line")
    dim = int(lines[0][len("dim:") :].strip())
    points = []
    for line in lines[1:]:
        point = tuple(fraction_from_str(tok) for tok in line.split())
        if len(point) != dim:
            raise ValueError(f"point has {len(point)} coordinates, expected {dim}")
        points.append(point)
    return points


def atomic_write_text(path: str, content: str) -> None:
    """Whole-file atomic write: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def atomic_write_json(path: str, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
