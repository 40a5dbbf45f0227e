"""Cospectrality detection and walk-matrix construction.

Two vertices u, v are cospectral when the diagonals of all matrix powers
agree at u and v.  By Cayley-Hamilton, powers k in [0, N-1] suffice, and
every check here stops there.  A second, independent criterion (equal
characteristic polynomials of the two vertex-deleted subgraphs) is run
alongside; the two must always agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph, VertexPair, WeightedIndicatorVector, delete_vertices
from .linalg import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    Matrix,
    Tolerance,
    char_poly,
    close,
    int_walk_rows,
    scaled_int_rows,
)


class CriterionDisagreement(RuntimeError):
    """The diagonal-powers and deleted-char-poly criteria disagreed.

    The two are mathematically equivalent; disagreement indicates a bug
    (rational mode) or a tolerance breakdown (float mode) and is never
    silently resolved.
    """


@dataclass(frozen=True)
class CospectralCertificate:
    pair: VertexPair
    method: str  # "diagonal-powers", "deleted-charpoly", or "both"
    max_k_checked: int
    residual: float

    @property
    def accepted(self) -> bool:
        return True


@dataclass(frozen=True)
class CospectralRefusal:
    pair: VertexPair
    first_failing_k: int | None  # None when only the char-poly leg failed

    @property
    def accepted(self) -> bool:
        return False


@dataclass(frozen=True)
class WalkMatrix:
    """Krylov matrix [e, He, ..., H^{N-1} e] of a weighted indicator vector."""

    generator: WeightedIndicatorVector
    columns: Matrix


def scaled_rows(g: Graph, starts, k_max: int, tol: Tolerance = DEFAULT_TOL):
    """Rows e_s^T H'^k for k = 0..k_max, where H' is a positively scaled
    copy of the adjacency matrix (denominators cleared in rational mode,
    divided by the inf-norm in float mode).

    Per-power identities (equal entries, zero weighted sums) are
    invariant under this scaling, which keeps exact arithmetic in big
    integers and float powers bounded.
    """
    starts = list(starts)
    if g.mode == RATIONAL:
        S, _ = scaled_int_rows(g.weights)
        return {s: int_walk_rows(S, s - 1, k_max) for s in starts}
    a = g.weights.to_float_array()
    nrm = g.weights.inf_norm()
    if nrm > 0:
        a = a / nrm
    out = {}
    for s in starts:
        row = np.zeros(g.n)
        row[s - 1] = 1.0
        rows = [row]
        for _ in range(k_max):
            row = row @ a
            rows.append(row)
        out[s] = [list(map(float, r)) for r in rows]
    return out


def walk_matrix(g: Graph, e: WeightedIndicatorVector) -> WalkMatrix:
    """Column l (1-based) holds H^{l-1} applied to the weighted indicator."""
    if e.ambient != g.n:
        raise ValueError("ambient size mismatch")
    x = list(e.dense())
    if g.mode == FLOAT:
        x = [float(v) for v in x]
    cols = [tuple(x)]
    for _ in range(g.n - 1):
        x = list(g.weights.matvec(x))
        cols.append(tuple(x))
    rows = list(zip(*cols))
    return WalkMatrix(generator=e, columns=Matrix(rows, mode=g.mode))


def is_cospectral_pair(g: Graph, pair: VertexPair, tol: Tolerance = DEFAULT_TOL):
    """Check Eq-style cospectrality of the pair by both criteria.

    Returns a CospectralCertificate on success, else a CospectralRefusal
    carrying the first failing power k.  Raises CriterionDisagreement if
    the two criteria ever differ.
    """
    u, v = pair
    if not (1 <= u <= g.n and 1 <= v <= g.n):
        raise ValueError("pair vertex out of range")
    k_max = g.n - 1
    rows = scaled_rows(g, [u, v], k_max, tol)
    diag_ok = True
    first_fail = None
    residual = 0.0
    for k in range(k_max + 1):
        a = rows[u][k][u - 1]
        b = rows[v][k][v - 1]
        if g.mode == RATIONAL:
            ok = a == b
        else:
            ok = close(a, b, tol)
            residual = max(residual, abs(a - b))
        if not ok:
            diag_ok = False
            first_fail = k
            break

    cp_u = char_poly(delete_vertices(g, {u}).weights, tol)
    cp_v = char_poly(delete_vertices(g, {v}).weights, tol)
    if g.mode == RATIONAL:
        cp_ok = cp_u == cp_v
    else:
        cp_ok = all(close(a, b, tol) for a, b in zip(cp_u, cp_v))

    if diag_ok != cp_ok:
        raise CriterionDisagreement(
            f"pair {pair}: diagonal-powers says {diag_ok}, "
            f"deleted-char-poly says {cp_ok}"
        )
    if diag_ok:
        return CospectralCertificate(
            pair=pair, method="both", max_k_checked=k_max,
            residual=0.0 if g.mode == RATIONAL else residual,
        )
    return CospectralRefusal(pair=pair, first_failing_k=first_fail)


def all_cospectral_pairs(g: Graph, tol: Tolerance = DEFAULT_TOL) -> list[VertexPair]:
    """Every unordered cospectral pair, sorted lexicographically."""
    out = []
    for u in range(1, g.n + 1):
        for v in range(u + 1, g.n + 1):
            if is_cospectral_pair(g, VertexPair(u, v), tol).accepted:
                out.append(VertexPair(u, v))
    return out


def is_walk_singlet(g: Graph, pair: VertexPair, c: int,
                    tol: Tolerance = DEFAULT_TOL):
    """Parity of vertex c as a walk singlet relative to the pair.

    Returns +1, -1, the string "both" (all walk sums to c vanish from
    both u and v), or None.  Members of the pair are rejected: the pair
    itself is covered by the pair-as-doublet identity, not by singlets.
    """
    u, v = pair
    if c in (u, v):
        raise ValueError("singlet candidate must not belong to the pair")
    if not (1 <= c <= g.n):
        raise ValueError("vertex out of range")
    k_max = g.n - 1
    rows = scaled_rows(g, [u, v], k_max, tol)
    even = odd = True
    all_zero = True
    for k in range(k_max + 1):
        a = rows[u][k][c - 1]
        b = rows[v][k][c - 1]
        if g.mode == RATIONAL:
            even &= a == b
            odd &= a == -b
            all_zero &= a == 0 and b == 0
        else:
            even &= close(a, b, tol)
            odd &= close(a, -b, tol)
            all_zero &= close(a, 0.0, tol) and close(b, 0.0, tol)
        if not (even or odd):
            return None
    if all_zero:
        return "both"
    if even:
        return 1
    return -1
