"""Walk-multiplet condition matrices, weight-space solving, enumeration.

A subset M with weight tuple gamma is a parity-p walk multiplet relative
to a pair {u, v} when sum_m gamma_m [H^k]_{u,m} = p sum_m gamma_m
[H^k]_{v,m} for every k (k <= N-1 suffices).  Rearranged, gamma must lie
in the null space of the N x |M| condition matrix with entries
[H^k]_{u,m} - p [H^k]_{v,m}.  A multiplet is therefore represented by
the whole null space (all valid weight tuples at once), not by a single
tuple.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from fractions import Fraction

from .cospectral import scaled_rows
from .graph import Graph, VertexPair, WeightedIndicatorVector
from .linalg import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    Matrix,
    Tolerance,
    close,
    null_space_basis,
)

PARITY_BOTH = "both"
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


class BudgetExceeded(RuntimeError):
    """Subset enumeration exceeded its subset-count budget."""


@dataclass(frozen=True)
class ConditionMatrix:
    """gamma is a valid weight tuple for (subset, parity) iff entries @ gamma = 0."""

    pair: VertexPair
    parity: int
    subset: tuple[int, ...]
    entries: Matrix  # N rows (k = 0..N-1), |subset| columns


@dataclass(frozen=True)
class Multiplet:
    pair: VertexPair
    subset: tuple[int, ...]
    parity: object  # +1, -1, or "both"
    weight_space: tuple[tuple, ...]  # canonical null-space basis vectors
    full_support: bool
    sublets: tuple[tuple[tuple[int, ...], str], ...]
    uniform: bool
    ambient: int = 0

    @property
    def cardinality(self) -> int:
        return len(self.subset)

    def indicator(self, gamma) -> WeightedIndicatorVector:
        return WeightedIndicatorVector(
            support=self.subset, gamma=tuple(gamma), ambient=self.ambient,
        )


class PairContext:
    """Shared per-(graph, pair) walk tables for repeated multiplet queries.

    Rows are kept in the positively-scaled space of
    :func:`walkmult.cospectral.scaled_rows`; each power-k row differs
    from the true one by a positive factor, which leaves null spaces and
    sign patterns unchanged.
    """

    def __init__(self, g: Graph, pair: VertexPair, tol: Tolerance = DEFAULT_TOL):
        self.graph = g
        self.pair = pair
        self.tol = tol
        rows = scaled_rows(g, [pair.u, pair.v], g.n - 1, tol)
        self.rows_u = rows[pair.u]
        self.rows_v = rows[pair.v]
        if g.mode == RATIONAL:
            from .linalg import scaled_int_rows

            _, self.scale = scaled_int_rows(g.weights)
        else:
            self.scale = None
        # diff_rows[p][k][m0] = scaled([H^k]_{u,m} - p [H^k]_{v,m})
        self.diff_rows = {
            p: [
                [ru[m] - p * rv[m] for m in range(g.n)]
                for ru, rv in zip(self.rows_u, self.rows_v)
            ]
            for p in (1, -1)
        }

    def condition_matrix(self, subset, parity: int) -> ConditionMatrix:
        subset = tuple(sorted(subset))
        if not subset:
            raise ValueError("subset must be nonempty")
        if parity not in (1, -1):
            raise ValueError("parity must be +1 or -1")
        if self.graph.mode == RATIONAL:
            # undo the denominator-clearing scale so reported entries are
            # the true power differences (null spaces are unaffected)
            rows = [
                [Fraction(r[m - 1], self.scale**k) for m in subset]
                for k, r in enumerate(self.diff_rows[parity])
            ]
        else:
            rows = [
                [r[m - 1] for m in subset] for r in self.diff_rows[parity]
            ]
        return ConditionMatrix(
            pair=self.pair, parity=parity, subset=subset,
            entries=Matrix(rows, mode=self.graph.mode),
        )

    def weight_basis(self, subset, parity: int):
        cm = self.condition_matrix(subset, parity)
        return null_space_basis(cm.entries, self.tol)

    def multiplet(self, subset, parity: int):
        """Multiplet record for the subset and parity, or None if the
        weight space is trivial.  Merges the +/- records into a single
        "both" record when the two spaces coincide (all walk sums to the
        subset vanish)."""
        subset = tuple(sorted(subset))
        basis = self.weight_basis(subset, parity)
        if not basis:
            return None
        other = self.weight_basis(subset, -parity)
        tag = PARITY_BOTH if other == basis else parity
        return _build_multiplet(self.graph, self.pair, subset, tag, basis,
                                self.graph.mode, self.tol)


def condition_matrix(g: Graph, pair: VertexPair, subset, parity: int,
                     tol: Tolerance = DEFAULT_TOL) -> ConditionMatrix:
    return PairContext(g, pair, tol).condition_matrix(subset, parity)


def weight_space(g: Graph, pair: VertexPair, subset, parity: int,
                 tol: Tolerance = DEFAULT_TOL):
    """Multiplet for (subset, parity), or None for a trivial weight space."""
    return PairContext(g, pair, tol).multiplet(subset, parity)


def _is_zero(x, mode, tol):
    if mode == RATIONAL:
        return x == 0
    return abs(x) <= tol.tol_zero


def _build_multiplet(g, pair, subset, parity, basis, mode, tol) -> Multiplet:
    dim = len(basis)
    rows = [tuple(vec[i] for vec in basis) for i in range(len(subset))]
    full_support = all(
        any(not _is_zero(x, mode, tol) for x in row) for row in rows
    )
    # sublets: vertices with identical coefficient rows share one symbol
    groups: dict = {}
    for vertex, row in zip(subset, rows):
        key = row if mode == RATIONAL else tuple(round(x, 12) for x in row)
        groups.setdefault(key, []).append(vertex)
    sublets = tuple(
        (tuple(vs), _linear_form(key, dim))
        for key, vs in sorted(groups.items(), key=lambda kv: kv[1][0])
    )
    return Multiplet(
        pair=pair, subset=subset, parity=parity,
        weight_space=tuple(tuple(v) for v in basis),
        full_support=full_support, sublets=sublets,
        uniform=_all_ones_in_span(basis, mode, tol),
        ambient=g.n,
    )


def _linear_form(coeffs, dim) -> str:
    """Render a coefficient row as a linear form in parameters a, b, c..."""
    names = string.ascii_lowercase
    terms = []
    for c, name in zip(coeffs, names[:dim]):
        if c == 0:
            continue
        if c == 1:
            terms.append(("+", name))
        elif c == -1:
            terms.append(("-", name))
        else:
            cf = Fraction(c).limit_denominator(10**9) if not isinstance(c, Fraction) else c
            sign = "+" if cf > 0 else "-"
            mag = abs(cf)
            coef = str(mag) if mag.denominator == 1 else f"({mag})"
            terms.append((sign, f"{coef}{name}"))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = (first if first_sign == "+" else "-" + first)
    for sign, t in terms[1:]:
        out += sign + t
    return out


def _all_ones_in_span(basis, mode, tol) -> bool:
    if not basis:
        return False
    n = len(basis[0])
    cols = [list(v) for v in basis]
    if mode == RATIONAL:
        one = [Fraction(1)] * n
        return _solvable_exact(cols, one)
    import numpy as np

    a = np.array(cols, dtype=float).T
    one = np.ones(n)
    sol, res, rank, sv = np.linalg.lstsq(a, one, rcond=None)
    return bool(np.linalg.norm(a @ sol - one) <= tol.tol_zero * max(1.0, np.sqrt(n)))


def _solvable_exact(cols, rhs) -> bool:
    """Does rhs lie in the span of the column vectors (exact)?"""
    a = [[col[i] for col in cols] + [rhs[i]] for i in range(len(rhs))]
    n_rows, n_cols = len(a), len(cols) + 1
    r = 0
    for c in range(len(cols)):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    # inconsistent iff a fully eliminated row keeps a nonzero rhs
    for i in range(r, n_rows):
        if a[i][-1] != 0:
            return False
    return True


def generic_weights(m: Multiplet):
    """A concrete full-support member of the weight space.

    Combines the basis with distinct prime parameters; primes make
    accidental cancellations detectable, and the parameter set is
    advanced until no coordinate of a nonzero coefficient row vanishes.
    """
    dim = len(m.weight_space)
    if dim == 0:
        raise ValueError("empty weight space")
    rows = [tuple(vec[i] for vec in m.weight_space) for i in range(len(m.subset))]
    for start in range(len(_PRIMES) - dim + 1):
        params = _PRIMES[start:start + dim]
        vec = tuple(sum(c * p for c, p in zip(row, params)) for row in rows)
        ok = all(
            v != 0 for v, row in zip(vec, rows) if any(c != 0 for c in row)
        )
        if ok:
            return vec
    raise RuntimeError("could not find a generic full-support member")


def is_uniform(m: Multiplet):
    """(True, all-ones tuple) when the uniform vector lies in the space."""
    if m.uniform:
        one = Fraction(1) if any(isinstance(x, Fraction) for v in m.weight_space for x in v) else 1.0
        return True, tuple(one for _ in m.subset)
    return False, None


def check_condition(g: Graph, pair: VertexPair, subset, gamma, parity: int,
                    k_max: int | None = None, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Directly test sum_m gamma_m [H^k]_{u,m} = p * (same at v) for
    k = 0..k_max (default N-1).  Independent of the null-space route."""
    subset = tuple(sorted(subset))
    if k_max is None:
        k_max = g.n - 1
    rows = scaled_rows(g, [pair.u, pair.v], k_max, tol)
    for k in range(k_max + 1):
        su = sum(gm * rows[pair.u][k][m - 1] for gm, m in zip(gamma, subset))
        sv = sum(gm * rows[pair.v][k][m - 1] for gm, m in zip(gamma, subset))
        if g.mode == RATIONAL:
            if su != parity * sv:
                return False
        else:
            if not close(float(su), parity * float(sv), tol):
                return False
    return True


def enumerate_multiplets(g: Graph, pair: VertexPair, max_cardinality: int,
                         parity: str = "both", budget: int = 2_000_000,
                         tol: Tolerance = DEFAULT_TOL) -> list[Multiplet]:
    """All full-support multiplets over subsets of size 1..max_cardinality.

    Subsets iterate in lexicographic order within ascending size.  Only
    full-support records are reported: a solution with a structurally
    zero coordinate is the same multiplet on the smaller subset and is
    reported there.  `parity` filters to "even", "odd", or "both".
    """
    if max_cardinality < 1:
        raise ValueError("max_cardinality must be >= 1")
    if max_cardinality > g.n:
        max_cardinality = g.n
    want = {"even": (1,), "odd": (-1,), "both": (1, -1)}[parity]
    ctx = PairContext(g, pair, tol)
    out = []
    examined = 0
    for size in range(1, max_cardinality + 1):
        for subset in itertools.combinations(range(1, g.n + 1), size):
            examined += 1
            if examined > budget:
                raise BudgetExceeded(
                    f"enumeration budget of {budget} subsets exceeded"
                )
            seen_both = False
            for p in want:
                if seen_both:
                    break
                m = ctx.multiplet(subset, p)
                if m is None or not m.full_support:
                    continue
                if m.parity == PARITY_BOTH:
                    if p == -1 and 1 in want:
                        continue  # already reported under +1
                    seen_both = True
                out.append(m)
    return out


def union_multiplets(g: Graph, a: Multiplet, b: Multiplet, gamma=None,
                     delta=None, tol: Tolerance = DEFAULT_TOL) -> Multiplet:
    """Merge two same-parity multiplets with chosen member weights.

    The union carries the sum of the two extended weight vectors;
    overlapping coordinates add, and coordinates that cancel to zero are
    dropped from the subset.  An all-zero sum is rejected, as is a
    parity mismatch ("both" is compatible with either parity).
    """
    if a.pair != b.pair:
        raise ValueError("multiplets relate to different pairs")
    pa, pb = a.parity, b.parity
    if PARITY_BOTH not in (pa, pb) and pa != pb:
        raise ValueError(
            "parity mismatch: only equal-parity multiplets may be merged"
        )
    parity = pa if pa != PARITY_BOTH else pb
    if parity == PARITY_BOTH:
        parity = 1
    gamma = tuple(gamma) if gamma is not None else generic_weights(a)
    delta = tuple(delta) if delta is not None else generic_weights(b)
    acc: dict[int, object] = {}
    for m, x in zip(a.subset, gamma):
        acc[m] = acc.get(m, 0) + x
    for m, x in zip(b.subset, delta):
        acc[m] = acc.get(m, 0) + x
    subset = tuple(sorted(m for m, x in acc.items()
                          if not _is_zero(x, g.mode, tol)))
    if not subset:
        raise ValueError("summed weight vector is zero; union rejected")
    vec = tuple(acc[m] for m in subset)
    if not check_condition(g, a.pair, subset, vec, parity, tol=tol):
        raise RuntimeError("merged weight vector fails its condition matrix")
    return _build_multiplet(g, a.pair, subset, parity, [vec], g.mode, tol)


def multiplet_records(multiplets) -> list[dict]:
    """JSON-ready report records (the external multiplet report format)."""
    out = []
    for m in multiplets:
        out.append({
            "pair": [m.pair.u, m.pair.v],
            "parity": ("both" if m.parity == PARITY_BOTH
                       else ("even" if m.parity == 1 else "odd")),
            "subset": list(m.subset),
            "basis": [[str(x) for x in vec] for vec in m.weight_space],
            "sublets": [
                {"vertices": list(vs), "coefficient": form}
                for vs, form in m.sublets
            ],
            "uniform": m.uniform,
            "full_support": m.full_support,
        })
    return out
