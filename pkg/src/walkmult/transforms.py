"""Cospectrality-preserving graph modifications.

Every transform re-verifies its own postcondition (pair still
cospectral, expected singlet/multiplet structure present) and refuses to
return an unverified graph.  A `force` escape hatch exists solely so
tests can confirm that forbidden edits genuinely break cospectrality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cospectral import is_cospectral_pair, is_walk_singlet
from .graph import (
    Graph,
    VertexPair,
    WeightedIndicatorVector,
    cone_over,
    delete_vertices,
    set_edge,
)
from .linalg import DEFAULT_TOL, FLOAT, RATIONAL, Matrix, Tolerance
from .multiplets import Multiplet, check_condition, generic_weights


class TransformRefused(RuntimeError):
    """A transform's precondition failed; the graph was not modified."""


class VerificationFailed(RuntimeError):
    """A transform's postcondition re-check failed.

    The theorems guarantee these postconditions, so a failure indicates
    an implementation bug and is surfaced loudly.
    """


@dataclass(frozen=True)
class TransformRecord:
    kind: str  # cone | attach-graph | interconnect | remove-vertex |
    #            toggle-pair-edge | remove-multiplet
    inputs: dict
    certificate: dict
    provenance: tuple = ()

    def chain(self) -> tuple:
        return self.provenance + (self,)


def _require_cospectral(g: Graph, pair: VertexPair, tol, stage: str):
    res = is_cospectral_pair(g, pair, tol)
    if not res.accepted:
        raise VerificationFailed(
            f"{stage}: pair {pair.u},{pair.v} lost cospectrality "
            f"(first failing power k={res.first_failing_k})"
        )
    return res


def _parities_of(m: Multiplet):
    return (1, -1) if m.parity == "both" else (m.parity,)


def extend_by_cone(g: Graph, m: Multiplet, gamma=None, *,
                   preserved: tuple[tuple[Multiplet, tuple], ...] = (),
                   provenance: tuple = (),
                   tol: Tolerance = DEFAULT_TOL):
    """Cone the graph over a certified multiplet.

    Returns (new graph, tip index, record).  Re-verifies that the pair
    stays cospectral, that the tip is a singlet of the multiplet's
    parity, and that every (multiplet, weights) entry in `preserved`
    still satisfies its same-parity condition in the new graph.
    """
    gamma = tuple(gamma) if gamma is not None else generic_weights(m)
    if len(gamma) != len(m.subset) or all(x == 0 for x in gamma):
        raise TransformRefused("gamma must be a nonzero weight tuple on the subset")
    for p in _parities_of(m):
        if not check_condition(g, m.pair, m.subset, gamma, p, tol=tol):
            raise TransformRefused(
                "chosen gamma is not a member of the multiplet's weight space"
            )
    e = WeightedIndicatorVector(
        support=tuple(i for i, x in zip(m.subset, gamma) if x != 0),
        gamma=tuple(x for x in gamma if x != 0), ambient=g.n,
    )
    h = cone_over(g, e)
    tip = h.n
    _require_cospectral(h, m.pair, tol, "extend_by_cone")
    tip_parity = is_walk_singlet(h, m.pair, tip, tol)
    want = _parities_of(m)
    if tip_parity not in want and tip_parity != "both":
        raise VerificationFailed(
            f"extend_by_cone: tip is not a parity-{m.parity} singlet "
            f"(got {tip_parity})"
        )
    preserved_report = []
    for pm, pg in preserved:
        pg = tuple(pg) if pg is not None else generic_weights(pm)
        for p in _parities_of(pm):
            if not check_condition(h, pm.pair, pm.subset, pg, p, tol=tol):
                raise VerificationFailed(
                    f"extend_by_cone: same-parity multiplet {pm.subset} "
                    "was not preserved"
                )
        preserved_report.append(list(pm.subset))
    record = TransformRecord(
        kind="cone",
        inputs={"subset": list(m.subset), "gamma": [str(x) for x in gamma],
                "parity": m.parity, "pair": [m.pair.u, m.pair.v]},
        certificate={"accepted": True, "tip": tip, "tip_parity": tip_parity,
                     "preserved": preserved_report},
        provenance=provenance,
    )
    return h, tip, record


def attach_graph_to_singlet(g: Graph, pair: VertexPair, c: int,
                            attachment: Graph, bridges,
                            tol: Tolerance = DEFAULT_TOL):
    """Connect an arbitrary graph to a certified walk singlet c.

    `bridges` is a list of (attachment_vertex, weight) edges, every one
    of them incident to c.  Re-verifies cospectrality and that each
    attachment vertex becomes a singlet of the same parity.
    """
    parity = is_walk_singlet(g, pair, c, tol)
    if parity is None:
        raise TransformRefused(
            f"vertex {c} is not a walk singlet relative to {pair.u},{pair.v}"
        )
    if attachment.mode != g.mode:
        raise TransformRefused("attachment graph mode mismatch")
    bridges = list(bridges)
    if not bridges:
        raise TransformRefused("at least one bridge edge required")
    n0, n1 = g.n, attachment.n
    zero = Fraction(0) if g.mode == RATIONAL else 0.0
    rows = [list(g.weights.row(i)) + [zero] * n1 for i in range(n0)]
    for i in range(n1):
        rows.append([zero] * n0 + list(attachment.weights.row(i)))
    for av, w in bridges:
        if not (1 <= av <= n1):
            raise TransformRefused("bridge endpoint outside attachment graph")
        w = Fraction(w) if g.mode == RATIONAL else float(w)
        rows[c - 1][n0 + av - 1] = w
        rows[n0 + av - 1][c - 1] = w
    h = Graph(Matrix.symmetric(rows, mode=g.mode), labels=None)
    _require_cospectral(h, pair, tol, "attach_graph_to_singlet")
    want = (parity,) if parity != "both" else (1, -1, "both")
    for i in range(n1):
        got = is_walk_singlet(h, pair, n0 + i + 1, tol)
        if got is None or (parity != "both" and got not in (parity, "both")):
            raise VerificationFailed(
                f"attach_graph_to_singlet: attached vertex {n0 + i + 1} "
                f"is not a parity-{parity} singlet (got {got})"
            )
    record = TransformRecord(
        kind="attach-graph",
        inputs={"singlet": c, "attachment_n": n1,
                "bridges": [[av, str(w)] for av, w in bridges],
                "pair": [pair.u, pair.v]},
        certificate={"accepted": True, "singlet_parity": parity,
                     "new_vertices": list(range(n0 + 1, n0 + n1 + 1))},
    )
    return h, record


def interconnect_multiplets(g: Graph, x: Multiplet, gamma, y: Multiplet,
                            delta, *, preserved=(), provenance=(),
                            tol: Tolerance = DEFAULT_TOL):
    """Add gamma_x * delta_y to every edge between the two multiplets.

    Loops on the overlap and doubled terms inside it follow the
    two-case interconnection formula; overlapping coordinates pick up
    both ordering products.  Parity mismatch is refused before any edit.
    """
    if x.pair != y.pair:
        raise TransformRefused("multiplets relate to different pairs")
    px, py = _parities_of(x), _parities_of(y)
    common = [p for p in px if p in py]
    if not common:
        raise TransformRefused(
            "parity mismatch: only equal-parity multiplets may be interconnected"
        )
    parity = common[0]
    gamma = tuple(gamma) if gamma is not None else generic_weights(x)
    delta = tuple(delta) if delta is not None else generic_weights(y)
    for mm, gg in ((x, gamma), (y, delta)):
        if not check_condition(g, mm.pair, mm.subset, gg, parity, tol=tol):
            raise TransformRefused(
                "chosen weights are not members of the multiplet weight space"
            )
    gx = dict(zip(x.subset, gamma))
    dy = dict(zip(y.subset, delta))
    rows = [list(r) for r in g.weights.rows()]
    created, removed = [], []
    n = g.n
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            add = 0
            if i in gx and j in dy:
                add = add + gx[i] * dy[j]
            if j in gx and i in dy:
                add = add + gx[j] * dy[i]
            if add == 0:
                continue
            old = rows[i - 1][j - 1]
            new = old + add
            rows[i - 1][j - 1] = new
            rows[j - 1][i - 1] = new
            was_zero = _zeroish(old, g.mode, tol)
            is_zero = _zeroish(new, g.mode, tol)
            if was_zero and not is_zero:
                created.append((i, j))
            elif not was_zero and is_zero:
                removed.append((i, j))
    h = Graph(Matrix.symmetric(rows, mode=g.mode), labels=g.labels)
    _require_cospectral(h, x.pair, tol, "interconnect_multiplets")
    preserved_report = []
    for pm, pg in preserved:
        pg = tuple(pg) if pg is not None else generic_weights(pm)
        for p in _parities_of(pm):
            if p != parity:
                continue
            if not check_condition(h, pm.pair, pm.subset, pg, p, tol=tol):
                raise VerificationFailed(
                    f"interconnect_multiplets: parity-{parity} multiplet "
                    f"{pm.subset} was not preserved"
                )
        preserved_report.append(list(pm.subset))
    record = TransformRecord(
        kind="interconnect",
        inputs={"x_subset": list(x.subset), "gamma": [str(v) for v in gamma],
                "y_subset": list(y.subset), "delta": [str(v) for v in delta],
                "parity": parity, "pair": [x.pair.u, x.pair.v]},
        certificate={"accepted": True,
                     "created_edges": created, "removed_edges": removed,
                     "preserved": preserved_report},
        provenance=provenance,
    )
    return h, record


def _zeroish(w, mode, tol):
    if mode == RATIONAL:
        return w == 0
    return abs(w) <= tol.tol_zero


def toggle_pair_edge(g: Graph, pair: VertexPair, w,
                     tol: Tolerance = DEFAULT_TOL):
    """Set the edge weight between the cospectral pair to w (0 disconnects)."""
    res = is_cospectral_pair(g, pair, tol)
    if not res.accepted:
        raise TransformRefused(f"pair {pair.u},{pair.v} is not cospectral")
    h = set_edge(g, pair.u, pair.v, w)
    _require_cospectral(h, pair, tol, "toggle_pair_edge")
    record = TransformRecord(
        kind="toggle-pair-edge",
        inputs={"pair": [pair.u, pair.v], "weight": str(w)},
        certificate={"accepted": True},
    )
    return h, record


def remove_vertex_checked(g: Graph, pair: VertexPair, c: int, *,
                          force: bool = False,
                          tol: Tolerance = DEFAULT_TOL):
    """Remove c only when it certifies as a walk singlet (either parity).

    A single-vertex removal preserves the pair's cospectrality exactly
    when the vertex is a walk singlet; non-singlet removals are refused
    unless `force` is set (test hook for the converse direction).
    """
    if c in (pair.u, pair.v):
        raise TransformRefused("cannot remove a member of the cospectral pair")
    parity = is_walk_singlet(g, pair, c, tol)
    if parity is None and not force:
        raise TransformRefused(
            f"vertex {c} is not a walk singlet relative to {pair.u},{pair.v}; "
            "single-vertex removal preserves cospectrality only for singlets"
        )
    h = delete_vertices(g, {c})
    new_pair = VertexPair(h.index_map[pair.u], h.index_map[pair.v])
    if not force:
        _require_cospectral(h, new_pair, tol, "remove_vertex_checked")
    record = TransformRecord(
        kind="remove-vertex",
        inputs={"vertex": c, "pair": [pair.u, pair.v], "forced": force},
        certificate={"accepted": not force or parity is not None,
                     "singlet_parity": parity,
                     "new_pair": [new_pair.u, new_pair.v]},
    )
    return h, new_pair, record


def removable_multiplet_check(g: Graph, pair: VertexPair, m: Multiplet,
                              tol: Tolerance = DEFAULT_TOL):
    """Decide whether the whole (uniform) multiplet can be removed.

    The sufficient pattern: every pair inside the subset is itself
    cospectral and, for each such internal pair, every other subset
    vertex is a singlet relative to it.  When it holds, the removal is
    performed and re-verified; the result is (ok, explanation, graph or
    None).
    """
    if not m.uniform:
        raise TransformRefused("removability check applies to uniform multiplets")
    sub = m.subset
    if len(sub) == 1:
        h, _, _ = remove_vertex_checked(g, pair, sub[0], tol=tol)
        return True, "singleton multiplet: reduces to single-vertex removal", h
    for i, mi in enumerate(sub):
        for mj in sub[i + 1:]:
            inner = VertexPair(mi, mj)
            if not is_cospectral_pair(g, inner, tol).accepted:
                return (False,
                        f"internal pair {mi},{mj} is not cospectral", None)
            for mk in sub:
                if mk in (mi, mj):
                    continue
                if is_walk_singlet(g, inner, mk, tol) is None:
                    return (False,
                            f"vertex {mk} is not a singlet relative to the "
                            f"internal pair {mi},{mj}", None)
    h = delete_vertices(g, set(sub))
    new_pair = VertexPair(h.index_map[pair.u], h.index_map[pair.v])
    _require_cospectral(h, new_pair, tol, "removable_multiplet_check")
    return True, "internally cospectral with mutual singlets; removed", h


def force_remove_multiplet(g: Graph, m: Multiplet) -> Graph:
    """Unchecked removal of the subset (test hook for the negative case)."""
    return delete_vertices(g, set(m.subset))


def verify_cone_iff(g: Graph, pair: VertexPair, subset, gamma,
                    tol: Tolerance = DEFAULT_TOL):
    """Two-sided check: cone keeps cospectrality <=> condition holds.

    Builds the cone over (subset, gamma), tests the pair's cospectrality
    there, and independently tests the multiplet condition in g for both
    parities.  Raises VerificationFailed if the verdicts disagree.
    """
    subset = tuple(sorted(subset))
    gamma = tuple(gamma)
    if all(x == 0 for x in gamma):
        raise TransformRefused("gamma must be nonzero")
    # zero entries simply leave the tip disconnected from those vertices
    e = WeightedIndicatorVector(
        support=tuple(s for s, x in zip(subset, gamma) if x != 0),
        gamma=tuple(x for x in gamma if x != 0), ambient=g.n)
    h = cone_over(g, e)
    cone_ok = is_cospectral_pair(h, pair, tol).accepted
    cond_ok = any(
        check_condition(g, pair, subset, gamma, p, tol=tol) for p in (1, -1)
    )
    if cone_ok != cond_ok:
        raise VerificationFailed(
            f"cone/multiplet verdicts disagree for subset {subset}: "
            f"cone={cone_ok} condition={cond_ok}"
        )
    return cone_ok, cond_ok
