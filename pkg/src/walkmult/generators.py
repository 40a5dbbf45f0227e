"""Graph templates with planted cospectral pairs, and pipelines that
break the witnessing automorphism while keeping the pair cospectral.

Every template plants a pair that is cospectral *by symmetry*: an
exchange automorphism maps u to v.  The symmetry-breaking pipeline then
applies certified modifications (cones over multiplets, interconnects)
that destroy the automorphism but, by construction, keep the pair
cospectral — yielding instances where cospectrality has no symmetry
witness.
"""

from __future__ import annotations

import hashlib
import json
import random
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

from .cospectral import is_cospectral_pair
from .graph import Graph, VertexPair, graph_from_edges, save_graph
from .linalg import DEFAULT_TOL, RATIONAL, Tolerance
from .multiplets import Multiplet, enumerate_multiplets
from .symmetry import find_automorphisms, has_exchange_automorphism
from .transforms import TransformRecord, extend_by_cone, interconnect_multiplets

TEMPLATES = ("path", "cycle", "ladder", "prism", "signed-star", "two-lobe")


@dataclass(frozen=True)
class TemplateInstance:
    name: str
    seed: int
    graph: Graph
    pair: VertexPair
    weight_classes: tuple[tuple[tuple[int, int], ...], ...]
    params: dict = field(compare=False, default_factory=dict)

    def fingerprint(self) -> str:
        """Content hash of the canonical serialization (graph + pair)."""
        payload = save_graph(self.graph, fmt="json")
        blob = json.dumps(
            {"graph": json.loads(payload), "pair": [self.pair.u, self.pair.v]},
            sort_keys=True, separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _random_weight(rng: random.Random) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 4))


def _template_edges(name: str, params: dict):
    """(n, edge classes, pair).  Each class is a set of edges that must
    share a weight for the planted exchange automorphism to exist."""
    if name == "path":
        n = int(params.get("n", 5))
        if n < 3 or n % 2 == 0:
            raise ValueError("path template needs odd n >= 3")
        mid = (n + 1) // 2
        classes = []
        for i in range(1, mid):
            # edge i-(i+1) mirrors edge (n-i)-(n-i+1)
            cls = {(i, i + 1), (n - i, n - i + 1)}
            classes.append(tuple(sorted(cls)))
        return n, classes, VertexPair(1, n)
    if name == "cycle":
        n = int(params.get("n", 6))
        if n < 4 or n % 2 == 1:
            raise ValueError("cycle template needs even n >= 4")
        # reflection fixing vertex n and vertex n//2 swaps i <-> n-i
        classes = {}
        for i in range(1, n + 1):
            a, b = i, i % n + 1
            e = (min(a, b), max(a, b))
            ra, rb = (n - a) % n or n, (n - b) % n or n
            m = (min(ra, rb), max(ra, rb))
            key = min(e, m)
            classes.setdefault(key, set()).update([e, m])
        return n, [tuple(sorted(c)) for _, c in sorted(classes.items())], \
            VertexPair(1, n - 1)
    if name == "ladder":
        rungs = int(params.get("rungs", 3))
        if rungs < 2:
            raise ValueError("ladder needs at least 2 rungs")
        n = 2 * rungs
        # top leg 1..rungs, bottom leg rungs+1..2*rungs, swap i <-> i+rungs
        classes = []
        for i in range(1, rungs):
            classes.append(tuple(sorted(
                {(i, i + 1), (i + rungs, i + rungs + 1)})))
        for i in range(1, rungs + 1):
            classes.append(((i, i + rungs),))
        mid = (rungs + 1) // 2
        return n, classes, VertexPair(mid, mid + rungs)
    if name == "prism":
        # two triangles joined by three rungs; swap i <-> i+3
        classes = [
            tuple(sorted({(1, 2), (4, 5)})),
            tuple(sorted({(2, 3), (5, 6)})),
            tuple(sorted({(1, 3), (4, 6)})),
            ((1, 4),), ((2, 5),), ((3, 6),),
        ]
        return 6, classes, VertexPair(1, 4)
    if name == "signed-star":
        leaves = int(params.get("leaves", 4))
        if leaves < 2 or leaves % 2 == 1:
            raise ValueError("signed-star needs an even leaf count >= 2")
        n = leaves + 1
        hub = n
        classes = []
        for i in range(1, leaves // 2 + 1):
            j = leaves + 1 - i
            classes.append(tuple(sorted({(i, hub), (j, hub)})))
        return n, classes, VertexPair(1, leaves)
    if name == "two-lobe":
        # two triangles sharing a hinge vertex; swap across the hinge
        # 1-2-5 triangle mirrors 3-4-5 triangle under (1 4)(2 3)
        classes = [
            tuple(sorted({(1, 2), (3, 4)})),
            tuple(sorted({(1, 5), (4, 5)})),
            tuple(sorted({(2, 5), (3, 5)})),
        ]
        return 5, classes, VertexPair(1, 4)
    raise ValueError(f"unknown template {name!r}; choose from {TEMPLATES}")


def build_template(name: str, seed: int = 0, *, mode: str = RATIONAL,
                   tol: Tolerance = DEFAULT_TOL,
                   **params) -> TemplateInstance:
    """Instantiate a template with seeded random weights.

    Edges in the same weight class get the same random rational weight,
    which guarantees the planted exchange automorphism and hence the
    planted cospectral pair.
    """
    n, classes, pair = _template_edges(name, params)
    rng = random.Random((zlib.crc32(name.encode()) & 0xFFFFFFFF) ^ seed)
    edges = []
    for cls in classes:
        w = _random_weight(rng)
        for k, (a, b) in enumerate(cls):
            # the signed star's witness maps leaf i to -leaf j: the two
            # hub edges in a class carry opposite signs
            sign = -1 if (name == "signed-star" and k == 1) else 1
            edges.append((a, b, sign * w))
    g = graph_from_edges(n, edges, mode=mode)
    inst = TemplateInstance(name=name, seed=seed, graph=g, pair=pair,
                            weight_classes=tuple(classes), params=dict(params))
    res = is_cospectral_pair(g, pair, tol)
    if not res.accepted:
        raise RuntimeError(f"template {name} lost its planted pair")
    # the signed star's symmetry is a *signed* permutation, which the
    # plain automorphism search does not (and should not) find
    if name != "signed-star" and has_exchange_automorphism(g, pair) is False:
        raise RuntimeError(f"template {name} lost its planted automorphism")
    return inst


def sample_weight_classes(g: Graph, pair: VertexPair, partition, *,
                          samples: int = 5, seed: int = 0, max_size: int = 2,
                          tol: Tolerance = DEFAULT_TOL):
    """Which multiplets survive every random re-weighting of the graph?

    `partition` is a list of edge groups (each a list of (i, j) pairs)
    covering all edges; each group gets one random rational weight per
    sample, everything else about the topology is kept.  A multiplet
    reported for all samples is "parametrically robust" — a
    probabilistic surrogate for a symbolic weight-parameter proof.

    Returns (robust records, flags); records carry (subset, parity).
    """
    flags = []
    if samples < 2:
        flags.append("insufficient samples")
    covered = {(min(i, j), max(i, j)) for grp in partition for (i, j) in grp}
    declared = {(i, j) for (i, j, _) in g.edges()}
    if covered != declared:
        raise ValueError("partition must cover exactly the graph's edges")
    rng = random.Random(seed)
    robust = None
    for _ in range(samples):
        edges = []
        for grp in partition:
            w = _random_weight(rng)
            for (i, j) in grp:
                edges.append((i, j, w))
        h = graph_from_edges(g.n, edges, mode=RATIONAL)
        if not is_cospectral_pair(h, pair, tol).accepted:
            keys = set()
        else:
            found = enumerate_multiplets(h, pair, max_cardinality=max_size,
                                         tol=tol)
            keys = {(m.subset, m.parity) for m in found}
        robust = keys if robust is None else robust & keys
    records = sorted(robust or set(), key=lambda k: (len(k[0]), k[0], str(k[1])))
    return records, flags


@dataclass(frozen=True)
class PipelineResult:
    graph: Graph
    pair: VertexPair
    records: tuple[TransformRecord, ...]
    symmetric_before: bool | None
    symmetric_after: bool | None

    def replay_key(self) -> str:
        payload = save_graph(self.graph, fmt="json")
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _pick_multiplet(g: Graph, pair: VertexPair, rng: random.Random,
                    tol: Tolerance, max_size: int = 3) -> Multiplet | None:
    found = enumerate_multiplets(g, pair, max_cardinality=max_size, tol=tol)
    found = [m for m in found if m.weight_space]
    if not found:
        return None
    return rng.choice(found)


def _random_in_space(m: Multiplet, rng: random.Random, *,
                     rational: bool, attempts: int = 20):
    """Random fully supported element of the multiplet's weight space."""
    for _ in range(attempts):
        coeffs = [Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                  for _ in m.weight_space]
        gamma = [sum(c * b[i] for c, b in zip(coeffs, m.weight_space))
                 for i in range(m.cardinality)]
        if rational:
            if all(x != 0 for x in gamma):
                return tuple(gamma)
        else:
            vals = tuple(float(x) for x in gamma)
            if all(abs(x) > 1e-6 for x in vals):
                return vals
    return None


def break_symmetry_pipeline(g: Graph, pair: VertexPair, *, steps: int = 2,
                            seed: int = 0,
                            tol: Tolerance = DEFAULT_TOL) -> PipelineResult:
    """Apply `steps` certified cone extensions with asymmetric weights.

    Cones over multiplets keep the pair cospectral regardless of the
    chosen in-space weights, so drawing random weight-space elements
    perturbs the mirror symmetry without touching cospectrality.
    Replay with the same seed is bit-exact.
    """
    rng = random.Random(seed)
    before = has_exchange_automorphism(g, pair)
    records = []
    cur = g
    for _ in range(steps):
        m = _pick_multiplet(cur, pair, rng, tol)
        if m is None:
            break
        gamma = _random_in_space(m, rng, rational=cur.mode == RATIONAL)
        if gamma is None:
            continue
        try:
            cur, _tip, rec = extend_by_cone(
                cur, m, gamma=gamma,
                provenance=(f"pipeline seed={seed}",), tol=tol)
        except Exception:
            continue
        records.append(rec)
        if find_automorphisms(cur).trivial:
            break
    after = has_exchange_automorphism(cur, pair)
    res = is_cospectral_pair(cur, pair, tol)
    if not res.accepted:
        raise RuntimeError("pipeline broke cospectrality; refusing to return")
    return PipelineResult(graph=cur, pair=pair, records=tuple(records),
                          symmetric_before=before, symmetric_after=after)


def fixture_bundle(instances) -> dict:
    """Content-addressed bundle of template instances for test corpora."""
    items = {}
    for inst in instances:
        items[inst.fingerprint()] = {
            "name": inst.name,
            "seed": inst.seed,
            "pair": [inst.pair.u, inst.pair.v],
            "graph": json.loads(save_graph(inst.graph, fmt="json")),
        }
    return {
        "count": len(items),
        "items": dict(sorted(items.items())),
    }
