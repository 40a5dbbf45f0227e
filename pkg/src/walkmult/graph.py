"""Graph type, file I/O, and structural edits.

A graph is a symmetric weighted adjacency matrix with optional vertex
labels; diagonal entries are loop weights.  Vertex indices are 1-based
in every public interface (files, function arguments, reports) and
0-based only inside matrix storage.

Two interchangeable file formats round-trip:

* JSON object: ``{"n": 3, "mode": "rational", "edges": [[1, 2, "1"], ...]}``
  with loops encoded as ``i == j``.
* Edge list: header line ``n <N> mode <mode>`` followed by ``i j w`` lines.

Weight strings accept optional sign, integers, ``p/q`` rationals, and
decimals (a finite decimal is exactly p/10^k, hence parses as a rational
in rational mode).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .linalg import DEFAULT_TOL, FLOAT, RATIONAL, Matrix, Tolerance


class GraphFormatError(ValueError):
    """Malformed graph file; message carries line/field location."""


@dataclass(frozen=True, order=True)
class VertexPair:
    """Unordered pair of distinct 1-based vertices, stored with u < v."""

    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("pair vertices must be distinct")
        if self.u > self.v:
            u, v = self.u, self.v
            object.__setattr__(self, "u", v)
            object.__setattr__(self, "v", u)

    def __iter__(self):
        return iter((self.u, self.v))


@dataclass(frozen=True)
class WeightedIndicatorVector:
    """Vertex subset with one nonzero weight per support vertex."""

    support: tuple[int, ...]  # 1-based, sorted ascending
    gamma: tuple
    ambient: int

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty support")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be sorted and duplicate-free")
        if len(self.gamma) != len(self.support):
            raise ValueError("gamma length must match support")
        if any(g == 0 for g in self.gamma):
            raise ValueError("all gamma entries must be nonzero")
        if self.support[0] < 1 or self.support[-1] > self.ambient:
            raise ValueError("support vertex out of range")

    def dense(self):
        """Length-`ambient` vector with gamma on the support, 0 elsewhere."""
        out = [Fraction(0)] * self.ambient
        for s, g in zip(self.support, self.gamma):
            out[s - 1] = g
        return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph; edits return new graphs."""

    weights: Matrix
    labels: tuple[str, ...] | None = None
    index_map: dict[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.weights.is_square:
            raise ValueError("adjacency matrix must be square")
        if self.labels is not None and len(self.labels) != self.weights.n_rows:
            raise ValueError("label count must match vertex count")

    @property
    def n(self) -> int:
        return self.weights.n_rows

    @property
    def mode(self) -> str:
        return self.weights.mode

    def weight(self, i: int, j: int):
        """Edge (or loop) weight between 1-based vertices i, j."""
        return self.weights[i - 1, j - 1]

    def edges(self):
        """Sorted (i, j, w) triples with i <= j and w != 0, 1-based."""
        out = []
        for i in range(self.n):
            for j in range(i, self.n):
                w = self.weights[i, j]
                if w != 0:
                    out.append((i + 1, j + 1, w))
        return out


_WEIGHT_RE = re.compile(
    r"^[+-]?(\d+(/\d+)?|\d*\.\d+([eE][+-]?\d+)?|\d+[eE][+-]?\d+)$"
)


def parse_weight(text: str, mode: str):
    """Parse one weight string in the given scalar mode."""
    text = text.strip()
    if not _WEIGHT_RE.match(text):
        raise GraphFormatError(f"malformed weight {text!r}")
    if mode == FLOAT:
        return float(Fraction(text))
    return Fraction(text)


def format_weight(w) -> str:
    if isinstance(w, Fraction):
        return str(w)
    return repr(float(w))


def _build_matrix(n, mode, triples, source="input"):
    zero = Fraction(0) if mode == RATIONAL else 0.0
    rows = [[zero] * n for _ in range(n)]
    seen = {}
    for lineno, i, j, w in triples:
        where = f"{source}, entry {lineno}"
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphFormatError(f"{where}: vertex index out of range (n={n})")
        key = (min(i, j), max(i, j))
        if key in seen and seen[key] != w:
            raise GraphFormatError(
                f"{where}: conflicting duplicate declaration of edge {key}"
            )
        seen[key] = w
        rows[i - 1][j - 1] = w
        rows[j - 1][i - 1] = w
    return Matrix.symmetric(rows, mode=mode)


def load_graph(source) -> Graph:
    """Load a graph from a path, a file object, or raw text."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
        p = Path(text)
        try:
            if len(text) < 4096 and p.is_file():
                text = p.read_text(encoding="utf-8")
        except OSError:
            pass
    text = text.strip()
    if not text:
        raise GraphFormatError("empty graph file")
    if text.startswith("{"):
        return _load_json(text)
    return _load_edge_list(text)


def _load_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"invalid JSON: {e}") from e
    try:
        n = int(obj["n"])
        mode = obj["mode"]
        edges = obj["edges"]
    except (KeyError, TypeError) as e:
        raise GraphFormatError(f"missing field: {e}") from e
    if mode not in (RATIONAL, FLOAT):
        raise GraphFormatError(f"unknown mode {mode!r}")
    if n < 1:
        raise GraphFormatError("n must be positive")
    triples = []
    for k, e in enumerate(edges, start=1):
        if len(e) != 3:
            raise GraphFormatError(f"edge {k}: expected [i, j, weight]")
        i, j, w = e
        triples.append((k, int(i), int(j), parse_weight(str(w), mode)))
    labels = tuple(obj["labels"]) if obj.get("labels") else None
    return Graph(_build_matrix(n, mode, triples), labels=labels)


def _load_edge_list(text: str) -> Graph:
    lines = [ln for ln in text.splitlines()]
    header = None
    triples = []
    for lineno, raw in enumerate(lines, start=1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if header is None:
            m = re.match(r"^n\s+(\d+)\s+mode\s+(\w+)$", ln)
            if not m:
                raise GraphFormatError(
                    f"line {lineno}: expected header 'n <N> mode <mode>'"
                )
            n, mode = int(m.group(1)), m.group(2)
            if mode not in (RATIONAL, FLOAT):
                raise GraphFormatError(f"line {lineno}: unknown mode {mode!r}")
            header = (n, mode)
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'i j w'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise GraphFormatError(f"line {lineno}: bad vertex index") from e
        try:
            w = parse_weight(parts[2], header[1])
        except GraphFormatError as e:
            raise GraphFormatError(f"line {lineno}: {e}") from e
        triples.append((lineno, i, j, w))
    if header is None:
        raise GraphFormatError("missing header line")
    return Graph(_build_matrix(header[0], header[1], triples, source="edge list"))


def save_graph(g: Graph, fmt: str = "json") -> str:
    """Canonical serialization; load_graph(save_graph(g)) == g."""
    edges = [[i, j, format_weight(w)] for i, j, w in g.edges()]
    if fmt == "json":
        obj = {"n": g.n, "mode": g.mode, "edges": edges}
        if g.labels:
            obj["labels"] = list(g.labels)
        return json.dumps(obj, indent=1)
    lines = [f"n {g.n} mode {g.mode}"]
    lines += [f"{i} {j} {w}" for i, j, w in edges]
    return "\n".join(lines) + "\n"


# -- structural edits ---------------------------------------------------


def delete_vertices(g: Graph, remove) -> Graph:
    """Principal submatrix on the complement of `remove` (1-based set).

    The result records an old->new 1-based index map for surviving
    vertices.
    """
    remove = set(remove)
    if not remove:
        return Graph(g.weights, labels=g.labels,
                     index_map={i: i for i in range(1, g.n + 1)})
    if any(v < 1 or v > g.n for v in remove):
        raise ValueError("vertex to delete out of range")
    keep = [i for i in range(1, g.n + 1) if i not in remove]
    if not keep:
        raise ValueError("cannot delete every vertex")
    rows = [[g.weights[i - 1, j - 1] for j in keep] for i in keep]
    labels = tuple(g.labels[i - 1] for i in keep) if g.labels else None
    index_map = {old: new for new, old in enumerate(keep, start=1)}
    return Graph(Matrix.symmetric(rows, mode=g.mode), labels=labels,
                 index_map=index_map)


def cone_over(g: Graph, e: WeightedIndicatorVector) -> Graph:
    """Attach a new tip vertex c = n+1 to the support of e, edge weights
    gamma, loop weight 0 on the tip."""
    if e.ambient != g.n:
        raise ValueError("indicator vector ambient size mismatch")
    dense = e.dense()
    if g.mode == FLOAT:
        dense = tuple(float(x) for x in dense)
    zero = Fraction(0) if g.mode == RATIONAL else 0.0
    rows = [list(g.weights.row(i)) + [dense[i]] for i in range(g.n)]
    rows.append(list(dense) + [zero])
    labels = g.labels + ("tip",) if g.labels else None
    return Graph(Matrix.symmetric(rows, mode=g.mode), labels=labels)


def apply_permutation(g: Graph, perm) -> Graph:
    """Relabel vertices: perm[i-1] is the new 1-based index of vertex i."""
    perm = list(perm)
    if sorted(perm) != list(range(1, g.n + 1)):
        raise ValueError("permutation must be a bijection on 1..n")
    inv = [0] * g.n
    for old, new in enumerate(perm, start=1):
        inv[new - 1] = old
    rows = [[g.weights[inv[i] - 1, inv[j] - 1] for j in range(g.n)] for i in range(g.n)]
    labels = tuple(g.labels[inv[i] - 1] for i in range(g.n)) if g.labels else None
    return Graph(Matrix.symmetric(rows, mode=g.mode), labels=labels)


def set_edge(g: Graph, i: int, j: int, w) -> Graph:
    """Return a copy with H[i,j] = H[j,i] = w (1-based)."""
    rows = [list(r) for r in g.weights.rows()]
    if g.mode == RATIONAL:
        w = Fraction(w)
    else:
        w = float(w)
    rows[i - 1][j - 1] = w
    rows[j - 1][i - 1] = w
    return Graph(Matrix.symmetric(rows, mode=g.mode), labels=g.labels)


def graph_from_edges(n: int, edges, mode: str = RATIONAL) -> Graph:
    """Build a graph from (i, j, w) triples, 1-based, loops as i == j."""
    triples = []
    for k, (i, j, w) in enumerate(edges, start=1):
        if mode == RATIONAL:
            w = Fraction(w)
        else:
            w = float(w)
        triples.append((k, i, j, w))
    return Graph(_build_matrix(n, mode, triples))
