"""Parity eigenbasis construction and eigenvector zero-sum checks.

Given a cospectral pair, each eigenvalue cluster contributes at most one
eigenvector with even local parity (phi_u = phi_v != 0), at most one
with odd parity (phi_u = -phi_v != 0), and the rest vanishing on both
pair vertices.  Degenerate clusters are handled exclusively through
eigenspace projectors of e_u +/- e_v, never through raw eigensolver
vectors, because those are basis-ambiguous.

Zero-sum rule: a certified parity-q multiplet with weights gamma forces
sum_m gamma_m phi_m = 0 on every eigenvector of parity -q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cospectral import is_cospectral_pair, is_walk_singlet
from .graph import Graph, VertexPair
from .linalg import (
    DEFAULT_TOL,
    RATIONAL,
    Tolerance,
    cluster_eigenvalues,
    eigenspace_projector,
    symmetric_eigen,
)
from .multiplets import Multiplet, PairContext


class IndeterminateParity(RuntimeError):
    """A projection norm fell in the ambiguous band (tol, 10*tol)."""


@dataclass(frozen=True)
class ClusterBasis:
    value: float
    multiplicity: int
    even: np.ndarray | None
    odd: np.ndarray | None
    zero: tuple[np.ndarray, ...]  # completion vectors, phi_u = phi_v = 0


@dataclass(frozen=True)
class ParityEigenbasis:
    pair: VertexPair
    clusters: tuple[ClusterBasis, ...]

    def vectors(self):
        """(eigenvalue, parity tag, vector) triples in eigenvalue order.

        Tags: +1 even, -1 odd, 0 vanishing on the pair."""
        out = []
        for c in self.clusters:
            if c.even is not None:
                out.append((c.value, 1, c.even))
            if c.odd is not None:
                out.append((c.value, -1, c.odd))
            for z in c.zero:
                out.append((c.value, 0, z))
        return out

    def matrix(self) -> np.ndarray:
        return np.column_stack([v for _, _, v in self.vectors()])


@dataclass(frozen=True)
class ZeroSumReport:
    eigenvalue: float
    eigenvector_parity: int
    multiplet_subset: tuple[int, ...]
    weight_vector_index: int
    residual: float
    verdict: bool


def build_parity_basis(g: Graph, pair: VertexPair,
                       tol: Tolerance = DEFAULT_TOL) -> ParityEigenbasis:
    """Construct the per-cluster even/odd/zero basis for the pair."""
    res = is_cospectral_pair(g, pair, tol)
    if not res.accepted:
        raise ValueError(
            f"pair {pair.u},{pair.v} is not cospectral; no parity basis exists"
        )
    evals, vecs = symmetric_eigen(g.weights, tol)
    n = g.n
    u0, v0 = pair.u - 1, pair.v - 1
    eu_plus = np.zeros(n)
    eu_plus[u0] = 1.0
    eu_plus[v0] = 1.0
    eu_minus = np.zeros(n)
    eu_minus[u0] = 1.0
    eu_minus[v0] = -1.0
    clusters = []
    for idx in cluster_eigenvalues(evals, tol):
        proj = eigenspace_projector(evals, vecs, idx, tol)
        members = []
        even = _parity_vector(proj, eu_plus, tol, evals[idx[0]], "even")
        odd = _parity_vector(proj, eu_minus, tol, evals[idx[0]], "odd")
        if even is not None:
            members.append(even)
        if odd is not None:
            members.append(odd)
        zero = _complete_cluster(proj, members, len(idx), u0, v0, tol)
        clusters.append(ClusterBasis(
            value=float(np.mean([evals[i] for i in idx])),
            multiplicity=len(idx),
            even=even, odd=odd, zero=tuple(zero),
        ))
    basis = ParityEigenbasis(pair=pair, clusters=tuple(clusters))
    m = basis.matrix()
    gram = m.T @ m
    if np.max(np.abs(gram - np.eye(gram.shape[0]))) > 1e-10:
        raise RuntimeError("parity basis lost orthonormality")
    return basis


def _parity_vector(proj, seed, tol, lam, which):
    p = proj @ seed
    norm = float(np.linalg.norm(p))
    if norm <= tol.tol_zero:
        return None
    if norm < 10 * tol.tol_zero:
        raise IndeterminateParity(
            f"{which}-parity projection at eigenvalue {lam:.6g} has norm "
            f"{norm:.3e}, inside the ambiguous band"
        )
    return p / norm


def _complete_cluster(proj, members, multiplicity, u0, v0, tol):
    """Orthonormal completion of the eigenspace; must vanish on u and v."""
    want = multiplicity - len(members)
    if want <= 0:
        return []
    q = proj.copy()
    for m in members:
        q -= np.outer(m, m)
    # the residual projector has rank `want`; its top eigenvectors span it
    w, vv = np.linalg.eigh(q)
    order = np.argsort(w)[::-1]
    out = []
    for i in order[:want]:
        vec = vv[:, i]
        if abs(vec[u0]) > tol.tol_zero or abs(vec[v0]) > tol.tol_zero:
            raise RuntimeError(
                "completion eigenvector has nonzero pair components; "
                "this violates the at-most-one-per-parity structure"
            )
        out.append(vec)
    return out


def count_parity_vectors(basis: ParityEigenbasis) -> tuple[int, int, int]:
    """(n_even, n_odd, n_zero); the three always sum to N."""
    n_even = sum(1 for _, t, _ in basis.vectors() if t == 1)
    n_odd = sum(1 for _, t, _ in basis.vectors() if t == -1)
    n_zero = sum(1 for _, t, _ in basis.vectors() if t == 0)
    return n_even, n_odd, n_zero


def verify_zero_sums(g: Graph, pair: VertexPair, basis: ParityEigenbasis,
                     m: Multiplet,
                     tol: Tolerance = DEFAULT_TOL) -> list[ZeroSumReport]:
    """Zero-sum residuals of every opposite-parity eigenvector against
    every basis weight vector of the multiplet."""
    parities = (1, -1) if m.parity == "both" else (m.parity,)
    idx = [s - 1 for s in m.subset]
    reports = []
    for q in parities:
        for lam, tag, vec in basis.vectors():
            if tag != -q:
                continue
            phi = vec[idx]
            for wi, gamma in enumerate(m.weight_space):
                garr = np.array([float(x) for x in gamma])
                residual = float(abs(garr @ phi))
                bound = tol.tol_zero * float(
                    np.linalg.norm(vec) * np.linalg.norm(garr)
                )
                reports.append(ZeroSumReport(
                    eigenvalue=lam, eigenvector_parity=tag,
                    multiplet_subset=m.subset, weight_vector_index=wi,
                    residual=residual,
                    verdict=residual <= max(bound, tol.tol_zero),
                ))
    return reports


def rationalized_zero_sum_check(g: Graph, pair: VertexPair, subset, gamma,
                                parity: int,
                                tol: Tolerance = DEFAULT_TOL) -> bool:
    """Exact-mode zero-sum verdict via the condition-matrix route.

    For rational graphs the eigen decomposition is float, but the
    zero-sum statement is equivalent to the walk condition, which is
    checked exactly here.
    """
    if g.mode != RATIONAL:
        raise ValueError("exact route requires a rational graph")
    ctx = PairContext(g, pair, tol)
    cm = ctx.condition_matrix(tuple(sorted(subset)), parity)
    vals = cm.entries.matvec(tuple(gamma))
    return all(x == 0 for x in vals)


def compact_support_report(g: Graph, pair: VertexPair,
                           basis: ParityEigenbasis,
                           tol: Tolerance = DEFAULT_TOL):
    """Per-eigenvector zero-sets, cross-checked against singlet lists.

    Every parity-p eigenvector must vanish on every parity-(-p) walk
    singlet; a violation is a theorem breach and raises.
    Returns a list of dicts: eigenvalue, parity, zero_set (1-based).
    """
    singlets = {1: [], -1: []}
    for c in range(1, g.n + 1):
        if c in (pair.u, pair.v):
            continue
        got = is_walk_singlet(g, pair, c, tol)
        if got in (1, "both"):
            singlets[1].append(c)
        if got in (-1, "both"):
            singlets[-1].append(c)
    out = []
    for lam, tag, vec in basis.vectors():
        zero_set = [i + 1 for i in range(g.n) if abs(vec[i]) <= tol.tol_zero]
        if tag in (1, -1):
            for c in singlets[-tag]:
                if c not in zero_set:
                    raise RuntimeError(
                        f"parity-{-tag} singlet {c} carries a nonzero "
                        f"component on a parity-{tag} eigenvector"
                    )
        out.append({"eigenvalue": lam, "parity": tag, "zero_set": zero_set})
    return out
