"""Dense linear algebra over a dual scalar tower.

Matrices come in two modes that never mix:

* ``rational`` -- entries are :class:`fractions.Fraction`; every operation
  is exact.  Hot paths clear denominators once and work on Python big
  integers, which is both exact and much faster than Fraction arithmetic.
* ``float`` -- entries are IEEE doubles; comparisons are governed by a
  :class:`Tolerance` record.

All matrices are immutable after construction; operations return new
objects and are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

RATIONAL = "rational"
FLOAT = "float"


@dataclass(frozen=True)
class Tolerance:
    """Float-mode thresholds.

    tol_zero: absolute zero threshold applied after scaling by 1/inf-norm.
    tol_sym: allowed asymmetry |M[i,j] - M[j,i]|.
    tol_eig_cluster: eigenvalue grouping width, relative to spectral radius.
    """

    tol_zero: float = 1e-9
    tol_sym: float = 1e-12
    tol_eig_cluster: float = 1e-8

    def __post_init__(self):
        if min(self.tol_zero, self.tol_sym, self.tol_eig_cluster) <= 0:
            raise ValueError("all tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def close(a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Scaled float equality: |a-b| <= tol_zero * max(1, |a|, |b|)."""
    return abs(a - b) <= tol.tol_zero * max(1.0, abs(a), abs(b))


class Matrix:
    """Immutable dense matrix with a per-matrix scalar mode.

    Rational entries are stored as tuples of Fractions (always in lowest
    terms with positive denominator, which Fraction guarantees); float
    entries as a read-only numpy array.
    """

    __slots__ = ("mode", "n_rows", "n_cols", "_rows", "_arr")

    def __init__(self, rows, mode=RATIONAL):
        if mode not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        if mode == RATIONAL:
            self._rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
            self.n_rows = len(self._rows)
            self.n_cols = len(self._rows[0]) if self._rows else 0
            if any(len(r) != self.n_cols for r in self._rows):
                raise ValueError("ragged rows")
            self._arr = None
        else:
            arr = np.array(rows, dtype=float)
            if arr.ndim != 2:
                raise ValueError("matrix must be 2-dimensional")
            arr.setflags(write=False)
            self._arr = arr
            self.n_rows, self.n_cols = arr.shape
            self._rows = None

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n, mode=RATIONAL):
        if mode == RATIONAL:
            one, zero = Fraction(1), Fraction(0)
            return cls([[one if i == j else zero for j in range(n)] for i in range(n)])
        return cls(np.eye(n), mode=FLOAT)

    @classmethod
    def zeros(cls, n_rows, n_cols, mode=RATIONAL):
        if mode == RATIONAL:
            z = Fraction(0)
            return cls([[z] * n_cols for _ in range(n_rows)])
        return cls(np.zeros((n_rows, n_cols)), mode=FLOAT)

    @classmethod
    def symmetric(cls, rows, mode=RATIONAL, tol: Tolerance = DEFAULT_TOL):
        """Construct and verify symmetry (exact or within tol_sym)."""
        m = cls(rows, mode=mode)
        if m.n_rows != m.n_cols:
            raise ValueError("symmetric matrix must be square")
        if mode == RATIONAL:
            for i in range(m.n_rows):
                for j in range(i):
                    if m._rows[i][j] != m._rows[j][i]:
                        raise ValueError(f"asymmetric entries at ({i},{j})")
        else:
            if not np.all(np.abs(m._arr - m._arr.T) <= tol.tol_sym):
                raise ValueError("asymmetry beyond tol_sym")
        return m

    # -- access -------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        if self.mode == RATIONAL:
            return self._rows[i][j]
        return float(self._arr[i, j])

    def row(self, i):
        if self.mode == RATIONAL:
            return self._rows[i]
        return tuple(float(x) for x in self._arr[i])

    def rows(self):
        if self.mode == RATIONAL:
            return self._rows
        return tuple(tuple(float(x) for x in r) for r in self._arr)

    def diagonal(self):
        if self.mode == RATIONAL:
            return tuple(self._rows[i][i] for i in range(min(self.n_rows, self.n_cols)))
        return tuple(float(x) for x in np.diagonal(self._arr))

    def to_float_array(self) -> np.ndarray:
        if self.mode == FLOAT:
            return np.array(self._arr, dtype=float)
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    @property
    def is_square(self):
        return self.n_rows == self.n_cols

    def inf_norm(self) -> float:
        if self.n_rows == 0:
            return 0.0
        if self.mode == RATIONAL:
            return max(float(sum(abs(x) for x in r)) for r in self._rows)
        return float(np.max(np.sum(np.abs(self._arr), axis=1))) if self.n_rows else 0.0

    # -- arithmetic ---------------------------------------------------

    def _check_mode(self, other):
        if self.mode != other.mode:
            raise ValueError("mode mismatch: matrices never mix scalar modes")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch in matmul")
        if self.mode == FLOAT:
            return Matrix(self._arr @ other._arr, mode=FLOAT)
        bt = list(zip(*other._rows))
        return Matrix(
            [[_dot(r, c) for c in bt] for r in self._rows]
        )

    def matvec(self, vec):
        if self.mode == FLOAT:
            return tuple(float(x) for x in self._arr @ np.asarray(vec, dtype=float))
        return tuple(_dot(r, vec) for r in self._rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.mode == FLOAT:
            return Matrix(self._arr + other._arr, mode=FLOAT)
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_mode(other)
        if self.mode == FLOAT:
            return Matrix(self._arr - other._arr, mode=FLOAT)
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)]
        )

    def scale(self, s) -> "Matrix":
        if self.mode == FLOAT:
            return Matrix(self._arr * float(s), mode=FLOAT)
        s = Fraction(s)
        return Matrix([[s * x for x in r] for r in self._rows])

    def transpose(self) -> "Matrix":
        if self.mode == FLOAT:
            return Matrix(self._arr.T, mode=FLOAT)
        return Matrix(list(zip(*self._rows)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.mode != other.mode or self.n_rows != other.n_rows or self.n_cols != other.n_cols:
            return False
        if self.mode == FLOAT:
            return bool(np.array_equal(self._arr, other._arr))
        return self._rows == other._rows

    def __hash__(self):
        if self.mode == RATIONAL:
            return hash((RATIONAL, self._rows))
        return hash((FLOAT, self._arr.tobytes()))

    def __repr__(self):
        return f"Matrix({self.n_rows}x{self.n_cols}, {self.mode})"


def _dot(a, b):
    s = 0
    for x, y in zip(a, b):
        s += x * y
    return s


# -- scaled integer representation -------------------------------------


def scaled_int_rows(m: Matrix) -> tuple[list[list[int]], int]:
    """Return (S, d) with d > 0 integer and m == S / d, entries of S int.

    Only valid for rational matrices.  Multiplying a matrix by a positive
    scalar rescales its k-th power by a known positive factor, so every
    homogeneous per-power identity (equal diagonals, walk-sum
    proportionality, null spaces of per-power condition rows) may be
    checked on S instead of m.
    """
    if m.mode != RATIONAL:
        raise ValueError("scaled_int_rows requires rational mode")
    d = 1
    for r in m._rows:
        for x in r:
            d = d * x.denominator // math.gcd(d, x.denominator)
    S = [[int(x * d) for x in r] for r in m._rows]
    return S, d


def int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def int_walk_rows(S: list[list[int]], start: int, k_max: int) -> list[list[int]]:
    """Rows e_start^T S^k for k = 0..k_max, via iterated vector-matrix products."""
    n = len(S)
    row = [0] * n
    row[start] = 1
    out = [row]
    for _ in range(k_max):
        row = [sum(row[i] * S[i][j] for i in range(n) if row[i]) for j in range(n)]
        out.append(row)
    return out


# -- operations ---------------------------------------------------------


def power_sequence(m: Matrix, k_max: int) -> list[Matrix]:
    """[m^0, m^1, ..., m^k_max]; m^0 is the identity."""
    if not m.is_square:
        raise ValueError("power_sequence requires a square matrix")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    out = [Matrix.identity(m.n_rows, mode=m.mode)]
    if m.mode == FLOAT:
        p = np.eye(m.n_rows)
        a = m.to_float_array()
        for _ in range(k_max):
            p = p @ a
            out.append(Matrix(p, mode=FLOAT))
        return out
    # exact path: big-int powers of the cleared-denominator matrix
    S, d = scaled_int_rows(m)
    P = [[1 if i == j else 0 for j in range(m.n_rows)] for i in range(m.n_rows)]
    dk = 1
    for _ in range(k_max):
        P = int_matmul(P, S)
        dk *= d
        out.append(Matrix([[Fraction(x, dk) for x in r] for r in P]))
    return out


def char_poly(m: Matrix, tol: Tolerance = DEFAULT_TOL) -> list:
    """Monic characteristic polynomial coefficients, highest power first.

    Rational mode: exact Faddeev-LeVerrier recurrence (all divisions are
    exact on integer input, so the big-int fast path stays in integers).
    Float mode: from eigenvalues of the symmetrized matrix.
    """
    if not m.is_square:
        raise ValueError("char_poly requires a square matrix")
    n = m.n_rows
    if m.mode == FLOAT:
        a = m.to_float_array()
        evals = np.linalg.eigvalsh((a + a.T) / 2.0)
        return [float(c) for c in np.poly(evals)]
    S, d = scaled_int_rows(m)
    coeffs_scaled = _int_char_poly(S)  # char poly of S = d*m
    # lambda^n + c1 lambda^(n-1) + ... ; coeff j of m is c_j / d^j
    out = [Fraction(1)]
    for j, c in enumerate(coeffs_scaled[1:], start=1):
        out.append(Fraction(c, d**j))
    return out


def _int_char_poly(S: list[list[int]]) -> list[int]:
    """Faddeev-LeVerrier over Python ints; divisions are exact."""
    n = len(S)
    coeffs = [1]
    B = [row[:] for row in S]
    for k in range(1, n + 1):
        tr = sum(B[i][i] for i in range(n))
        assert tr % k == 0
        c = -(tr // k)
        coeffs.append(c)
        if k < n:
            for i in range(n):
                B[i][i] += c
            B = int_matmul(S, B)
    return coeffs


def null_space_basis(m: Matrix, tol: Tolerance = DEFAULT_TOL) -> list[tuple]:
    """Canonical basis of the right null space.

    Rational: exact elimination; the returned vectors, read as rows,
    form a reduced echelon family with leading entry 1 and pivots in
    increasing coordinate order.  Float: SVD with a relative rank
    cutoff of tol_zero, then the same echelon canonicalization.
    """
    if m.mode == RATIONAL:
        basis = _rational_null_space(m._rows, m.n_cols)
        return _canonicalize_rational(basis)
    a = m.to_float_array()
    if m.n_rows == 0 or m.n_cols == 0:
        return [
            tuple(1.0 if i == j else 0.0 for j in range(m.n_cols))
            for i in range(m.n_cols)
        ]
    _, sv, vt = np.linalg.svd(a)
    cutoff = tol.tol_zero * (sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > cutoff)) if sv.size else 0
    basis = [tuple(float(x) for x in vt[i]) for i in range(rank, m.n_cols)]
    return _canonicalize_float(basis, tol)


def _rational_null_space(rows, n_cols):
    a = [list(r) for r in rows]
    n_rows = len(a)
    pivots = []  # (row, col)
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
        if r == n_rows:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n_cols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * n_cols
        v[free] = Fraction(1)
        for pr, pc in pivots:
            v[pc] = -a[pr][free]
        basis.append(tuple(v))
    return basis


def _canonicalize_rational(basis):
    """Reduced echelon form of the basis (vectors as rows), leading 1s."""
    if not basis:
        return []
    a = [list(v) for v in basis]
    n_cols = len(a[0])
    out_pivots = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        out_pivots.append(c)
        r += 1
    return [tuple(a[i]) for i in range(r)]


def _canonicalize_float(basis, tol: Tolerance):
    if not basis:
        return []
    a = np.array(basis, dtype=float)
    n_rows, n_cols = a.shape
    scale = np.max(np.abs(a)) or 1.0
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        piv = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[piv, c]) <= tol.tol_zero * scale:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(n_rows):
            if i != r:
                a[i] = a[i] - a[i, c] * a[r]
        r += 1
        if r == n_rows:
            break
    return [tuple(float(x) for x in a[i]) for i in range(r)]


def symmetric_eigen(m: Matrix, tol: Tolerance = DEFAULT_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Rational matrices are converted to floats; symmetry is required
    within tol_sym either way.
    """
    if not m.is_square:
        raise ValueError("symmetric_eigen requires a square matrix")
    a = m.to_float_array()
    if np.any(np.abs(a - a.T) > tol.tol_sym * max(1.0, np.max(np.abs(a)) if a.size else 1.0)):
        raise ValueError("symmetry violation beyond tol_sym")
    a = (a + a.T) / 2.0
    evals, vecs = np.linalg.eigh(a)
    return [float(x) for x in evals], vecs


def eigenspace_projector(evals, vecs, cluster, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """P = sum of phi phi^T over the index cluster of one eigenvalue.

    Refuses clusters mixing eigenvalues separated beyond
    tol_eig_cluster * spectral radius.
    """
    cluster = list(cluster)
    if not cluster:
        raise ValueError("empty cluster")
    lam = [evals[i] for i in cluster]
    rad = max(abs(e) for e in evals) or 1.0
    if max(lam) - min(lam) > tol.tol_eig_cluster * rad:
        raise ValueError("cluster mixes distinct eigenvalues")
    v = vecs[:, cluster]
    return v @ v.T


def cluster_eigenvalues(evals, tol: Tolerance = DEFAULT_TOL) -> list[list[int]]:
    """Group ascending eigenvalues into near-degenerate clusters."""
    if not evals:
        return []
    rad = max(abs(e) for e in evals) or 1.0
    width = tol.tol_eig_cluster * rad
    clusters = [[0]]
    for i in range(1, len(evals)):
        if evals[i] - evals[clusters[-1][0]] <= width:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters
