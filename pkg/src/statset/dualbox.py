"""Dyadic-square tuples and the block-triangular determinant lower bound.

Given k+1 horizontal nodes t_j in a 1/K interval (1/(kK)-separated) and a
vertical sample s_j per node, the volume of the convex hull of the surface
caps over the chosen delta-squares is bounded below by delta^(v(k)-k+1)
times the determinant of an N x N matrix of difference and vertical-
derivative vectors of the surface map.  In scaled monomial coordinates
(each s^m t^a divided by m!) that matrix is exactly block upper triangular
with a Vandermonde difference block and a chain of bordered Vandermonde
blocks on the diagonal, so the direct determinant must agree with the
product of the diagonal block determinants; the pair is exposed for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .omega import volume_power


def _vdm_det(ts: np.ndarray) -> float:
    out = 1.0
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            out *= ts[j] - ts[i]
    return out


def node_minor_vector(ts: np.ndarray) -> np.ndarray:
    """v with |v[i]| = |Vandermonde det of ts without ts[i]|, cofactor signs.

    This is the vector dual to the wedge of the power columns of ts: for the
    bordered matrix [1, t_j, ..., t_j^(l-1), s_j] its determinant equals
    v . s.
    """
    n = len(ts)
    v = np.empty(n)
    for i in range(n):
        rest = np.delete(ts, i)
        v[i] = (-1.0) ** (n - 1 + i) * _vdm_det(rest)
    return v


def order_nodes(t_values) -> np.ndarray:
    """Permutation putting, for every l = k..1, the node whose omission
    maximizes |VDM| of the remaining prefix at position l."""
    t = np.asarray(t_values, dtype=float)
    n = t.size
    if np.unique(t).size != n:
        raise ValueError("nodes must be pairwise distinct")
    perm = np.arange(n)
    for last in range(n - 1, 0, -1):
        sub = t[perm[: last + 1]]
        v = node_minor_vector(sub)
        j = int(np.argmax(np.abs(v)))
        perm[j], perm[last] = perm[last], perm[j]
    return perm


@dataclass(frozen=True)
class DeltaTuple:
    k: int
    K: int
    delta: float
    t: np.ndarray  # k+1 nodes, ordered
    s: np.ndarray  # one vertical sample per node

    def __post_init__(self):
        k = self.k
        t, s = np.asarray(self.t, float), np.asarray(self.s, float)
        if t.shape != (k + 1,) or s.shape != (k + 1,):
            raise ValueError("need k+1 nodes and k+1 vertical samples")
        span = t.max() - t.min()
        if span > 1.0 / self.K + 1e-12:
            raise ValueError(f"nodes span {span}, exceeding 1/K = {1.0/self.K}")
        ts = np.sort(t)
        gap = np.diff(ts).min()
        if gap < 1.0 / (k * self.K) - 1e-9:
            raise ValueError(f"nodes are not 1/(kK)-separated (min gap {gap})")
        if np.any((t < 0) | (t > 1)) or np.any((s < 0) | (s > 1)):
            raise ValueError("tuple must lie in the unit square")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s", s)

    @property
    def squares(self) -> list[tuple[int, int]]:
        n = int(round(1.0 / self.delta))
        return [
            (min(int(tj / self.delta), n - 1), min(int(sj / self.delta), n - 1))
            for tj, sj in zip(self.t, self.s)
        ]


def _column_groups(k: int) -> list[list[tuple[int, int]]]:
    """Column monomials (m, a) <-> s^m t^a / m!, grouped per diagonal block."""
    groups = [[(0, b) for b in range(1, k + 1)]]
    groups.append([(1, a) for a in range(k)] + [(2, 0)])
    for kp in range(2, k):
        groups.append([(kp, a) for a in range(1, k - kp + 1)] + [(kp + 1, 0)])
    return groups


def assemble_matrix(tup: DeltaTuple) -> tuple[np.ndarray, list[int]]:
    """The N x N matrix of difference / vertical-derivative rows.

    Returns the matrix and the diagonal block sizes.  Row blocks: cap
    differences (k rows), first s-derivatives at every square (k+1 rows),
    then difference rows of the m-th s-derivative for m = 2..k-1.
    Columns are scaled monomials s^m t^a / m! in block order.
    """
    k = tup.k
    groups = _column_groups(k)
    cols = [c for g in groups for c in g]
    n_dim = len(cols)
    t, s = tup.t, tup.s

    def deriv_row(j: int, order: int) -> np.ndarray:
        row = np.empty(n_dim)
        for idx, (m, a) in enumerate(cols):
            if m < order:
                row[idx] = 0.0
            else:
                row[idx] = s[j] ** (m - order) * t[j] ** a / math.factorial(m - order)
        return row

    rows = []
    for j in range(1, k + 1):
        rows.append(deriv_row(j, 0) - deriv_row(0, 0))
    for j in range(0, k + 1):
        rows.append(deriv_row(j, 1))
    for order in range(2, k):
        for j in range(1, k + 2 - order):
            rows.append(deriv_row(j, order) - deriv_row(0, order))
    mat = np.array(rows)
    assert mat.shape == (n_dim, n_dim)
    return mat, [len(g) for g in groups]


@dataclass(frozen=True)
class DualBoundResult:
    bound: float
    det_direct: float
    det_blocks: float
    degenerate: bool


def dual_bound(tup: DeltaTuple) -> DualBoundResult:
    """delta^(v(k)-k+1) |det| together with both determinant routes."""
    mat, sizes = assemble_matrix(tup)
    det_direct = float(np.linalg.det(mat))
    det_blocks = 1.0
    pos = 0
    for size in sizes:
        det_blocks *= float(np.linalg.det(mat[pos : pos + size, pos : pos + size]))
        pos += size
    scale = float(np.prod(np.linalg.norm(mat, axis=1)))  # Hadamard bound
    degenerate = abs(det_direct) < 1e-14 * max(scale, 1.0)
    power = volume_power(tup.k) - tup.k + 1
    bound = tup.delta ** power * abs(det_direct)
    return DualBoundResult(bound, det_direct, det_blocks, degenerate)


def build_delta_tuple(
    k: int,
    K: int,
    delta: float,
    rng: np.random.Generator,
    scan: int = 64,
) -> DeltaTuple:
    """Random admissible tuple with the recursive vertical maximization.

    Nodes are the (forced) equispaced 1/(kK) ladder in a random 1/K
    interval, ordered by :func:`order_nodes`; s_0, s_1 are random square
    centers and each further s maximizes the bordered determinant |v . s|
    over a ``scan``-point grid snapped to delta-square centers.
    """
    n = int(round(1.0 / delta))
    if abs(n * delta - 1.0) > 1e-12:
        raise ValueError("delta must divide 1")
    a = rng.uniform(0.0, 1.0 - 1.0 / K)
    t = a + np.arange(k + 1) / (k * K)
    t = t[order_nodes(t)]

    def snap(v: float) -> float:
        return (min(int(v / delta), n - 1) + 0.5) * delta

    s = np.empty(k + 1)
    s[0] = snap(rng.random())
    s[1] = snap(rng.random())
    cand = np.array([snap(v) for v in (np.arange(scan) + 0.5) / scan])
    for l in range(1, k):
        v = node_minor_vector(t[: l + 2])
        head = float(v[:-1] @ s[: l + 1])
        vals = np.abs(head + v[-1] * cand)
        s[l + 1] = cand[int(np.argmax(vals))]
    return DeltaTuple(k=k, K=K, delta=delta, t=t, s=s)
