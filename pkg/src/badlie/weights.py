"""Weights mod p and orbits of the dot action of the Weyl group.

A weight in X(T)/pX(T) is stored by its fundamental-weight coordinates in
F_p, i.e. by its values on h_1, ..., h_r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .rootsystem import RootSystem, root_system


def _system(type_name) -> RootSystem:
    return root_system(type_name) if isinstance(type_name, str) else type_name


def dot_reflect(rs: RootSystem | str, i: int, weight, p: int) -> tuple[int, ...]:
    """s_i . lambda = s_i(lambda + rho) - rho for a 0-based simple index i."""
    rs = _system(rs)
    if not 0 <= i < rs.rank:
        raise IndexError(f"simple index {i} out of range for {rs.name}")
    lam = np.asarray(weight, dtype=np.int64)
    shifted = lam + 1
    out = shifted - shifted[i] * rs.cartan[:, i] - 1
    return tuple(int(c) for c in np.mod(out, p))


def all_weights(rank: int, p: int) -> np.ndarray:
    """Every element of F_p^rank, in lexicographic order (row k encodes k in base p)."""
    idx = np.arange(p ** rank, dtype=np.int64)
    digits = np.empty((len(idx), rank), dtype=np.int64)
    for j in range(rank - 1, -1, -1):
        digits[:, j] = idx % p
        idx //= p
    return digits


def encode(weights, p: int) -> np.ndarray:
    W = np.atleast_2d(np.asarray(weights, dtype=np.int64))
    code = np.zeros(len(W), dtype=np.int64)
    for j in range(W.shape[1]):
        code = code * p + W[:, j]
    return code


@dataclass
class OrbitReport:
    type_name: str
    p: int
    labels: np.ndarray  # component label of every weight, in lexicographic order
    orbit_sizes: list[int]
    representatives: list[tuple[int, ...]]

    @property
    def orbit_count(self) -> int:
        return len(self.orbit_sizes)

    def to_json(self) -> dict:
        return {
            "type": self.type_name,
            "p": self.p,
            "orbit_count": self.orbit_count,
            "orbit_sizes": self.orbit_sizes,
            "representatives": [list(r) for r in self.representatives],
        }


def orbit_count(type_name, p: int) -> OrbitReport:
    """Orbits of W on F_p^rank under the dot action, via the simple-reflection graph."""
    rs = _system(type_name)
    r = rs.rank
    W = all_weights(r, p)
    src = np.arange(len(W), dtype=np.int64)
    rows, cols = [], []
    shifted = W + 1
    for i in range(r):
        img = np.mod(shifted - shifted[:, [i]] * rs.cartan[:, i][None, :] - 1, p)
        rows.append(src)
        cols.append(encode(img, p))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(W), len(W)))
    n, labels = connected_components(graph, directed=False)
    # relabel components in order of their lexicographically smallest member
    first = np.full(n, len(W), dtype=np.int64)
    np.minimum.at(first, labels, src)
    order = np.argsort(first)
    relabel = np.empty(n, dtype=np.int64)
    relabel[order] = np.arange(n)
    labels = relabel[labels]
    sizes = np.bincount(labels, minlength=n)
    reps = [tuple(int(c) for c in W[first[k]]) for k in order]
    return OrbitReport(rs.name, p, labels, [int(s) for s in sizes], reps)


def orbit_of(type_name, weight, p: int) -> set[tuple[int, ...]]:
    """Dot orbit of one weight by breadth-first closure."""
    rs = _system(type_name)
    start = tuple(int(c) % p for c in weight)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for lam in frontier:
            for i in range(rs.rank):
                mu = dot_reflect(rs, i, lam, p)
                if mu not in seen:
                    seen.add(mu)
                    nxt.append(mu)
        frontier = nxt
    return seen
