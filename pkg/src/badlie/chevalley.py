"""Chevalley bases: integral structure constants, reduction mod p, the [p]-map.

Basis ordering of every algebra built here::

    e_{-g_1}, ..., e_{-g_N}, h_1, ..., h_r, e_{g_1}, ..., e_{g_N}

where ``g_1, ..., g_N`` are the positive roots in the order fixed by
:mod:`badlie.rootsystem`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from . import ffield
from .rootsystem import RootSystem, add, neg, root_system, sub

CONVENTIONS = ("positive", "negative")
CACHE_ENV = "BADLIE_CACHE_DIR"


@dataclass(frozen=True)
class StructureConstants:
    """Signed integers N(a, b) with [e_a, e_b] = N(a, b) e_{a+b}.

    ``table`` is keyed by pairs of indices into ``system.roots``.
    """

    system: RootSystem
    table: dict[tuple[int, int], int] = field(repr=False)
    convention: str = "positive"

    def N(self, a, b) -> int:
        idx = self.system.index
        return self.table.get((idx[tuple(a)], idx[tuple(b)]), 0)

    def coroot(self, r) -> tuple[int, ...]:
        """h_r expanded in h_1..h_r (sign follows r)."""
        r = tuple(r)
        if self.system.is_positive(r):
            return self.system.coroot_coefficients(r)
        return tuple(-c for c in self.system.coroot_coefficients(neg(r)))

    def to_json(self) -> dict:
        return {
            "type": self.system.name,
            "convention": self.convention,
            "roots": [list(r) for r in self.system.roots],
            "entries": [[i, j, n] for (i, j), n in sorted(self.table.items())],
        }


def _extraspecial_sign(convention: str) -> int:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    return 1 if convention == "positive" else -1


def _compute_table(rs: RootSystem, convention: str) -> dict[tuple[int, int], int]:
    sign = _extraspecial_sign(convention)
    pos = {r: k for k, r in enumerate(rs.positive_roots)}
    roots = rs.root_set
    norm2 = {r: rs.norm2(r) for r in rs.roots}
    known: dict[tuple, Fraction] = {}

    def N(a, b) -> Fraction:
        s = add(a, b)
        if s not in roots:
            return Fraction(0)
        a_pos, b_pos = rs.is_positive(a), rs.is_positive(b)
        if a_pos and b_pos:
            return known[(a, b)]
        if not a_pos and not b_pos:
            return -N(neg(a), neg(b))
        if not a_pos:
            return -N(b, a)
        # a > 0 > b; with c = -(a+b): N_ab/|c|^2 = N_bc/|a|^2 = N_ca/|b|^2
        c = neg(s)
        if rs.is_positive(s):
            return -norm2[c] / norm2[a] * N(neg(b), neg(c))
        return norm2[c] / norm2[b] * N(c, a)

    for xi in rs.positive_roots:
        if sum(xi) < 2:
            continue
        pairs = sorted(((a, sub(xi, a)) for a in rs.positive_roots if sub(xi, a) in pos),
                       key=lambda ab: pos[ab[0]])
        a0, b0 = pairs[0]
        val = Fraction(sign * rs.root_string_bound(a0, b0))
        known[(a0, b0)] = val
        known[(b0, a0)] = -val
        for g, d in pairs[1:]:
            if pos[g] > pos[d] or (g, d) in known:
                continue
            t = Fraction(0)
            if sub(d, a0) in roots:
                t += N(d, neg(a0)) * N(g, neg(b0)) / norm2[sub(d, a0)]
            if sub(g, a0) in roots:
                t += N(neg(a0), g) * N(d, neg(b0)) / norm2[sub(g, a0)]
            v = norm2[xi] / known[(a0, b0)] * t
            known[(g, d)] = v
            known[(d, g)] = -v

    idx = rs.index
    table: dict[tuple[int, int], int] = {}
    for a in rs.roots:
        for b in rs.roots:
            if add(a, b) in roots:
                v = N(a, b)
                if v.denominator != 1:
                    raise ArithmeticError(f"non-integral structure constant N({a},{b}) = {v}")
                table[(idx[a], idx[b])] = int(v)
    return table


def _cache_path(name: str, convention: str) -> Path | None:
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    return Path(d) / f"structure_{name}_{convention}.json"


def save_structure_constants(sc: StructureConstants, path) -> None:
    Path(path).write_text(json.dumps(sc.to_json()))


def load_structure_constants(path) -> StructureConstants:
    doc = json.loads(Path(path).read_text())
    rs = root_system(doc["type"])
    if [tuple(r) for r in doc["roots"]] != list(rs.roots):
        raise ValueError(f"{path}: root ordering does not match this build")
    table = {(i, j): n for i, j, n in doc["entries"]}
    return StructureConstants(rs, table, doc["convention"])


def build_structure_constants(system: RootSystem, convention: str = "positive") -> StructureConstants:
    """Full signed table from the extraspecial-pair algorithm.

    Extraspecial pairs are ``(a, xi - a)`` with ``a`` the earliest positive
    root (in root order) that can be split off ``xi``; they get sign +1
    under the ``positive`` convention and -1 under ``negative``.
    """
    _extraspecial_sign(convention)
    path = _cache_path(system.name, convention)
    if path is not None and path.exists():
        cached = load_structure_constants(path)
        if cached.system == system:
            return cached
    sc = StructureConstants(system, _compute_table(system, convention), convention)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        save_structure_constants(sc, path)
    return sc


@lru_cache(maxsize=None)
def structure_constants(name: str, convention: str = "positive") -> StructureConstants:
    return build_structure_constants(root_system(name), convention)


# ---------------------------------------------------------------------------
# Lie algebras over Z and F_p


def _integral_bracket_entries(sc: StructureConstants):
    """COO entries (i, j, k, v) of the bracket table over Z: [b_i, b_j] = sum v b_k."""
    rs = sc.system
    N, r = rs.N, rs.rank
    dim = 2 * N + r

    def bidx(root_index: int) -> int:
        return N + r + root_index if root_index < N else root_index - N

    I, J, K, V = [], [], [], []

    def put(i, j, k, v):
        if v:
            I.append(i)
            J.append(j)
            K.append(k)
            V.append(v)

    for (a, b), n in sc.table.items():
        put(bidx(a), bidx(b), bidx(rs.index[add(rs.roots[a], rs.roots[b])]), n)
    for k, g in enumerate(rs.positive_roots):
        h = rs.coroot_coefficients(g)
        for i, c in enumerate(h):
            put(N + r + k, k, N + i, c)
            put(k, N + r + k, N + i, -c)
        for i in range(r):
            c = rs.pairing(g, i)
            put(N + i, N + r + k, N + r + k, c)
            put(N + r + k, N + i, N + r + k, -c)
            put(N + i, k, k, -c)
            put(k, N + i, k, c)
    arr = lambda x: np.array(x, dtype=np.int64)
    return dim, arr(I), arr(J), arr(K), arr(V)


@dataclass(eq=False)
class LieAlgebra:
    """A Chevalley-basis Lie algebra over Z (``p=None``) or F_p.

    The bracket is stored as COO arrays: ``[b_I, b_J] = V * b_K``.
    """

    sc: StructureConstants
    p: int | None
    dim: int
    I: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)

    @property
    def system(self) -> RootSystem:
        return self.sc.system

    @property
    def N(self) -> int:
        return self.system.N

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def name(self) -> str:
        return self.system.name

    # basis indexing -------------------------------------------------------
    def neg_index(self, k: int) -> int:
        return k

    def h_index(self, i: int) -> int:
        return self.N + i

    def pos_index(self, k: int) -> int:
        return self.N + self.rank + k

    def root_vector_index(self, root) -> int:
        root = tuple(root)
        rs = self.system
        if rs.is_positive(root):
            return self.pos_index(rs.positive_roots.index(root))
        return self.neg_index(rs.positive_roots.index(neg(root)))

    def kind(self, i: int) -> str:
        if i < self.N:
            return "neg"
        if i < self.N + self.rank:
            return "h"
        return "pos"

    def basis_root(self, i: int) -> tuple[int, ...] | None:
        """Root of the basis vector i, None for toral elements."""
        k = self.kind(i)
        if k == "neg":
            return neg(self.system.positive_roots[i])
        if k == "pos":
            return self.system.positive_roots[i - self.N - self.rank]
        return None

    def basis_weight(self, i: int) -> tuple[int, ...]:
        r = self.basis_root(i)
        return r if r is not None else (0,) * self.rank

    def label(self, i: int) -> str:
        k = self.kind(i)
        if k == "h":
            return f"h{i - self.N + 1}"
        r = self.basis_root(i)
        return ("e-" if k == "neg" else "e+") + "".join(str(abs(c)) for c in r)

    # elements ---------------------------------------------------------------
    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def e(self, root) -> np.ndarray:
        return self.basis_vector(self.root_vector_index(root))

    def h(self, i: int) -> np.ndarray:
        return self.basis_vector(self.h_index(i))

    def element(self, terms) -> np.ndarray:
        """Build an element from ``{"root": coords}`` / ``{"h": i}`` terms (i 1-based)."""
        v = self.zero()
        for t in terms:
            c = int(t.get("coeff", 1))
            if "root" in t:
                v[self.root_vector_index(t["root"])] += c
            else:
                v[self.h_index(int(t["h"]) - 1)] += c
        return self._reduce(v)

    def _reduce(self, v):
        return np.mod(v, self.p) if self.p else v

    def _check(self, x):
        x = np.asarray(x, dtype=np.int64)
        if x.shape[-1] != self.dim:
            raise ValueError(f"element of length {x.shape[-1]} in an algebra of dimension {self.dim}")
        return x

    # bracket ----------------------------------------------------------------
    def bracket(self, x, y) -> np.ndarray:
        x, y = self._check(x), self._check(y)
        w = x[self.I] * y[self.J] * self.V
        out = np.bincount(self.K, weights=w, minlength=self.dim)
        return self._reduce(np.rint(out).astype(np.int64))

    def ad_matrix(self, x) -> np.ndarray:
        """Matrix of ad(x); column j is [x, b_j]."""
        x = self._check(x)
        w = x[self.I] * self.V
        flat = np.bincount(self.K * self.dim + self.J, weights=w, minlength=self.dim ** 2)
        return self._reduce(np.rint(flat).astype(np.int64).reshape(self.dim, self.dim))

    @cached_property
    def _by_first(self):
        order = np.argsort(self.I, kind="stable")
        starts = np.searchsorted(self.I[order], np.arange(self.dim + 1))
        return order, starts

    def ad_basis(self, i: int) -> np.ndarray:
        order, starts = self._by_first
        sl = order[starts[i]:starts[i + 1]]
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        np.add.at(M, (self.K[sl], self.J[sl]), self.V[sl])
        return self._reduce(M)

    def pairing_matrix(self, chi) -> np.ndarray:
        """M[i][j] = chi([b_i, b_j])."""
        chi = self._check(chi)
        w = chi[self.K] * self.V
        flat = np.bincount(self.I * self.dim + self.J, weights=w, minlength=self.dim ** 2)
        return self._reduce(np.rint(flat).astype(np.int64).reshape(self.dim, self.dim))

    def jacobi_defect(self) -> int:
        """Number of basis triples (i<j<k) whose Jacobiator is nonzero."""
        return jacobi_defect(self)

    # restricted structure ---------------------------------------------------
    def basis_p_power(self, i: int) -> np.ndarray:
        """b_i^[p]: 0 on root vectors, h_i on toral basis elements."""
        return self.basis_vector(i) if self.kind(i) == "h" else self.zero()

    @cached_property
    def center(self) -> np.ndarray:
        return center(self)

    @cached_property
    def _power_solver(self):
        return _build_power_solver(self)

    def restricted_power(self, x) -> "PowerResult":
        return restricted_power(self, x)

    def jacobson_power(self, x) -> np.ndarray:
        return jacobson_power(self, x)


def reduce_mod_p(sc: StructureConstants, p: int | None) -> LieAlgebra:
    """Chevalley Lie algebra over F_p (or over Z when ``p`` is None)."""
    if p is not None and (p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1))):
        raise ValueError(f"{p} is not prime")
    dim, I, J, K, V = _integral_bracket_entries(sc)
    if p is not None:
        V = np.mod(V, p)
        keep = V != 0
        I, J, K, V = I[keep], J[keep], K[keep], V[keep]
    return LieAlgebra(sc, p, dim, I, J, K, V)


@lru_cache(maxsize=None)
def chevalley_algebra(name: str, p: int | None, convention: str = "positive") -> LieAlgebra:
    return reduce_mod_p(structure_constants(name, convention), p)


def jacobi_defect(alg: LieAlgebra) -> int:
    """Count basis triples with nonzero Jacobiator, via a sparse join on the middle index."""
    D = alg.dim
    I, J, K, V = alg.I, alg.J, alg.K, alg.V
    # [[b_i, b_j], b_k] = sum_m C[i,j,m] C[m,k,l]
    order = np.argsort(I, kind="stable")
    I2, J2, K2, V2 = I[order], J[order], K[order], V[order]
    starts = np.searchsorted(I2, np.arange(D + 1))
    counts = starts[K + 1] - starts[K]
    rep = np.repeat(np.arange(len(K)), counts)
    offs = np.concatenate([np.arange(c) for c in counts]) if len(counts) else np.array([], int)
    sec = starts[K[rep]] + offs
    i, j, k, l = I[rep], J[rep], J2[sec], K2[sec]
    v = V[rep] * V2[sec]
    keys, vals = [], []
    # sum over cyclic permutations of (i, j, k)
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        keys.append(((a * D + b) * D + c) * D + l)
        vals.append(v)
    keys = np.concatenate(keys)
    vals = np.concatenate(vals)
    uniq, inv = np.unique(keys, return_inverse=True)
    tot = np.bincount(inv, weights=vals)
    if alg.p:
        tot = np.mod(np.rint(tot).astype(np.int64), alg.p)
    bad = uniq[np.rint(tot) != 0]
    return len(np.unique(bad // D))


def center(alg: LieAlgebra) -> np.ndarray:
    """Basis (reduced echelon rows) of {z : [z, g] = 0}."""
    p = alg.p
    if p is None:
        raise ValueError("centre is computed over F_p only")
    order = _block_order(alg)
    blocks = []
    for j in order:
        blocks.append(alg.ad_basis(j))
        K = ffield.nullspace(np.vstack(blocks), p)
        if len(K) == 0:
            return K
        if len(blocks) >= 2 and all(not alg.ad_matrix(z).any() for z in K):
            return K
    return K


def _block_order(alg: LieAlgebra) -> list[int]:
    r, N = alg.rank, alg.N
    first = [alg.h_index(i) for i in range(r)]
    first += [alg.pos_index(i) for i in range(r)] + [alg.neg_index(i) for i in range(r)]
    rest = [i for i in range(alg.dim) if i not in set(first)]
    return first + rest


@dataclass
class PowerResult:
    value: np.ndarray
    ambiguous: bool
    center: np.ndarray


def _build_power_solver(alg: LieAlgebra):
    """Pick basis elements b_j so that z -> ([z, b_j])_j has kernel exactly the centre."""
    p = alg.p
    target = alg.dim - len(alg.center)
    chosen, blocks = [], []
    for j in _block_order(alg):
        B = -alg.ad_basis(j) % p
        if blocks and ffield.rank(np.vstack(blocks + [B]), p) == ffield.rank(np.vstack(blocks), p):
            continue
        chosen.append(j)
        blocks.append(B)
        if ffield.rank(np.vstack(blocks), p) == target:
            break
    return chosen, np.vstack(blocks)


def restricted_power(alg: LieAlgebra, x) -> PowerResult:
    """x^[p] as the solution z of ad(z) = ad(x)^p.

    The solution is unique modulo the centre; ``ambiguous`` is set and the
    centre basis attached whenever the centre is nonzero.
    """
    p = alg.p
    if p is None:
        raise ValueError("restricted structure needs a prime")
    x = np.mod(alg._check(x), p)
    A = ffield.matpow(alg.ad_matrix(x), p, p)
    chosen, S = alg._power_solver
    rhs = np.concatenate([A[:, j] for j in chosen])
    z = ffield.solve(S, rhs, p)
    if z is None or not np.array_equal(alg.ad_matrix(z), A):
        raise ArithmeticError("ad(x)^p is not inner: the bracket table is inconsistent")
    C = alg.center
    if len(C):
        # canonical representative: clear the pivot coordinates of the centre basis
        piv = [int(np.flatnonzero(row)[0]) for row in C]
        z = ffield.reduce_against(z[None, :], C, piv, p)[0]
    return PowerResult(z, bool(len(C)), C)


def jacobson_power(alg: LieAlgebra, x) -> np.ndarray:
    """Exact x^[p] from the basis values and Jacobson's formula.

    (y+z)^[p] = y^[p] + z^[p] + sum_i s_i(y, z), where i*s_i(y, z) is the
    coefficient of t^(i-1) in ad(t*y + z)^(p-1)(y).
    """
    p = alg.p
    x = np.mod(alg._check(x), p)
    y = alg.zero()
    ypow = alg.zero()
    D = alg.dim
    # [ad(y) | ad(z)] as floats; entries stay below p so BLAS products are exact
    AYZ = np.zeros((D, 2 * D), dtype=np.float64)
    ts = np.arange(1, p)
    # Vandermonde rows t^0..t^(p-2) for t = 1..p-1
    vander = np.array([[pow(int(t), k, p) for k in range(p - 1)] for t in ts], dtype=np.int64)
    vinv = ffield.inverse(vander, p)
    weights = np.array([ffield.inv_mod(k + 1, p) for k in range(p - 1)], dtype=np.int64)
    for m in np.flatnonzero(x):
        c = int(x[m])
        z = c * alg.basis_vector(m) % p
        zpow = c * alg.basis_p_power(m) % p
        AYZ[:, D:] = c * alg.ad_basis(m) % p
        if y.any():
            # column t holds ad(t*y + z)^k (y), for every t at once
            V = np.repeat(y.astype(np.float64)[:, None], p - 1, axis=1)
            for _ in range(p - 1):
                V = np.mod(AYZ @ np.vstack([V * ts, V]), p)
            vals = np.rint(V.T).astype(np.int64)
            coeffs = vinv @ vals % p
            s = weights @ coeffs % p
            ypow = (ypow + zpow + s) % p
        else:
            ypow = zpow
        y = (y + z) % p
        AYZ[:, :D] = np.mod(AYZ[:, :D] + AYZ[:, D:], p)
    return ypow
