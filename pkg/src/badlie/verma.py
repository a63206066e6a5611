"""Baby Verma modules Z_chi(lambda) as explicit matrices.

Basis: PBW monomials f_1^{a_1} ... f_N^{a_N} v_lambda with 0 <= a_k < p,
where f_k = e_{-g_k} and g_1, ..., g_N are the positive roots in root
order.  Monomial ``a`` has index sum_k a_k p^(N-1-k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ffield
from .chevalley import LieAlgebra
from .linform import LinearForm
from .meataxe import (Certificate, MatrixModule, MeatAxeInconclusive, composition_factors,
                      iso_key, is_irreducible, matches)
from .weights import all_weights, orbit_count

MAX_RANK = 2


class WeightError(ValueError):
    """lambda does not lie in Lambda_chi."""


class HighestWeightError(ValueError):
    """A vector fails the conditions needed to be the image of v_lambda."""


@dataclass(eq=False)
class VermaModule:
    alg: LieAlgebra = field(repr=False)
    chi: LinearForm = field(repr=False)
    weight: tuple[int, ...]
    action: np.ndarray = field(repr=False)  # (dim g, p^N, p^N)

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def A(self, i: int) -> np.ndarray:
        return self.action[i].astype(np.int64)

    def act(self, x) -> np.ndarray:
        """Matrix of a Lie algebra element."""
        x = np.mod(np.asarray(x, dtype=np.int64), self.p)
        M = np.tensordot(x, self.action.astype(np.int64), axes=(0, 0))
        return M % self.p

    def as_module(self) -> MatrixModule:
        return MatrixModule(self.action, self.p, [self.alg.label(i) for i in range(self.alg.dim)])

    def monomial_index(self, exps) -> int:
        idx = 0
        for a in exps:
            idx = idx * self.p + int(a)
        return idx

    def highest_weight_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v


def _check_weight(alg: LieAlgebra, chi: LinearForm, weight) -> tuple[int, ...]:
    p = alg.p
    lam = tuple(int(c) % p for c in weight)
    if len(lam) != alg.rank:
        raise WeightError(f"weight needs {alg.rank} coordinates, got {len(lam)}")
    if chi.values[alg.N + alg.rank:].any():
        raise WeightError("chi must vanish on the positive root vectors")
    for i in range(alg.rank):
        c = int(chi.values[alg.h_index(i)])
        # lambda(h_i)^p - lambda(h_i) is 0 for lambda(h_i) in F_p
        if c % p:
            raise WeightError(f"lambda(h_{i + 1})^p - lambda(h_{i + 1}) = 0 but chi(h_{i + 1})^p = {pow(c, p, p)}: "
                              "no weight in F_p satisfies the equation")
    return lam


def build_baby_verma(alg: LieAlgebra, chi: LinearForm, weight) -> VermaModule:
    """Action matrices of every basis element of g on Z_chi(lambda)."""
    if alg.rank > MAX_RANK:
        raise ValueError(f"baby Verma modules are built for rank <= {MAX_RANK} only")
    lam = _check_weight(alg, chi, weight)
    p, N, r = alg.p, alg.N, alg.rank
    D = p ** N
    dimg = alg.dim
    mons = all_weights(N, p)  # row k = exponent vector of monomial k
    power = p ** np.arange(N - 1, -1, -1)
    first = np.array([int(np.flatnonzero(m)[0]) if m.any() else N for m in mons])
    rest = np.arange(D) - np.where(first < N, power[np.minimum(first, N - 1)], 0)
    degree = mons.sum(axis=1)
    order = np.argsort(degree, kind="stable")

    # brackets of every basis element with every f_k, as dense coefficient vectors
    brk = np.array([[alg.bracket(alg.basis_vector(b), alg.basis_vector(k)) for k in range(N)]
                    for b in range(dimg)])
    chi_f = [int(chi.values[k]) for k in range(N)]

    def prepend(k: int, vec: np.ndarray) -> np.ndarray:
        """f_k times a combination of monomials whose factors all have index >= k."""
        out = np.zeros(D, dtype=np.int64)
        nz = np.flatnonzero(vec)
        if not len(nz):
            return out
        ak = mons[nz, k]
        full = ak == p - 1
        keep = nz[~full]
        np.add.at(out, keep + power[k], vec[keep])
        wrap = nz[full]
        if len(wrap) and chi_f[k]:
            # f_k^p = chi(f_k)^p = chi(f_k) in U_chi
            np.add.at(out, wrap - (p - 1) * power[k], chi_f[k] * vec[wrap])
        return out % p

    A = np.zeros((dimg, D, D), dtype=np.int64)
    # phase 1: left multiplication by the f_k (independent of lambda)
    for col in order:
        for j in range(N):
            if degree[col] == 0:
                A[j, power[j], col] = 1
                continue
            i1 = first[col]
            if j <= i1:
                e = np.zeros(D, dtype=np.int64)
                e[col] = 1
                A[j, :, col] = prepend(j, e)
                continue
            m_ = rest[col]
            v = prepend(i1, A[j, :, m_])
            b = brk[j, i1]
            for k in np.flatnonzero(b):
                v += b[k] * A[k, :, m_]
            A[j, :, col] = v % p
    # phase 2: toral and positive root vectors
    others = list(range(N, dimg))
    Ff = A[:N].astype(np.float64)
    for col in order:
        if degree[col] == 0:
            for i in range(r):
                A[alg.h_index(i), col, col] = lam[i]
            continue
        i1 = first[col]
        m_ = rest[col]
        cols = A[N:, :, m_].astype(np.float64)  # (len(others), D)
        V = np.mod(np.rint(cols @ Ff[i1].T).astype(np.int64), p)
        for t, b in enumerate(others):
            c = brk[b, i1]
            nz = np.flatnonzero(c)
            if len(nz):
                V[t] += c[nz] @ A[nz, :, m_]
        A[N:, :, col] = V % p
    return VermaModule(alg, chi, lam, A.astype(np.int16))


# ---------------------------------------------------------------------------
# relation checks


def check_brackets(Z: VermaModule, pairs=None) -> list[tuple[int, int]]:
    """Basis pairs (i, j) with A_i A_j - A_j A_i != A_[b_i, b_j]."""
    alg, p = Z.alg, Z.p
    n = alg.dim
    pairs = pairs if pairs is not None else [(i, j) for i in range(n) for j in range(i + 1, n)]
    F = Z.action.astype(np.float64)
    bad = []
    for i, j in pairs:
        lhs = np.mod(np.rint(F[i] @ F[j] - F[j] @ F[i]).astype(np.int64), p)
        rhs = Z.act(alg.bracket(alg.basis_vector(i), alg.basis_vector(j)))
        if not np.array_equal(lhs, rhs):
            bad.append((i, j))
    return bad


def check_p_powers(Z: VermaModule) -> list[int]:
    """Basis elements x with A_x^p - A_{x^[p]} != chi(x)^p Id."""
    alg, p = Z.alg, Z.p
    I = np.eye(Z.dim, dtype=np.int64)
    bad = []
    for i in range(alg.dim):
        lhs = (ffield.matpow(Z.A(i), p, p) - Z.act(alg.basis_p_power(i))) % p
        c = pow(int(Z.chi.values[i]), p, p)
        if not np.array_equal(lhs, c * I % p):
            bad.append(i)
    return bad


def weight_space_dims(Z: VermaModule) -> dict[tuple[int, ...], int]:
    """Joint eigenspace dimensions of the A_{h_i} (which are diagonal in the PBW basis)."""
    alg = Z.alg
    diags = np.array([np.diag(Z.A(alg.h_index(i))) for i in range(alg.rank)]).T
    out: dict[tuple[int, ...], int] = {}
    for row in diags:
        key = tuple(int(c) for c in row)
        out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------------------
# irreducibility and homomorphisms


def verma_irreducible(Z: VermaModule, seed: int = 0, budget: int = 40) -> Certificate:
    return is_irreducible(Z.as_module(), seed, budget)


def verma_composition_dims(Z: VermaModule, seed: int = 0, budget: int = 40) -> list[int]:
    return sorted(f.dim for f in composition_factors(Z.as_module(), seed, budget))


def verma_certificate(Z: VermaModule, seed: int = 0, budget: int = 40, irreducibility: bool = True,
                      factors: bool = False) -> dict:
    """JSON record {type, p, lambda, chi, dim, irreducible, seed, factor_dims, witness}."""
    chi = Z.chi
    out = {"type": Z.alg.name, "p": Z.p, "lambda": list(Z.weight),
           "chi": {"levi_subset": None if chi.levi_subset is None else list(chi.levi_subset),
                   "support": chi.support_labels()},
           "dim": Z.dim, "irreducible": None, "seed": seed, "factor_dims": None, "witness": None}
    if irreducibility:
        cert = verma_irreducible(Z, seed, budget)
        out["irreducible"] = cert.irreducible
        out["witness"] = cert.to_json()
    if factors:
        try:
            out["factor_dims"] = verma_composition_dims(Z, seed, budget)
        except MeatAxeInconclusive as err:
            out["witness"] = (out["witness"] or {}) | {"factors": str(err)}
    return out


@dataclass
class ModuleMap:
    source: VermaModule = field(repr=False)
    target: VermaModule = field(repr=False)
    matrix: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return ffield.rank(self.matrix, self.source.p)

    @property
    def kernel_dim(self) -> int:
        return self.source.dim - self.rank

    @property
    def image_dim(self) -> int:
        return self.rank

    def is_equivariant(self) -> bool:
        p = self.source.p
        for i in range(self.source.alg.dim):
            lhs = ffield.matmul(self.target.A(i), self.matrix, p)
            rhs = ffield.matmul(self.matrix, self.source.A(i), p)
            if not np.array_equal(lhs, rhs):
                return False
        return True


def verma_hom_from_vector(source: VermaModule, target: VermaModule, w) -> ModuleMap:
    """The U_chi(g)-map Z_chi(lambda) -> target sending v_lambda to w."""
    alg, p = source.alg, source.p
    w = np.mod(np.asarray(w, dtype=np.int64), p)
    if target.alg is not alg or not np.array_equal(target.chi.values, source.chi.values):
        raise HighestWeightError("source and target must share the algebra and chi")
    for k in range(alg.N):
        b = alg.pos_index(k)
        if ffield.matmul(target.A(b), w[:, None], p).any():
            raise HighestWeightError(f"{alg.label(b)} does not kill w")
    for i in range(alg.rank):
        hw = ffield.matmul(target.A(alg.h_index(i)), w[:, None], p)[:, 0]
        if not np.array_equal(hw, source.weight[i] * w % p):
            raise HighestWeightError(f"w is not an eigenvector of h_{i + 1} with eigenvalue {source.weight[i]}")
    N, D = alg.N, source.dim
    mons = all_weights(N, p)
    power = p ** np.arange(N - 1, -1, -1)
    Phi = np.zeros((target.dim, D), dtype=np.int64)
    Phi[:, 0] = w
    for col in np.argsort(mons.sum(axis=1), kind="stable"):
        if col == 0:
            continue
        i1 = int(np.flatnonzero(mons[col])[0])
        Phi[:, col] = target.A(i1) @ Phi[:, col - power[i1]] % p
    hom = ModuleMap(source, target, Phi)
    if not hom.is_equivariant():
        raise HighestWeightError("the extension of v_lambda -> w is not equivariant")
    return hom


@dataclass
class LinkageResult:
    components: list[list[tuple[int, ...]]]
    complete: bool
    factor_dims: dict[tuple[int, ...], list[int]]
    orbit_count: int

    def to_json(self) -> dict:
        return {"components": [[list(w) for w in c] for c in self.components],
                "component_count": len(self.components), "complete": self.complete,
                "orbit_count": self.orbit_count,
                "factor_dims": {",".join(map(str, k)): v for k, v in self.factor_dims.items()}}


def linkage_components(alg: LieAlgebra, chi: LinearForm, seed: int = 0, budget: int = 40) -> LinkageResult:
    """Group Lambda_0 by shared composition factors of the baby Verma modules."""
    if alg.rank > MAX_RANK:
        raise ValueError(f"linkage is computed for rank <= {MAX_RANK} only")
    weights = [tuple(int(c) for c in w) for w in all_weights(alg.rank, alg.p)]
    parent = list(range(len(weights)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rng = np.random.default_rng(seed)
    classes: list[tuple[object, int]] = []  # (iso key, weight index of first owner)
    factor_dims: dict[tuple[int, ...], list[int]] = {}
    complete = True
    for idx, lam in enumerate(weights):
        Z = build_baby_verma(alg, chi, lam)
        try:
            facs = composition_factors(Z.as_module(), seed, budget)
        except MeatAxeInconclusive:
            complete = False
            continue
        factor_dims[lam] = sorted(f.dim for f in facs)
        for f in facs:
            owner = None
            for key, who in classes:
                if matches(key, f.module):
                    owner = who
                    break
            if owner is None:
                try:
                    classes.append((iso_key(f.module, rng, budget), idx))
                except MeatAxeInconclusive:
                    complete = False
            else:
                parent[find(idx)] = find(owner)
    comps: dict[int, list] = {}
    for i, lam in enumerate(weights):
        comps.setdefault(find(i), []).append(lam)
    components = sorted(comps.values())
    return LinkageResult(components, complete, factor_dims, orbit_count(alg.system, alg.p).orbit_count)
