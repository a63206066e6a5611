"""MeatAxe over F_p: irreducibility certificates, splitting, isomorphism.

A module is a stack of generator matrices acting on column vectors.  The
irreducibility test follows Norton's criterion restricted to linear
factors: pick a random algebra element theta and a scalar c with
dim ker(theta - c) = 1, spin a kernel vector of theta - c and a kernel
vector of its transpose.  If both spins are everything the module is
absolutely irreducible; a proper spin is an explicit submodule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import ffield


class MeatAxeInconclusive(RuntimeError):
    """The random search budget ran out before a certificate was found."""


@dataclass(eq=False)
class MatrixModule:
    gens: np.ndarray  # (k, D, D), entries in range(p)
    p: int
    names: list[str] | None = None

    def __post_init__(self):
        g = np.asarray(self.gens)
        if g.ndim != 3 or g.shape[1] != g.shape[2]:
            raise ValueError("generators must be a (k, D, D) array")
        self.gens = np.mod(g.astype(np.int64), self.p).astype(np.int16)

    @property
    def dim(self) -> int:
        return self.gens.shape[1]

    @property
    def ngens(self) -> int:
        return self.gens.shape[0]

    def gen(self, k: int) -> np.ndarray:
        return self.gens[k].astype(np.int64)

    def transpose(self) -> "MatrixModule":
        return MatrixModule(np.transpose(self.gens, (0, 2, 1)), self.p, self.names)

    def submodule(self, S: np.ndarray) -> "MatrixModule":
        """Action on the span of the rows of S (reduced echelon, invariant)."""
        piv = _pivots(S)
        sub = np.empty((self.ngens, len(S), len(S)), dtype=np.int64)
        for k in range(self.ngens):
            Y = ffield.matmul(S, self.gen(k).T, self.p)  # row i = A s_i
            sub[k] = Y[:, piv].T
        return MatrixModule(sub, self.p, self.names)

    def quotient(self, S: np.ndarray) -> "MatrixModule":
        """Action on M / span(S), coordinatised by the non-pivot columns of S."""
        piv = _pivots(S)
        Q = [c for c in range(self.dim) if c not in set(piv)]
        quo = np.empty((self.ngens, len(Q), len(Q)), dtype=np.int64)
        for k in range(self.ngens):
            R = ffield.reduce_against(self.gen(k)[:, Q].T, S, piv, self.p)
            quo[k] = R[:, Q].T
        return MatrixModule(quo, self.p, self.names)


def _pivots(S) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in S]


@dataclass
class Certificate:
    status: str  # "irreducible", "reducible" or "inconclusive"
    seed: int | None
    attempts: int
    recipe: dict | None = None
    eigenvalue: int | None = None
    submodule: np.ndarray | None = field(default=None, repr=False)

    @property
    def irreducible(self) -> bool | None:
        return {"irreducible": True, "reducible": False}.get(self.status)

    @property
    def submodule_dim(self) -> int | None:
        return None if self.submodule is None else len(self.submodule)

    def to_json(self) -> dict:
        return {"status": self.status, "seed": self.seed, "attempts": self.attempts,
                "recipe": self.recipe, "eigenvalue": self.eigenvalue,
                "submodule_dim": self.submodule_dim}


# ---------------------------------------------------------------------------
# random algebra elements


def random_recipe(rng: np.random.Generator, ngens: int, p: int, products: int = 6) -> dict:
    """Recipe for a pseudorandom algebra element.

    A pool starts as the generators; each step appends the product of two
    random pool members.  theta is a random combination of the pool.
    """
    steps = []
    size = ngens
    for _ in range(products):
        steps.append((int(rng.integers(size)), int(rng.integers(size))))
        size += 1
    coeffs = [int(c) for c in rng.integers(0, p, size)]
    return {"products": steps, "coeffs": coeffs}


def apply_recipe(module: MatrixModule, recipe) -> np.ndarray:
    p = module.p
    pool = [module.gen(k) for k in range(module.ngens)]
    for a, b in recipe["products"]:
        pool.append(ffield.matmul(pool[a], pool[b], p))
    theta = np.zeros((module.dim, module.dim), dtype=np.int64)
    for c, M in zip(recipe["coeffs"], pool):
        if c:
            theta = (theta + c * M) % p
    return theta


# ---------------------------------------------------------------------------
# spinning


def spin(module: MatrixModule, vectors) -> np.ndarray:
    """Reduced echelon basis (rows) of the submodule generated by ``vectors``."""
    p = module.p
    B = ffield.row_space(np.atleast_2d(vectors), p)
    frontier = B
    G = module.gens.astype(np.float64)
    D = module.dim
    while len(frontier) and len(B) < D:
        imgs = np.einsum("kij,nj->kni", G, frontier.astype(np.float64), optimize=True)
        imgs = np.mod(np.rint(imgs).astype(np.int64), p).reshape(-1, D)
        res = ffield.reduce_against(imgs, B, _pivots(B), p)
        res = res[res.any(axis=1)]
        if not len(res):
            break
        new = ffield.row_space(res, p)
        B = ffield.row_space(np.vstack([B, new]), p)
        frontier = new
    return B


# ---------------------------------------------------------------------------
# irreducibility


def _kernel(theta, c, p):
    D = theta.shape[0]
    return ffield.nullspace((theta - c * np.eye(D, dtype=np.int64)) % p, p)


def meataxe(module: MatrixModule, rng: np.random.Generator, budget: int = 40, seed=None) -> Certificate:
    """Norton-criterion irreducibility test."""
    p, D = module.p, module.dim
    if D == 1:
        return Certificate("irreducible", seed, 0)
    if D == 0:
        raise ValueError("zero module")
    if not module.gens.any():
        v = np.zeros((1, D), dtype=np.int64)
        v[0, 0] = 1
        return Certificate("reducible", seed, 0, submodule=v)
    dual = None
    for attempt in range(1, budget + 1):
        recipe = random_recipe(rng, module.ngens, p)
        theta = apply_recipe(module, recipe)
        for c in range(p):
            K = _kernel(theta, c, p)
            if not len(K):
                continue
            S = spin(module, K[:1])
            if len(S) < D:
                return Certificate("reducible", seed, attempt, recipe, c, S)
            if len(K) > 1:
                continue
            if dual is None:
                dual = module.transpose()
            Kt = _kernel(theta.T.copy(), c, p)
            U = spin(dual, Kt[:1])
            if len(U) < D:
                # the annihilator of a dual submodule is a submodule of M
                return Certificate("reducible", seed, attempt, recipe, c, ffield.nullspace(U, p))
            return Certificate("irreducible", seed, attempt, recipe, c)
    return Certificate("inconclusive", seed, budget)


def is_irreducible(module: MatrixModule, seed: int = 0, budget: int = 40) -> Certificate:
    return meataxe(module, np.random.default_rng(seed), budget, seed)


@dataclass
class Factor:
    module: MatrixModule
    certificate: Certificate

    @property
    def dim(self) -> int:
        return self.module.dim


def composition_factors(module: MatrixModule, seed: int = 0, budget: int = 40) -> list[Factor]:
    """Irreducible subquotients, listed bottom-up along a composition series."""
    rng = np.random.default_rng(seed)
    out: list[Factor] = []

    def rec(M: MatrixModule):
        cert = meataxe(M, rng, budget, seed)
        if cert.status == "inconclusive":
            raise MeatAxeInconclusive(f"no certificate for a factor of dimension {M.dim} "
                                      f"after {budget} attempts (seed {seed})")
        if cert.status == "irreducible":
            out.append(Factor(M, cert))
            return
        S = cert.submodule
        rec(M.submodule(S))
        rec(M.quotient(S))

    rec(module)
    return out


def composition_factor_dims(module: MatrixModule, seed: int = 0, budget: int = 40) -> list[int]:
    return sorted(f.dim for f in composition_factors(module, seed, budget))


# ---------------------------------------------------------------------------
# isomorphism of irreducible modules via standard bases


@njit(cache=True)
def _reduce_insert(R, piv, n, w, p, inv_table):
    """Reduce w against the n echelon rows of R; append it if nonzero."""
    D = w.shape[0]
    for k in range(n):
        f = w[piv[k]]
        if f != 0:
            for j in range(D):
                w[j] = (w[j] - f * R[k, j]) % p
    for j in range(D):
        if w[j] != 0:
            inv = inv_table[w[j]]
            for t in range(D):
                R[n, t] = (w[t] * inv) % p
            piv[n] = j
            return True
    return False


def standard_basis(module: MatrixModule, v) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Spin v one vector at a time; returns the basis (columns) and its (parent, generator) recipe."""
    p, D = module.p, module.dim
    inv = ffield.inverse_table(p)
    R = np.zeros((D, D), dtype=np.int64)
    piv = np.zeros(D, dtype=np.int64)
    basis = [np.mod(np.asarray(v, dtype=np.int64), p)]
    _reduce_insert(R, piv, 0, basis[0].copy(), p, inv)
    n = 1
    steps: list[tuple[int, int]] = []
    G = module.gens.astype(np.float64).reshape(-1, D)
    j = 0
    while j < len(basis) and n < D:
        imgs = np.mod(np.rint(G @ basis[j].astype(np.float64)).astype(np.int64), p).reshape(module.ngens, D)
        for g in range(module.ngens):
            if n == D:
                break
            if _reduce_insert(R, piv, n, imgs[g].copy(), p, inv):
                n += 1
                basis.append(imgs[g])
                steps.append((j, g))
        j += 1
    return np.array(basis).T, steps


def follow_steps(module: MatrixModule, v, steps) -> np.ndarray:
    p = module.p
    cols = [np.mod(np.asarray(v, dtype=np.int64), p)]
    for parent, g in steps:
        cols.append(ffield.matmul(module.gen(g), cols[parent][:, None], p)[:, 0])
    return np.array(cols).T


def standard_form(module: MatrixModule, S: np.ndarray) -> np.ndarray | None:
    """The generators conjugated into the basis S, or None if S is singular."""
    try:
        Sinv = ffield.inverse(S, module.p)
    except np.linalg.LinAlgError:
        return None
    return np.array([ffield.matmul(ffield.matmul(Sinv, module.gen(k), module.p), S, module.p)
                     for k in range(module.ngens)])


@dataclass
class IsoKey:
    """Data of an irreducible module that new modules are compared against."""

    recipe: dict
    eigenvalue: int
    trace: int
    steps: list
    form: np.ndarray = field(repr=False)


def iso_key(module: MatrixModule, rng: np.random.Generator, budget: int = 40) -> IsoKey:
    """Recipe with a one-dimensional eigenspace plus the resulting standard form."""
    p = module.p
    for _ in range(budget):
        recipe = random_recipe(rng, module.ngens, p)
        theta = apply_recipe(module, recipe)
        for c in range(p):
            K = _kernel(theta, c, p)
            if len(K) == 1:
                S, steps = standard_basis(module, K[0])
                if S.shape[1] != module.dim:
                    raise ValueError("module is reducible: a kernel vector does not spin to everything")
                return IsoKey(recipe, c, int(np.trace(theta) % p), steps, standard_form(module, S))
    raise MeatAxeInconclusive("no element with a one-dimensional eigenspace found")


def matches(key: IsoKey, module: MatrixModule) -> bool:
    """Is ``module`` isomorphic to the irreducible module that produced ``key``?"""
    p = module.p
    if module.dim != key.form.shape[1]:
        return False
    theta = apply_recipe(module, key.recipe)
    if int(np.trace(theta) % p) != key.trace:
        return False
    K = _kernel(theta, key.eigenvalue, p)
    if len(K) != 1:
        return False
    form = standard_form(module, follow_steps(module, K[0], key.steps))
    return form is not None and np.array_equal(form, key.form)


def isomorphic(m1: MatrixModule, m2: MatrixModule, seed: int = 0, budget: int = 40) -> bool:
    """Isomorphism test for irreducible modules over the same generator list."""
    if m1.dim != m2.dim or m1.ngens != m2.ngens:
        return False
    return matches(iso_key(m1, np.random.default_rng(seed), budget), m2)
