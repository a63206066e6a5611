"""Divisibility bounds for dimensions of U_chi(g)-modules.

Three certificates are implemented:

* the non-special bound, exponent d(chi) = codim c_g(chi) / 2;
* the p-closed bound, exponent |Psi| for m = span{e_{-a} : a in Psi};
* induction from a subalgebra r with a one-dimensional chi-module, which
  produces a module of dimension p^(dim g - dim r).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ffield
from .chevalley import LieAlgebra
from .linform import LinearForm, centralizer, d_chi
from .rootsystem import RootSystem, add, root_system


class BoundError(ValueError):
    """A certificate condition failed; ``condition`` names it, ``witness`` shows why."""

    def __init__(self, condition: str, witness=None, message: str | None = None):
        super().__init__(message or f"{condition} failed (witness: {witness})")
        self.condition = condition
        self.witness = witness


@dataclass
class BoundReport:
    exponent: int
    method: str
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"exponent": self.exponent, "method": self.method, "witnesses": _jsonable(self.witnesses)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    return x


# ---------------------------------------------------------------------------
# non-special route


def is_nonspecial(type_name: str | RootSystem, p: int) -> bool:
    """p divides no nonzero off-diagonal Cartan entry."""
    rs = root_system(type_name) if isinstance(type_name, str) else type_name
    A = rs.cartan
    off = [int(A[i, j]) for i in range(rs.rank) for j in range(rs.rank) if i != j and A[i, j]]
    return all(a % p for a in off)


def bound_nonspecial(chi: LinearForm) -> BoundReport:
    alg = chi.alg
    if not is_nonspecial(alg.system, alg.p):
        raise BoundError("nonspecial", {"type": alg.name, "p": alg.p},
                         f"p={alg.p} is special for {alg.name}; use the p-closed route")
    rep = centralizer(chi)
    return BoundReport(d_chi(chi, rep), "nonspecial", {"dim_c_chi": rep.dim})


# ---------------------------------------------------------------------------
# p-closed route


def p_closed_violation(rs: RootSystem, psi, p: int):
    """First pair (a, b) in Psi breaking p-closedness, or None."""
    psi = [tuple(a) for a in psi]
    S = set(psi)
    sums: dict[tuple, list] = {}
    for i, a in enumerate(psi):
        for b in psi[i:]:
            s = add(a, b)
            if s in rs.root_set:
                sums.setdefault(s, []).append((a, b))
    for s, pairs in sums.items():
        if s in S:
            continue
        if any(rs.root_string_bound(a, b) % p for a, b in pairs):
            return pairs[0]
    return None


def is_p_closed(rs: RootSystem, psi, p: int) -> bool:
    return p_closed_violation(rs, psi, p) is None


def _sum_of_k(psi, target, k) -> bool:
    """Is ``target`` a sum of exactly k (not necessarily distinct) elements of psi?"""
    target = tuple(target)
    usable = [a for a in psi if all(x <= t for x, t in zip(a, target))]
    layer = {tuple(0 for _ in target)}
    for _ in range(k):
        nxt = set()
        for v in layer:
            for a in usable:
                w = add(v, a)
                if all(x <= t for x, t in zip(w, target)):
                    nxt.add(w)
        layer = nxt
    return target in layer


def bound_p_closed(chi: LinearForm, psi) -> BoundReport:
    """Exponent |Psi| when m = span{e_{-a}} satisfies the unipotent-subalgebra conditions."""
    alg = chi.alg
    rs, p = alg.system, alg.p
    psi = [tuple(a) for a in psi]
    if not set(psi) <= set(rs.positive_roots):
        raise BoundError("subset", sorted(set(psi) - set(rs.positive_roots)), "Psi must consist of positive roots")
    if not psi:
        return BoundReport(0, "p-closed", {"psi_size": 0})
    bad = p_closed_violation(rs, psi, p)
    if bad is not None:
        raise BoundError("p-closed", [list(bad[0]), list(bad[1])])
    S = set(psi)
    for i, a in enumerate(psi):
        for b in psi[i:]:
            s = add(a, b)
            if s in S and chi(alg.e(tuple(-c for c in s))):
                raise BoundError("chi([m,m])=0", list(s))
    # chi(m^[p]) = 0 needs chi to vanish on e_{-(g1+...+gp)} for all g_i in Psi
    for i in range(alg.N):
        if chi.values[i]:
            target = tuple(-c for c in alg.basis_root(i))
            if _sum_of_k(psi, target, p):
                raise BoundError("chi(m^[p])=0", list(target))
    m = np.zeros((len(psi), alg.dim), dtype=np.int64)
    for row, a in enumerate(psi):
        m[row, alg.root_vector_index(tuple(-c for c in a))] = 1
    C = centralizer(chi).basis
    inter = _intersection_vector(m, C, p)
    if inter is not None:
        raise BoundError("m ∩ c_g(chi) = 0", {alg.label(j): int(inter[j]) for j in np.flatnonzero(inter)})
    return BoundReport(len(psi), "p-closed", {"psi_size": len(psi), "dim_c_chi": len(C)})


def _intersection_vector(U, V, p):
    """A nonzero vector of rowspace(U) ∩ rowspace(V), or None."""
    if len(U) == 0 or len(V) == 0:
        return None
    K = ffield.left_nullspace(np.vstack([U, V]), p)
    for k in K:
        v = k[: len(U)] @ U % p
        if v.any():
            return v
    return None


# ---------------------------------------------------------------------------
# induction subalgebras


@dataclass
class SubalgebraCandidate:
    alg: LieAlgebra = field(repr=False)
    generators: np.ndarray
    closure_basis: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.closure_basis)


def subalgebra_candidate(alg: LieAlgebra, generators) -> SubalgebraCandidate:
    """Echelonised span of ``generators`` (closure is checked, not forced)."""
    G = np.mod(np.asarray(generators, dtype=np.int64), alg.p)
    return SubalgebraCandidate(alg, G, ffield.row_space(G, alg.p))


def lie_closure(alg: LieAlgebra, generators) -> SubalgebraCandidate:
    """Smallest subalgebra containing ``generators``."""
    p = alg.p
    G = np.mod(np.asarray(generators, dtype=np.int64), p)
    R, piv = ffield.rref(G, p)
    while True:
        brackets = np.array([alg.bracket(x, y) for i, x in enumerate(R) for y in R[i + 1:]]).reshape(-1, alg.dim)
        if not len(brackets):
            break
        R2, piv2 = ffield.rref(np.vstack([R, brackets]), p)
        if len(R2) == len(R):
            break
        R, piv = R2, piv2
    return SubalgebraCandidate(alg, G, R)


def _in_span(vectors, R, p):
    """Mask of rows of ``vectors`` lying in the row space of the echelon matrix R."""
    piv = [int(np.flatnonzero(row)[0]) for row in R]
    res = ffield.reduce_against(np.atleast_2d(vectors), R, piv, p)
    return ~res.any(axis=1), res


def verify_induction_subalgebra(cand: SubalgebraCandidate, chi: LinearForm) -> BoundReport:
    """Certify that chi restricts to a one-dimensional U_chi(r)-module.

    Checks bracket closure, chi([r, r]) = 0, r^[p] inside r and chi(r^[p]) = 0.
    The induced module has dimension p^(dim g - dim r).
    """
    alg, p = cand.alg, cand.alg.p
    R = cand.closure_basis
    labels = lambda v: {alg.label(j): int(v[j]) for j in np.flatnonzero(v)}
    # (i) closure
    for i, x in enumerate(R):
        B = (alg.ad_matrix(x) @ R[i + 1:].T % p).T
        ok, res = _in_span(B, R, p) if len(B) else (np.array([], bool), None)
        if len(B) and not ok.all():
            j = i + 1 + int(np.flatnonzero(~ok)[0])
            raise BoundError("closure", {"x": labels(R[i]), "y": labels(R[j])})
    # (ii) chi([r, r]) = 0
    G = R @ alg.pairing_matrix(chi.values) @ R.T % p
    if G.any():
        i, j = map(int, np.argwhere(G)[0])
        raise BoundError("chi([r,r])=0", {"x": labels(R[i]), "y": labels(R[j])})
    # (iii) the p-map on basis elements
    C = alg.center
    if len(C) and any(chi(z) for z in C):
        raise BoundError("centre ambiguity", [labels(z) for z in C],
                         "chi does not vanish on the centre, so chi(x^[p]) is not determined")
    ambiguous = False
    for x in R:
        res = alg.restricted_power(x)
        ambiguous |= res.ambiguous
        if chi(res.value):
            raise BoundError("chi(r^[p])=0", {"x": labels(x), "x^[p]": labels(res.value)})
        exact = alg.jacobson_power(x)
        if not _in_span(exact, R, p)[0][0]:
            raise BoundError("r^[p] in r", {"x": labels(x), "x^[p]": labels(exact)})
    exponent = alg.dim - cand.dim
    return BoundReport(exponent, "induction", {"dim_r": cand.dim, "dim_g": alg.dim,
                                                "centre_dim": len(C), "centre_ambiguous": ambiguous})


# ---------------------------------------------------------------------------


def best_bound(chi: LinearForm) -> BoundReport:
    """Largest exponent among the non-special and p-closed certificates.

    Ties go to the non-special route.  p-closed candidates tried: all of
    Phi^+, then Phi^+ minus one root.
    """
    alg = chi.alg
    rs = alg.system
    trail = []
    best: BoundReport | None = None

    def consider(rep: BoundReport):
        nonlocal best
        if best is None or rep.exponent > best.exponent:
            best = rep

    try:
        rep = bound_nonspecial(chi)
        trail.append({"method": "nonspecial", "exponent": rep.exponent})
        consider(rep)
    except BoundError as err:
        trail.append({"method": "nonspecial", "failed": err.condition})
    full = list(rs.positive_roots)
    try:
        rep = bound_p_closed(chi, full)
        trail.append({"method": "p-closed", "psi": "all positive roots", "exponent": rep.exponent})
        consider(rep)
    except BoundError as err:
        trail.append({"method": "p-closed", "psi": "all positive roots", "failed": err.condition})
        if best is None or best.exponent < len(full) - 1:
            for g in full:
                psi = [a for a in full if a != g]
                try:
                    rep = bound_p_closed(chi, psi)
                except BoundError:
                    continue
                rep.witnesses["removed_root"] = list(g)
                trail.append({"method": "p-closed", "psi": f"all positive roots except {list(g)}",
                              "exponent": rep.exponent})
                consider(rep)
                break
    if best is None:
        best = BoundReport(0, "trivial")
    best.witnesses["trail"] = trail
    return best
