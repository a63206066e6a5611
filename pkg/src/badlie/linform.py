"""p-characters on Chevalley-basis algebras and their centralisers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ffield
from .chevalley import LieAlgebra


class OddCodimensionError(ArithmeticError):
    """The centraliser has odd codimension, so d(chi) is not an integer."""

    def __init__(self, dim: int, codim: int):
        super().__init__(f"centraliser of dimension {dim} has odd codimension {codim}")
        self.dim = dim
        self.codim = codim


@dataclass
class LinearForm:
    """chi in g^*, stored by its values on the basis."""

    alg: LieAlgebra
    values: np.ndarray
    levi_subset: tuple[int, ...] | None = None

    def __post_init__(self):
        self.values = np.mod(np.asarray(self.values, dtype=np.int64), self.alg.p)
        if self.values.shape != (self.alg.dim,):
            raise ValueError("form length does not match the algebra dimension")

    def __call__(self, x) -> int:
        return int(np.dot(self.values, np.asarray(x, dtype=np.int64)) % self.alg.p)

    @property
    def p(self) -> int:
        return self.alg.p

    def in_b_perp(self) -> bool:
        """True when chi vanishes on h and on every positive root vector."""
        return not self.values[self.alg.N:].any()

    def is_zero(self) -> bool:
        return not self.values.any()

    def support_labels(self) -> list[str]:
        return [self.alg.label(i) for i in np.flatnonzero(self.values)]


def standard_levi_form(alg: LieAlgebra, subset) -> LinearForm:
    """chi(e_{-alpha_i}) = 1 for i in ``subset`` (1-based), zero on every other basis vector."""
    subset = tuple(sorted(set(int(i) for i in subset)))
    if any(i < 1 or i > alg.rank for i in subset):
        raise ValueError(f"simple root indices must lie in 1..{alg.rank}, got {list(subset)}")
    v = alg.zero()
    for i in subset:
        v[alg.neg_index(i - 1)] = 1
    return LinearForm(alg, v, subset)


def regular_form(alg: LieAlgebra) -> LinearForm:
    return standard_levi_form(alg, range(1, alg.rank + 1))


def zero_form(alg: LieAlgebra) -> LinearForm:
    return LinearForm(alg, alg.zero(), ())


def regular_nilpotent(alg: LieAlgebra) -> np.ndarray:
    """e = sum of the simple root vectors."""
    v = alg.zero()
    for i in range(alg.rank):
        v[alg.pos_index(i)] = 1
    return v


@dataclass
class CentralizerReport:
    alg: LieAlgebra = field(repr=False)
    basis: np.ndarray
    of: str = "form"
    d_chi: int | None = None
    support: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.alg.dim - self.dim

    def to_json(self) -> dict:
        return {
            "type": self.alg.name,
            "p": self.alg.p,
            "of": self.of,
            "chi_support": self.support,
            "dim": self.dim,
            "d_chi": self.d_chi,
            "basis": [[int(c) for c in row] for row in self.basis],
        }


def centralizer(chi: LinearForm) -> CentralizerReport:
    """c_g(chi) = {x : chi([x, g]) = 0}, as a reduced echelon basis."""
    alg = chi.alg
    M = alg.pairing_matrix(chi.values)
    # x lies in the centraliser iff sum_i x_i M[i, j] = 0 for every j
    basis = ffield.left_nullspace(M, alg.p)
    codim = alg.dim - len(basis)
    d = codim // 2 if codim % 2 == 0 else None
    return CentralizerReport(alg, basis, "form", d, chi.support_labels())


def element_centralizer(alg: LieAlgebra, e) -> CentralizerReport:
    """c_g(e) = ker ad(e)."""
    basis = ffield.nullspace(alg.ad_matrix(e), alg.p)
    return CentralizerReport(alg, basis, "element", None, [alg.label(i) for i in np.flatnonzero(e)])


def d_chi(chi: LinearForm, report: CentralizerReport | None = None) -> int:
    """Half the codimension of c_g(chi)."""
    report = report or centralizer(chi)
    if report.codim % 2:
        raise OddCodimensionError(report.dim, report.codim)
    return report.codim // 2


def delta_support(chi: LinearForm) -> set[tuple[int, ...]]:
    """Negative roots gamma with chi(e_gamma) != 0."""
    alg = chi.alg
    return {alg.basis_root(i) for i in range(alg.N) if chi.values[i]}


def in_centralizer(chi: LinearForm, x) -> bool:
    """chi([x, b]) = 0 for every basis vector b."""
    row = np.asarray(x, dtype=np.int64) @ chi.alg.pairing_matrix(chi.values) % chi.p
    return not row.any()
