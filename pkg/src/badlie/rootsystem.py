"""Root systems of the irreducible reduced types.

Roots are integer tuples of coefficients in the simple-root basis.  The
Cartan matrix convention is ``A[i][j] = <alpha_j, alpha_i^vee>`` so the
``i``-th column of ``A`` is ``alpha_i`` written in fundamental-weight
coordinates.  Simple roots of the exceptional types are numbered as in
``data/labels.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod

import numpy as np

Root = tuple[int, ...]

CLASSICAL_N = {
    "E": {6: 36, 7: 63, 8: 120},
    "F": {4: 24},
    "G": {2: 6},
}


class CartanError(ValueError):
    """Raised for matrices that are not valid irreducible finite-type Cartan matrices."""


def _chain(n: int) -> list[list[int]]:
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = 2
        if i + 1 < n:
            A[i][i + 1] = A[i + 1][i] = -1
    return A


def _link(A, i, j, a=-1, b=-1):
    A[i][j] = a
    A[j][i] = b


def cartan_matrix(type_label: str, rank: int) -> list[list[int]]:
    """Cartan matrix of the given type; exceptional labels as in labels.json."""
    t = type_label.upper()
    n = rank
    if t == "A" and n >= 1:
        return _chain(n)
    if t == "B" and n >= 2:
        A = _chain(n)
        # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
        A[n - 1][n - 2] = -2
        return A
    if t == "C" and n >= 2:
        A = _chain(n)
        A[n - 2][n - 1] = -2
        return A
    if t == "D" and n >= 3:
        A = _chain(n)
        A[n - 2][n - 1] = A[n - 1][n - 2] = 0
        _link(A, n - 3, n - 1)
        return A
    if t == "E" and n in (6, 7, 8):
        # chain 1..n-1, node n attached to node n-3
        A = _chain(n - 1)
        for row in A:
            row.append(0)
        A.append([0] * n)
        A[n - 1][n - 1] = 2
        _link(A, n - 4, n - 1)
        return A
    if t == "F" and n == 4:
        A = _chain(4)
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        A[2][1] = -2
        return A
    if t == "G" and n == 2:
        # alpha_1 short, alpha_2 long
        return [[2, -3], [-1, 2]]
    raise CartanError(f"no irreducible root system of type {type_label}{rank}")


def expected_positive_roots(type_label: str, rank: int) -> int:
    t, n = type_label.upper(), rank
    if t == "A":
        return n * (n + 1) // 2
    if t in ("B", "C"):
        return n * n
    if t == "D":
        return n * (n - 1)
    return CLASSICAL_N[t][n]


@dataclass(frozen=True)
class CartanDatum:
    type_label: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, type_label: str, rank: int) -> "CartanDatum":
        A = cartan_matrix(type_label, rank)
        return cls(type_label.upper(), rank, tuple(tuple(r) for r in A))

    @classmethod
    def parse(cls, name: str) -> "CartanDatum":
        """``"G2"`` -> CartanDatum for G_2."""
        name = name.strip()
        try:
            return cls.of(name[0], int(name[1:]))
        except (IndexError, ValueError) as exc:
            raise CartanError(f"cannot parse root system name {name!r}") from exc

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"


def _root_lengths(A: np.ndarray) -> list[Fraction]:
    """Squared lengths of simple roots, normalised so the shortest is 2."""
    n = A.shape[0]
    lengths: list[Fraction | None] = [None] * n
    lengths[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if i != j and A[i, j] != 0 and lengths[j] is None:
                # a_ij |alpha_i|^2 = a_ji |alpha_j|^2
                lengths[j] = lengths[i] * Fraction(int(A[i, j]), int(A[j, i]))
                stack.append(j)
    if any(x is None for x in lengths):
        raise CartanError("Dynkin diagram is not connected")
    m = min(lengths)
    return [2 * x / m for x in lengths]


def _validate(datum: CartanDatum) -> np.ndarray:
    A = np.array(datum.cartan_matrix, dtype=np.int64)
    n = datum.rank
    if A.shape != (n, n):
        raise CartanError(f"Cartan matrix must be {n}x{n}, got {A.shape}")
    if not np.all(np.diag(A) == 2):
        raise CartanError("diagonal entries must equal 2")
    off = A[~np.eye(n, dtype=bool)]
    if not np.all(np.isin(off, (0, -1, -2, -3))):
        raise CartanError("off-diagonal entries must lie in {0,-1,-2,-3}")
    if not np.array_equal(A == 0, A.T == 0):
        raise CartanError("a_ij = 0 must imply a_ji = 0")
    lengths = _root_lengths(A)
    B = np.array([[A[i, j] * lengths[i] / 2 for j in range(n)] for i in range(n)], dtype=object)
    if any(B[i, j] != B[j, i] for i in range(n) for j in range(n)):
        raise CartanError("Cartan matrix is not symmetrisable")
    if np.linalg.det(B.astype(float)) <= 0:
        raise CartanError("Cartan matrix is not of finite type")
    return A


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    positive_roots: tuple[Root, ...]
    simple_lengths: tuple[Fraction, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def N(self) -> int:
        return len(self.positive_roots)

    @property
    def name(self) -> str:
        return self.datum.name

    @cached_property
    def cartan(self) -> np.ndarray:
        return np.array(self.datum.cartan_matrix, dtype=np.int64)

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        """All roots: positive roots followed by their negatives, same order."""
        return self.positive_roots + tuple(neg(r) for r in self.positive_roots)

    @cached_property
    def index(self) -> dict[Root, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        """Symmetric form on the simple roots (short roots have length 2)."""
        n = self.rank
        A = self.cartan
        return [[A[i, j] * self.simple_lengths[i] / 2 for j in range(n)] for i in range(n)]

    def simple_root(self, i: int) -> Root:
        return tuple(int(k == i) for k in range(self.rank))

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    def height(self, r: Root) -> int:
        return sum(r)

    def is_positive(self, r: Root) -> bool:
        return any(c > 0 for c in r)

    def inner(self, a: Root, b: Root) -> Fraction:
        G = self.gram
        return sum((a[i] * b[j] * G[i][j] for i in range(self.rank) for j in range(self.rank)
                    if a[i] and b[j]), Fraction(0))

    def norm2(self, a: Root) -> Fraction:
        return self.inner(a, a)

    def pairing(self, r: Root, i: int) -> int:
        """<r, alpha_i^vee>."""
        A = self.cartan
        return int(sum(r[j] * A[i, j] for j in range(self.rank)))

    def coroot_coefficients(self, r: Root) -> tuple[int, ...]:
        """Coefficients of r^vee in the simple coroots."""
        n2 = self.norm2(r)
        out = []
        for i, c in enumerate(r):
            k = c * self.simple_lengths[i] / n2
            if k.denominator != 1:
                raise ArithmeticError(f"non-integral coroot coefficient for {r}")
            out.append(int(k))
        return tuple(out)

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def reflect(self, i: int, v) -> tuple[int, ...]:
        """s_i applied to a vector in simple-root coordinates."""
        if not 0 <= i < self.rank:
            raise IndexError(f"simple index {i} out of range for rank {self.rank}")
        v = tuple(v)
        c = self.pairing(v, i)
        return tuple(x - c * (k == i) for k, x in enumerate(v))

    def reflect_weight(self, i: int, weight) -> tuple[int, ...]:
        """s_i on fundamental-weight coordinates: subtract weight_i times column i of A."""
        if not 0 <= i < self.rank:
            raise IndexError(f"simple index {i} out of range for rank {self.rank}")
        w = tuple(weight)
        A = self.cartan
        return tuple(int(w[j] - w[i] * A[j, i]) for j in range(self.rank))

    def root_string_bound(self, alpha: Root, beta: Root) -> int:
        """C_{alpha,beta} = q + 1 where q is maximal with beta - q*alpha a root."""
        alpha, beta = tuple(alpha), tuple(beta)
        if alpha == beta or alpha == neg(beta):
            raise ValueError("root string of alpha through +-alpha is degenerate")
        if not (self.is_root(alpha) and self.is_root(beta)):
            raise ValueError("both arguments must be roots")
        q = 0
        while self.is_root(sub(beta, scale(q + 1, alpha))):
            q += 1
        return q + 1

    def string_interval(self, alpha: Root, beta: Root) -> list[int]:
        """All k with beta + k*alpha a root (k in the a priori range [-3, 3])."""
        return [k for k in range(-3, 4) if self.is_root(add(beta, scale(k, alpha)))]

    def weight_coords(self, r: Root) -> tuple[int, ...]:
        """A root written in fundamental-weight coordinates."""
        return tuple(self.pairing(r, i) for i in range(self.rank))

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        """Exponents, read off as the partition dual to the height distribution."""
        counts: dict[int, int] = {}
        for r in self.positive_roots:
            counts[sum(r)] = counts.get(sum(r), 0) + 1
        out = []
        for k in range(1, max(counts) + 1):
            out += [k] * (counts.get(k, 0) - counts.get(k + 1, 0))
        return tuple(sorted(out))

    @property
    def weyl_order(self) -> int:
        return prod(e + 1 for e in self.exponents)

    def to_json(self) -> dict:
        return {
            "type": self.datum.type_label,
            "rank": self.rank,
            "cartan_matrix": [list(r) for r in self.datum.cartan_matrix],
            "positive_roots": [list(r) for r in self.positive_roots],
        }


def neg(r) -> Root:
    return tuple(-x for x in r)


def add(a, b) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a) -> Root:
    return tuple(k * x for x in a)


def root_order_key(r: Root) -> tuple:
    # height first; within a height, alpha_1-heavy roots first so that the
    # simple roots appear as alpha_1, alpha_2, ...
    return (sum(r), tuple(-c for c in r))


def build_root_system(datum: CartanDatum) -> RootSystem:
    """Generate all positive roots by climbing root strings height by height."""
    A = _validate(datum)
    n = datum.rank
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for r in layer:
            for i in range(n):
                # p = how far down the alpha_i-string goes from r
                p = 0
                down = list(r)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                q = p - int(sum(r[j] * A[i, j] for j in range(n)))
                if q > 0:
                    up = list(r)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= found
        found |= nxt
        layer = list(nxt)
        if len(found) > 2 * n * n + 120:
            raise CartanError("root generation did not terminate")
    positive = tuple(sorted(found, key=root_order_key))
    rs = RootSystem(datum, positive, tuple(_root_lengths(A)))
    if rs.N != expected_positive_roots(datum.type_label, n):
        raise CartanError(
            f"matrix yields {rs.N} positive roots, expected "
            f"{expected_positive_roots(datum.type_label, n)} for {datum.name}")
    if datum.type_label in ("B", "C", "F", "G"):
        short = sum(1 for r in positive if rs.norm2(r) == 2)
        canonical = _short_root_count(datum.type_label, n)
        if short != canonical:
            raise CartanError(f"root lengths do not match type {datum.name}")
    return rs


def _short_root_count(t: str, n: int) -> int:
    return {"B": n, "C": n * (n - 1), "F": 12, "G": 3}[t]


@lru_cache(maxsize=None)
def root_system(name: str) -> RootSystem:
    """Cached root system by name, e.g. ``root_system("E8")``."""
    return build_root_system(CartanDatum.parse(name))


def load_labels() -> dict:
    from importlib.resources import files

    return json.loads(files("badlie.data").joinpath("labels.json").read_text())
