"""Finite reduced root systems with integral coweight data.

Roots are stored in simple-root coordinates, coweights in
fundamental-coweight coordinates, so that the pairing of a root with a
coweight is the plain dot product of the two coordinate vectors.  The
coweight lattice is the full lattice spanned by the fundamental coweights
(adjoint convention), and the group of length zero elements is modelled
by the quotient of that lattice by the coroot lattice.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

SUPPORTED_TYPES = ("A", "B", "C", "D")
MAX_ROOTS = 2000


class RootDatumError(ValueError):
    pass


def cartan_matrix(type_letter: str, rank: int) -> Matrix:
    """Cartan matrix in Bourbaki numbering, entry [i][j] = <alpha_j, alpha_i^vee>."""
    t = type_letter.upper()
    if t not in SUPPORTED_TYPES:
        raise RootDatumError(f"unsupported Dynkin type {type_letter!r}; choose one of {SUPPORTED_TYPES}")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4}[t]
    if not isinstance(rank, int) or rank < minimum:
        raise RootDatumError(f"type {t} needs rank >= {minimum}, got {rank!r}")
    c = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        c[i][i] = 2
    for i in range(rank - 1):
        c[i][i + 1] = c[i + 1][i] = -1
    if t == "B":
        # alpha_r short
        c[rank - 1][rank - 2] = -2
    elif t == "C":
        # alpha_r long
        c[rank - 2][rank - 1] = -2
    elif t == "D":
        c[rank - 2][rank - 1] = c[rank - 1][rank - 2] = 0
        c[rank - 3][rank - 1] = c[rank - 1][rank - 3] = -1
    return tuple(tuple(row) for row in c)


def _hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Upper triangular row-style Hermite form of a full rank square integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    for col in range(n):
        # Euclid on the column below the diagonal
        while True:
            nz = [i for i in range(col, n) if a[i][col] != 0]
            if not nz:
                raise RootDatumError("lattice is not of full rank")
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[col], a[piv] = a[piv], a[col]
            done = True
            for i in range(col + 1, n):
                q = a[i][col] // a[col][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[col])]
                if a[i][col] != 0:
                    done = False
            if done:
                break
        if a[col][col] < 0:
            a[col] = [-x for x in a[col]]
    for col in range(n):
        for i in range(col):
            q = a[i][col] // a[col][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[col])]
    return a


class RootDatum:
    """Exact model of a finite reduced root system and its coweight lattice.

    Built from a Cartan matrix; use :func:`build_root_datum` for the named
    types.  Instances are treated as immutable.
    """

    def __init__(self, cartan: Sequence[Sequence[int]], name: str | None = None):
        cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        r = len(cartan)
        if r == 0 or any(len(row) != r for row in cartan):
            raise RootDatumError("Cartan matrix must be square and non-empty")
        for i in range(r):
            if cartan[i][i] != 2:
                raise RootDatumError("Cartan matrix must have 2 on the diagonal")
            for j in range(r):
                if i != j and (cartan[i][j] > 0 or (cartan[i][j] == 0) != (cartan[j][i] == 0)):
                    raise RootDatumError("off-diagonal Cartan entries must be <= 0 and zero-symmetric")
        self.cartan: Matrix = cartan
        self.rank = r
        self.name = name or "cartan"
        self.simple_roots = tuple(range(1, r + 1))
        self._build_roots()
        self._build_components()
        self._build_lattices()

    # -- construction helpers -------------------------------------------------

    def _reflect_root(self, i: int, beta: Vector) -> Vector:
        c = sum(b * self.cartan[i][j] for j, b in enumerate(beta))
        out = list(beta)
        out[i] -= c
        return tuple(out)

    def _reflect_coroot(self, i: int, gamma: Vector) -> Vector:
        # gamma in simple-coroot coordinates
        c = sum(g * self.cartan[j][i] for j, g in enumerate(gamma))
        out = list(gamma)
        out[i] -= c
        return tuple(out)

    def _build_roots(self) -> None:
        r = self.rank
        simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        coroot_of = {s: s for s in simple}
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(r):
                    gamma = self._reflect_root(i, beta)
                    if any(x < 0 for x in gamma) or gamma in coroot_of:
                        continue
                    coroot_of[gamma] = self._reflect_coroot(i, coroot_of[beta])
                    nxt.append(gamma)
                    if len(coroot_of) > MAX_ROOTS:
                        raise RootDatumError("Cartan matrix is not of finite type")
            frontier = nxt
        order = sorted(coroot_of, key=lambda b: (sum(b), tuple(-x for x in b)))
        self.positive_roots: tuple[Vector, ...] = tuple(order)
        self.coroots: tuple[Vector, ...] = tuple(coroot_of[b] for b in order)
        self.root_index = {b: k for k, b in enumerate(order)}
        # coroots in fundamental-coweight coordinates: alpha_j^vee = row j of the Cartan matrix
        self.coroot_coweights: tuple[Vector, ...] = tuple(
            tuple(sum(g * self.cartan[j][k] for j, g in enumerate(gam)) for k in range(r))
            for gam in self.coroots
        )
        self.two_rho: Vector = tuple(sum(b[k] for b in order) for k in range(r))

    def _build_components(self) -> None:
        r = self.rank
        seen: set[int] = set()
        comps = []
        for start in range(r):
            if start in seen:
                continue
            comp, stack = set(), [start]
            while stack:
                i = stack.pop()
                if i in comp:
                    continue
                comp.add(i)
                stack.extend(j for j in range(r) if j != i and self.cartan[i][j] != 0)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        self.components: tuple[tuple[int, ...], ...] = tuple(comps)
        highest = []
        for comp in comps:
            cands = [b for b in self.positive_roots if all(b[k] == 0 for k in range(r) if k not in comp)]
            highest.append(max(cands, key=sum))
        self.highest_roots: tuple[Vector, ...] = tuple(highest)
        self.highest_root = highest[0]
        # affine nodes: 1..r finite, then one extra node per component
        specials = [0] + [r + c for c in range(1, len(comps))]
        self.special_nodes: tuple[int, ...] = tuple(specials)
        self.affine_nodes: tuple[int, ...] = tuple(sorted([0, *range(1, r + 1), *specials[1:]]))

    def _build_lattices(self) -> None:
        h = _hermite_rows(self.cartan)
        self._hnf = h
        reps = self._all_reduced()
        # when Omega is cyclic, index k stands for the k-th power of the class of
        # the first fundamental coweight generating it
        for i in range(self.rank):
            gen = self._reduce([int(k == i) for k in range(self.rank)])
            powers, cur = [self._reduce([0] * self.rank)], gen
            while cur != powers[0]:
                powers.append(cur)
                cur = self._reduce([a + b for a, b in zip(cur, gen)])
            if len(powers) == len(reps):
                reps = powers
                break
        self._omega_reps = reps
        self._omega_index = {v: k for k, v in enumerate(self._omega_reps)}

    def _all_reduced(self) -> list[Vector]:
        reps: list[list[int]] = [[]]
        for i in range(self.rank):
            reps = [v + [k] for v in reps for k in range(self._hnf[i][i])]
        return sorted(tuple(v) for v in reps)

    # -- public API -------------------------------------------------------------

    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    def simple_root(self, i: int) -> Vector:
        if not 1 <= i <= self.rank:
            raise RootDatumError(f"no simple root {i}")
        return tuple(int(k == i - 1) for k in range(self.rank))

    def fundamental_coweight(self, i: int) -> Vector:
        return self.simple_root(i)

    @property
    def fundamental_coweights(self) -> tuple[Vector, ...]:
        return tuple(self.fundamental_coweight(i) for i in self.simple_roots)

    def simple_coroot(self, i: int) -> Vector:
        """alpha_i^vee in fundamental-coweight coordinates."""
        if not 1 <= i <= self.rank:
            raise RootDatumError(f"no simple coroot {i}")
        return self.cartan[i - 1]

    def coroot_of(self, beta: Vector) -> Vector:
        """Coroot of a (signed) root, in fundamental-coweight coordinates."""
        beta = tuple(beta)
        if beta in self.root_index:
            return self.coroot_coweights[self.root_index[beta]]
        neg = tuple(-x for x in beta)
        if neg in self.root_index:
            return tuple(-x for x in self.coroot_coweights[self.root_index[neg]])
        raise RootDatumError(f"{beta} is not a root")

    def is_root(self, beta: Sequence[int]) -> bool:
        beta = tuple(beta)
        return beta in self.root_index or tuple(-x for x in beta) in self.root_index

    def pairing(self, alpha: Sequence, lam: Sequence):
        if len(alpha) != self.rank or len(lam) != self.rank:
            raise RootDatumError("dimension mismatch in pairing")
        return sum(a * x for a, x in zip(alpha, lam))

    def in_coroot_lattice(self, lam: Sequence[int]) -> bool:
        return self.omega_component(lam) == 0

    def _reduce(self, lam: Sequence[int]) -> Vector:
        v = list(lam)
        for i, row in enumerate(self._hnf):
            q = v[i] // row[i]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    def omega_component(self, lam: Sequence) -> int:
        """Index of the class of ``lam`` in the coweight lattice modulo coroots."""
        if len(lam) != self.rank:
            raise RootDatumError("dimension mismatch")
        if any(Fraction(x).denominator != 1 for x in lam):
            raise RootDatumError(f"{tuple(lam)} is not in the coweight lattice")
        return self._omega_index[self._reduce([int(x) for x in lam])]

    @property
    def omega_order(self) -> int:
        return len(self._omega_reps)

    def omega_rep(self, k: int) -> Vector:
        return self._omega_reps[k]

    def omega_add(self, a: int, b: int) -> int:
        return self.omega_component([x + y for x, y in zip(self._omega_reps[a], self._omega_reps[b])])

    def omega_neg(self, a: int) -> int:
        return self.omega_component([-x for x in self._omega_reps[a]])

    def omega_element_order(self, a: int) -> int:
        k, acc = 1, a
        while acc != 0:
            acc = self.omega_add(acc, a)
            k += 1
        return k

    def omega_is_cyclic(self) -> bool:
        return any(self.omega_element_order(a) == self.omega_order for a in range(self.omega_order))

    def theta_coefficient(self, i: int) -> int:
        """Coefficient of alpha_i in the highest root of its component."""
        comp = self.component_of(i)
        return self.highest_roots[comp][i - 1]

    def component_of(self, i: int) -> int:
        for c, comp in enumerate(self.components):
            if i - 1 in comp:
                return c
        raise RootDatumError(f"no node {i}")

    def minuscule_nodes(self) -> tuple[int, ...]:
        return tuple(i for i in self.simple_roots if self.theta_coefficient(i) == 1)

    def is_dominant(self, lam: Sequence) -> bool:
        return all(x >= 0 for x in lam)

    def __repr__(self) -> str:
        return f"RootDatum({self.name})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootDatum) and other.cartan == self.cartan

    def __hash__(self) -> int:
        return hash(self.cartan)


def direct_sum(*data: RootDatum) -> RootDatum:
    """Block diagonal root datum (reducible type)."""
    r = sum(d.rank for d in data)
    c = [[0] * r for _ in range(r)]
    off = 0
    for d in data:
        for i in range(d.rank):
            for j in range(d.rank):
                c[off + i][off + j] = d.cartan[i][j]
        off += d.rank
    return RootDatum(c, name="x".join(d.name for d in data))


def build_root_datum(type_letter: str, rank: int) -> RootDatum:
    return RootDatum(cartan_matrix(type_letter, rank), name=f"{type_letter.upper()}{rank}")
