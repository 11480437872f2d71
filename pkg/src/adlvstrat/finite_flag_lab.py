"""Full flags over small finite fields and classical Deligne-Lusztig varieties in type A.

Field elements of F_{p^m} are encoded as integers 0 .. q-1 whose base-p
digits are the coefficients (constant term first) of a polynomial modulo
a fixed irreducible polynomial.  Permutations are in one-line notation
``(w(1), ..., w(n))`` with composition ``(uv)(k) = u(v(k))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

Row = tuple[int, ...]
Perm = tuple[int, ...]

DEFAULT_NODE_BUDGET = 2_000_000


class FlagLabError(ValueError):
    pass


# -- prime field polynomials --------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over F_p (coefficient lists, constant term first)."""
    a = a[:]
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1]
        shift = len(a) - 1 - db
        for k in range(len(b)):
            a[shift + k] = (a[shift + k] - c * b[k]) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _monic_polys(degree: int, p: int):
    """Monic polynomials of the given degree, ordered by (c_{d-1}, ..., c_0) lexicographically."""
    for high_first in itertools.product(range(p), repeat=degree):
        yield list(reversed(high_first)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    d = len(poly) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for q in _monic_polys(e, p):
            if not _poly_mod(list(poly), q, p):
                return False
    return True


def least_irreducible(m: int, p: int) -> tuple[int, ...]:
    for f in _monic_polys(m, p):
        if is_irreducible(f, p):
            return tuple(f)
    raise FlagLabError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


class FiniteField:
    """F_{p^m} with full addition, multiplication, inverse and Frobenius tables."""

    def __init__(self, p: int, m: int):
        if not _is_prime(p):
            raise FlagLabError(f"{p} is not a prime")
        if m < 1:
            raise FlagLabError("extension degree must be positive")
        self.p, self.m = p, m
        self.q = q = p**m
        if q > 4096:
            raise FlagLabError(f"field of order {q} is too large for table arithmetic")
        self.modulus = least_irreducible(m, p)
        digits = [self._digits(a) for a in range(q)]
        self.add_table = [[self._encode([(x + y) % p for x, y in zip(da, db)]) for db in digits] for da in digits]
        self.neg_table = [self._encode([(-x) % p for x in da]) for da in digits]
        self.mul_table = [[self._mul_poly(da, db) for db in digits] for da in digits]
        self.inv_table = [0] * q
        for a in range(1, q):
            self.inv_table[a] = next(b for b in range(1, q) if self.mul_table[a][b] == 1)
        self.frob_table = [self.power(a, p) for a in range(q)]
        self.prime_field = frozenset(a for a in range(q) if self.frob_table[a] == a)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        out = 0
        for d in reversed(list(digits)):
            out = out * self.p + d
        return out

    def _mul_poly(self, a: Sequence[int], b: Sequence[int]) -> int:
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        r = _poly_mod(prod, list(self.modulus), self.p)
        return self._encode(r + [0] * (self.m - len(r)))

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def power(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul_table[out][a]
        return out

    def frob(self, a: int) -> int:
        return self.frob_table[a]

    def coordinates(self, a: int) -> list[int]:
        """Coordinates of a over F_p in the basis 1, x, ..., x^{m-1}."""
        return self._digits(a)

    def generator(self) -> int:
        """The class of x (or 0 when m = 1)."""
        return self.p if self.m > 1 else 0

    def __repr__(self) -> str:
        return f"FiniteField({self.p}^{self.m}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def finite_field(p: int, m: int) -> FiniteField:
    return FiniteField(p, m)


# -- linear algebra ------------------------------------------------------------------------------


def rref(F: FiniteField, rows: Iterable[Sequence[int]]) -> tuple[Row, ...]:
    """Reduced row echelon form with zero rows dropped."""
    a = [list(r) for r in rows]
    if not a:
        return ()
    ncols = len(a[0])
    out_rows = 0
    for c in range(ncols):
        piv = next((i for i in range(out_rows, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[out_rows], a[piv] = a[piv], a[out_rows]
        inv = F.inv(a[out_rows][c])
        a[out_rows] = [F.mul(inv, x) for x in a[out_rows]]
        prow = a[out_rows]
        for i in range(len(a)):
            if i != out_rows and a[i][c]:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], prow)]
        out_rows += 1
    return tuple(tuple(r) for r in a[:out_rows])


def span_dim(F: FiniteField, rows: Iterable[Sequence[int]]) -> int:
    return len(rref(F, rows))


def intersection_dim(F: FiniteField, U: Sequence[Row], V: Sequence[Row]) -> int:
    return len(U) + len(V) - span_dim(F, list(U) + list(V))


# -- flags ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Flag:
    """Full flag F_1 < ... < F_{n-1} in F_q^n; ``bases[i-1]`` is the echelon basis of F_i."""

    n: int
    p: int
    m: int
    bases: tuple[tuple[Row, ...], ...]

    @property
    def field(self) -> FiniteField:
        return finite_field(self.p, self.m)

    def subspace(self, i: int) -> tuple[Row, ...]:
        if i == 0:
            return ()
        if i == self.n:
            return tuple(tuple(int(a == b) for b in range(self.n)) for a in range(self.n))
        return self.bases[i - 1]


def flag_from_vectors(F: FiniteField, vectors: Sequence[Sequence[int]]) -> Flag:
    """The flag F_i = span(v_1, ..., v_i); the vectors must be independent."""
    n = len(vectors[0])
    if len(vectors) != n or len(rref(F, vectors)) != n:
        raise FlagLabError("vectors are linearly dependent")
    bases = []
    for i in range(1, n):
        b = rref(F, vectors[:i])
        if len(b) != i:
            raise FlagLabError("vectors are linearly dependent")
        bases.append(b)
    return Flag(n, F.p, F.m, tuple(bases))


def standard_flag(F: FiniteField, n: int) -> Flag:
    return flag_from_vectors(F, [[int(a == b) for b in range(n)] for a in range(n)])


def reversed_standard_flag(F: FiniteField, n: int) -> Flag:
    return flag_from_vectors(F, [[int(b == n - 1 - a) for b in range(n)] for a in range(n)])


def frobenius_rows(F: FiniteField, rows: Iterable[Sequence[int]]) -> tuple[Row, ...]:
    return rref(F, [[F.frob(x) for x in r] for r in rows])


def frobenius_flag(flag: Flag) -> Flag:
    F = flag.field
    return Flag(flag.n, flag.p, flag.m, tuple(frobenius_rows(F, b) for b in flag.bases))


def _check_compatible(a: Flag, b: Flag) -> None:
    if (a.n, a.p, a.m) != (b.n, b.p, b.m):
        raise FlagLabError("flags live in different spaces")


def rank_array(flag: Flag, flag2: Flag) -> list[list[int]]:
    """d[i][j] = dim(F_i intersect F2_j) for 0 <= i, j <= n."""
    _check_compatible(flag, flag2)
    F, n = flag.field, flag.n
    return [[intersection_dim(F, flag.subspace(i), flag2.subspace(j)) for j in range(n + 1)] for i in range(n + 1)]


def position_from_ranks(d: Sequence[Sequence[int]]) -> Perm:
    n = len(d) - 1
    w = [0] * n
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1:
                w[j - 1] = i
    if sorted(w) != list(range(1, n + 1)):
        raise FlagLabError("rank array is not that of a pair of flags")  # pragma: no cover
    return tuple(w)


def relative_position(flag: Flag, flag2: Flag) -> Perm:
    """The permutation w with flag2 in position w relative to flag."""
    return position_from_ranks(rank_array(flag, flag2))


def ranks_of_permutation(w: Perm) -> list[list[int]]:
    n = len(w)
    return [[sum(1 for k in range(j) if w[k] <= i) for j in range(n + 1)] for i in range(n + 1)]


# -- permutations -----------------------------------------------------------------------------------


def compose(u: Perm, v: Perm) -> Perm:
    return tuple(u[v[k] - 1] for k in range(len(v)))


def simple_transposition(n: int, i: int) -> Perm:
    w = list(range(1, n + 1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def perm_from_word(n: int, word: Iterable[int]) -> Perm:
    w = tuple(range(1, n + 1))
    for i in word:
        w = compose(w, simple_transposition(n, i))
    return w


def coxeter_element(n: int) -> Perm:
    """s_1 s_2 ... s_{n-1}."""
    return perm_from_word(n, range(1, n))


def longest_permutation(n: int) -> Perm:
    return tuple(range(n, 0, -1))


# -- enumeration ----------------------------------------------------------------------------------------


def _extensions(F: FiniteField, basis: tuple[Row, ...], n: int):
    """All subspaces of dimension dim(basis)+1 containing span(basis)."""
    pivots = {next(c for c, x in enumerate(r) if x) for r in basis}
    free = [c for c in range(n) if c not in pivots]
    for vals in itertools.product(range(F.q), repeat=len(free)):
        first = next((v for v in vals if v), None)
        if first != 1:
            continue
        vec = [0] * n
        for c, x in zip(free, vals):
            vec[c] = x
        yield rref(F, list(basis) + [vec])


def all_flags(F: FiniteField, n: int) -> list[Flag]:
    out = []

    def rec(chain):
        t = len(chain)
        if t == n - 1:
            out.append(Flag(n, F.p, F.m, tuple(chain)))
            return
        base = chain[-1] if chain else ()
        for ext in _extensions(F, base, n):
            rec(chain + [ext])

    rec([])
    return sorted(out, key=lambda f: f.bases)


def dl_points(w: Perm, n: int, p: int, m: int, node_budget: int = DEFAULT_NODE_BUDGET) -> list[Flag]:
    """All flags F over F_{p^m} with relative_position(F, frobenius(F)) = w."""
    w = tuple(w)
    if sorted(w) != list(range(1, n + 1)):
        raise FlagLabError(f"{w} is not a permutation of 1..{n}")
    F = finite_field(p, m)
    target = ranks_of_permutation(w)
    full = tuple(tuple(int(a == b) for b in range(n)) for a in range(n))
    out: list[Flag] = []
    visited = 0

    def sub(chain, i):
        if i == 0:
            return ()
        if i == n:
            return full
        return chain[i - 1]

    def consistent(chain, frobs, t):
        # all constraints among F_1..F_t, sigma F_1..sigma F_t and the full space
        for i in list(range(1, t + 1)) + [n]:
            for j in list(range(1, t + 1)) + [n]:
                if i > t and j > t:
                    continue
                Fi = sub(chain, i)
                Sj = full if j == n else frobs[j - 1]
                if intersection_dim(F, Fi, Sj) != target[i][j]:
                    return False
        return True

    def rec(chain, frobs):
        nonlocal visited
        visited += 1
        if visited > node_budget:
            raise FlagLabError(f"enumeration guard exceeded ({node_budget} nodes) for n={n}, q={F.q}")
        t = len(chain)
        if t == n - 1:
            out.append(Flag(n, p, m, tuple(chain)))
            return
        base = chain[-1] if chain else ()
        # sigma F_j must lie in F_{t+1} when the target says so
        forced = [r for j in range(1, t + 1) if target[t + 1][j] == j for r in frobs[j - 1]]
        U = rref(F, list(base) + forced)
        if len(U) > t + 1:
            return
        cands = [U] if len(U) == t + 1 else _extensions(F, base, n)
        for ext in cands:
            chain2 = chain + [ext]
            frobs2 = frobs + [frobenius_rows(F, ext)]
            if consistent(chain2, frobs2, t + 1):
                rec(chain2, frobs2)

    rec([], [])
    return sorted(out, key=lambda f: f.bases)


def coxeter_flag_from_line(F: FiniteField, a: Sequence[int]) -> tuple[list[int], tuple[tuple[Row, ...], ...]]:
    """Dimensions and spaces of F_1 + sigma F_1 + ... + sigma^{i-1} F_1, i = 1..n."""
    n = len(a)
    vecs = [list(a)]
    for _ in range(n - 1):
        vecs.append([F.frob(x) for x in vecs[-1]])
    spaces = tuple(rref(F, vecs[:i]) for i in range(1, n + 1))
    return [len(s) for s in spaces], spaces


def moore_criterion(a: Sequence[int], p: int, m: int) -> bool:
    """Whether the coordinates of a are linearly independent over F_p."""
    F = finite_field(p, m)
    if not any(a):
        raise FlagLabError("the zero vector does not span a line")
    n = len(a)
    # m x n matrix of prime-field coordinates, rank over F_p
    cols = [F.coordinates(x) for x in a]
    mat = [[cols[j][i] for j in range(n)] for i in range(F.m)]
    return _rank_mod_p(mat, p) == n


def _rank_mod_p(mat: list[list[int]], p: int) -> int:
    a = [r[:] for r in mat]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def moore_flag_member(a: Sequence[int], p: int, m: int) -> bool:
    """Direct construction: the iterated Frobenius sums have dimensions 1, 2, ..., n."""
    F = finite_field(p, m)
    dims, _ = coxeter_flag_from_line(F, a)
    return dims == list(range(1, len(a) + 1))


def normalized_lines(F: FiniteField, n: int):
    for v in itertools.product(range(F.q), repeat=n):
        if next((x for x in v if x), None) == 1:
            yield v


@dataclass(frozen=True)
class ContainmentReport:
    n: int
    p: int
    m: int
    points: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def lusztig_containment_check(n: int, p: int, m: int, node_budget: int = DEFAULT_NODE_BUDGET) -> ContainmentReport:
    """Every point of X(s_1 ... s_{n-1}) is in the open cell relative to the standard flag."""
    F = finite_field(p, m)
    pts = dl_points(coxeter_element(n), n, p, m, node_budget)
    E = standard_flag(F, n)
    w0 = longest_permutation(n)
    bad = 0
    for flag in pts:
        ok = relative_position(E, flag) == w0
        for i in range(1, n):
            for j in range(1, n):
                if intersection_dim(F, flag.subspace(i), E.subspace(j)) != max(0, i + j - n):
                    ok = False
        bad += not ok
    return ContainmentReport(n, p, m, len(pts), bad)


@dataclass(frozen=True)
class MooreReport:
    n: int
    p: int
    m: int
    lines: int
    members: int
    mismatches: int


def moore_equivalence_check(n: int, p: int, m: int) -> MooreReport:
    """Compare the independence criterion with membership in X(coxeter) for every line."""
    F = finite_field(p, m)
    cox = coxeter_element(n)
    dl = set(dl_points(cox, n, p, m))
    first_lines = {f.subspace(1) for f in dl}
    lines = members = bad = 0
    for a in normalized_lines(F, n):
        lines += 1
        crit = moore_criterion(a, p, m)
        dims, spaces = coxeter_flag_from_line(F, a)
        direct = dims == list(range(1, n + 1))
        in_dl = direct and Flag(n, p, m, spaces[:-1]) in dl
        in_dl_by_line = rref(F, [a]) in first_lines
        members += in_dl
        if not (crit == direct == in_dl == in_dl_by_line):
            bad += 1
    return MooreReport(n, p, m, lines, members, bad)
