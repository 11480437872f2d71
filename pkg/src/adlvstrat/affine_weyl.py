"""Extended affine Weyl group W~ = Lambda x| W_0 over a :class:`RootDatum`.

Elements are kept in the canonical form ``eps^lam * w`` (a coweight vector
and an integer matrix acting on fundamental-coweight coordinates); words
are derived on demand.  The base alcove is the one in the dominant chamber
touching the origin, so simple affine reflection 0 is the reflection in
``H_{theta,1}``.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from functools import lru_cache
from operator import mul
from typing import Iterable, Sequence

from .root_datum import Matrix, RootDatum, Vector

MAX_FINITE_ENUMERATION = 50_000


class AffineWeylError(ValueError):
    pass


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(tuple([sum(map(mul, row, col)) for col in cols]) for row in a)


def _matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple([sum(map(mul, row, v)) for row in a])


def _tmatvec(a: Matrix, v: Sequence) -> tuple:
    # a^T v
    return tuple([sum(map(mul, col, v)) for col in zip(*a)])


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _is_positive(beta: Sequence[int]) -> bool:
    for x in beta:
        if x:
            return x > 0
    return False


class FiniteWeylElement:
    """Element of W_0 acting on coweight coordinates by ``mat``."""

    __slots__ = ("group", "mat", "inv", "_hash")

    def __init__(self, group: "AffineWeylGroup", mat: Matrix, inv: Matrix):
        self.group = group
        self.mat = mat
        self.inv = inv
        self._hash = hash(mat)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteWeylElement) and self.mat == other.mat and self.group is other.group

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        if self.group is not other.group:
            raise AffineWeylError("elements belong to different root data")
        return FiniteWeylElement(self.group, _matmul(self.mat, other.mat), _matmul(other.inv, self.inv))

    def inverse(self) -> "FiniteWeylElement":
        return FiniteWeylElement(self.group, self.inv, self.mat)

    def act_coweight(self, lam: Sequence) -> tuple:
        return _matvec(self.mat, lam)

    def act_root(self, beta: Sequence[int]) -> Vector:
        return _tmatvec(self.inv, beta)

    def inverse_act_root(self, beta: Sequence[int]) -> Vector:
        return _tmatvec(self.mat, beta)

    @property
    def length(self) -> int:
        return sum(1 for b in self.group.datum.positive_roots if not _is_positive(self.act_root(b)))

    def left_descents(self) -> list[int]:
        d = self.group.datum
        return [i for i in d.simple_roots if not _is_positive(self.inverse_act_root(d.simple_root(i)))]

    def reduced_word(self) -> tuple[int, ...]:
        word, x = [], self
        while True:
            ds = x.left_descents()
            if not ds:
                return tuple(word)
            word.append(ds[0])
            x = self.group.finite_reflection(ds[0]) * x

    def is_identity(self) -> bool:
        return self.mat == self.group.finite_identity.mat

    def __repr__(self) -> str:
        w = self.reduced_word()
        return "W0(" + ("".join(f"s{i}" for i in w) or "e") + ")"


class AffineElement:
    """The element ``eps^lam * fin`` of the extended affine Weyl group."""

    __slots__ = ("group", "lam", "fin", "_hash")

    def __init__(self, group: "AffineWeylGroup", lam: Sequence[int], fin: FiniteWeylElement):
        self.group = group
        self.lam = tuple(lam)
        self.fin = fin
        self._hash = hash((self.lam, fin.mat))

    # -- algebra ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AffineElement)
            and self.lam == other.lam
            and self.fin.mat == other.fin.mat
            and self.group is other.group
        )

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        if not isinstance(other, AffineElement):
            return NotImplemented
        if self.group is not other.group:
            raise AffineWeylError("elements belong to different root data")
        shift = self.fin.act_coweight(other.lam)
        return AffineElement(self.group, [a + b for a, b in zip(self.lam, shift)], self.fin * other.fin)

    def inverse(self) -> "AffineElement":
        winv = self.fin.inverse()
        return AffineElement(self.group, [-x for x in winv.act_coweight(self.lam)], winv)

    def __pow__(self, k: int) -> "AffineElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.group.identity
        for _ in range(k):
            out = out * self
        return out

    def act(self, point: Sequence) -> tuple:
        """Image of a point (fundamental-coweight coordinates)."""
        return tuple(a + b for a, b in zip(self.lam, self.fin.act_coweight(point)))

    # -- invariants -------------------------------------------------------------

    @property
    def length(self) -> int:
        return _length(self)

    @property
    def omega(self) -> int:
        return self.group.datum.omega_component(self.lam)

    def in_affine_weyl(self) -> bool:
        return self.omega == 0

    def is_translation(self) -> bool:
        return self.fin.is_identity()

    def right_descents(self) -> list[int]:
        return [i for i in self.group.nodes if self.group._right_descent(self, i)]

    def left_descents(self) -> list[int]:
        return [i for i in self.group.nodes if self.group._left_descent(self, i)]

    def reduced_word(self) -> tuple[int, ...]:
        return _decompose(self)[0]

    def length_zero_part(self) -> "AffineElement":
        return _decompose(self)[1]

    def support(self) -> frozenset[int]:
        return frozenset(self.reduced_word())

    def __repr__(self) -> str:
        word = "".join(f"s{i}" for i in self.reduced_word()) or "e"
        return f"<{word}{'' if self.omega == 0 else f'*tau^{self.omega}'}>"


@lru_cache(maxsize=1 << 18)
def _length(x: AffineElement) -> int:
    d = x.group.datum
    total = 0
    lam = x.lam
    mt = tuple(zip(*x.fin.mat))
    for b in d.positive_roots:
        c = sum(map(mul, b, lam))
        if _is_positive([sum(map(mul, col, b)) for col in mt]):
            total += abs(c)
        else:
            total += abs(c - 1)
    return total


@lru_cache(maxsize=1 << 18)
def _decompose(x: AffineElement) -> tuple[tuple[int, ...], AffineElement]:
    g = x.group
    word = []
    while True:
        for i in g.nodes:
            if g._left_descent(x, i):
                word.append(i)
                x = g.s(i) * x
                break
        else:
            return tuple(word), x


class AffineWeylGroup:
    """Extended affine Weyl group attached to a root datum.

    Use :meth:`of` to obtain the shared instance for a datum; elements of
    different instances never compare equal.
    """

    _registry: dict = {}

    @classmethod
    def of(cls, datum: RootDatum) -> "AffineWeylGroup":
        key = datum.cartan
        if key not in cls._registry:
            cls._registry[key] = cls(datum)
        return cls._registry[key]

    def __init__(self, datum: RootDatum):
        self.datum = datum
        r = datum.rank
        self.rank = r
        self.nodes: tuple[int, ...] = datum.affine_nodes
        eye = _identity(r)
        self.finite_identity = FiniteWeylElement(self, eye, eye)
        self.identity = AffineElement(self, (0,) * r, self.finite_identity)
        self._finite_refl = {}
        for i in datum.simple_roots:
            m = self._reflection_matrix(datum.simple_root(i), datum.simple_coroot(i))
            self._finite_refl[i] = FiniteWeylElement(self, m, m)
        # affine root (beta, k) positive on the base alcove attached to each node
        self._node_root: dict[int, tuple[Vector, int]] = {}
        self._simple: dict[int, AffineElement] = {}
        for i in datum.simple_roots:
            self._node_root[i] = (datum.simple_root(i), 0)
            self._simple[i] = AffineElement(self, (0,) * r, self._finite_refl[i])
        for c, node in enumerate(datum.special_nodes):
            theta = datum.highest_roots[c]
            theta_v = datum.coroot_of(theta)
            m = self._reflection_matrix(theta, theta_v)
            self._node_root[node] = (tuple(-x for x in theta), 1)
            self._simple[node] = AffineElement(self, theta_v, FiniteWeylElement(self, m, m))
        self._omega_elements: dict[int, AffineElement] | None = None
        self._bruhat_memo: dict = {}

    @staticmethod
    def _reflection_matrix(beta: Vector, beta_v: Vector) -> Matrix:
        r = len(beta)
        return tuple(tuple(int(k == j) - beta_v[k] * beta[j] for j in range(r)) for k in range(r))

    # -- constructors -------------------------------------------------------------

    def s(self, i: int) -> AffineElement:
        try:
            return self._simple[i]
        except KeyError:
            raise AffineWeylError(f"{i} is not an affine node of {self.datum}") from None

    simple_reflection = s

    def finite_reflection(self, i: int) -> FiniteWeylElement:
        return self._finite_refl[i]

    def finite_element(self, word: Iterable[int]) -> FiniteWeylElement:
        w = self.finite_identity
        for i in word:
            w = w * self._finite_refl[i]
        return w

    def translation(self, lam: Sequence[int]) -> AffineElement:
        if len(lam) != self.rank:
            raise AffineWeylError("dimension mismatch")
        return AffineElement(self, [int(x) for x in lam], self.finite_identity)

    def element(self, lam: Sequence[int], fin: FiniteWeylElement | None = None) -> AffineElement:
        return AffineElement(self, lam, fin or self.finite_identity)

    def from_word(self, word: Iterable[int], omega: int = 0) -> AffineElement:
        x = self.identity
        for i in word:
            x = x * self.s(i)
        return x * self.omega_element(omega) if omega else x

    def lift_finite(self, w: FiniteWeylElement) -> AffineElement:
        return AffineElement(self, (0,) * self.rank, w)

    # -- descents ---------------------------------------------------------------

    @staticmethod
    def _affine_positive(beta: Sequence[int], k: int) -> bool:
        return k >= 1 or (k == 0 and _is_positive(beta))

    def _right_descent(self, x: AffineElement, i: int) -> bool:
        beta, k = self._node_root[i]
        wb = x.fin.act_root(beta)
        kk = k - sum(p * q for p, q in zip(wb, x.lam))
        return not self._affine_positive(wb, kk)

    def _left_descent(self, x: AffineElement, i: int) -> bool:
        beta, k = self._node_root[i]
        wb = x.fin.inverse_act_root(beta)
        kk = k + sum(p * q for p, q in zip(beta, x.lam))
        return not self._affine_positive(wb, kk)

    def node_affine_root(self, i: int) -> tuple[Vector, int]:
        """Affine root (beta, k), i.e. v -> <beta, v> + k, vanishing on wall i of the base alcove."""
        return self._node_root[i]

    # -- length zero elements -------------------------------------------------------

    def omega_elements(self) -> dict[int, AffineElement]:
        """Length zero elements, keyed by their class in Lambda / Q^vee."""
        if self._omega_elements is None:
            d = self.datum
            gens = []
            for i in d.minuscule_nodes():
                comp = d.components[d.component_of(i)]
                j_nodes = [k + 1 for k in comp if k + 1 != i]
                w_comp = self.longest_finite([k + 1 for k in comp])
                w_j = self.longest_finite(j_nodes)
                tau = AffineElement(self, d.fundamental_coweight(i), w_j * w_comp)
                if tau.length != 0:
                    raise AffineWeylError(f"length zero construction failed at node {i}")
                gens.append(tau)
            elems = {0: self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = x * g
                        if y.omega not in elems:
                            elems[y.omega] = y
                            nxt.append(y)
                frontier = nxt
            if len(elems) != d.omega_order:
                raise AffineWeylError("length zero elements do not exhaust Lambda / Q^vee")
            self._omega_elements = elems
        return self._omega_elements

    def omega_element(self, k: int) -> AffineElement:
        return self.omega_elements()[k]

    def conjugation_permutation(self, tau: AffineElement) -> dict[int, int]:
        """Node permutation i -> j with tau s_i tau^-1 = s_j, for a length zero tau."""
        if tau.length != 0:
            raise AffineWeylError("conjugation permutation needs a length zero element")
        inv = tau.inverse()
        by_elem = {self.s(j): j for j in self.nodes}
        return {i: by_elem[tau * self.s(i) * inv] for i in self.nodes}

    # -- finite Weyl group helpers -----------------------------------------------

    def longest_finite(self, nodes: Iterable[int]) -> FiniteWeylElement:
        nodes = sorted(set(nodes))
        w = self.finite_identity
        while True:
            for i in nodes:
                # right multiplication increases length iff w(alpha_i) > 0
                if _is_positive(w.act_root(self.datum.simple_root(i))):
                    w = w * self._finite_refl[i]
                    break
            else:
                return w

    def finite_elements(self) -> list[FiniteWeylElement]:
        seen = {self.finite_identity}
        order = [self.finite_identity]
        queue = deque(order)
        while queue:
            w = queue.popleft()
            for i in self.datum.simple_roots:
                v = w * self._finite_refl[i]
                if v not in seen:
                    if len(seen) >= MAX_FINITE_ENUMERATION:
                        raise AffineWeylError("finite Weyl group too large to enumerate")
                    seen.add(v)
                    order.append(v)
                    queue.append(v)
        return sorted(order, key=lambda w: (w.length, w.reduced_word()))

    def orbit(self, lam: Sequence[int]) -> list[Vector]:
        start = tuple(lam)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for i in self.datum.simple_roots:
                u = self._finite_refl[i].act_coweight(v)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return sorted(seen)

    # -- parabolic subgroups ---------------------------------------------------------

    def parabolic_elements(self, nodes: Iterable[int], limit: int = MAX_FINITE_ENUMERATION) -> list[AffineElement]:
        """All elements of the (finite) standard parabolic subgroup W_P."""
        nodes = sorted(set(nodes))
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for i in nodes:
                y = x * self.s(i)
                if y not in seen:
                    if len(seen) >= limit:
                        raise AffineWeylError(f"parabolic subgroup of type {nodes} is infinite or too large")
                    seen.add(y)
                    queue.append(y)
        return sort_elements(seen)

    def longest_element(self, nodes: Iterable[int]) -> AffineElement:
        """Longest element w_{0,P} of a finite standard parabolic subgroup."""
        nodes = sorted(set(nodes))
        x = self.identity
        steps = 0
        while True:
            for i in nodes:
                if not self._right_descent(x, i):
                    x = x * self.s(i)
                    break
            else:
                return x
            steps += 1
            if steps > 10_000:
                raise AffineWeylError(f"W_P for P = {nodes} is infinite")

    def ball(self, radius: int, omega: int = 0) -> list[AffineElement]:
        """All elements of W_a * tau_omega with length <= radius."""
        start = self.omega_element(omega) if omega else self.identity
        layers = [[start]]
        seen = {start}
        for _ in range(radius):
            nxt = []
            for x in layers[-1]:
                for i in self.nodes:
                    y = self.s(i) * x
                    if y not in seen and y.length == x.length + 1:
                        seen.add(y)
                        nxt.append(y)
            layers.append(nxt)
        return sort_elements(seen)

    def commute(self, i: int, j: int) -> bool:
        return self.s(i) * self.s(j) == self.s(j) * self.s(i)

    def affine_cartan(self) -> dict[tuple[int, int], int]:
        """<a_j, a_i^vee> for affine simple roots, keyed (i, j)."""
        d = self.datum
        out = {}
        for i in self.nodes:
            bi, _ = self._node_root[i]
            bi_v = d.coroot_of(bi)
            for j in self.nodes:
                bj, _ = self._node_root[j]
                out[(i, j)] = sum(p * q for p, q in zip(bj, bi_v))
        return out

    def dynkin_neighbors(self, i: int) -> frozenset[int]:
        c = self.affine_cartan()
        return frozenset(j for j in self.nodes if j != i and c[(i, j)] != 0)

    def is_connected_affine(self) -> bool:
        return self.datum.is_irreducible


# -- operations -------------------------------------------------------------------


def sort_key(x: AffineElement):
    return (x.length, x.reduced_word(), x.omega)


def sort_elements(xs: Iterable[AffineElement]) -> list[AffineElement]:
    return sorted(xs, key=sort_key)


def simple_reflection(datum: RootDatum, i: int) -> AffineElement:
    return AffineWeylGroup.of(datum).s(i)


def multiply(x: AffineElement, y: AffineElement) -> AffineElement:
    return x * y


def length(x: AffineElement) -> int:
    return x.length


def reduced_word(x: AffineElement) -> tuple[int, ...]:
    return x.reduced_word()


def omega_part(x: AffineElement) -> int:
    return x.omega


def reduced_words(x: AffineElement) -> list[tuple[int, ...]]:
    """Every reduced word of the W_a-part of ``x``."""
    return sorted(_reduced_words(x))


@lru_cache(maxsize=1 << 14)
def _reduced_words(x: AffineElement) -> frozenset[tuple[int, ...]]:
    if x.length == 0:
        return frozenset({()})
    out = set()
    for i in x.left_descents():
        for w in _reduced_words(x.group.s(i) * x):
            out.add((i, *w))
    return frozenset(out)


def bruhat_leq(x: AffineElement, y: AffineElement) -> bool:
    """Bruhat order on W~; elements in different W_a-cosets are incomparable."""
    if x.group is not y.group:
        raise AffineWeylError("elements belong to different root data")
    if x.omega != y.omega:
        return False
    return _bruhat(x, y)


def _bruhat(x: AffineElement, y: AffineElement) -> bool:
    memo = x.group._bruhat_memo
    key = (x, y)
    if key in memo:
        return memo[key]
    lx, ly = x.length, y.length
    if lx > ly:
        res = False
    elif lx == ly:
        res = x == y
    elif lx == 0:
        res = True
    else:
        g = x.group
        i = y.left_descents()[0]
        sy = g.s(i) * y
        if g._left_descent(x, i):
            res = _bruhat(g.s(i) * x, sy)
        else:
            res = _bruhat(x, sy)
    memo[key] = res
    return res


def subword_products(word: Sequence[int], group: AffineWeylGroup, tail: AffineElement | None = None) -> set[AffineElement]:
    """Products of all subwords of ``word`` (times ``tail``)."""
    tail = tail or group.identity
    current = {tail}
    for i in reversed(word):
        s = group.s(i)
        current |= {s * x for x in current}
    return current


def admissible_set(datum: RootDatum, mu: Sequence[int]) -> list[AffineElement]:
    """{w : w <= eps^{v(mu)} for some v in W_0}, by breadth-first lower covers."""
    if not datum.is_dominant(mu):
        raise AffineWeylError(f"mu = {tuple(mu)} is not dominant")
    g = AffineWeylGroup.of(datum)
    tops = [g.translation(v) for v in g.orbit(mu)]
    seen = set(tops)
    frontier = list(tops)
    while frontier:
        nxt = []
        for y in frontier:
            word, tau = _decompose(y)
            ly = len(word)
            prefix = [g.identity]
            for i in word:
                prefix.append(prefix[-1] * g.s(i))
            suffix = [tau]
            for i in reversed(word):
                suffix.append(g.s(i) * suffix[-1])
            suffix.reverse()
            for k in range(ly):
                x = prefix[k] * suffix[k + 1]
                if x not in seen and x.length == ly - 1:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return sort_elements(seen)


def _strip_left(x: AffineElement, nodes: frozenset[int]) -> tuple[AffineElement, AffineElement]:
    """x = u * m with u in W_K and m minimal in W_K m."""
    g = x.group
    u = g.identity
    while True:
        for i in sorted(nodes):
            if g._left_descent(x, i):
                x = g.s(i) * x
                u = u * g.s(i)
                break
        else:
            return u, x


def _strip_right(x: AffineElement, nodes: frozenset[int]) -> tuple[AffineElement, AffineElement]:
    g = x.group
    v = g.identity
    while True:
        for i in sorted(nodes):
            if g._right_descent(x, i):
                x = x * g.s(i)
                v = g.s(i) * v
                break
        else:
            return x, v


def double_coset_factor(
    x: AffineElement, K: Iterable[int], K2: Iterable[int]
) -> tuple[AffineElement, AffineElement, AffineElement]:
    """Return (u, m, v) with x = u m v, u in W_K, v in W_K2, m = min(W_K x W_K2)."""
    K, K2 = frozenset(K), frozenset(K2)
    g = x.group
    u_tot, v_tot = g.identity, g.identity
    m = x
    while True:
        u, m = _strip_left(m, K)
        m, v = _strip_right(m, K2)
        u_tot, v_tot = u_tot * u, v * v_tot
        if u == g.identity and v == g.identity:
            return u_tot, m, v_tot


def min_coset_rep(
    x: AffineElement, K: Iterable[int], side: str = "left", K2: Iterable[int] | None = None
) -> AffineElement:
    """Minimal length element of W_K x (left), x W_K (right) or W_K x W_K2 (double)."""
    K = frozenset(K)
    for i in K:
        x.group.s(i)
    if side == "left":
        return _strip_left(x, K)[1]
    if side == "right":
        return _strip_right(x, K)[0]
    if side == "double":
        return double_coset_factor(x, K, K if K2 is None else K2)[1]
    raise AffineWeylError(f"side must be left, right or double, not {side!r}")


def check_chain(chain: Sequence[int], group: AffineWeylGroup) -> None:
    if len(set(chain)) != len(chain):
        raise AffineWeylError(f"chain {tuple(chain)} repeats a node")
    for a, b in zip(chain, chain[1:]):
        if group.commute(a, b):
            raise AffineWeylError(f"consecutive chain nodes {a}, {b} commute")


def is_subsequence(t: Sequence[int], word: Sequence[int]) -> bool:
    it = iter(word)
    return all(any(c == x for x in it) for c in t)


def subexpression_check(t: Sequence[int], w: AffineElement) -> bool:
    """Whether the stored reduced word of ``w`` has ``t`` as a subexpression."""
    check_chain(t, w.group)
    return is_subsequence(t, w.reduced_word())


def support(w: AffineElement) -> frozenset[int]:
    return w.support()


def finite_part_word(x: AffineElement) -> tuple[int, ...]:
    return x.fin.reduced_word()


def barycenter(x: AffineElement) -> tuple[Fraction, ...]:
    """Barycenter of the alcove x * (base alcove)."""
    return x.act(base_barycenter(x.group))


@lru_cache(maxsize=None)
def base_vertices(group: AffineWeylGroup) -> dict[int, tuple[Fraction, ...]]:
    """Vertex of the base alcove opposite each wall, keyed by node (irreducible types)."""
    d = group.datum
    if not d.is_irreducible:
        raise AffineWeylError("alcove vertices are only modelled for irreducible types")
    r = d.rank
    out = {0: tuple(Fraction(0) for _ in range(r))}
    for i in d.simple_roots:
        c = d.theta_coefficient(i)
        out[i] = tuple(Fraction(int(k == i - 1), c) for k in range(r))
    return out


@lru_cache(maxsize=None)
def base_barycenter(group: AffineWeylGroup) -> tuple[Fraction, ...]:
    d = group.datum
    if d.is_irreducible:
        verts = list(base_vertices(group).values())
        n = len(verts)
        return tuple(sum(v[k] for v in verts) / n for k in range(d.rank))
    # generic interior point for reducible types: barycenter on each component
    point = [Fraction(0)] * d.rank
    for c, comp in enumerate(d.components):
        n = len(comp) + 1
        for k in comp:
            point[k] = Fraction(1, n * d.highest_roots[c][k])
    return tuple(point)


def all_pairs(xs: Sequence[AffineElement]) -> Iterable[tuple[AffineElement, AffineElement]]:
    return itertools.product(xs, xs)
