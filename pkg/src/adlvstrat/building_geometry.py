"""Alcove geometry of the standard apartment.

Alcoves are identified with elements of W_a (trivial length zero part):
``x`` stands for the alcove ``x * a`` where ``a`` is the base alcove.
Everything here lives inside a single apartment and uses exact rational
arithmetic on barycenters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .affine_weyl import (
    AffineElement,
    AffineWeylError,
    AffineWeylGroup,
    FiniteWeylElement,
    barycenter,
    base_barycenter,
    base_vertices,
    min_coset_rep,
    sort_elements,
    _is_positive,
)
from .root_datum import RootDatum


class GeometryError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Hyperplane:
    """H_{alpha,k} = {v : <alpha, v> = k}, normalized so that alpha is positive."""

    alpha: tuple[int, ...]
    k: int

    @classmethod
    def normalized(cls, alpha: Sequence[int], k: int) -> "Hyperplane":
        alpha = tuple(alpha)
        if _is_positive(alpha):
            return cls(alpha, k)
        return cls(tuple(-a for a in alpha), -k)

    def value(self, point: Sequence) -> Fraction:
        """<alpha, point> - k; its sign tells the side of the point."""
        return sum(a * p for a, p in zip(self.alpha, point)) - self.k

    def root_index(self, datum: RootDatum) -> int:
        return datum.root_index[self.alpha]


def _group(x: AffineElement) -> AffineWeylGroup:
    return x.group


def check_alcove(x: AffineElement) -> AffineElement:
    if x.omega != 0:
        raise GeometryError("alcoves are elements of W_a (trivial length zero part)")
    return x


def weyl_distance(x: AffineElement, y: AffineElement) -> AffineElement:
    """delta(x, y) = x^-1 y."""
    return x.inverse() * y


def distance(x: AffineElement, y: AffineElement) -> int:
    return weyl_distance(x, y).length


def delta_K(x: AffineElement, y: AffineElement, K: Iterable[int]) -> AffineElement:
    """Minimal representative of W_K delta(x, y) W_K."""
    return min_coset_rep(weyl_distance(x, y), K, "double")


def wall_of_type(x: AffineElement, i: int) -> Hyperplane:
    """The wall of the alcove x*a of type i, i.e. x(H_i)."""
    g = _group(x)
    beta, k = g.node_affine_root(i)
    wb = x.fin.act_root(beta)
    kk = k - sum(p * q for p, q in zip(wb, x.lam))
    # the affine function <wb, v> + kk vanishes on the wall
    return Hyperplane.normalized(wb, -kk)


def descent_walls(x: AffineElement) -> list[Hyperplane]:
    """Walls of x*a separating it from the base alcove."""
    return sorted(wall_of_type(x, i) for i in x.right_descents())


def separating_hyperplanes(x: AffineElement, y: AffineElement) -> list[Hyperplane]:
    """All H_{alpha,k} separating the alcoves x*a and y*a."""
    bx, by = barycenter(x), barycenter(y)
    out = []
    for alpha in _group(x).datum.positive_roots:
        px = sum(a * p for a, p in zip(alpha, bx))
        py = sum(a * p for a, p in zip(alpha, by))
        lo, hi = sorted((px, py))
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            out.append(Hyperplane(alpha, k))
    return sorted(out)


class Residue:
    """The P-residue {base * u : u in W_P} of an alcove."""

    def __init__(self, base: AffineElement, type_set: Iterable[int]):
        self.base = check_alcove(base)
        self.type_set = frozenset(type_set)
        g = base.group
        for i in self.type_set:
            g.s(i)
        if base.group.datum.is_irreducible and len(self.type_set) == len(g.nodes):
            raise GeometryError("residue type must be a proper subset of the affine nodes")
        self.canonical = min_coset_rep(base, self.type_set, "right")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Residue)
            and self.type_set == other.type_set
            and self.canonical == other.canonical
        )

    def __hash__(self) -> int:
        return hash((self.type_set, self.canonical))

    def __contains__(self, y: AffineElement) -> bool:
        return min_coset_rep(y, self.type_set, "right") == self.canonical

    def members(self) -> list[AffineElement]:
        g = self.base.group
        return sort_elements(self.canonical * u for u in g.parabolic_elements(self.type_set))

    def __repr__(self) -> str:
        return f"Residue({self.canonical!r}, {sorted(self.type_set)})"


def residue(base: AffineElement, type_set: Iterable[int]) -> Residue:
    return Residue(base, type_set)


def gate(b: AffineElement, R: Residue) -> AffineElement:
    """The alcove of R closest to b (unique by the gate property)."""
    m = min_coset_rep(weyl_distance(b, R.base), R.type_set, "right")
    return b * m


@dataclass(frozen=True)
class DoubleProjection:
    w1: AffineElement
    R1: Residue
    R1_prime: Residue
    pairs: tuple[tuple[AffineElement, AffineElement], ...]


def conjugate_type(w: AffineElement, P: Iterable[int], P2: Iterable[int]) -> frozenset[int]:
    """{i in P : w^-1 s_i w = s_j for some j in P2}."""
    g = w.group
    inv = w.inverse()
    targets = {g.s(j) for j in P2}
    return frozenset(i for i in P if inv * g.s(i) * w in targets)


def double_projection(R: Residue, R2: Residue) -> DoubleProjection:
    """Mutual projections of two residues and the bijection between them."""
    from .affine_weyl import double_coset_factor

    P, P2 = R.type_set, R2.type_set
    u, w1, v = double_coset_factor(weyl_distance(R.base, R2.base), P, P2)
    x0 = R.base * u
    y0 = R2.base * v.inverse()
    R1 = Residue(x0, conjugate_type(w1, P, P2))
    R1p = Residue(y0, conjugate_type(w1.inverse(), P2, P))
    pairs = tuple((x, gate(x, R2)) for x in R1.members())
    return DoubleProjection(w1, R1, R1p, pairs)


# -- galleries and acute cones ---------------------------------------------------------


def check_gallery(G: Sequence[AffineElement]) -> None:
    if not G:
        raise GeometryError("empty gallery")
    for x in G:
        check_alcove(x)
    for x, y in zip(G, G[1:]):
        d = weyl_distance(x, y)
        if d.length != 1:
            raise GeometryError("consecutive gallery alcoves must be adjacent and distinct")


def is_minimal_gallery(G: Sequence[AffineElement]) -> bool:
    check_gallery(G)
    return distance(G[0], G[-1]) == len(G) - 1


def gallery_from_word(start: AffineElement, word: Iterable[int]) -> list[AffineElement]:
    g = start.group
    out = [start]
    for i in word:
        out.append(out[-1] * g.s(i))
    return out


def crossings(G: Sequence[AffineElement]) -> list[tuple[Hyperplane, int]]:
    """Each wall crossed, with the sign of the side the gallery enters."""
    out = []
    for x, y in zip(G, G[1:]):
        i = weyl_distance(x, y).reduced_word()[0]
        H = wall_of_type(x, i)
        out.append((H, 1 if H.value(barycenter(y)) > 0 else -1))
    return out


def _w_positive(w: FiniteWeylElement, alpha: Sequence[int]) -> int:
    """Sign of the w-positive half-space for hyperplanes with root alpha."""
    return 1 if _is_positive(w.inverse_act_root(alpha)) else -1


def gallery_direction(G: Sequence[AffineElement]) -> list[FiniteWeylElement]:
    """All w in W_0 such that the gallery goes in the w-direction."""
    check_gallery(G)
    g = G[0].group
    cr = crossings(G)
    return [w for w in g.finite_elements() if all(_w_positive(w, H.alpha) == s for H, s in cr)]


def acute_cone_member(b: AffineElement, w: FiniteWeylElement, x: AffineElement) -> bool:
    """Whether x lies in the acute cone C(b, w)."""
    check_alcove(b)
    check_alcove(x)
    bb, bx = barycenter(b), barycenter(x)
    for alpha in b.group.datum.positive_roots:
        pb = sum(a * p for a, p in zip(alpha, bb))
        px = sum(a * p for a, p in zip(alpha, bx))
        if math.floor(pb) != math.floor(px):
            if (1 if px > pb else -1) != _w_positive(w, alpha):
                return False
    return True


def acute_cone_bruteforce(b: AffineElement, w: FiniteWeylElement, radius: int) -> set[AffineElement]:
    """Alcoves reachable from b by w-direction galleries of at most ``radius`` steps."""
    g = b.group
    seen = {b}
    frontier = [b]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for i in g.nodes:
                y = x * g.s(i)
                H = wall_of_type(x, i)
                if y in seen:
                    continue
                side = 1 if H.value(barycenter(y)) > 0 else -1
                if side == _w_positive(w, H.alpha):
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# -- walls of a vertex and separation of double cosets -------------------------------------


def _removed_node(group: AffineWeylGroup, K: Iterable[int]) -> int:
    K = frozenset(K)
    rest = [i for i in group.nodes if i not in K]
    if len(rest) != 1 or not K <= set(group.nodes):
        raise GeometryError("K must be the set of affine nodes minus exactly one node")
    if not group.datum.is_irreducible:
        raise GeometryError("K-walls need a connected affine Dynkin diagram")
    return rest[0]


def k_walls(group: AffineWeylGroup, K: Iterable[int]) -> list[tuple[tuple[int, ...], Fraction]]:
    """(alpha, k) for the root hyperplanes through the vertex of type K of the base alcove."""
    v = _removed_node(group, K)
    p = base_vertices(group)[v]
    out = []
    for alpha in group.datum.positive_roots:
        k = sum(a * x for a, x in zip(alpha, p))
        if k.denominator == 1:
            out.append((alpha, k))
    return out


def wall_margin(x: AffineElement, K: Iterable[int]) -> Fraction:
    """Least distance |<alpha, barycenter> - k| from x*a to a K-wall."""
    bx = barycenter(check_alcove(x))
    return min(abs(sum(a * p for a, p in zip(alpha, bx)) - k) for alpha, k in k_walls(x.group, K))


def far_from_walls(x: AffineElement, K: Iterable[int], margin: int) -> bool:
    if margin < 1:
        raise GeometryError("margin must be a positive integer")
    return wall_margin(x, K) >= margin


def sufficient_margin(us: Iterable[AffineElement], K: Iterable[int]) -> int:
    """A margin beyond which w*u*W_K all lie in one K-chamber for every u given."""
    K = frozenset(K)
    us = list(us)
    if not us:
        return 1
    g = us[0].group
    _removed_node(g, K)
    WK = g.parabolic_elements(K)
    verts = list(base_vertices(g).values())
    b0 = base_barycenter(g)
    best = Fraction(0)
    for u in us:
        for y in {u * k for k in WK}:
            for p in verts:
                q = y.act(p)
                d = [qi - bi for qi, bi in zip(q, b0)]
                for alpha in g.datum.positive_roots:
                    best = max(best, abs(sum(a * di for a, di in zip(alpha, d))))
    return math.floor(best) + 1


def separates_cosets(w: AffineElement, u: AffineElement, u2: AffineElement, K: Iterable[int]) -> bool:
    """Whether W_K w u W_K and W_K w u2 W_K differ."""
    K = frozenset(K)
    if min_coset_rep(u, K, "right") == min_coset_rep(u2, K, "right"):
        raise GeometryError("u W_K and u2 W_K coincide")
    return min_coset_rep(w * u, K, "double") != min_coset_rep(w * u2, K, "double")


# -- finiteness of alcoves with prescribed descent walls ----------------------------------


@dataclass(frozen=True)
class DREnumeration:
    alcoves: tuple[AffineElement, ...]
    radius: int
    counts: tuple[int, ...]
    stabilized: bool


def enumerate_dr_subset(datum: RootDatum, H: Iterable[Hyperplane], radius: int) -> DREnumeration:
    """Alcoves of length <= radius whose descent walls all lie in H."""
    if radius < 1:
        raise GeometryError("radius must be positive")
    g = AffineWeylGroup.of(datum)
    Hs = {Hyperplane.normalized(h.alpha, h.k) for h in H}
    found = [x for x in g.ball(radius) if set(descent_walls(x)) <= Hs]
    counts = tuple(sum(1 for x in found if x.length <= r) for r in range(radius + 1))
    stable = radius >= 2 and counts[radius] == counts[radius - 2]
    return DREnumeration(tuple(sort_elements(found)), radius, counts, stable)


# -- gallery extension -------------------------------------------------------------------


def rational_directions(sigmaJ) -> list[tuple[int, ...]]:
    """Integral sigma_J-fixed directions v - v' and their images under the rational W_0.

    v is the barycenter of the base alcove and v' runs over barycenters of
    sigma_J-stable proper facets of it; the images under the finite parts of
    the rational Coxeter generators reach every rational Weyl chamber.
    """
    g = sigmaJ.group
    verts = base_vertices(g)
    nodes = list(g.nodes)
    v = base_barycenter(g)
    orbits = sigmaJ.orbits()
    dirs = set()
    for k in range(1, len(orbits)):
        for combo in itertools.combinations(orbits, k):
            facet = sorted(set().union(*combo))
            bary = [sum(verts[i][c] for i in facet) / len(facet) for c in range(g.rank)]
            d = [a - b for a, b in zip(v, bary)]
            scale = math.lcm(*(Fraction(x).denominator for x in d))
            dirs.add(tuple(int(x * scale) for x in d))
    gens = [g.longest_element(o).fin for o in orbits if len(o) < len(nodes)]
    finite = {g.finite_identity}
    frontier = list(finite)
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                y = h * s
                if y not in finite:
                    finite.add(y)
                    nxt.append(y)
        frontier = nxt
    out = {h.act_coweight(d) for h in finite for d in dirs}
    return sorted(d for d in out if any(d))


def extend_gallery(
    G: Sequence[AffineElement],
    sigmaJ,
    margin: int,
    K: Iterable[int] | None = None,
    max_length: int = 200,
) -> list[AffineElement]:
    """Extend a minimal gallery to a sigma_J-fixed alcove far from the K-walls.

    ``sigmaJ`` is a diagram automorphism (see sigma module) providing
    ``linear`` and ``apply``.  The returned gallery starts at the end of G;
    its concatenation with G is minimal.
    """
    check_gallery(G)
    if not is_minimal_gallery(G):
        raise GeometryError("input gallery is not minimal")
    if margin < 1:
        raise GeometryError("margin must be a positive integer")
    start, end = G[0], G[-1]
    g = end.group
    if not g.datum.is_irreducible:
        raise GeometryError("gallery extension needs a connected affine Dynkin diagram")
    K = frozenset(K) if K is not None else frozenset(i for i in g.nodes if i != 0)
    _removed_node(g, K)
    if sigmaJ.apply(end) != end or sigmaJ.apply(weyl_distance(start, end)) != weyl_distance(start, end):
        raise GeometryError("end alcove and delta(start, end) must be fixed by sigma_J")
    seps = separating_hyperplanes(start, end)
    bs, be = barycenter(start), barycenter(end)
    wanted = {}
    for H in seps:
        wanted[H.alpha] = 1 if H.value(be) > H.value(bs) else -1
    d = g.datum
    L = sigmaJ.linear
    cands = []
    for lam in rational_directions(sigmaJ):
        if tuple(sum(L[i][j] * lam[j] for j in range(d.rank)) for i in range(d.rank)) != lam:
            raise GeometryError("rational direction is not fixed by sigma_J")  # pragma: no cover
        pair = [sum(a * x for a, x in zip(alpha, lam)) for alpha in d.positive_roots]
        if any(c == 0 for c in pair):
            continue
        if any((1 if pair[d.root_index[a]] > 0 else -1) != s for a, s in wanted.items()):
            continue
        cands.append(lam)
    if not cands:
        raise GeometryError(
            "no regular sigma_J-fixed translation compatible with the gallery was found "
            "(some root vanishes on every rational direction or the gallery points elsewhere)"
        )
    cands.sort(key=lambda v: (not d.is_dominant(v), sum(x * x for x in v), v))
    lam = cands[0]
    step = d.omega_element_order(d.omega_component(lam))
    N = step
    while True:
        y = g.translation([N * x for x in lam]) * end
        if y.length > max_length + start.length:
            raise GeometryError(
                f"no far sigma_J-fixed alcove at margin {margin} within length {max_length}"
            )
        if far_from_walls(y, K, margin):
            break
        N += step
    ext = gallery_from_word(end, weyl_distance(end, y).reduced_word())
    if distance(start, y) != distance(start, end) + distance(end, y):
        raise GeometryError("extension is not length additive")
    if sigmaJ.apply(y) != y:
        raise GeometryError("extension endpoint is not sigma_J-fixed")
    return ext
