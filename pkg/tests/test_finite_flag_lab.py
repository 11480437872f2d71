import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adlvstrat.finite_flag_lab import (
    FlagLabError,
    all_flags,
    compose,
    coxeter_element,
    dl_points,
    finite_field,
    flag_from_vectors,
    frobenius_flag,
    intersection_dim,
    longest_permutation,
    lusztig_containment_check,
    moore_criterion,
    moore_equivalence_check,
    moore_flag_member,
    perm_from_word,
    rank_array,
    ranks_of_permutation,
    relative_position,
    rref,
    simple_transposition,
    span_dim,
    standard_flag,
)

from oracles import flag_image, matrices, relative_position_by_scan


def coxeter_count(n, p, m):
    """Ordered F_p-independent n-tuples in F_{p^m}, up to F_{p^m}^* scaling."""
    q = p**m
    total = 1
    for k in range(n):
        total *= q - p**k
    return total // (q - 1)


# -- fields -----------------------------------------------------------------------------------


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (2, 4)])
def test_field_axioms(p, m):
    F = finite_field(p, m)
    els = range(F.q)
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a in els:
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.power(a, F.q) == a
    for a, b, c in itertools.product(range(min(F.q, 5)), repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    # the multiplicative group is cyclic
    orders = [next(k for k in range(1, F.q) if F.power(a, k) == 1) for a in range(1, F.q)]
    assert max(orders) == F.q - 1
    if m > 1:
        g = F.generator()
        assert F.coordinates(g) == [0, 1] + [0] * (m - 2)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (2, 4)])
def test_frobenius_has_order_m(p, m):
    F = finite_field(p, m)
    for a in range(F.q):
        b = a
        for _ in range(m):
            b = F.frob(b)
        assert b == a
    fixed = [a for a in range(F.q) if F.frob(a) == a]
    assert len(fixed) == p
    assert F.frob(F.mul(3 % F.q, F.q - 1)) == F.mul(F.frob(3 % F.q), F.frob(F.q - 1))


def test_field_errors():
    with pytest.raises(FlagLabError):
        finite_field(4, 1)
    with pytest.raises(FlagLabError):
        finite_field(2, 0)
    F = finite_field(2, 2)
    with pytest.raises((FlagLabError, ZeroDivisionError)):
        F.inv(0)


def test_linear_algebra_examples():
    F = finite_field(2, 1)
    assert rref(F, [[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == ((1, 0, 1), (0, 1, 1))
    assert span_dim(F, [[1, 0, 0], [1, 0, 0]]) == 1
    assert intersection_dim(F, ((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1))) == 1
    with pytest.raises(FlagLabError):
        flag_from_vectors(F, [[1, 0], [1, 0]])


# -- relative position ---------------------------------------------------------------------------


def test_permutation_examples():
    assert coxeter_element(3) == (2, 3, 1)
    assert simple_transposition(3, 2) == (1, 3, 2)
    assert perm_from_word(3, [1, 2, 1]) == longest_permutation(3) == (3, 2, 1)
    assert compose((2, 1, 3), (1, 3, 2)) == (2, 3, 1)


def test_relative_position_examples():
    F = finite_field(2, 1)
    E = standard_flag(F, 3)
    assert relative_position(E, E) == (1, 2, 3)
    for w in itertools.permutations((1, 2, 3)):
        wE = flag_from_vectors(F, [[int(c == w[k] - 1) for c in range(3)] for k in range(3)])
        assert relative_position(E, wE) == w
        assert rank_array(E, wE) == ranks_of_permutation(w)


def test_relative_position_matches_borel_orbit_scan():
    F = finite_field(2, 1)
    gl = list(matrices(F, 3))
    assert len(gl) == 168
    flags = all_flags(F, 3)
    assert len(flags) == 21
    E = standard_flag(F, 3)
    for f in flags:
        for f2 in flags[::4]:
            assert relative_position(f, f2) == relative_position_by_scan(F, f, f2, gl)
    counts = {}
    for f in flags:
        w = relative_position(E, f)
        counts[w] = counts.get(w, 0) + 1
    # Bruhat cells have q^{length} points
    assert counts == {(1, 2, 3): 1, (2, 1, 3): 2, (1, 3, 2): 2, (2, 3, 1): 4, (3, 1, 2): 4, (3, 2, 1): 8}


def test_relative_position_is_gl_invariant():
    F = finite_field(3, 1)
    flags = all_flags(F, 3)
    gl = list(itertools.islice(matrices(F, 3), 0, 5000, 97))
    for g in gl:
        for f, f2 in zip(flags[::5], flags[1::7]):
            assert relative_position(flag_image(F, g, f), flag_image(F, g, f2)) == relative_position(f, f2)


def test_relative_position_inverse_symmetry():
    F = finite_field(2, 2)
    flags = all_flags(F, 3)
    for f, f2 in zip(flags[::17], flags[3::13]):
        w = relative_position(f, f2)
        winv = tuple(w.index(k) + 1 for k in range(1, 4))
        assert relative_position(f2, f) == winv


# -- Deligne-Lusztig points ---------------------------------------------------------------------------


def test_dl_identity_gives_rational_flags():
    F = finite_field(2, 2)
    pts = dl_points((1, 2, 3), 3, 2, 2)
    assert all(frobenius_flag(f) == f for f in pts)
    # GL_3(F_2)/B has 21 points
    assert len(pts) == 21


def test_dl_small_example():
    pts = dl_points((2, 1), 2, 2, 2)
    assert len(pts) == 2
    F = finite_field(2, 2)
    for f in pts:
        assert relative_position(f, frobenius_flag(f)) == (2, 1)


@pytest.mark.parametrize("n,p,m", [(2, 2, 3), (3, 2, 1), (3, 2, 2)])
def test_dl_points_partition_all_flags(n, p, m):
    F = finite_field(p, m)
    flags = all_flags(F, n)
    by_scan = {}
    for f in flags:
        by_scan.setdefault(relative_position(f, frobenius_flag(f)), set()).add(f)
    total = 0
    for w in itertools.permutations(range(1, n + 1)):
        pts = set(dl_points(w, n, p, m))
        assert pts == by_scan.get(w, set())
        total += len(pts)
    assert total == len(flags)


@pytest.mark.parametrize("n,p,m", [(2, 2, 2), (2, 3, 2), (3, 2, 3), (3, 3, 2), (4, 2, 4)])
def test_coxeter_point_counts(n, p, m):
    assert len(dl_points(coxeter_element(n), n, p, m)) == coxeter_count(n, p, m)


def test_dl_errors():
    with pytest.raises(FlagLabError):
        dl_points((1, 1), 2, 2, 2)
    with pytest.raises(FlagLabError):
        dl_points((2, 1), 2, 6, 1)
    with pytest.raises(FlagLabError):
        dl_points(coxeter_element(4), 4, 2, 4, node_budget=10)


def test_containment_report():
    rep = lusztig_containment_check(3, 2, 3)
    assert rep.passed and rep.points == 24


# -- Moore criterion ---------------------------------------------------------------------------------


def test_moore_examples():
    F = finite_field(2, 3)
    g = F.generator()
    basis = (1, g, F.mul(g, g))
    assert moore_criterion(basis, 2, 3) and moore_flag_member(basis, 2, 3)
    assert not moore_criterion((1, 1, g), 2, 3) and not moore_flag_member((1, 1, g), 2, 3)
    assert not moore_criterion((1, 0, 0), 2, 3)
    with pytest.raises(FlagLabError):
        moore_criterion((0, 0, 0), 2, 3)


def test_moore_equivalence_report():
    rep = moore_equivalence_check(3, 2, 3)
    assert (rep.lines, rep.members, rep.mismatches) == (73, 24, 0)
    rep = moore_equivalence_check(2, 3, 2)
    assert (rep.lines, rep.members, rep.mismatches) == (10, 6, 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 3), (3, 2), (2, 4)]), st.data())
def test_moore_criterion_matches_direct_construction(pm, data):
    p, m = pm
    F = finite_field(p, m)
    n = data.draw(st.integers(2, m))
    a = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n, max_size=n).filter(any))
    assert moore_criterion(a, p, m) == moore_flag_member(a, p, m)
    c = data.draw(st.integers(1, F.q - 1))
    assert moore_criterion([F.mul(c, x) for x in a], p, m) == moore_criterion(a, p, m)
