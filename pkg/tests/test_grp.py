"""Group elements, closure enumeration, and structural predicates."""

import random

import pytest

from pcg.errors import CapError, ConstructionError, PcgError
from pcg.gf import ff_make
from pcg.grp import (
    CosetKind,
    Element,
    MatKind,
    PairKind,
    PermKind,
    SemiKind,
    central_quotient,
    direct_product,
    generate,
    quotient_align,
)


def _perm_group(deg, *gens):
    k = PermKind(deg)
    return generate([Element(k, k.from_cycles(*g)) for g in gens])


def test_perm_composition_order():
    # (a*b)(i) = a(b(i)): apply the right factor first
    k = PermKind(3)
    a = k.from_cycles((1, 2))
    b = k.from_cycles((2, 3))
    assert k.images(k.mul(a, b)) == (1, 2, 0)
    assert k.images(k.mul(b, a)) == (2, 0, 1)


def test_perm_kind_basics():
    k = PermKind(5)
    g = k.from_cycles((1, 2, 3), (4, 5))
    assert k.images(g) == (1, 2, 0, 4, 3)
    assert k.mul(g, k.inv(g)) == k.identity()
    assert k.render(g) == "perm:2,3,1,5,4"
    assert k.parse_render(k.render(g)) == g
    with pytest.raises(ConstructionError):
        k.make((0, 0, 1, 2, 3))
    with pytest.raises(ConstructionError):
        PermKind(0)


def test_element_order_and_conj():
    k = PermKind(5)
    e = Element(k, k.from_cycles((1, 2, 3), (4, 5)))
    assert e.order() == 6
    assert Element(k, k.identity()).order() == 1
    assert Element(k, k.identity()).is_identity()
    t = Element(k, k.from_cycles((1, 4)))
    # conjugation relabels points: (1 2 3)(4 5) by (1 4) gives (4 2 3)(1 5)
    c = Element(k, k.from_cycles((1, 2, 3), (4, 5))).conj(t)
    assert c == Element(k, k.from_cycles((4, 2, 3), (1, 5)))
    assert (t * t).is_identity()
    assert t.inv() == t


def test_commutes_with():
    k = PermKind(4)
    a = Element(k, k.from_cycles((1, 2)))
    b = Element(k, k.from_cycles((3, 4)))
    c = Element(k, k.from_cycles((2, 3)))
    assert a.commutes_with(b)
    assert not a.commutes_with(c)


def test_mat_kind_roundtrip():
    f = ff_make(2, 1)
    mk = MatKind(f, 2)
    m = mk.make((1, 1, 0, 1))
    assert mk.mat(m) == (1, 1, 0, 1)
    assert mk.render(m) == "mat:2:2:1,1,0,1"
    assert mk.parse_render(mk.render(m)) == m
    assert mk.mul(m, mk.inv(m)) == mk.identity()
    e = Element(mk, m)
    assert e.order() == 2
    # upper unitriangular over GF(3) has order 3
    mk3 = MatKind(ff_make(3, 1), 2)
    assert Element(mk3, mk3.make((1, 1, 0, 1))).order() == 3


def test_semi_kind_parts():
    f = ff_make(2, 3)
    mk = MatKind(f, 2)
    sk = SemiKind(mk)
    m = mk.make((f.x, 0, 0, f.inv(f.x)))
    s = sk.make(m, 1)
    assert sk.parts(s) == (1, m)
    assert sk.parse_render(sk.render(s)) == s
    assert sk.mul(s, sk.inv(s)) == sk.identity()
    # frobenius twist: (m, 1) * (m, 1) applies the field automorphism once
    j, mm = sk.parts(sk.mul(s, s))
    assert j == 2
    frob = mk.make(tuple(f.frobenius(c) for c in mk.mat(m)))
    assert mm == mk.mul(m, frob)


def test_pair_kind_componentwise():
    k = PermKind(3)
    pk = PairKind(k, k)
    a = pk.pack(k.from_cycles((1, 2)), k.from_cycles((1, 2, 3)))
    b = pk.pack(k.from_cycles((1, 3)), k.identity())
    ab = pk.mul(a, b)
    left, right = pk.split(ab)
    assert left == k.mul(k.from_cycles((1, 2)), k.from_cycles((1, 3)))
    assert right == k.from_cycles((1, 2, 3))
    assert pk.parse_render(pk.render(a)) == a
    assert pk.mul(a, pk.inv(a)) == pk.identity()


def test_coset_kind_canonical_reps():
    # cosets of the center {1, -1} in Q8 modeled over GF(3) matrices
    f = ff_make(3, 1)
    mk = MatKind(f, 2)
    i = mk.make((0, 2, 1, 0))
    j = mk.make((1, 1, 1, 2))
    minus = mk.make((2, 0, 0, 2))
    ck = CosetKind(mk, [mk.identity(), minus])
    a = ck.make(i)
    b = ck.make(mk.mul(minus, i))
    assert a == b  # central translates land in one coset
    assert ck.rep(a) == ck.rep(b)
    assert ck.render(a).startswith("coset:mat:3:2:")
    assert ck.parse_render(ck.render(a)) == a
    assert Element(ck, ck.make(i)).order() == 2  # i^2 = -1 is central
    assert Element(ck, ck.make(j)).order() == 2


def test_generate_closure():
    G = _perm_group(3, [(1, 2)], [(2, 3)])
    assert len(G) == 6
    orders = sorted(G.element_order(i) for i in range(len(G)))
    assert orders == [1, 2, 2, 2, 3, 3]


def test_generate_cap():
    k = PermKind(5)
    gens = [Element(k, k.from_cycles((1, 2))), Element(k, k.from_cycles((1, 2, 3, 4, 5)))]
    with pytest.raises(CapError):
        generate(gens, cap=30)
    assert len(generate(gens, cap=120)) == 120


def test_index_arithmetic():
    G = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    assert len(G) == 24
    for i in (0, 3, 17):
        assert G.index_of(G.element(i)) == i
        assert G.mul_idx(i, G.inv_idx(i)) == G.index_of(Element(G.kind, G.kind.identity()))
    rng = random.Random(42)
    for _ in range(25):
        i, j = rng.randrange(24), rng.randrange(24)
        assert G.element(G.mul_idx(i, j)) == G.element(i) * G.element(j)


def test_center():
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    assert len(sym3.center()) == 1
    assert not sym3.is_abelian()
    klein = _perm_group(4, [(1, 2)], [(3, 4)])
    assert len(klein) == 4
    assert klein.is_abelian()
    assert len(klein.center()) == 4
    # center of a product is the product of the centers
    P = direct_product(sym3, klein)
    assert len(P) == 24
    assert len(P.center()) == 4


def test_centralizer_and_class_sizes():
    G = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    classes = G.conjugacy_classes()
    for i in range(len(G)):
        cent = G.centralizer(i)
        assert i in cent
        assert len(cent) * len(classes[G.class_of(i)]) == len(G)
        # class_order reports the common element order of the class
        assert G.class_order(G.class_of(i)) == G.element(i).order()
    assert sorted(len(c) for c in classes) == [1, 3, 6, 6, 8]
    assert sum(len(c) for c in classes) == 24


def test_element_order_matches_elements():
    G = _perm_group(5, [(1, 2)], [(1, 2, 3, 4, 5)])
    for i in range(0, len(G), 7):
        assert G.element_order(i) == G.element(i).order()


def test_commute_mask_against_bruteforce():
    G = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    for i in range(len(G)):
        mask = G.commute_mask(i)
        ei = G.element(i)
        for j in range(len(G)):
            expected = ei.commutes_with(G.element(j))
            assert bool(mask[j]) == expected


def test_reduced_vertices():
    # sym:3 has only abelian centralizers, sym:4 does not
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    assert sym3.reduced_vertices() == []
    assert sym3.is_ac_group()
    sym4 = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    red = sym4.reduced_vertices()
    assert len(red) == 3  # the three double transpositions
    assert not sym4.is_ac_group()
    for i in red:
        assert sym4.element_order(i) == 2


def test_perfect_simple_quasisimple():
    alt5 = _perm_group(5, [(1, 2, 3)], [(3, 4, 5)])
    assert len(alt5) == 60
    assert alt5.is_perfect_group()
    assert alt5.is_simple()
    assert alt5.is_quasisimple()
    sym4 = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    assert not sym4.is_perfect_group()
    assert not sym4.is_simple()
    assert not sym4.is_quasisimple()
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    assert not sym3.is_simple()  # has a normal 3-cycle subgroup


def test_central_quotient():
    # SL(2,3) has center {I, -I}; the quotient has order 12
    f = ff_make(3, 1)
    mk = MatKind(f, 2)
    G = generate([Element(mk, mk.make((1, 1, 0, 1))), Element(mk, mk.make((1, 0, 1, 1)))])
    assert len(G) == 24
    assert len(G.center()) == 2
    Q = G.full_central_quotient()
    assert len(Q) == 12
    assert len(Q.center()) == 1
    with pytest.raises(PcgError):
        central_quotient(G, [0, 1, 2])  # not a central subgroup


def test_quotient_align_finds_isomorphism():
    # S3 as permutations vs SL(2,2): same group in different clothes
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    f = ff_make(2, 1)
    mk = MatKind(f, 2)
    M = generate([Element(mk, mk.make((0, 1, 1, 0))), Element(mk, mk.make((1, 1, 0, 1)))])
    assert len(M) == 6
    iso = quotient_align(sym3, M)
    assert iso is not None
    # the map respects multiplication
    for i in range(6):
        for j in range(6):
            assert iso[sym3.mul_idx(i, j)] == M.mul_idx(iso[i], iso[j])


def test_quotient_align_rejects_non_isomorphic():
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    c6 = _perm_group(5, [(1, 2), (3, 4, 5)])  # cyclic of order 6
    assert len(c6) == 6
    assert quotient_align(sym3, c6) is None


def test_direct_product_structure():
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    P = direct_product(sym3, sym3)
    assert len(P) == 36
    assert isinstance(P.kind, PairKind)
    a = P.element(3)
    b = P.element(5)
    la, ra = P.kind.split(a.payload)
    lb, rb = P.kind.split(b.payload)
    prod = a * b
    lp, rp = P.kind.split(prod.payload)
    assert lp == sym3.kind.mul(la, lb)
    assert rp == sym3.kind.mul(ra, rb)


def test_group_render_roundtrip():
    G = _perm_group(4, [(1, 2)], [(1, 2, 3, 4)])
    for i in range(0, 24, 5):
        e = G.element(i)
        s = e.render()
        back = Element(G.kind, G.kind.parse_render(s))
        assert back == e
        assert G.index_of(back) == i


def test_index_of_foreign_element_fails():
    sym3 = _perm_group(3, [(1, 2)], [(2, 3)])
    k = PermKind(3)
    outside = Element(PermKind(4), PermKind(4).identity())
    with pytest.raises(PcgError):
        sym3.index_of(outside)
    # right degree but not needed: identity is present
    assert sym3.index_of(Element(k, k.identity())) >= 0
