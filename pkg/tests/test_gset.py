import itertools

import pytest

from chiun.errors import GroupTooLarge, InvalidAction
from chiun.groupring import RElement, T
from chiun.gset import (
    GSet,
    cartesian_power_gset,
    class_in_R,
    coset_gset,
    disjoint_union,
    induce,
    natural_gset,
    orbits_and_stabilizers,
    product_gset,
    regular_gset,
    remove_big_diagonal,
    trivial_gset,
)
from chiun.isoclass import are_isomorphic
from chiun.permgroup import (
    LIMITS,
    PermGroup,
    compose,
    cyclic_group,
    direct_product,
    klein4_group,
    symmetric_group,
    trivial_group,
    wreath_symmetric,
)


def brute_orbit_data(X: GSet):
    """(orbit size, stabilizer order) pairs from a word-by-word python action."""
    G = X.group
    m = X.points
    acts = {tuple(range(G.degree)): tuple(range(m))}
    frontier = list(acts)
    while frontier:
        nxt = []
        for g in frontier:
            for s, a in zip(G.generators, X.action):
                h = compose(g, s)
                if h not in acts:
                    acts[h] = tuple(acts[g][a[p]] for p in range(m))
                    nxt.append(h)
        frontier = nxt
    seen, out = set(), []
    for p in range(m):
        if p in seen:
            continue
        orbit = {act[p] for act in acts.values()}
        seen |= orbit
        stab = sum(1 for act in acts.values() if act[p] == p)
        out.append((len(orbit), stab))
    return sorted(out)


def test_spec_orbit_examples():
    S3 = symmetric_group(3)
    data = orbits_and_stabilizers(natural_gset(S3))
    assert [(size, H.order) for size, H in data] == [(3, 2)]
    data = orbits_and_stabilizers(regular_gset(S3))
    assert [(size, H.order) for size, H in data] == [(6, 1)]
    data = orbits_and_stabilizers(trivial_gset(cyclic_group(2), 2))
    assert [(size, H.order) for size, H in data] == [(1, 2), (1, 2)]


def test_invalid_actions():
    S3 = symmetric_group(3)
    with pytest.raises(InvalidAction):
        GSet(S3, 3, [(1, 0, 2), (1, 0, 2)])  # a 3-cycle generator cannot act as a transposition
    with pytest.raises(InvalidAction):
        GSet(S3, 2, [(0, 1)])
    with pytest.raises(InvalidAction):
        GSet(S3, 2, [(0, 0), (0, 1)])
    with pytest.raises(InvalidAction):
        natural_gset(S3).restrict([0, 1])


def test_class_in_R_examples(registry):
    S3 = symmetric_group(3)
    assert class_in_R(regular_gset(S3), registry) == T("1", registry)
    assert class_in_R(trivial_gset(S3, 1), registry) == T("S3", registry)
    assert class_in_R(natural_gset(S3), registry) == T("Z2", registry)


def test_induce_examples(registry):
    S3 = symmetric_group(3)
    Z2 = PermGroup(3, [(1, 0, 2)])
    X = induce(trivial_gset(Z2, 1), S3)
    assert X.points == 3 and X.num_orbits == 1
    assert class_in_R(X, registry) == T("Z2", registry)
    assert brute_orbit_data(X) == brute_orbit_data(natural_gset(S3))
    Y = natural_gset(S3)
    Y1 = induce(Y, S3)
    assert brute_orbit_data(Y1) == brute_orbit_data(Y)
    Z4 = cyclic_group(4)
    sq = PermGroup(4, [(2, 3, 0, 1)])  # the order-2 subgroup of Z4
    F = induce(regular_gset(sq), Z4)
    assert F.points == 4 and F.num_orbits == 1
    assert class_in_R(F, registry) == T("1", registry)


def test_induce_with_explicit_embedding(registry):
    Z2 = cyclic_group(2)
    V = klein4_group()
    X = trivial_gset(Z2, 2)
    for img in V.generators:
        Y = induce(X, V, [img])
        assert class_in_R(Y, registry) == class_in_R(X, registry)
    with pytest.raises(InvalidAction):
        induce(X, V, [tuple(range(V.degree))])  # not injective


def test_cartesian_power_examples(registry):
    two = trivial_gset(trivial_group(), 2)
    P = cartesian_power_gset(two, 2)
    assert P.points == 4
    assert class_in_R(P, registry) == 2 * T("S2", registry) + T("1", registry)
    R = cartesian_power_gset(regular_gset(cyclic_group(2)), 2)
    assert R.points == 4 and R.num_orbits == 1
    assert orbits_and_stabilizers(R)[0][1].order == 2
    assert class_in_R(R, registry) == T("Z2", registry)
    X = natural_gset(symmetric_group(3))
    P1 = cartesian_power_gset(X, 1)
    assert are_isomorphic(P1.group, X.group)
    assert class_in_R(P1, registry) == class_in_R(X, registry)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize(
    "X",
    [
        natural_gset(symmetric_group(3)),
        regular_gset(cyclic_group(3)),
        trivial_gset(cyclic_group(2), 2),
        GSet(cyclic_group(2), 3, [(1, 0, 2)]),
    ],
    ids=["S3nat", "Z3reg", "Z2triv2", "Z2mixed"],
)
def test_cartesian_power_against_brute_force(X, n):
    P = cartesian_power_gset(X, n)
    assert P.group.order == X.group.order**n * (2 if n == 2 else 6)
    got = sorted((size, H.order) for size, H in orbits_and_stabilizers(P))
    assert got == brute_orbit_data(P)
    # orbits of G_n on n-tuples, by applying every (g_1..g_n; pi) directly
    tuples = list(itertools.product(range(X.points), repeat=n))
    rho = X.rho
    seen, count = set(), 0
    for t in tuples:
        if t in seen:
            continue
        count += 1
        orbit = set()
        for gs in itertools.product(range(X.group.order), repeat=n):
            moved = tuple(int(rho[g, x]) for g, x in zip(gs, t))
            for perm in itertools.permutations(range(n)):
                orbit.add(tuple(moved[perm[b]] for b in range(n)))
        seen |= orbit
    assert P.num_orbits == count


def test_remove_big_diagonal_examples(registry):
    assert remove_big_diagonal(regular_gset(symmetric_group(3)), 2).points == 0
    D = remove_big_diagonal(trivial_gset(cyclic_group(2), 2), 2)
    assert D.points == 2 and D.num_orbits == 1
    assert orbits_and_stabilizers(D)[0][1].order == 4
    assert class_in_R(D, registry) == T("Z2 x Z2", registry)
    E = remove_big_diagonal(trivial_gset(trivial_group(), 3), 3)
    assert E.points == 6
    assert class_in_R(E, registry) == T("1", registry)


def test_point_budget():
    saved = LIMITS.cap
    LIMITS.cap = 1
    try:
        with pytest.raises(GroupTooLarge):
            cartesian_power_gset(trivial_gset(trivial_group(), 10), 3)
    finally:
        LIMITS.cap = saved


def test_product_and_union(registry):
    X = natural_gset(symmetric_group(3))
    Y = trivial_gset(cyclic_group(3), 1)
    P = product_gset(X, Y)
    assert class_in_R(P, registry) == T("Z2 x Z3", registry)
    U = disjoint_union(X, trivial_gset(X.group, 2))
    assert class_in_R(U, registry) == T("Z2", registry) + 2 * T("S3", registry)
    with pytest.raises(InvalidAction):
        disjoint_union(X, Y)


def test_coset_gset(registry):
    S3 = symmetric_group(3)
    A3 = PermGroup(3, [(1, 2, 0)])
    C = coset_gset(S3, A3)
    assert C.points == 2
    assert class_in_R(C, registry) == T("Z3", registry)


def test_induction_preserves_class_randomized(registry):
    import random

    rng = random.Random(3)
    S3 = symmetric_group(3)
    Z3 = PermGroup(3, [(1, 2, 0)])
    for _ in range(10):
        m = rng.randint(1, 7)
        # Z3 acts through a product of disjoint 3-cycles on a prefix
        k = rng.randint(0, m // 3)
        act = list(range(m))
        for b in range(k):
            a0 = 3 * b
            act[a0], act[a0 + 1], act[a0 + 2] = a0 + 1, a0 + 2, a0
        X = GSet(Z3, m, [tuple(act)])
        Y = induce(X, S3)
        assert Y.points == 2 * m
        assert class_in_R(Y, registry) == class_in_R(X, registry)


def test_wreath_generator_layout_matches_power():
    X = natural_gset(symmetric_group(3))
    P = cartesian_power_gset(X, 2)
    W = wreath_symmetric(symmetric_group(3), 2)
    assert P.group.generators == W.generators


def test_empty_gset(registry):
    E = GSet(symmetric_group(3), 0, [(), ()])
    assert class_in_R(E, registry) == RElement()
    assert E.num_orbits == 0


def test_product_group_is_direct_product():
    X = natural_gset(symmetric_group(3))
    Y = regular_gset(cyclic_group(2))
    assert are_isomorphic(product_gset(X, Y).group, direct_product(symmetric_group(3), cyclic_group(2)))
