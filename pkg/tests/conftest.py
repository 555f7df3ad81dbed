import itertools

import pytest

from chiun.isoclass import ClassRegistry
from chiun.permgroup import LIMITS


@pytest.fixture
def registry():
    return ClassRegistry()


@pytest.fixture
def virtual_wreaths():
    saved = LIMITS.virtual_wreath
    LIMITS.virtual_wreath = True
    yield
    LIMITS.virtual_wreath = saved


def brute_closure(gens, degree):
    """Pure-python subgroup closure over tuples; the reference for enumeration."""
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def brute_subgroups(elements, degree):
    """All subgroups of a small group, as frozensets of tuples, by repeated extension."""
    elements = [tuple(e) for e in elements]
    trivial = frozenset({tuple(range(degree))})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for g in elements:
                if g in H:
                    continue
                K = frozenset(brute_closure(list(H) + [g], degree))
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return found


def conj_class_count(subgroups, elements, degree):
    def conj(g, H):
        ginv = [0] * degree
        for i, v in enumerate(g):
            ginv[v] = i
        return frozenset(tuple(g[h[ginv[i]]] for i in range(degree)) for h in H)

    remaining = set(subgroups)
    classes = []
    while remaining:
        H = remaining.pop()
        orbit = {conj(tuple(g), H) for g in elements}
        remaining -= orbit
        classes.append((len(next(iter(orbit))), len(orbit)))
    return sorted(classes)


def all_perms(n):
    return [tuple(p) for p in itertools.permutations(range(n))]


def random_gset(G, rng, max_orbits=3, min_orbits=1):
    """A disjoint union of coset spaces G/H for random subgroups H."""
    from chiun.gset import coset_gset, disjoint_union, trivial_gset
    from chiun.permgroup import subgroup_conjugacy_classes

    subs = subgroup_conjugacy_classes(G)
    X = trivial_gset(G, 0)
    for _ in range(rng.randint(min_orbits, max_orbits)):
        X = disjoint_union(X, coset_gset(G, rng.choice(subs).group))
    return X


def random_complex(G, rng, max_dim=2, max_orbits=3):
    from chiun.eqcomplex import EquivariantCellComplex

    return EquivariantCellComplex(
        G, {k: random_gset(G, rng, max_orbits) for k in range(rng.randint(0, max_dim) + 1)}
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
