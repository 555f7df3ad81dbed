"""Hot inner loops over multiplication tables.

Every kernel exists twice: a pure-numpy implementation and a numba
``@njit`` implementation with identical semantics.  The dispatching names
(``closure``, ``extend_hom`` ...) pick numba when it is importable and the
environment variable ``CHIUN_NUMBA`` is not set to ``0``.  The flag is read
once at import time.

Conventions shared by all kernels: ``table[i, j]`` is the index of the
product ``e_i * e_j`` (apply ``e_j`` first), tables are square integer
arrays, and "undefined" entries of index maps are ``-1``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("CHIUN_NUMBA", "1").lower() not in (
    "0",
    "false",
    "no",
    "off",
)

__all__ = [
    "USE_NUMBA",
    "NUMBA_AVAILABLE",
    "closure",
    "extend_hom",
    "extend_action",
    "commuting_tuples",
]


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def closure_numpy(table: np.ndarray, identity: int, seeds: np.ndarray) -> np.ndarray:
    """Boolean mask of the subgroup generated by ``seeds``."""
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    mask[np.asarray(seeds, dtype=np.int64)] = True
    mask[identity] = False
    seeds = np.flatnonzero(mask)
    mask[identity] = True
    if seeds.size == 0:
        return mask
    frontier = np.flatnonzero(mask)
    while frontier.size:
        # boolean marking dedups without the sort inside np.unique
        hit = np.zeros(n, dtype=np.bool_)
        hit[table[frontier][:, seeds].ravel()] = True
        hit &= ~mask
        mask |= hit
        frontier = np.flatnonzero(hit)
    return mask


def extend_hom_numpy(
    table_g: np.ndarray,
    table_h: np.ndarray,
    identity_g: int,
    identity_h: int,
    gens: np.ndarray,
    imgs: np.ndarray,
    injective: bool = True,
) -> np.ndarray | None:
    """Extend ``gens[i] -> imgs[i]`` to a map on the subgroup they generate.

    Returns the index map (``-1`` outside the generated subgroup), or None
    when the assignment is not a well-defined (and, if requested, injective)
    homomorphism on that subgroup.
    """
    phi = np.full(table_g.shape[0], -1, dtype=np.int64)
    used = np.zeros(table_h.shape[0], dtype=np.bool_)
    phi[identity_g] = identity_h
    used[identity_h] = True
    frontier = np.array([identity_g], dtype=np.int64)
    while frontier.size:
        nxt = []
        for g, h in zip(gens, imgs):
            targets = table_g[frontier, g].astype(np.int64)
            values = table_h[phi[frontier], h].astype(np.int64)
            known = phi[targets] >= 0
            if np.any(phi[targets[known]] != values[known]):
                return None
            targets = targets[~known]
            values = values[~known]
            if targets.size == 0:
                continue
            phi[targets] = values
            if np.any(phi[targets] != values):
                return None  # one new element received two images
            order = np.unique(targets, return_index=True)[1]
            targets = targets[order]
            values = values[order]
            if injective:
                if used[values].any() or np.unique(values).size != values.size:
                    return None
                used[values] = True
            nxt.append(targets)
        frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
    return phi


def extend_action_numpy(
    table: np.ndarray,
    identity: int,
    gens: np.ndarray,
    gen_actions: np.ndarray,
) -> np.ndarray | None:
    """Images of every point under every group element, or None.

    ``gen_actions[i]`` is the permutation of the points assigned to
    generator ``gens[i]``; the result row ``r`` satisfies
    ``rho(g * s) = rho(g) o rho(s)`` on every edge of the Cayley graph.
    """
    n = table.shape[0]
    m = gen_actions.shape[1] if gen_actions.ndim == 2 else 0
    rho = np.full((n, m), -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    rho[identity] = np.arange(m)
    done[identity] = True
    frontier = np.array([identity], dtype=np.int64)
    while frontier.size:
        nxt = []
        for g, act in zip(gens, gen_actions):
            targets = table[frontier, g].astype(np.int64)
            values = rho[frontier][:, act]
            known = done[targets]
            if np.any(rho[targets[known]] != values[known]):
                return None
            targets = targets[~known]
            values = values[~known]
            if targets.size == 0:
                continue
            rho[targets] = values
            if np.any(rho[targets] != values):
                return None
            targets = np.unique(targets)
            done[targets] = True
            nxt.append(targets)
        frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
    if not done.all():
        return None
    return rho


def commuting_tuples_numpy(comm: np.ndarray, m: int) -> int:
    """Number of ordered ``m``-tuples of pairwise commuting elements."""
    n = comm.shape[0]
    if m == 0:
        return 1
    if m == 1:
        return n

    def count(allowed: np.ndarray, depth: int) -> int:
        if depth == 2:
            sub = comm[np.ix_(allowed, allowed)]
            return int(sub.sum())
        return sum(count(allowed[comm[i, allowed]], depth - 1) for i in allowed)

    return count(np.arange(n), m)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @numba.njit(cache=True)
    def _closure_nb(table, identity, seeds):
        n = table.shape[0]
        mask = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        mask[identity] = True
        queue[0] = identity
        tail = 1
        for s in seeds:
            if not mask[s]:
                mask[s] = True
                queue[tail] = s
                tail += 1
        head = 0
        while head < tail:
            x = queue[head]
            head += 1
            for s in seeds:
                y = table[x, s]
                if not mask[y]:
                    mask[y] = True
                    queue[tail] = y
                    tail += 1
        return mask

    @numba.njit(cache=True)
    def _extend_hom_nb(table_g, table_h, identity_g, identity_h, gens, imgs, injective):
        ng = table_g.shape[0]
        phi = np.full(ng, -1, dtype=np.int64)
        used = np.zeros(table_h.shape[0], dtype=np.bool_)
        queue = np.empty(ng, dtype=np.int64)
        phi[identity_g] = identity_h
        used[identity_h] = True
        queue[0] = identity_g
        head = 0
        tail = 1
        ok = True
        while head < tail and ok:
            x = queue[head]
            head += 1
            for k in range(gens.shape[0]):
                y = table_g[x, gens[k]]
                v = table_h[phi[x], imgs[k]]
                if phi[y] >= 0:
                    if phi[y] != v:
                        ok = False
                        break
                else:
                    if injective and used[v]:
                        ok = False
                        break
                    phi[y] = v
                    used[v] = True
                    queue[tail] = y
                    tail += 1
        return ok, phi

    @numba.njit(cache=True)
    def _extend_action_nb(table, identity, gens, gen_actions):
        n = table.shape[0]
        m = gen_actions.shape[1]
        rho = np.full((n, m), -1, dtype=np.int64)
        done = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        for p in range(m):
            rho[identity, p] = p
        done[identity] = True
        queue[0] = identity
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(gens.shape[0]):
                y = table[x, gens[k]]
                if done[y]:
                    for p in range(m):
                        if rho[y, p] != rho[x, gen_actions[k, p]]:
                            return False, rho
                else:
                    for p in range(m):
                        rho[y, p] = rho[x, gen_actions[k, p]]
                    done[y] = True
                    queue[tail] = y
                    tail += 1
        return tail == n, rho

    @numba.njit(cache=True)
    def _commuting_tuples_nb(comm, m):
        n = comm.shape[0]
        if m == 0:
            return 1
        if m == 1:
            return n
        cand = np.zeros((m, n), dtype=np.bool_)
        cand[0, :] = True
        idx = np.full(m, -1, dtype=np.int64)
        level = 0
        total = 0
        while level >= 0:
            i = idx[level] + 1
            while i < n and not cand[level, i]:
                i += 1
            if i == n:
                idx[level] = -1
                level -= 1
                continue
            idx[level] = i
            if level == m - 2:
                c = 0
                for j in range(n):
                    if cand[level, j] and comm[i, j]:
                        c += 1
                total += c
            else:
                for j in range(n):
                    cand[level + 1, j] = cand[level, j] and comm[i, j]
                level += 1
        return total

    def closure_numba(table, identity, seeds):
        seeds = np.unique(np.asarray(seeds, dtype=np.int64))
        return _closure_nb(table, np.int64(identity), seeds)

    def extend_hom_numba(table_g, table_h, identity_g, identity_h, gens, imgs, injective=True):
        ok, phi = _extend_hom_nb(
            table_g,
            table_h,
            np.int64(identity_g),
            np.int64(identity_h),
            np.asarray(gens, dtype=np.int64),
            np.asarray(imgs, dtype=np.int64),
            bool(injective),
        )
        return phi if ok else None

    def extend_action_numba(table, identity, gens, gen_actions):
        gen_actions = np.ascontiguousarray(gen_actions, dtype=np.int64)
        if gen_actions.ndim != 2:
            gen_actions = gen_actions.reshape(len(gens), -1)
        ok, rho = _extend_action_nb(
            table, np.int64(identity), np.asarray(gens, dtype=np.int64), gen_actions
        )
        return rho if ok else None

    def commuting_tuples_numba(comm, m):
        return int(_commuting_tuples_nb(np.ascontiguousarray(comm, dtype=np.bool_), int(m)))

else:  # pragma: no cover
    closure_numba = closure_numpy
    extend_hom_numba = extend_hom_numpy
    extend_action_numba = extend_action_numpy
    commuting_tuples_numba = commuting_tuples_numpy


if USE_NUMBA:
    closure = closure_numba
    extend_hom = extend_hom_numba
    extend_action = extend_action_numba
    commuting_tuples = commuting_tuples_numba
else:
    closure = closure_numpy
    extend_hom = extend_hom_numpy
    extend_action = extend_action_numpy
    commuting_tuples = commuting_tuples_numpy
