"""Canonical test objects: the permutation corpus and randomized sets.

Everything here is deterministic given a seed, so reports built on top of
the corpus are byte-reproducible.
"""

from __future__ import annotations

import random

from .nset import (
    SymbolicSet,
    blocks_dexp,
    blocks_explicit,
    compl,
    diff,
    finite,
    inter,
    periodic,
    scale,
    union,
)
from .perm import (
    Compose,
    FiniteTable,
    Identity,
    PermutationRule,
    QuarterBlockSwap,
    pairing_permutation,
)


def standard_permutation_corpus() -> list[tuple[str, PermutationRule]]:
    """Identity, two density-matched pairings, the quarter-block swap, a
    finite table, and a composition involving the swap."""
    odds, evens = periodic(2, [1]), periodic(2, [0])
    pair_oe = pairing_permutation(odds, evens)
    pair_3 = pairing_permutation(periodic(3, [1]), periodic(3, [2]))
    qswap = QuarterBlockSwap()
    table = FiniteTable(((1, 5), (5, 1), (2, 3), (3, 2)))
    return [
        ("id", Identity()),
        ("pair(odds,evens)", pair_oe),
        ("pair(3k+1,3k+2)", pair_3),
        ("qswap", qswap),
        ("table((1 5)(2 3))", table),
        ("comp(qswap,pair)", Compose(qswap, pair_oe)),
    ]


def random_disjoint_periodic_pair(rng: random.Random) -> tuple[SymbolicSet, SymbolicSet]:
    """Two infinite periodic sets over a common modulus with disjoint residues.

    Moduli are powers of two so the counting ratios are exact on every
    power-of-two evaluation grid; limits then converge with zero
    oscillation instead of an m/n wobble.
    """
    m = rng.choice((4, 8, 16, 32))
    residues = list(range(m))
    rng.shuffle(residues)
    cut = rng.randrange(1, min(m, 9))
    size_right = rng.randrange(1, min(m - cut, 9) + 1)
    left = residues[:cut]
    right = residues[cut : cut + size_right]
    return periodic(m, left), periodic(m, right)


def disjoint_periodic_pairs(count: int, seed: int = 1) -> list[tuple[SymbolicSet, SymbolicSet]]:
    rng = random.Random(seed)
    return [random_disjoint_periodic_pair(rng) for _ in range(count)]


def closed_form_density_corpus() -> list[SymbolicSet]:
    """Ten sets with exact closed-form densities, ratio-exact on dyadic grids."""
    return [
        periodic(1, [0]),  # full
        finite(),  # empty
        periodic(2, [0]),
        periodic(2, [1]),
        periodic(4, [1, 2, 3]),
        periodic(4, [2]),
        periodic(8, [1, 5]),
        periodic(16, [0, 3, 9, 12]),
        scale(periodic(2, [1]), 2),
        compl(periodic(8, [0])),
    ]


def random_symbolic_set(rng: random.Random, depth: int = 2) -> SymbolicSet:
    """A random algebra tree over small closed-form leaves."""
    if depth == 0:
        kind = rng.randrange(5)
        if kind == 0:
            m = rng.randrange(2, 12)
            k = rng.randrange(1, m)
            return periodic(m, rng.sample(range(m), k))
        if kind == 1:
            size = rng.randrange(0, 12)
            return finite(*rng.sample(range(1, 5000), size))
        if kind == 2:
            return blocks_dexp()
        if kind == 3:
            lo = rng.randrange(1, 50)
            ivs = []
            for _ in range(rng.randrange(1, 5)):
                hi = lo + rng.randrange(1, 200)
                ivs.append((lo, hi))
                lo = hi + rng.randrange(1, 100)
            return blocks_explicit(ivs)
        return scale(periodic(rng.randrange(2, 6), [1]), rng.randrange(2, 6))
    op = rng.randrange(4)
    if op == 0:
        return union(random_symbolic_set(rng, depth - 1), random_symbolic_set(rng, depth - 1))
    if op == 1:
        return inter(random_symbolic_set(rng, depth - 1), random_symbolic_set(rng, depth - 1))
    if op == 2:
        return diff(random_symbolic_set(rng, depth - 1), random_symbolic_set(rng, depth - 1))
    return compl(random_symbolic_set(rng, depth - 1))
