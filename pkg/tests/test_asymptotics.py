import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from densitylab.asymptotics import (
    All,
    Doubled,
    DoubleExponential,
    Explicit,
    Geometric,
    density,
    full_density_witness,
    limit_along,
    ratio_profile,
    statistical_limit,
)
from densitylab.errors import WitnessTooSparse
from densitylab.nset import Full, blocks_dexp, finite, periodic, scale, union

from oracles import dexp_count_enum


def spike(n):
    """1 + 1/n off perfect squares, 5 on squares."""
    r = math.isqrt(n)
    return Fraction(5) if r * r == n else 1 + Fraction(1, n)


# ---------------------------------------------------------------------------
# index sequences
# ---------------------------------------------------------------------------


def test_sequence_points():
    assert list(All(4).points()) == [1, 2, 3, 4]
    assert list(Explicit((1, 5, 12)).points()) == [1, 5, 12]
    assert list(DoubleExponential(4).points()) == [4, 16, 256, 65536]
    assert list(Doubled(DoubleExponential(3)).points()) == [8, 32, 512]
    assert list(Geometric(2, 3, 4).points()) == [2, 6, 18, 54]


def test_sequence_validation():
    with pytest.raises(ValueError):
        Explicit((3, 3))
    with pytest.raises(ValueError):
        Explicit(())
    with pytest.raises(ValueError):
        Geometric(1, 1, 5)
    with pytest.raises(ValueError):
        All(0)


# ---------------------------------------------------------------------------
# ratio profiles and limits
# ---------------------------------------------------------------------------


def test_ratio_profile_exact():
    evens = periodic(2, [0])
    assert ratio_profile(evens, Explicit((2, 4, 10))) == [
        (2, Fraction(1, 2)),
        (4, Fraction(1, 2)),
        (10, Fraction(1, 2)),
    ]
    assert ratio_profile(blocks_dexp(), Explicit((511,))) == [(511, Fraction(276, 511))]
    assert all(v == 1 for _, v in ratio_profile(Full(), DoubleExponential(3)))


def test_limit_along_converged_periodic():
    rep = limit_along(periodic(2, [0]), DoubleExponential(5), Fraction(1, 10**6))
    assert rep.converged and rep.value == Fraction(1, 2)
    assert rep.achieved_tol == 0


def test_limit_along_dexp_block_values():
    rep = limit_along(blocks_dexp(), DoubleExponential(4), Fraction(1, 100))
    want = [
        Fraction(dexp_count_enum(n), n) for n in (4, 16, 256, 65536)
    ]
    assert list(rep.values) == want == [
        Fraction(1, 4),
        Fraction(5, 16),
        Fraction(21, 256),
        Fraction(277, 65536),
    ]
    # with a 2-point tail the oscillation 21/256 - 277/65536 exceeds 1e-2,
    # so the verdict stays honest: oscillating, trending to 0
    assert not rep.converged
    assert rep.tail_sup == Fraction(21, 256)
    assert rep.tail_inf == Fraction(277, 65536)


def test_limit_along_doubled_points_match_block_ends():
    rep = limit_along(blocks_dexp(), Doubled(DoubleExponential(4)), Fraction(1, 10))
    assert list(rep.values) == [
        Fraction(1, 2),
        Fraction(5, 8),
        Fraction(69, 128),
        Fraction(16453, 32768),
    ]


def test_limit_along_streams_dense_sequences():
    rep = limit_along(periodic(3, [0]), All(50000), Fraction(1, 1000))
    assert rep.sampled
    assert rep.converged
    assert rep.value == Fraction(16666, 50000)
    assert rep.points[-1] == 50000


def test_limit_report_determinism():
    a = union(blocks_dexp(), periodic(7, [3]))
    r1 = limit_along(a, Geometric(1, 2, 15), Fraction(1, 100))
    r2 = limit_along(a, Geometric(1, 2, 15), Fraction(1, 100))
    assert r1 == r2


# ---------------------------------------------------------------------------
# density reports
# ---------------------------------------------------------------------------


def test_density_closed_forms():
    r = density(periodic(4, [1, 2, 3]), 10**5, 10**4)
    assert r.exact_value == Fraction(3, 4)
    assert r.lower_estimate - Fraction(1, 1000) <= r.exact_value <= r.upper_estimate + Fraction(1, 1000)
    assert density(scale(periodic(1, [0]), 2), 10**5, 10**4).exact_value == Fraction(1, 2)
    assert density(finite(3, 9), 100, 10).exact_value == 0


def test_density_window_extrema_match_full_scan():
    a = blocks_dexp()
    lo, hi = 1 << 10, 1 << 17
    r = density(a, hi, lo)
    best_min = best_max = None
    c = dexp_count_enum(lo - 1)
    elems = set()
    i = 1
    while 2 ** (2**i) <= hi:
        start = 2 ** (2**i)
        elems.update(range(start, min(2 * start, hi + 1)))
        i += 1
    for n in range(lo, hi + 1):
        if n in elems:
            c += 1
        v = Fraction(c, n)
        if best_min is None or v < best_min:
            best_min = v
        if best_max is None or v > best_max:
            best_max = v
    assert r.lower_estimate == best_min == Fraction(276, 65535)
    assert r.upper_estimate == best_max == Fraction(65812, 131071)


def test_density_scan_grid_for_opaque_sets():
    from densitylab.nset import Predicate

    p = Predicate(rule=lambda k: k % 5 < 2, enumeration_cap=3000, label="head")
    r = density(p, 2000, 200)
    assert r.grid == "integer-scan"
    assert abs(r.upper_estimate - Fraction(2, 5)) < Fraction(1, 50)


def test_density_validation():
    with pytest.raises(ValueError):
        density(periodic(2, [0]), 100, 100)


# ---------------------------------------------------------------------------
# statistical convergence
# ---------------------------------------------------------------------------


def test_statistical_limit_constant():
    rep = statistical_limit(lambda n: Fraction(3), Fraction(3), [Fraction(1, 10)], Explicit((10, 100)))
    assert rep.convergent
    assert all(v == 0 for row in rep.rows for _, v in row.densities)


def test_statistical_limit_spike_counts():
    rep = statistical_limit(spike, Fraction(1), [Fraction(1, 10)], Explicit((10**4,)))
    # exceptions: the 100 squares plus the prefix n <= 10 where 1/n >= 1/10
    count = sum(1 for k in range(1, 10**4 + 1) if abs(spike(k) - 1) >= Fraction(1, 10))
    got = rep.rows[0].densities[0][1]
    assert got == Fraction(count, 10**4)
    assert got <= Fraction(110, 10**4)


def test_statistical_limit_identity_ratio():
    rep = statistical_limit(
        lambda n: Fraction(n, n), Fraction(1), [Fraction(1, 100)], Explicit((100, 1000))
    )
    assert rep.convergent


def test_statistical_verdict_ignores_density_zero_modification():
    bumped = {17, 100, 4096}
    def modified(n):
        return Fraction(99) if n in bumped else spike(n)

    grid = [Fraction(1, 10), Fraction(1, 50)]
    pts = Explicit((1000, 10**4))
    base = statistical_limit(spike, Fraction(1), grid, pts)
    mod = statistical_limit(modified, Fraction(1), grid, pts)
    assert base.convergent == mod.convergent


# ---------------------------------------------------------------------------
# witness extraction
# ---------------------------------------------------------------------------


def test_witness_constant_sequence():
    rep = full_density_witness(lambda n: Fraction(7), Fraction(7), 100, [Fraction(1, 10)])
    assert rep.ratio == 1
    assert rep.witness.elements == tuple(range(1, 101))


def test_witness_spike_sequence():
    rep = full_density_witness(
        spike,
        Fraction(1),
        10**4,
        [Fraction(1, 2), Fraction(1, 10), Fraction(1, 20), Fraction(1, 100)],
    )
    assert rep.ratio >= Fraction(98, 100)
    assert rep.max_tail_deviation < Fraction(1, 100)
    # along the witness, every stage obeys its epsilon
    stage_of = {k: eps for lo, hi, eps in rep.stages for k in range(lo, hi + 1)}
    for k in rep.witness.elements:
        assert abs(spike(k) - 1) < stage_of[k]


def test_witness_alternating_sequence_too_sparse():
    with pytest.raises(WitnessTooSparse):
        full_density_witness(
            lambda n: Fraction(1 if n % 2 == 0 else -1), Fraction(1), 10**4, [Fraction(1, 10)]
        )


def test_witness_validation():
    with pytest.raises(ValueError):
        full_density_witness(lambda n: Fraction(0), Fraction(0), 5, [Fraction(1, 10)])
    with pytest.raises(ValueError):
        full_density_witness(lambda n: Fraction(0), Fraction(0), 100, [])
    with pytest.raises(ValueError):
        full_density_witness(lambda n: Fraction(0), Fraction(0), 100, [Fraction(1, 10), Fraction(1, 5)])


# ---------------------------------------------------------------------------
# profile invariants
# ---------------------------------------------------------------------------


@given(
    m=st.integers(2, 9),
    r=st.integers(0, 8),
    exp=st.integers(4, 14),
)
@settings(max_examples=40, deadline=None)
def test_periodic_limit_converges_past_m_over_tol(m, r, exp):
    s = periodic(m, [r % m])
    tol = Fraction(1, 2**exp)
    seq = Geometric(max(2, (m * 2**exp)), 2, 6)  # points beyond m/tol
    rep = limit_along(s, seq, tol)
    assert rep.converged
    assert abs(rep.value - Fraction(1, m)) <= tol


@given(n=st.integers(1, 10**4))
@settings(max_examples=60, deadline=None)
def test_profile_sandwich_consequence(n):
    a = blocks_dexp()
    r1 = Fraction(a.count(n), n)
    r2 = Fraction(a.count(2 * n), 2 * n)
    assert r1 / 2 <= r2 <= Fraction(1, 2) + r1 / 2
