import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from densitylab.asymptotics import Explicit
from densitylab.corpus import standard_permutation_corpus
from densitylab.errors import CardinalityMismatch, UnknownInfinitude
from densitylab.nset import (
    Empty,
    blocks_dexp,
    blocks_explicit,
    finite,
    inter,
    periodic,
)
from densitylab.perm import (
    Classification,
    Compose,
    FiniteTable,
    Identity,
    Inverse,
    QuarterBlockSwap,
    displacement_classification,
    displacement_profile,
    doubling_checkpoints,
    exceptional_sets,
    levy_defect_profile,
    levy_witness_set,
    pairing_permutation,
    ratio_stat_report,
    restrict_pairing,
    stat_checkpoints,
    van_douwen_ratio_report,
)

from oracles import brute_defect, brute_image_count

ODDS = periodic(2, [1])
EVENS = periodic(2, [0])

_CORPUS = [pi for _, pi in standard_permutation_corpus()]


def corpus_rules():
    return _CORPUS


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def test_apply_invert_basics():
    assert Identity().apply(7) == 7
    phi = pairing_permutation(ODDS, EVENS)
    assert phi.apply(5) == 6 and phi.apply(6) == 5
    q = QuarterBlockSwap()
    assert q.apply(5) == 9 and q.apply(9) == 5
    assert Compose(q, phi).apply(4) == q.apply(phi.apply(4))
    assert Inverse(q).apply(9) == q.invert(9) == 5


def test_finite_table():
    t = FiniteTable(((1, 5), (5, 1), (2, 3), (3, 2)))
    assert t.apply(1) == 5 and t.apply(5) == 1 and t.apply(4) == 4
    assert t.invert(3) == 2
    with pytest.raises(ValueError):
        FiniteTable(((1, 5), (2, 5)))
    with pytest.raises(ValueError):
        FiniteTable(((1, 5),))


@given(n=st.integers(1, 10**4))
@settings(max_examples=200, deadline=None)
def test_invert_after_apply_is_identity(n):
    for pi in corpus_rules():
        assert pi.invert(pi.apply(n)) == n
        assert pi.apply(pi.invert(n)) == n


def test_bijectivity_on_initial_segment():
    for pi in corpus_rules():
        image = {pi.apply(n) for n in range(1, 1001)}
        assert len(image) == 1000
        # every value <= 1000 has a preimage under the rule
        for m in range(1, 1001):
            assert pi.apply(pi.invert(m)) == m


def test_pairing_beyond_cache_matches_cached_path():
    phi = pairing_permutation(ODDS, EVENS)
    small = pairing_permutation(ODDS, EVENS)
    object.__setattr__(small, "cache_pairs", 8)
    for n in range(1, 200):
        assert phi.apply(n) == small.apply(n)


def test_pairing_preconditions():
    with pytest.raises(CardinalityMismatch):
        pairing_permutation(finite(1, 2), finite(5))
    with pytest.raises(CardinalityMismatch):
        pairing_permutation(finite(1, 2), EVENS)
    with pytest.raises(UnknownInfinitude):
        pairing_permutation(inter(blocks_dexp(), periodic(3, [1])), EVENS)


def test_pairing_of_equal_sets_is_identity():
    pid = pairing_permutation(ODDS, ODDS)
    assert all(pid.apply(n) == n for n in range(1, 100))


def test_pairing_swaps_ranked_elements():
    phi = pairing_permutation(periodic(3, [1]), periodic(4, [0]))
    # common elements (4, 16, 28, ...) stay fixed; the remainders pair in
    # rank order: A' = {1, 7, 10, ...}, B' = {8, 12, 20, ...}
    assert phi.apply(4) == 4
    assert phi.apply(1) == 8 and phi.apply(8) == 1
    assert phi.apply(7) == 12 and phi.apply(12) == 7
    assert phi.apply(2) == 2


def test_pairing_disjointification():
    # overlapping sets: the common part stays fixed
    a = periodic(6, [1, 3])
    b = periodic(6, [3, 5])
    phi = pairing_permutation(a, b)
    assert phi.a_only == periodic(6, [1])
    assert phi.b_only == periodic(6, [5])
    assert phi.apply(3) == 3 and phi.apply(9) == 9
    assert phi.apply(1) == 5 and phi.apply(5) == 1


def test_pairing_of_unequal_densities_is_still_an_involution():
    phi = pairing_permutation(periodic(2, [1]), periodic(4, [0]))
    assert all(phi.apply(phi.apply(n)) == n for n in range(1, 2000))
    # it moves mass wholesale, so it is decidedly not Levy-like
    prof = levy_defect_profile(phi, doubling_checkpoints(10**5))
    assert prof.classification_hint == Classification.NON_LEVY_LIKELY


# ---------------------------------------------------------------------------
# defect diagnostics
# ---------------------------------------------------------------------------


def test_defect_identity_is_zero():
    prof = levy_defect_profile(Identity(), doubling_checkpoints(10**5))
    assert all(v == 0 for v in prof.defects)
    assert prof.classification_hint == Classification.LEVY_LIKELY


def test_defect_pairing_is_parity_of_n():
    phi = pairing_permutation(ODDS, EVENS)
    prof = levy_defect_profile(phi, Explicit((7, 10, 1001, 10**4)))
    assert list(prof.defects) == [Fraction(1, 7), 0, Fraction(1, 1001), 0]


def test_defect_qswap_peak():
    prof = levy_defect_profile(QuarterBlockSwap(), Explicit((7,)))
    assert prof.defects[0] == Fraction(4, 7)


def test_defect_matches_brute_force():
    for pi in corpus_rules():
        for n in (10, 100, 537, 2048):
            prof = levy_defect_profile(pi, Explicit((n,)))
            assert prof.defects[0] == Fraction(brute_defect(pi, n), n)


def test_downward_defect_equals_upward():
    for pi in corpus_rules():
        up = levy_defect_profile(pi, doubling_checkpoints(10**4))
        down = levy_defect_profile(pi, doubling_checkpoints(10**4), mode="downward")
        assert up.defects == down.defects


def test_defect_of_pi_composed_with_inverse_is_zero():
    for pi in corpus_rules():
        prof = levy_defect_profile(Compose(pi, Inverse(pi)), doubling_checkpoints(2000))
        assert all(v == 0 for v in prof.defects)


def test_classification_thresholds():
    q = levy_defect_profile(QuarterBlockSwap(), doubling_checkpoints(10**5))
    assert q.classification_hint == Classification.NON_LEVY_LIKELY
    # short horizons refuse to certify either way for a borderline profile
    short = levy_defect_profile(pairing_permutation(ODDS, EVENS), Explicit((11, 101, 1001)))
    assert short.classification_hint == Classification.INCONCLUSIVE


# ---------------------------------------------------------------------------
# displacement
# ---------------------------------------------------------------------------


def test_displacement_full_set_is_zero():
    for pi in corpus_rules():
        prof = displacement_profile(pi, periodic(1, [0]), Explicit((5, 50, 500)))
        assert all(v == 0 for _, v in prof)


def test_displacement_qswap_lower_blocks():
    lower = blocks_explicit([(4, 8), (16, 32)])
    prof = displacement_profile(QuarterBlockSwap(), lower, Explicit((7,)))
    assert prof[0] == (7, Fraction(4, 7))
    a7 = lower.count(7)
    img7 = brute_image_count(QuarterBlockSwap(), lower, 7)
    assert prof[0][1] == Fraction(a7 - img7, 7)


def test_displacement_pairing_odds():
    phi = pairing_permutation(ODDS, EVENS)
    prof = displacement_profile(phi, ODDS, Explicit((10,)))
    assert prof[0] == (10, Fraction(0))


def test_pairing_defect_equals_count_difference():
    phi = pairing_permutation(periodic(3, [1]), periodic(5, [0]))
    for n in (10, 100, 999):
        d = brute_defect(phi, n)
        diff = abs(phi.a_only.count(n) - phi.b_only.count(n))
        assert d == diff


def test_three_characterizations_agree_on_corpus():
    # agreement holds at the default working horizon; shorter horizons may
    # legitimately downgrade a verdict to inconclusive
    horizon = 10**5
    grid = doubling_checkpoints(horizon)
    eps = [Fraction(1, 10), Fraction(1, 100)]
    for name, pi in standard_permutation_corpus():
        by_defect = levy_defect_profile(pi, grid).classification_hint
        by_stat = ratio_stat_report(pi, eps, stat_checkpoints(horizon)).classification
        sets = [levy_witness_set(pi, cap=4 * horizon), ODDS, blocks_dexp()]
        by_displacement = displacement_classification(pi, sets, grid)
        assert by_defect == by_stat == by_displacement, (
            name,
            by_defect,
            by_stat,
            by_displacement,
        )


# ---------------------------------------------------------------------------
# statistical-ratio diagnostics
# ---------------------------------------------------------------------------


def test_ratio_stat_identity():
    rep = ratio_stat_report(Identity(), [Fraction(1, 10)], stat_checkpoints(10**4))
    assert rep.classification == Classification.LEVY_LIKELY
    assert all(v == 0 for row in rep.stat.rows for _, v in row.densities)


def test_ratio_stat_qswap_exceptions():
    rep = ratio_stat_report(
        QuarterBlockSwap(), [Fraction(1, 5)], Explicit((127,))
    )
    # the moved blocks push pi(k) >= 1.2k throughout most of [64, 128)
    count = sum(
        1
        for k in range(1, 128)
        if abs(Fraction(QuarterBlockSwap().apply(k), k) - 1) >= Fraction(1, 5)
    )
    assert rep.stat.rows[0].densities[0][1] == Fraction(count, 127)
    assert count >= 64 - 22  # block [64, 128) contributes at least its bulk


def test_ratio_stat_pairing_scales_like_two_over_eps():
    phi = pairing_permutation(ODDS, EVENS)
    eps = Fraction(1, 100)
    rep = ratio_stat_report(phi, [eps], Explicit((10**4,)))
    # |phi(k)/k - 1| = 1/k, so exceptions stop at k = 1/eps
    assert rep.stat.rows[0].densities[0][1] == Fraction(100, 10**4)


# ---------------------------------------------------------------------------
# exceptional sets
# ---------------------------------------------------------------------------


def test_exceptional_sets_identity_empty():
    ex = exceptional_sets(Identity(), Fraction(1, 2), 100)
    assert ex.above.elements == () and ex.below.elements == ()


def test_exceptional_sets_match_brute_force():
    for pi in corpus_rules():
        for eps in (Fraction(1, 2), Fraction(3, 10)):
            ex = exceptional_sets(pi, eps, 200)
            above = tuple(
                k for k in range(1, 201) if pi.apply(k) - k > eps * k
            )
            below = tuple(
                k for k in range(1, 201) if k - pi.apply(k) > eps * k
            )
            assert ex.above.elements == above
            assert ex.below.elements == below


def test_exceptional_sets_qswap_contains_first_block():
    ex = exceptional_sets(QuarterBlockSwap(), Fraction(1, 2), 100)
    assert set((4, 5, 6, 7)) <= set(ex.above.elements)
    # at eps below 1/2 the down-shifted block shows up too
    ex2 = exceptional_sets(QuarterBlockSwap(), Fraction(3, 10), 100)
    assert set((8, 9, 10, 11)) <= set(ex2.below.elements)


def test_exceptional_sets_pairing():
    ex = exceptional_sets(pairing_permutation(ODDS, EVENS), Fraction(1, 2), 100)
    assert ex.above.elements == (1,)
    assert ex.below.elements == ()


# ---------------------------------------------------------------------------
# van Douwen ratio check
# ---------------------------------------------------------------------------


def test_van_douwen_reports():
    assert van_douwen_ratio_report(Identity(), 10**4, Fraction(1, 100)).sup_deviation == 0
    phi = pairing_permutation(ODDS, EVENS)
    rep = van_douwen_ratio_report(phi, 10**4, Fraction(1, 100))
    assert rep.holds and rep.sup_deviation <= Fraction(1, 1000)
    q = van_douwen_ratio_report(QuarterBlockSwap(), 10**4, Fraction(1, 100))
    assert not q.holds and q.sup_deviation >= Fraction(1, 2)


# ---------------------------------------------------------------------------
# witness sets and restricted pairings
# ---------------------------------------------------------------------------


def test_witness_sets():
    phi = pairing_permutation(ODDS, EVENS)
    w = levy_witness_set(phi, 1000)
    assert [k for k in range(1, 12) if w.contains(k)] == [1, 3, 5, 7, 9, 11]
    wq = levy_witness_set(QuarterBlockSwap(), 1000)
    assert [k for k in range(1, 20) if wq.contains(k)] == [4, 5, 6, 7, 16, 17, 18, 19]
    wid = levy_witness_set(Identity(), 500)
    assert wid.count(500) == 0


def test_restrict_pairing_single_point():
    phi = pairing_permutation(ODDS, EVENS)
    psi = restrict_pairing(phi, finite(1), horizon=1000)
    assert psi.apply(1) == 1 and psi.apply(2) == 2
    for k in range(2, 300):
        assert psi.apply(2 * k - 1) == 2 * k
        assert psi.apply(2 * k) == 2 * k - 1
    # still a bijection / involution
    assert all(psi.apply(psi.apply(n)) == n for n in range(1, 500))


def test_restrict_pairing_empty_behaves_as_base():
    phi = pairing_permutation(ODDS, EVENS)
    psi = restrict_pairing(phi, Empty())
    assert all(psi.apply(n) == phi.apply(n) for n in range(1, 500))


def test_restrict_pairing_ratio_near_one():
    phi = pairing_permutation(ODDS, EVENS)
    psi = restrict_pairing(phi, finite(1), horizon=10**4)
    rep = van_douwen_ratio_report(psi, 10**4, Fraction(1, 1000))
    assert rep.holds


def test_restrict_pairing_warns_on_dense_exceptional_set():
    phi = pairing_permutation(ODDS, EVENS)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        psi = restrict_pairing(phi, EVENS, horizon=1000)
    assert rec and "counting ratio" in str(rec[0].message)
    # the orbit of the evens under this pairing is everything, so the
    # restriction degenerates to the identity but stays a bijection
    assert all(psi.apply(n) == n for n in range(1, 500))


def test_restricted_maps_remaining_a_part_onto_remaining_b_part():
    phi = pairing_permutation(ODDS, EVENS)
    f = finite(1, 7)
    psi = restrict_pairing(phi, f, horizon=1000)
    excluded = {1, 2, 7, 8}
    for n in range(1, 300):
        if n in excluded:
            assert psi.apply(n) == n
        else:
            assert psi.apply(n) == phi.apply(n)
