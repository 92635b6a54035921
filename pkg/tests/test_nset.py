import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from densitylab.errors import (
    EnumerationBudgetExceeded,
    IndexBeyondSet,
    PredicateCapExceeded,
)
from densitylab.nset import (
    Empty,
    FiniteList,
    Full,
    Infinitude,
    Periodic,
    Predicate,
    blocks_dexp,
    blocks_explicit,
    compl,
    diff,
    finite,
    inter,
    periodic,
    scale,
    select,
    union,
)

from oracles import brute_members, dexp_count_enum


# ---------------------------------------------------------------------------
# membership and counting
# ---------------------------------------------------------------------------


def test_contains_basics():
    assert periodic(2, [0]).contains(10)
    assert not periodic(2, [0]).contains(9)
    assert blocks_dexp().contains(16)
    assert not blocks_dexp().contains(15)
    assert not scale(blocks_dexp(), 2).contains(9)  # 2A holds evens only


def test_count_closed_forms():
    assert periodic(2, [0]).count(10) == 5
    a = blocks_dexp()
    # frozen values re-derived by the enumeration oracle
    assert dexp_count_enum(511) == 276
    assert dexp_count_enum(65536) == 277
    assert a.count(511) == 276
    assert a.count(65536) == 277
    assert scale(a, 2).count(512) == a.count(256) == 21
    assert scale(a, 2).count(256) == a.count(128) == 20


def test_count_matches_enumeration_oracle_on_dexp():
    a = blocks_dexp()
    for n in [1, 3, 4, 7, 8, 15, 16, 31, 32, 255, 256, 511, 512, 65535, 65536, 131071, 131072]:
        assert a.count(n) == dexp_count_enum(n)


def test_scale_semantics():
    evens = scale(periodic(1, [0]), 2)
    assert evens.count(10) == 5
    assert scale(periodic(2, [0]), 1) == periodic(2, [0])
    s = union(periodic(3, [1]), finite(7))
    assert all(not scale(s, 3).contains(n) for n in range(1, 300) if n % 3)


def test_select():
    assert select(periodic(2, [0]), 3) == 6
    assert select(blocks_dexp(), 5) == 16
    assert select(finite(3, 9), 2) == 9
    with pytest.raises(IndexBeyondSet):
        select(finite(3, 9), 3)
    with pytest.raises(IndexBeyondSet):
        select(Empty(), 1)


def test_select_count_galois():
    a = blocks_dexp()
    for n in [5, 10, 100, 513, 70000]:
        c = a.count(n)
        assert a.count(select(a, c)) == c
        assert select(a, c) <= n


def test_predicate_cap_is_loud():
    p = Predicate(rule=lambda k: k % 7 == 0, enumeration_cap=100, label="sevens")
    assert p.count(100) == 14
    assert p.contains(98)
    with pytest.raises(PredicateCapExceeded):
        p.count(101)
    with pytest.raises(PredicateCapExceeded):
        p.contains(101)
    with pytest.raises(PredicateCapExceeded):
        select(p, 15)


def test_enumeration_budget_is_loud():
    opaque = Predicate(rule=lambda k: k % 2 == 0, enumeration_cap=10**7, label="evens")
    dense = inter(opaque, periodic(3, [1]))
    with pytest.raises(EnumerationBudgetExceeded):
        dense.count(10**6, budget=1000)
    # the same count succeeds once the budget allows the enumeration
    assert dense.count(3000, budget=10**5) == len(
        [k for k in range(1, 3001) if k % 2 == 0 and k % 3 == 1]
    )


# ---------------------------------------------------------------------------
# smart constructors
# ---------------------------------------------------------------------------


def test_constructor_simplifications():
    assert periodic(1, [0]) == Full()
    assert periodic(5, []) == Empty()
    assert inter(periodic(2, [0]), periodic(2, [1])) == Empty()
    assert union(periodic(4, [0]), periodic(4, [1])) == periodic(4, [0, 1])
    assert union(periodic(2, [0]), periodic(3, [0])) == periodic(6, [0, 2, 3, 4])
    assert compl(periodic(4, [0])) == periodic(4, [1, 2, 3])
    assert compl(compl(blocks_dexp())) == blocks_dexp()
    assert diff(periodic(2, [0]), periodic(2, [0])) == Empty()
    assert inter(finite(2, 3, 4), periodic(2, [0])) == finite(2, 4)
    assert union(finite(1, 3), finite(3, 5)) == finite(1, 3, 5)
    assert finite() == Empty()


def test_infinitude_flags():
    assert periodic(2, [0]).infinitude() == Infinitude.INFINITE
    assert finite(1, 2).infinitude() == Infinitude.FINITE
    assert blocks_dexp().infinitude() == Infinitude.INFINITE
    assert blocks_explicit([(4, 8)]).infinitude() == Infinitude.FINITE
    assert Predicate(rule=bool, enumeration_cap=10).infinitude() == Infinitude.UNKNOWN
    raw = inter(blocks_dexp(), periodic(3, [1]))
    assert raw.infinitude() == Infinitude.UNKNOWN
    assert diff(periodic(2, [0]), finite(2, 4)).infinitude() == Infinitude.INFINITE


def test_validation_errors():
    with pytest.raises(ValueError):
        FiniteList((3, 2))
    with pytest.raises(ValueError):
        Periodic(4, (5,))
    with pytest.raises(ValueError):
        blocks_explicit([(8, 4)])
    with pytest.raises(ValueError):
        blocks_explicit([(4, 8), (6, 10)])
    with pytest.raises(ValueError):
        scale(periodic(2, [0]), 0)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

small_leaf = st.one_of(
    st.builds(
        lambda m, picks: periodic(m, sorted({p % m for p in picks})),
        st.integers(2, 10),
        st.lists(st.integers(0, 9), min_size=1, max_size=4),
    ),
    st.builds(lambda xs: finite(*xs), st.lists(st.integers(1, 400), max_size=8)),
)

algebra_tree = st.recursive(
    small_leaf,
    lambda child: st.one_of(
        st.builds(union, child, child),
        st.builds(inter, child, child),
        st.builds(diff, child, child),
        st.builds(compl, child),
    ),
    max_leaves=4,
)

rich_tree = st.one_of(
    algebra_tree,
    st.builds(lambda s, t: scale(s, t), algebra_tree, st.integers(1, 5)),
    st.just(blocks_dexp()),
    st.builds(union, st.just(blocks_dexp()), small_leaf),
)


@given(s=algebra_tree, n=st.integers(1, 2000))
@settings(max_examples=150, deadline=None)
def test_algebra_count_matches_brute_force(s, n):
    assert s.count(n) == len(brute_members(s, n))


@given(s=rich_tree, n=st.integers(1, 5000))
@settings(max_examples=150, deadline=None)
def test_count_monotone_step(s, n):
    step = s.count(n) - s.count(n - 1)
    assert step == (1 if s.contains(n) else 0)


@given(s=rich_tree, n=st.integers(0, 5000))
@settings(max_examples=100, deadline=None)
def test_complement_count(s, n):
    assert compl(s).count(n) == n - s.count(n)


@given(s=rich_tree, n=st.integers(1, 10**5))
@settings(max_examples=150, deadline=None)
def test_doubling_sandwich(s, n):
    c1, c2 = s.count(n), s.count(2 * n)
    assert c1 <= c2 <= c1 + n


@given(s=rich_tree, t=st.integers(1, 6), n=st.integers(0, 10**4))
@settings(max_examples=100, deadline=None)
def test_scaled_count_rule(s, t, n):
    assert scale(s, t).count(n) == s.count(n // t)


@given(s=rich_tree, k=st.integers(1, 50))
@settings(max_examples=60, deadline=None)
def test_select_is_inverse_of_count(s, k):
    try:
        v = select(s, k)
    except IndexBeyondSet:
        return
    assert s.contains(v)
    assert s.count(v) == k


def test_double_exponential_blocks_closed_form():
    from densitylab.nset import DoubleExponentialBlocks

    src = DoubleExponentialBlocks()
    for i in range(1, 8):
        lo = 2 ** (2**i)
        assert src.interval(i) == (lo, 2 * lo)
    assert src.intervals_up_to(2**16) == [(4, 8), (16, 32), (256, 512), (65536, 131072)]


def test_exact_density_values():
    assert periodic(4, [1, 2, 3]).exact_density() == Fraction(3, 4)
    assert scale(periodic(2, [0]), 3).exact_density() == Fraction(1, 6)
    assert compl(periodic(6, [0, 3])).exact_density() == Fraction(2, 3)
    assert blocks_dexp().exact_density() is None
    assert finite(4, 5).exact_density() == 0
