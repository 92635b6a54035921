"""Symbolic subsets of the positive integers with exact counting.

Every set here is a finite description of a (possibly infinite) subset of
ℕ = {1, 2, 3, ...}.  The two primitives that everything else builds on are

* ``contains(n)`` -- exact membership,
* ``count(n)``    -- the counting function, the number of elements in [1, n],

and both are exact integer arithmetic at arbitrary horizons: no floats, no
approximation.  Where no closed form exists the algebra nodes fall back to
bounded enumeration and *fail loudly* when the enumeration budget is hit.
"""

from __future__ import annotations

import heapq
import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import (
    EnumerationBudgetExceeded,
    IndexBeyondSet,
    PredicateCapExceeded,
    UnknownInfinitude,
)

DEFAULT_ENUMERATION_BUDGET = 10**7

# Periodic/Periodic algebra is collapsed via the lcm only below this modulus;
# beyond it the raw node is kept and counting falls back to enumeration.
_LCM_CAP = 10**6

# member_runs gives up (returns None) rather than build more runs than this.
_RUNS_CAP = 200_000

# select() on a set whose infinitude is unknown probes up to this horizon
# before refusing to guess.
_UNKNOWN_PROBE_LIMIT = 1 << 62


class Infinitude(Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


class _Budget:
    """Mutable step counter for enumeration fallbacks."""

    __slots__ = ("remaining", "limit", "horizon")

    def __init__(self, limit: int, horizon: int):
        self.remaining = limit
        self.limit = limit
        self.horizon = horizon

    def spend(self, steps: int = 1) -> None:
        self.remaining -= steps
        if self.remaining < 0:
            raise EnumerationBudgetExceeded(self.horizon, self.limit)


# ---------------------------------------------------------------------------
# block sources
# ---------------------------------------------------------------------------


class BlockSource:
    """A source of disjoint, strictly increasing half-open intervals [l, r)."""

    def iter_intervals(self) -> Iterator[tuple[int, int]]:
        """All intervals in increasing order (endless for lazy sources)."""
        raise NotImplementedError

    def intervals_up_to(self, n: int) -> list[tuple[int, int]]:
        """All intervals whose left endpoint is <= n, in increasing order."""
        out = []
        for l, r in self.iter_intervals():
            if l > n:
                break
            out.append((l, r))
        return out

    def is_infinite(self) -> bool:
        raise NotImplementedError

    def to_expr(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitBlocks(BlockSource):
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev_end = 0
        for l, r in self.intervals:
            if l < 1 or l >= r:
                raise ValueError(f"bad interval [{l}, {r})")
            if l < prev_end:
                raise ValueError("intervals must be sorted and disjoint")
            prev_end = r

    def iter_intervals(self):
        return iter(self.intervals)

    def is_infinite(self) -> bool:
        return False

    def to_expr(self) -> str:
        return ",".join(f"[{l},{r})" for l, r in self.intervals)


@dataclass(frozen=True)
class DoubleExponentialBlocks(BlockSource):
    """The lazy family of intervals [2^(2^i), 2*2^(2^i)) for i = 1, 2, ..."""

    @staticmethod
    def interval(i: int) -> tuple[int, int]:
        lo = 1 << (1 << i)
        return lo, 2 * lo

    def iter_intervals(self):
        i = 1
        while True:
            yield self.interval(i)
            i += 1

    def is_infinite(self) -> bool:
        return True

    def to_expr(self) -> str:
        return "dexp"


# ---------------------------------------------------------------------------
# symbolic sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicSet:
    """Immutable description of a subset of ℕ.  All operations are pure."""

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def count(self, n: int, budget: Optional[int] = None) -> int:
        """Exact |S ∩ [1, n]|.  ``budget`` caps enumeration fallbacks."""
        if n < 0:
            raise ValueError("count horizon must be >= 0")
        if n == 0:
            return 0
        return self._count(n, budget or DEFAULT_ENUMERATION_BUDGET)

    def _count(self, n: int, budget: int) -> int:
        raise NotImplementedError

    def infinitude(self) -> Infinitude:
        raise NotImplementedError

    def max_element(self) -> Optional[int]:
        """Upper bound on elements for surely-finite sets, else None."""
        return None

    def exact_density(self) -> Optional[Fraction]:
        """Closed-form asymptotic density when one is known, else None."""
        return None

    def member_runs(
        self, horizon: int, cap: int = _RUNS_CAP
    ) -> Optional[list[tuple[int, int]]]:
        """Maximal runs of consecutive members, as inclusive (lo, hi) pairs,
        clipped to [1, horizon].  None when no cheap decomposition exists."""
        return None

    def iter_elements(
        self, upto: Optional[int] = None, budget: Optional[_Budget] = None
    ) -> Iterator[int]:
        """Yield members <= upto (all members when upto is None) in order."""
        raise NotImplementedError

    def select(self, k: int, budget: Optional[int] = None) -> int:
        """The k-th smallest element (k >= 1), by monotone search over count."""
        return select(self, k, budget=budget)

    def _runs_count(self, n: int) -> Optional[int]:
        """Count via a memoized run decomposition with prefix sums.

        The memo holds the decomposition at the largest horizon seen so far;
        smaller queries are answered by bisection, larger ones rebuild it.
        A failed decomposition is remembered by its horizon (run counts only
        grow with the horizon).
        """
        failed_at = getattr(self, "_runs_failed_at", None)
        if failed_at is not None and n >= failed_at:
            return None
        memo = getattr(self, "_runs_memo", None)
        if memo is None or memo[0] < n:
            runs = self.member_runs(n)
            if runs is None:
                if failed_at is None or n < failed_at:
                    object.__setattr__(self, "_runs_failed_at", n)
                return None
            prefix = [0]
            for lo, hi in runs:
                prefix.append(prefix[-1] + hi - lo + 1)
            memo = (n, runs, prefix)
            object.__setattr__(self, "_runs_memo", memo)
        _, runs, prefix = memo
        idx = bisect_right(runs, (n, float("inf")))
        total = prefix[idx]
        if idx and runs[idx - 1][1] > n:
            total -= runs[idx - 1][1] - n
        return total

    def scale(self, t: int) -> "SymbolicSet":
        return scale(self, t)

    def to_expr(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_expr()


@dataclass(frozen=True)
class Empty(SymbolicSet):
    def contains(self, n):
        return False

    def _count(self, n, budget):
        return 0

    def infinitude(self):
        return Infinitude.FINITE

    def max_element(self):
        return 0

    def exact_density(self):
        return Fraction(0)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        return []

    def iter_elements(self, upto=None, budget=None):
        return iter(())

    def to_expr(self):
        return "empty"


@dataclass(frozen=True)
class Full(SymbolicSet):
    def contains(self, n):
        return n >= 1

    def _count(self, n, budget):
        return n

    def infinitude(self):
        return Infinitude.INFINITE

    def exact_density(self):
        return Fraction(1)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        return [(1, horizon)] if horizon >= 1 else []

    def iter_elements(self, upto=None, budget=None):
        it = itertools.count(1) if upto is None else range(1, upto + 1)
        for v in it:
            if budget is not None:
                budget.spend()
            yield v

    def to_expr(self):
        return "full"


@dataclass(frozen=True)
class FiniteList(SymbolicSet):
    elements: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for e in self.elements:
            if e <= prev:
                raise ValueError("elements must be strictly increasing and >= 1")
            prev = e

    def contains(self, n):
        i = bisect_right(self.elements, n)
        return i > 0 and self.elements[i - 1] == n

    def _count(self, n, budget):
        return bisect_right(self.elements, n)

    def infinitude(self):
        return Infinitude.FINITE

    def max_element(self):
        return self.elements[-1] if self.elements else 0

    def exact_density(self):
        return Fraction(0)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        runs: list[tuple[int, int]] = []
        for e in self.elements:
            if e > horizon:
                break
            if runs and runs[-1][1] == e - 1:
                runs[-1] = (runs[-1][0], e)
            else:
                runs.append((e, e))
        return runs

    def iter_elements(self, upto=None, budget=None):
        for e in self.elements:
            if upto is not None and e > upto:
                return
            if budget is not None:
                budget.spend()
            yield e

    def to_expr(self):
        return "finite(" + ",".join(str(e) for e in self.elements) + ")"


@dataclass(frozen=True)
class Periodic(SymbolicSet):
    """All n >= 1 with n mod modulus in residues."""

    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        prev = -1
        for r in self.residues:
            if r <= prev or r >= self.modulus:
                raise ValueError("residues must be sorted, distinct, < modulus")
            prev = r

    def contains(self, n):
        return n >= 1 and (n % self.modulus) in self._residue_set()

    def _residue_set(self) -> frozenset:
        cached = getattr(self, "_rset", None)
        if cached is None:
            cached = frozenset(self.residues)
            object.__setattr__(self, "_rset", cached)
        return cached

    def _count(self, n, budget):
        q, s = divmod(n, self.modulus)
        # residue 0 is hit at m, 2m, ..., qm; residue r >= 1 gets one extra
        # hit in the trailing partial period when r <= s.
        extra = sum(1 for r in self.residues if 1 <= r <= s)
        return q * len(self.residues) + extra

    def infinitude(self):
        return Infinitude.INFINITE if self.residues else Infinitude.FINITE

    def max_element(self):
        return None if self.residues else 0

    def exact_density(self):
        return Fraction(len(self.residues), self.modulus)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        if not self.residues or horizon < 1:
            return []
        m = self.modulus
        offsets = sorted(r if r >= 1 else m for r in self.residues)
        # maximal consecutive groups within one period
        groups: list[tuple[int, int]] = []
        for off in offsets:
            if groups and groups[-1][1] == off - 1:
                groups[-1] = (groups[-1][0], off)
            else:
                groups.append((off, off))
        if (horizon // m + 1) * len(groups) > cap:
            return None
        runs: list[tuple[int, int]] = []
        for base in range(0, horizon + 1, m):
            for lo, hi in groups:
                l = base + lo
                if l > horizon:
                    break
                h = min(base + hi, horizon)
                if runs and runs[-1][1] == l - 1:
                    runs[-1] = (runs[-1][0], h)
                else:
                    runs.append((l, h))
        return runs

    def iter_elements(self, upto=None, budget=None):
        m = self.modulus
        offsets = sorted(r if r >= 1 else m for r in self.residues)
        for base in itertools.count(0, m):
            for off in offsets:
                v = base + off
                if upto is not None and v > upto:
                    return
                if budget is not None:
                    budget.spend()
                yield v

    def to_expr(self):
        return f"periodic({self.modulus};" + ",".join(map(str, self.residues)) + ")"


@dataclass(frozen=True)
class Blocks(SymbolicSet):
    source: BlockSource

    def contains(self, n):
        if n < 1:
            return False
        for l, r in self.source.intervals_up_to(n):
            if l <= n < r:
                return True
        return False

    def _count(self, n, budget):
        return sum(min(r, n + 1) - l for l, r in self.source.intervals_up_to(n))

    def infinitude(self):
        return Infinitude.INFINITE if self.source.is_infinite() else Infinitude.FINITE

    def max_element(self):
        if self.source.is_infinite():
            return None
        last = 0
        for _, r in self.source.iter_intervals():
            last = r - 1
        return last

    def exact_density(self):
        return None if self.source.is_infinite() else Fraction(0)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        runs: list[tuple[int, int]] = []
        for l, r in self.source.intervals_up_to(horizon):
            hi = min(r - 1, horizon)
            if runs and runs[-1][1] == l - 1:
                runs[-1] = (runs[-1][0], hi)
            else:
                runs.append((l, hi))
            if len(runs) > cap:
                return None
        return runs

    def iter_elements(self, upto=None, budget=None):
        for l, r in self.source.iter_intervals():
            if upto is not None and l > upto:
                return
            stop = r if upto is None else min(r, upto + 1)
            for v in range(l, stop):
                if budget is not None:
                    budget.spend()
                yield v

    def to_expr(self):
        return f"blocks({self.source.to_expr()})"


@dataclass(frozen=True)
class Scaled(SymbolicSet):
    """{factor * a : a in inner}."""

    factor: int
    inner: SymbolicSet

    def __post_init__(self):
        if self.factor < 1:
            raise ValueError("scale factor must be >= 1")

    def contains(self, n):
        return n >= 1 and n % self.factor == 0 and self.inner.contains(n // self.factor)

    def _count(self, n, budget):
        return self.inner.count(n // self.factor, budget=budget)

    def infinitude(self):
        return self.inner.infinitude()

    def max_element(self):
        b = self.inner.max_element()
        return None if b is None else self.factor * b

    def exact_density(self):
        d = self.inner.exact_density()
        return None if d is None else d / self.factor

    def member_runs(self, horizon, cap=_RUNS_CAP):
        if self.factor == 1:
            return self.inner.member_runs(horizon, cap)
        # elements are isolated multiples; enumerate them if few enough
        try:
            total = self.inner.count(horizon // self.factor, budget=cap)
        except EnumerationBudgetExceeded:
            return None
        if total > cap:
            return None
        try:
            return [
                (self.factor * a, self.factor * a)
                for a in self.inner.iter_elements(
                    horizon // self.factor, _Budget(cap, horizon)
                )
            ]
        except EnumerationBudgetExceeded:
            return None

    def iter_elements(self, upto=None, budget=None):
        inner_upto = None if upto is None else upto // self.factor
        for a in self.inner.iter_elements(inner_upto, budget):
            yield self.factor * a

    def to_expr(self):
        return f"scale({self.factor},{self.inner.to_expr()})"


@dataclass(frozen=True)
class Predicate(SymbolicSet):
    """Membership by rule, queryable only up to an enumeration cap.

    Queries beyond the cap raise rather than approximate.
    """

    rule: Callable[[int], bool] = field(compare=False)
    enumeration_cap: int = 10**5
    label: str = "predicate"

    def __post_init__(self):
        if self.enumeration_cap < 1:
            raise ValueError("enumeration cap must be >= 1")

    def contains(self, n):
        if n < 1:
            return False
        if n > self.enumeration_cap:
            raise PredicateCapExceeded(n, self.enumeration_cap)
        return bool(self.rule(n))

    def _count(self, n, budget):
        if n > self.enumeration_cap:
            raise PredicateCapExceeded(n, self.enumeration_cap)
        rule = self.rule
        return sum(1 for k in range(1, n + 1) if rule(k))

    def infinitude(self):
        return Infinitude.UNKNOWN

    def iter_elements(self, upto=None, budget=None):
        stop = self.enumeration_cap if upto is None else min(upto, self.enumeration_cap)
        for k in range(1, stop + 1):
            if budget is not None:
                budget.spend()
            if self.rule(k):
                yield k
        if upto is None or upto > self.enumeration_cap:
            raise PredicateCapExceeded(
                self.enumeration_cap + 1, self.enumeration_cap
            )

    def to_expr(self):
        return f"predicate({self.label};cap={self.enumeration_cap})"


def _merged_iter(
    left: Iterator[int], right: Iterator[int], budget: Optional[_Budget]
) -> Iterator[int]:
    """Merge two increasing iterators, dropping duplicates."""
    prev = None
    for v in heapq.merge(left, right):
        if v != prev:
            if budget is not None:
                budget.spend()
            yield v
        prev = v


@dataclass(frozen=True)
class Union(SymbolicSet):
    left: SymbolicSet
    right: SymbolicSet

    def contains(self, n):
        return self.left.contains(n) or self.right.contains(n)

    def _both(self) -> "SymbolicSet":
        node = getattr(self, "_both_memo", None)
        if node is None:
            node = inter(self.left, self.right)
            object.__setattr__(self, "_both_memo", node)
        return node

    def _count(self, n, budget):
        return (
            self.left.count(n, budget=budget)
            + self.right.count(n, budget=budget)
            - self._both().count(n, budget=budget)
        )

    def infinitude(self):
        a, b = self.left.infinitude(), self.right.infinitude()
        if Infinitude.INFINITE in (a, b):
            return Infinitude.INFINITE
        if a == b == Infinitude.FINITE:
            return Infinitude.FINITE
        return Infinitude.UNKNOWN

    def max_element(self):
        a, b = self.left.max_element(), self.right.max_element()
        return None if a is None or b is None else max(a, b)

    def member_runs(self, horizon, cap=_RUNS_CAP):
        return _combine_runs(self.left, self.right, horizon, cap, "union")

    def iter_elements(self, upto=None, budget=None):
        return _merged_iter(
            self.left.iter_elements(upto, None),
            self.right.iter_elements(upto, None),
            budget,
        )

    def to_expr(self):
        return f"union({self.left.to_expr()},{self.right.to_expr()})"


@dataclass(frozen=True)
class Intersect(SymbolicSet):
    left: SymbolicSet
    right: SymbolicSet

    def contains(self, n):
        return self.left.contains(n) and self.right.contains(n)

    def _count(self, n, budget):
        simplified = inter(self.left, self.right)
        if simplified != self:
            return simplified.count(n, budget=budget)
        # when one side decomposes into FEW runs, count the other side
        # run-by-run through its own counting; the low cap keeps recursive
        # intersect-of-intersect counting from multiplying out
        for a, b in ((self.left, self.right), (self.right, self.left)):
            runs = a.member_runs(n, cap=64)
            if runs is not None:
                return sum(
                    b.count(min(hi, n), budget=budget) - b.count(lo - 1, budget=budget)
                    for lo, hi in runs
                )
        via_runs = self._runs_count(n)
        if via_runs is not None:
            return via_runs
        return self._count_by_enumeration(n, budget)

    def _count_by_enumeration(self, n, budget):
        cl = self.left.count(n, budget=budget)
        cr = self.right.count(n, budget=budget)
        small, other = (
            (self.left, self.right) if cl <= cr else (self.right, self.left)
        )
        if min(cl, cr) > budget:
            raise EnumerationBudgetExceeded(n, budget)
        b = _Budget(budget, n)
        return sum(1 for v in small.iter_elements(n, b) if other.contains(v))

    def infinitude(self):
        a, b = self.left.infinitude(), self.right.infinitude()
        if Infinitude.FINITE in (a, b):
            return Infinitude.FINITE
        return Infinitude.UNKNOWN

    def max_element(self):
        bounds = [x for x in (self.left.max_element(), self.right.max_element()) if x is not None]
        return min(bounds) if bounds else None

    def member_runs(self, horizon, cap=_RUNS_CAP):
        return _combine_runs(self.left, self.right, horizon, cap, "inter")

    def iter_elements(self, upto=None, budget=None):
        for v in self.left.iter_elements(upto, budget):
            if self.right.contains(v):
                yield v

    def to_expr(self):
        return f"inter({self.left.to_expr()},{self.right.to_expr()})"


@dataclass(frozen=True)
class Diff(SymbolicSet):
    left: SymbolicSet
    right: SymbolicSet

    def contains(self, n):
        return self.left.contains(n) and not self.right.contains(n)

    def _both(self) -> "SymbolicSet":
        node = getattr(self, "_both_memo", None)
        if node is None:
            node = inter(self.left, self.right)
            object.__setattr__(self, "_both_memo", node)
        return node

    def _count(self, n, budget):
        return self.left.count(n, budget=budget) - self._both().count(n, budget=budget)

    def infinitude(self):
        a, b = self.left.infinitude(), self.right.infinitude()
        if a == Infinitude.FINITE:
            return Infinitude.FINITE
        if a == Infinitude.INFINITE and b == Infinitude.FINITE:
            return Infinitude.INFINITE
        return Infinitude.UNKNOWN

    def max_element(self):
        return self.left.max_element()

    def member_runs(self, horizon, cap=_RUNS_CAP):
        return _combine_runs(self.left, self.right, horizon, cap, "diff")

    def iter_elements(self, upto=None, budget=None):
        for v in self.left.iter_elements(upto, budget):
            if not self.right.contains(v):
                yield v

    def to_expr(self):
        return f"diff({self.left.to_expr()},{self.right.to_expr()})"


@dataclass(frozen=True)
class Complement(SymbolicSet):
    inner: SymbolicSet

    def contains(self, n):
        return n >= 1 and not self.inner.contains(n)

    def _count(self, n, budget):
        return n - self.inner.count(n, budget=budget)

    def infinitude(self):
        return (
            Infinitude.INFINITE
            if self.inner.infinitude() == Infinitude.FINITE
            else Infinitude.UNKNOWN
        )

    def exact_density(self):
        d = self.inner.exact_density()
        return None if d is None else 1 - d

    def member_runs(self, horizon, cap=_RUNS_CAP):
        inner_runs = self.inner.member_runs(horizon, cap)
        if inner_runs is None:
            return None
        runs = []
        nxt = 1
        for l, r in inner_runs:
            if l > nxt:
                runs.append((nxt, l - 1))
            nxt = r + 1
        if nxt <= horizon:
            runs.append((nxt, horizon))
        return runs

    def iter_elements(self, upto=None, budget=None):
        it = itertools.count(1) if upto is None else range(1, upto + 1)
        for v in it:
            if budget is not None:
                budget.spend()
            if not self.inner.contains(v):
                yield v

    def to_expr(self):
        return f"compl({self.inner.to_expr()})"


# ---------------------------------------------------------------------------
# smart constructors: canonical simplification preserving exact semantics
# ---------------------------------------------------------------------------


def finite(*elements: int) -> SymbolicSet:
    elems = tuple(sorted(set(elements)))
    return FiniteList(elems) if elems else Empty()


def periodic(modulus: int, residues) -> SymbolicSet:
    res = tuple(sorted(set(residues)))
    if not res:
        return Empty()
    if len(res) == modulus:
        return Full()
    return Periodic(modulus, res)


def blocks_dexp() -> SymbolicSet:
    return Blocks(DoubleExponentialBlocks())


def blocks_explicit(intervals) -> SymbolicSet:
    ivs = tuple(intervals)
    return Blocks(ExplicitBlocks(ivs)) if ivs else Empty()


def scale(s: SymbolicSet, t: int) -> SymbolicSet:
    if t < 1:
        raise ValueError("scale factor must be >= 1")
    if t == 1:
        return s
    if isinstance(s, Empty):
        return s
    return Scaled(t, s)


def _lcm_periodic(a: Periodic, b: Periodic, keep: Callable[[int, int], bool]):
    import math

    m = math.lcm(a.modulus, b.modulus)
    if m > _LCM_CAP:
        return None
    res = tuple(
        r
        for r in range(m)
        if keep(
            (r % a.modulus) in a._residue_set(), (r % b.modulus) in b._residue_set()
        )
    )
    return periodic(m, res)


def union(a: SymbolicSet, b: SymbolicSet) -> SymbolicSet:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    if isinstance(a, Full) or isinstance(b, Full):
        return Full()
    if a == b:
        return a
    if isinstance(a, FiniteList) and isinstance(b, FiniteList):
        return finite(*(a.elements + b.elements))
    if isinstance(a, Periodic) and isinstance(b, Periodic):
        merged = _lcm_periodic(a, b, lambda x, y: x or y)
        if merged is not None:
            return merged
    return Union(a, b)


def inter(a: SymbolicSet, b: SymbolicSet) -> SymbolicSet:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty()
    if isinstance(a, Full):
        return b
    if isinstance(b, Full):
        return a
    if a == b:
        return a
    if isinstance(b, FiniteList):
        a, b = b, a
    if isinstance(a, FiniteList):
        return finite(*(e for e in a.elements if b.contains(e)))
    if isinstance(a, Periodic) and isinstance(b, Periodic):
        merged = _lcm_periodic(a, b, lambda x, y: x and y)
        if merged is not None:
            return merged
    return Intersect(a, b)


def diff(a: SymbolicSet, b: SymbolicSet) -> SymbolicSet:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return a
    if isinstance(b, Full):
        return Empty()
    if a == b:
        return Empty()
    if isinstance(a, FiniteList):
        return finite(*(e for e in a.elements if not b.contains(e)))
    if isinstance(a, Periodic) and isinstance(b, Periodic):
        merged = _lcm_periodic(a, b, lambda x, y: x and not y)
        if merged is not None:
            return merged
    if isinstance(a, Full):
        return compl(b)
    return Diff(a, b)


def compl(a: SymbolicSet) -> SymbolicSet:
    if isinstance(a, Empty):
        return Full()
    if isinstance(a, Full):
        return Empty()
    if isinstance(a, Complement):
        return a.inner
    if isinstance(a, Periodic):
        return periodic(a.modulus, set(range(a.modulus)) - set(a.residues))
    return Complement(a)


# ---------------------------------------------------------------------------
# run algebra (for exact window extrema without per-integer scans)
# ---------------------------------------------------------------------------


def _combine_runs(left: SymbolicSet, right: SymbolicSet, horizon, cap, op):
    lr = left.member_runs(horizon, cap)
    if lr is None:
        return None
    rr = right.member_runs(horizon, cap)
    if rr is None:
        return None
    # linear two-pointer sweep over the piecewise-constant membership state
    out: list[tuple[int, int]] = []
    i = j = 0
    pos = 1
    while pos <= horizon:
        while i < len(lr) and lr[i][1] < pos:
            i += 1
        while j < len(rr) and rr[j][1] < pos:
            j += 1
        inl = i < len(lr) and lr[i][0] <= pos
        inr = j < len(rr) and rr[j][0] <= pos
        nxt = horizon + 1
        if i < len(lr):
            nxt = min(nxt, lr[i][0] if lr[i][0] > pos else lr[i][1] + 1)
        if j < len(rr):
            nxt = min(nxt, rr[j][0] if rr[j][0] > pos else rr[j][1] + 1)
        keep = {
            "union": inl or inr,
            "inter": inl and inr,
            "diff": inl and not inr,
        }[op]
        if keep:
            if out and out[-1][1] == pos - 1:
                out[-1] = (out[-1][0], nxt - 1)
            else:
                out.append((pos, nxt - 1))
                if len(out) > cap:
                    return None
        pos = nxt
    return out


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------


def select(s: SymbolicSet, k: int, budget: Optional[int] = None) -> int:
    """Return the k-th smallest element of ``s``.

    Satisfies ``count(select(s, k)) == k`` and ``contains(select(s, k))``.
    """
    if k < 1:
        raise ValueError("selection index must be >= 1")
    if isinstance(s, FiniteList):
        if k > len(s.elements):
            raise IndexBeyondSet(f"finite set has {len(s.elements)} < {k} elements")
        return s.elements[k - 1]

    flag = s.infinitude()
    if flag == Infinitude.FINITE:
        bound = s.max_element()
        if bound is None or s.count(bound, budget=budget) < k:
            raise IndexBeyondSet(f"finite set has fewer than {k} elements")
        hi = bound
    else:
        hi = max(2, k)
        while s.count(hi, budget=budget) < k:
            hi *= 2
            if flag == Infinitude.UNKNOWN and hi > _UNKNOWN_PROBE_LIMIT:
                raise UnknownInfinitude(
                    f"cannot certify that {s.to_expr()} has {k} elements"
                )
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if s.count(mid, budget=budget) >= k:
            hi = mid
        else:
            lo = mid + 1
    return lo
