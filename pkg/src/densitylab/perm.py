"""Permutations of ℕ as finite rules, with the Lévy-group diagnostics.

Three equivalent membership criteria for the Lévy group are implemented as
finite-horizon diagnostics:

* the defect ratio |{k : k <= n < π(k)}| / n,
* the per-set displacement (A(n) - (πA)(n)) / n,
* statistical convergence of π(n)/n to 1.

All three are evidence at a horizon, never proofs; classifications carry
their thresholds and windows.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

from .asymptotics import (
    Explicit,
    IndexSequence,
    StatReport,
    statistical_limit,
)
from .errors import (
    CardinalityMismatch,
    EnumerationBudgetExceeded,
    UnknownInfinitude,
)
from .nset import (
    DEFAULT_ENUMERATION_BUDGET,
    FiniteList,
    Infinitude,
    Predicate,
    SymbolicSet,
    diff,
    inter,
)

_PAIR_CACHE = 1 << 16


class Classification(Enum):
    LEVY_LIKELY = "levy-likely"
    NON_LEVY_LIKELY = "non-levy-likely"
    INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# permutation rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermutationRule:
    """A bijection ℕ -> ℕ with computable forward and inverse evaluation."""

    def apply(self, n: int) -> int:
        raise NotImplementedError

    def invert(self, m: int) -> int:
        raise NotImplementedError

    def to_expr(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_expr()


@dataclass(frozen=True)
class Identity(PermutationRule):
    def apply(self, n):
        return n

    def invert(self, m):
        return m

    def to_expr(self):
        return "id"


@dataclass(frozen=True)
class FiniteTable(PermutationRule):
    """A bijection on a finite support, identity elsewhere."""

    mapping: tuple[tuple[int, int], ...]

    def __post_init__(self):
        keys = [k for k, _ in self.mapping]
        vals = [v for _, v in self.mapping]
        if any(k < 1 for k in keys) or any(v < 1 for v in vals):
            raise ValueError("support must consist of positive integers")
        if len(set(keys)) != len(keys) or set(keys) != set(vals):
            raise ValueError("table must be a bijection on its support")
        object.__setattr__(self, "_fwd", dict(self.mapping))
        object.__setattr__(self, "_bwd", {v: k for k, v in self.mapping})

    def apply(self, n):
        return self._fwd.get(n, n)

    def invert(self, m):
        return self._bwd.get(m, m)

    def to_expr(self):
        seen = set()
        cycles = []
        for k, _ in sorted(self.mapping):
            if k in seen or self._fwd[k] == k:
                continue
            cyc = [k]
            seen.add(k)
            nxt = self._fwd[k]
            while nxt != k:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self._fwd[nxt]
            cycles.append(cyc)
        return "table(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) + ")"


@dataclass(frozen=True)
class InterlacedPairing(PermutationRule):
    """Swap the i-th elements of two disjointified sets, fix everything else.

    Given sets A and B, let A' = A \\ (A ∩ B) = {a_1 < a_2 < ...} and
    B' = B \\ (A ∩ B) = {b_1 < b_2 < ...}.  The rule maps a_i <-> b_i and is
    its own inverse.  Requires A' and B' both declared-infinite or finite of
    equal cardinality.
    """

    set_a: SymbolicSet
    set_b: SymbolicSet
    cache_pairs: int = field(default=_PAIR_CACHE, compare=False, repr=False)

    def __post_init__(self):
        common = inter(self.set_a, self.set_b)
        a_only = diff(self.set_a, common)
        b_only = diff(self.set_b, common)
        fa, fb = a_only.infinitude(), b_only.infinitude()
        if Infinitude.UNKNOWN in (fa, fb):
            raise UnknownInfinitude(
                "pairing requires surely-finite or surely-infinite parts; "
                f"got {fa.value}/{fb.value} for {a_only} and {b_only}"
            )
        size = None
        if Infinitude.FINITE in (fa, fb):
            ca = a_only.count(a_only.max_element()) if fa == Infinitude.FINITE else None
            cb = b_only.count(b_only.max_element()) if fb == Infinitude.FINITE else None
            if ca != cb:
                raise CardinalityMismatch(
                    f"cannot pair parts of sizes {ca} and {cb}"
                )
            size = ca
        object.__setattr__(self, "a_only", a_only)
        object.__setattr__(self, "b_only", b_only)
        object.__setattr__(self, "pair_total", size)
        object.__setattr__(self, "_partner", None)
        object.__setattr__(self, "_coverage", 0)
        object.__setattr__(self, "_full_cover", False)

    def _ensure_cache(self):
        # lazy but idempotent: concurrent builders compute identical tables,
        # so a race only wastes work
        if self._partner is not None:
            return
        limit = self.cache_pairs
        if self.pair_total is not None:
            limit = min(limit, self.pair_total)
        pairs = list(
            itertools.islice(
                zip(self.a_only.iter_elements(), self.b_only.iter_elements()), limit
            )
        )
        partner = {}
        for a, b in pairs:
            partner[a] = b
            partner[b] = a
        full = self.pair_total is not None and len(pairs) == self.pair_total
        coverage = min(pairs[-1][0], pairs[-1][1]) if pairs else 0
        object.__setattr__(self, "_partner", partner)
        object.__setattr__(self, "_coverage", coverage)
        object.__setattr__(self, "_full_cover", full)

    def apply(self, n):
        self._ensure_cache()
        if self._full_cover or n <= self._coverage:
            return self._partner.get(n, n)
        if self.a_only.contains(n):
            return self.b_only.select(self.a_only.count(n))
        if self.b_only.contains(n):
            return self.a_only.select(self.b_only.count(n))
        return n

    def invert(self, m):
        return self.apply(m)

    def to_expr(self):
        return f"pair({self.set_a.to_expr()},{self.set_b.to_expr()})"


@dataclass(frozen=True)
class QuarterBlockSwap(PermutationRule):
    """For every j >= 1 swap [4^j, 2*4^j) with [2*4^j, 3*4^j) by +-4^j.

    The top quarter [3*4^j, 4^(j+1)) of each scale is fixed, so the rule is
    an involution that moves a positive fraction of every horizon.
    """

    def apply(self, n):
        if n < 4:
            return n
        base = 4 ** ((n.bit_length() - 1) // 2)
        if n < 2 * base:
            return n + base
        if n < 3 * base:
            return n - base
        return n

    def invert(self, m):
        return self.apply(m)

    def to_expr(self):
        return "qswap"


@dataclass(frozen=True)
class Restricted(PermutationRule):
    """A pairing frozen to the identity on an exceptional orbit.

    With base pairing φ and exceptional set F, let F' = A' ∩ (F ∪ φF) and
    E = F' ∪ φF'.  The rule fixes E pointwise and agrees with φ elsewhere;
    since φE = E it is again a bijection (and an involution).
    """

    base: InterlacedPairing
    exceptional: SymbolicSet

    def __post_init__(self):
        if not isinstance(self.base, InterlacedPairing):
            raise ValueError("restriction base must be a pairing")

    def _excluded(self, n: int) -> bool:
        if not (self.base.a_only.contains(n) or self.base.b_only.contains(n)):
            return False
        return self.exceptional.contains(n) or self.exceptional.contains(
            self.base.apply(n)
        )

    def apply(self, n):
        return n if self._excluded(n) else self.base.apply(n)

    def invert(self, m):
        return self.apply(m)

    def to_expr(self):
        return f"restrict({self.base.to_expr()},{self.exceptional.to_expr()})"


@dataclass(frozen=True)
class Compose(PermutationRule):
    outer: PermutationRule
    inner: PermutationRule

    def apply(self, n):
        return self.outer.apply(self.inner.apply(n))

    def invert(self, m):
        return self.inner.invert(self.outer.invert(m))

    def to_expr(self):
        return f"comp({self.outer.to_expr()},{self.inner.to_expr()})"


@dataclass(frozen=True)
class Inverse(PermutationRule):
    inner: PermutationRule

    def apply(self, n):
        return self.inner.invert(n)

    def invert(self, m):
        return self.inner.apply(m)

    def to_expr(self):
        return f"inv({self.inner.to_expr()})"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def pairing_permutation(a: SymbolicSet, b: SymbolicSet) -> InterlacedPairing:
    """The involution swapping the i-th elements of A' and B' (see class doc)."""
    return InterlacedPairing(a, b)


def restrict_pairing(
    phi: InterlacedPairing,
    exceptional: SymbolicSet,
    horizon: int = 10**4,
    warn_ratio: Fraction = Fraction(1, 100),
) -> Restricted:
    """Freeze ``phi`` to the identity on the orbit of ``exceptional``.

    The construction is intended for sparse exceptional sets; a counting
    ratio above ``warn_ratio`` at ``horizon`` triggers a warning, not an
    error.
    """
    ratio = Fraction(exceptional.count(horizon), horizon)
    if ratio > warn_ratio:
        warnings.warn(
            f"exceptional set has counting ratio {ratio} at {horizon}; "
            "the restricted pairing may be far from the base pairing",
            stacklevel=2,
        )
    return Restricted(phi, exceptional)


def levy_witness_set(pi: PermutationRule, cap: int) -> Predicate:
    """The canonical witness {k : π(k) > k}, queryable up to ``cap``."""
    return Predicate(
        rule=lambda k: pi.apply(k) > k,
        enumeration_cap=cap,
        label=f"moved-up by {pi.to_expr()}",
    )


# ---------------------------------------------------------------------------
# default grids and classification
# ---------------------------------------------------------------------------


def doubling_checkpoints(horizon: int, levels: int = 12) -> Explicit:
    """Checkpoints horizon/2^levels, ..., horizon/2, horizon (deduplicated)."""
    pts = sorted({max(1, horizon // 2**k) for k in range(levels + 1)})
    return Explicit(tuple(pts))


def stat_checkpoints(horizon: int) -> Explicit:
    """A short tail-heavy grid for statistical classification."""
    return doubling_checkpoints(horizon, levels=4)


def classify_tail(
    points: Sequence[int],
    values: Sequence[Fraction],
    slack_factor: Fraction = Fraction(1),
    tail_window: Optional[int] = None,
    min_horizon: int = 10**4,
    recurrence_threshold: Fraction = Fraction(1, 10),
    recurrence_hits: int = 3,
) -> Classification:
    """Heuristic verdict from the tail of a defect-like profile.

    Levy-likely needs tail-max <= 0.01 * slack_factor at a horizon of at
    least ``min_horizon``; non-Levy-likely needs the tail to exceed
    ``recurrence_threshold`` at ``recurrence_hits`` or more points.
    """
    tail = tail_window if tail_window is not None else ceil(len(points) / 2)
    tail_vals = list(values[-tail:])
    hits = sum(1 for v in tail_vals if v >= recurrence_threshold)
    if hits >= recurrence_hits:
        return Classification.NON_LEVY_LIKELY
    if max(tail_vals) <= Fraction(1, 100) * slack_factor and points[-1] >= min_horizon:
        return Classification.LEVY_LIKELY
    return Classification.INCONCLUSIVE


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DefectProfile:
    points: tuple[int, ...]
    defects: tuple[Fraction, ...]
    classification_hint: Classification
    mode: str
    tail_window: int


def levy_defect_profile(
    pi: PermutationRule,
    seq: IndexSequence,
    slack_factor: Fraction = Fraction(1),
    mode: str = "upward",
    budget: Optional[int] = None,
) -> DefectProfile:
    """Exact defect ratios |{k : k <= n < π(k)}| / n at the points of ``seq``.

    ``mode="downward"`` instead counts {k : π(k) <= n < k}; the two counts
    agree for every bijection and every n, so the downward mode exists as an
    independently computed cross-check.
    """
    pts = list(seq.points())
    maxn = pts[-1]
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if maxn > budget:
        raise EnumerationBudgetExceeded(maxn, budget, "defect scan")
    if mode not in ("upward", "downward"):
        raise ValueError("mode must be 'upward' or 'downward'")
    out: list[tuple[int, Fraction]] = []
    it = iter(pts)
    nxt = next(it)
    acc = 0
    for n in range(1, maxn + 1):
        if mode == "upward":
            acc += (1 if pi.apply(n) > n else 0) - (1 if pi.invert(n) < n else 0)
            d = acc
        else:
            acc += (1 if pi.apply(n) <= n else 0) + (1 if pi.invert(n) < n else 0)
            d = n - acc
        if n == nxt:
            out.append((n, Fraction(d, n)))
            nxt = next(it, None)
    defects = tuple(v for _, v in out)
    tail = ceil(len(out) / 2)
    hint = classify_tail(pts, defects, slack_factor=slack_factor, tail_window=tail)
    return DefectProfile(
        points=tuple(pts),
        defects=defects,
        classification_hint=hint,
        mode=mode,
        tail_window=tail,
    )


def displacement_profile(
    pi: PermutationRule,
    a: SymbolicSet,
    seq: IndexSequence,
    budget: Optional[int] = None,
) -> list[tuple[int, Fraction]]:
    """Exact (A(n) - (πA)(n)) / n at the points of ``seq``.

    The image count (πA)(n) is |{m <= n : π⁻¹(m) ∈ A}|, evaluated through
    the inverse so no forward search is ever unbounded.
    """
    pts = list(seq.points())
    maxn = pts[-1]
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if maxn > budget:
        raise EnumerationBudgetExceeded(maxn, budget, "displacement scan")
    out = []
    it = iter(pts)
    nxt = next(it)
    in_a = 0
    in_image = 0
    for n in range(1, maxn + 1):
        if a.contains(n):
            in_a += 1
        if a.contains(pi.invert(n)):
            in_image += 1
        if n == nxt:
            out.append((n, Fraction(in_a - in_image, n)))
            nxt = next(it, None)
    return out


def displacement_classification(
    pi: PermutationRule,
    sets: Sequence[SymbolicSet],
    seq: IndexSequence,
    slack_factor: Fraction = Fraction(1),
    budget: Optional[int] = None,
) -> Classification:
    """Classify from the worst |displacement| across a fixed set corpus.

    Evidence only: the displacement criterion quantifies over every subset
    of ℕ, which no finite corpus can certify.
    """
    profiles = [displacement_profile(pi, s, seq, budget=budget) for s in sets]
    points = [n for n, _ in profiles[0]]
    worst = [
        max(abs(prof[i][1]) for prof in profiles) for i in range(len(points))
    ]
    return classify_tail(points, worst, slack_factor=slack_factor)


@dataclass(frozen=True)
class RatioStatReport:
    stat: StatReport
    classification: Classification


def ratio_stat_report(
    pi: PermutationRule,
    eps_grid: Sequence[Fraction],
    checkpoints: IndexSequence,
    slack_factor: Fraction = Fraction(1),
) -> RatioStatReport:
    """Statistical-convergence table for π(n)/n at target 1, plus a verdict."""
    report = statistical_limit(
        lambda k: Fraction(pi.apply(k), k),
        Fraction(1),
        eps_grid,
        checkpoints,
        slack=Fraction(1, 100) * slack_factor,
    )
    pts = report.checkpoints
    tail = report.tail_window
    hits_by_row = [
        sum(1 for _, v in row.densities[-tail:] if v >= Fraction(1, 10))
        for row in report.rows
    ]
    if any(h >= 3 for h in hits_by_row):
        cls = Classification.NON_LEVY_LIKELY
    elif report.convergent and pts[-1] >= 10**4:
        cls = Classification.LEVY_LIKELY
    else:
        cls = Classification.INCONCLUSIVE
    return RatioStatReport(stat=report, classification=cls)


@dataclass(frozen=True)
class ExceptionalSets:
    """Materialized {k : π(k) - k > eps*k} and {k : k - π(k) > eps*k}."""

    eps: Fraction
    horizon: int
    above: FiniteList
    below: FiniteList
    union_ratios: tuple[tuple[int, Fraction], ...]


def exceptional_sets(
    pi: PermutationRule,
    eps: Fraction,
    horizon: int,
    checkpoints: Optional[IndexSequence] = None,
    budget: Optional[int] = None,
) -> ExceptionalSets:
    """Exact finite materializations of the relative-displacement exceptions."""
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if horizon > budget:
        raise EnumerationBudgetExceeded(horizon, budget, "exceptional-set scan")
    eps = Fraction(eps)
    if checkpoints is None:
        checkpoints = doubling_checkpoints(horizon, levels=6)
    pts = [p for p in checkpoints.points() if p <= horizon]
    above: list[int] = []
    below: list[int] = []
    ratios = []
    it = iter(pts)
    nxt = next(it, None)
    for k in range(1, horizon + 1):
        d = pi.apply(k) - k
        if d * eps.denominator > eps.numerator * k:
            above.append(k)
        elif -d * eps.denominator > eps.numerator * k:
            below.append(k)
        if k == nxt:
            ratios.append((k, Fraction(len(above) + len(below), k)))
            nxt = next(it, None)
    return ExceptionalSets(
        eps=eps,
        horizon=horizon,
        above=FiniteList(tuple(above)),
        below=FiniteList(tuple(below)),
        union_ratios=tuple(ratios),
    )


@dataclass(frozen=True)
class VanDouwenReport:
    """Tail supremum of |π(n)/n - 1| over [tail_window_start, horizon]."""

    horizon: int
    tail_window_start: int
    sup_deviation: Fraction
    at: int
    tol: Fraction
    holds: bool


def van_douwen_ratio_report(
    pi: PermutationRule,
    horizon: int,
    tol: Fraction,
    tail_window_start: Optional[int] = None,
    budget: Optional[int] = None,
) -> VanDouwenReport:
    """Check lim π(n)/n = 1 at desk scale: sup over the tail window."""
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if horizon > budget:
        raise EnumerationBudgetExceeded(horizon, budget, "ratio scan")
    start = tail_window_start if tail_window_start is not None else max(1, horizon // 10)
    best: tuple[int, int] = (0, 1)
    best_at = start
    for n in range(start, horizon + 1):
        dev = abs(pi.apply(n) - n)
        if dev * best[1] > best[0] * n:
            best = (dev, n)
            best_at = n
    sup = Fraction(*best)
    return VanDouwenReport(
        horizon=horizon,
        tail_window_start=start,
        sup_deviation=sup,
        at=best_at,
        tol=Fraction(tol),
        holds=sup <= tol,
    )
