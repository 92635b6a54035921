"""Density functionals and limits along declared index subsequences.

A free ultrafilter is not a computable object, so every "limit along F"
here is downgraded to *limit behaviour along a declared IndexSequence* at a
finite horizon, with explicit tolerance and tail-window parameters.  All
reported ratios are exact rationals; verdicts are finite-horizon heuristics
and say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Optional, Sequence

from .errors import EnumerationBudgetExceeded, WitnessTooSparse
from .nset import DEFAULT_ENUMERATION_BUDGET, FiniteList, SymbolicSet

# Reports keep at most this many profile points; longer evaluations are
# decimated for storage (verdicts are still computed over every point).
_PROFILE_CAP = 4096


# ---------------------------------------------------------------------------
# index sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexSequence:
    """Strictly increasing evaluation points; the ultrafilter surrogate."""

    def points(self) -> Sequence[int]:
        raise NotImplementedError

    def to_expr(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_expr()

    def __len__(self) -> int:
        return len(self.points())


@dataclass(frozen=True)
class All(IndexSequence):
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def points(self):
        return range(1, self.horizon + 1)

    def to_expr(self):
        return f"all({self.horizon})"


@dataclass(frozen=True)
class Explicit(IndexSequence):
    values: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for v in self.values:
            if v <= prev:
                raise ValueError("points must be strictly increasing and >= 1")
            prev = v
        if not self.values:
            raise ValueError("sequence must be nonempty")

    def points(self):
        return self.values

    def to_expr(self):
        return "explicit(" + ",".join(map(str, self.values)) + ")"


@dataclass(frozen=True)
class DoubleExponential(IndexSequence):
    """Points 2^(2^i) for i = 1 .. terms."""

    terms: int

    def __post_init__(self):
        if self.terms < 1:
            raise ValueError("terms must be >= 1")

    def points(self):
        return tuple(1 << (1 << i) for i in range(1, self.terms + 1))

    def to_expr(self):
        return f"dexp({self.terms})"


@dataclass(frozen=True)
class Doubled(IndexSequence):
    inner: IndexSequence

    def points(self):
        return tuple(2 * p for p in self.inner.points())

    def to_expr(self):
        return f"doubled({self.inner.to_expr()})"


@dataclass(frozen=True)
class Geometric(IndexSequence):
    first: int
    ratio: int
    terms: int

    def __post_init__(self):
        if self.first < 1 or self.ratio < 2 or self.terms < 1:
            raise ValueError("need first >= 1, integer ratio >= 2, terms >= 1")

    def points(self):
        return tuple(self.first * self.ratio**j for j in range(self.terms))

    def to_expr(self):
        return f"geom({self.first},{self.ratio},{self.terms})"


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    """Sampled A(n)/n profile with a convergence-or-oscillation verdict.

    ``converged`` means the exact oscillation (tail sup minus tail inf) over
    the trailing ``tail_window`` points is <= ``tol``; the reported value is
    then the value at the last evaluation point, which any tail point matches
    up to ``tol``.  This is finite-horizon evidence, never a limit proof.
    """

    sequence: str
    points: tuple[int, ...]
    values: tuple[Fraction, ...]
    sampled: bool
    tail_window: int
    tol: Fraction
    converged: bool
    value: Optional[Fraction]
    achieved_tol: Optional[Fraction]
    tail_inf: Fraction
    tail_sup: Fraction

    @property
    def verdict(self) -> str:
        return "converged" if self.converged else "oscillating"


@dataclass(frozen=True)
class DensityReport:
    lower_estimate: Fraction
    upper_estimate: Fraction
    exact_value: Optional[Fraction]
    horizon: int
    tail_window_start: int
    argmin: int
    argmax: int
    grid: str


@dataclass(frozen=True)
class StatRow:
    eps: Fraction
    densities: tuple[tuple[int, Fraction], ...]
    tail_max: Fraction


@dataclass(frozen=True)
class StatReport:
    """Per-epsilon exception densities |{k <= n : |x_k - L| >= eps}| / n."""

    target: Fraction
    checkpoints: tuple[int, ...]
    rows: tuple[StatRow, ...]
    slack: Fraction
    tail_window: int
    convergent: bool


@dataclass(frozen=True)
class WitnessReport:
    witness: FiniteList
    ratio: Fraction
    horizon: int
    stages: tuple[tuple[int, int, Fraction], ...]
    removed: int
    max_tail_deviation: Fraction


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def _tail_len(n_points: int, tail_window: Optional[int]) -> int:
    if tail_window is not None:
        if not 1 <= tail_window <= n_points:
            raise ValueError("tail window must be within the point count")
        return tail_window
    return ceil(n_points / 2)


def ratio_profile(
    s: SymbolicSet, seq: IndexSequence, budget: Optional[int] = None
) -> list[tuple[int, Fraction]]:
    """Exact (n, A(n)/n) at every point of ``seq``."""
    return [(n, Fraction(s.count(n, budget=budget), n)) for n in seq.points()]


def limit_along(
    s: SymbolicSet,
    seq: IndexSequence,
    tol: Fraction,
    tail_window: Optional[int] = None,
    budget: Optional[int] = None,
) -> LimitReport:
    """Evaluate A(n)/n along ``seq`` and judge tail oscillation against ``tol``."""
    pts = seq.points()
    total = len(pts)
    if total == 0:
        raise ValueError("index sequence must be nonempty")
    tail = _tail_len(total, tail_window)
    tail_from = total - tail

    dense = isinstance(seq, All)
    keep_every = 1 if total <= _PROFILE_CAP else ceil(total / _PROFILE_CAP)

    kept_pts: list[int] = []
    kept_vals: list[Fraction] = []
    inf_n = inf_d = sup_n = sup_d = None
    running = 0
    last: tuple[int, int] = (0, 1)
    for idx, n in enumerate(pts):
        if dense:
            running += 1 if s.contains(n) else 0
            c = running
        else:
            c = s.count(n, budget=budget)
        last = (c, n)
        if idx % keep_every == 0 or idx == total - 1:
            kept_pts.append(n)
            kept_vals.append(Fraction(c, n))
        if idx >= tail_from:
            if inf_n is None or c * inf_d < inf_n * n:
                inf_n, inf_d = c, n
            if sup_n is None or c * sup_d > sup_n * n:
                sup_n, sup_d = c, n

    tail_inf = Fraction(inf_n, inf_d)
    tail_sup = Fraction(sup_n, sup_d)
    osc = tail_sup - tail_inf
    converged = osc <= tol
    return LimitReport(
        sequence=seq.to_expr(),
        points=tuple(kept_pts),
        values=tuple(kept_vals),
        sampled=keep_every > 1,
        tail_window=tail,
        tol=tol,
        converged=converged,
        value=Fraction(*last) if converged else None,
        achieved_tol=osc if converged else None,
        tail_inf=tail_inf,
        tail_sup=tail_sup,
    )


def _extrema_from_runs(
    s: SymbolicSet, runs: list[tuple[int, int]], lo: int, hi: int
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Exact (argmin, argmax) of A(n)/n over ALL integers in [lo, hi].

    Within a run of members the ratio is nondecreasing and within a gap it is
    decreasing, so extrema can only occur at run boundaries or window ends.
    """
    candidates = {lo, hi}
    for l, h in runs:
        if h < lo or l > hi:
            continue
        candidates.add(max(l, lo))
        candidates.add(min(h, hi))
        if l - 1 >= lo:
            candidates.add(l - 1)
        if h + 1 <= hi:
            candidates.add(h + 1)
    best_min = best_max = None
    for n in sorted(candidates):
        c = s.count(n)
        if best_min is None or c * best_min[1] < best_min[0] * n:
            best_min = (c, n)
        if best_max is None or c * best_max[1] > best_max[0] * n:
            best_max = (c, n)
    return best_min, best_max


def _extrema_by_scan(
    s: SymbolicSet, lo: int, hi: int, budget: int
) -> tuple[tuple[int, int], tuple[int, int]]:
    if hi - lo + 1 > budget:
        raise EnumerationBudgetExceeded(hi, budget, "window scan")
    c = s.count(lo - 1, budget=budget)
    best_min = best_max = None
    for n in range(lo, hi + 1):
        if s.contains(n):
            c += 1
        if best_min is None or c * best_min[1] < best_min[0] * n:
            best_min = (c, n)
        if best_max is None or c * best_max[1] > best_max[0] * n:
            best_max = (c, n)
    return best_min, best_max


def density(
    s: SymbolicSet,
    horizon: int,
    tail_window_start: int,
    tol: Fraction = Fraction(1, 1000),
    budget: Optional[int] = None,
) -> DensityReport:
    """Estimate lower/upper asymptotic density over [tail_window_start, horizon].

    The estimates are the exact inf/sup of A(n)/n over every integer in the
    window (via run decomposition when the set admits one, otherwise a full
    scan bounded by the budget).  ``exact_value`` is filled in whenever the
    set has a closed-form density.
    """
    if not 1 <= tail_window_start < horizon:
        raise ValueError("need 1 <= tail_window_start < horizon")
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    exact = s.exact_density()
    runs = s.member_runs(horizon)
    if runs is not None:
        (mn, mx) = _extrema_from_runs(s, runs, tail_window_start, horizon)
        grid = "window-extrema-via-runs"
    elif exact is not None:
        # closed-form density: a geometric sample of the window suffices for
        # the bracketing estimates; always includes both window ends.
        pts = sorted(
            {tail_window_start, horizon}
            | {
                min(horizon, tail_window_start * 2**j)
                for j in range(horizon.bit_length())
            }
        )
        mn = mx = None
        for n in pts:
            c = s.count(n, budget=budget)
            if mn is None or c * mn[1] < mn[0] * n:
                mn = (c, n)
            if mx is None or c * mx[1] > mx[0] * n:
                mx = (c, n)
        grid = "geometric-sample"
    else:
        (mn, mx) = _extrema_by_scan(s, tail_window_start, horizon, budget)
        grid = "integer-scan"
    return DensityReport(
        lower_estimate=Fraction(*mn),
        upper_estimate=Fraction(*mx),
        exact_value=exact,
        horizon=horizon,
        tail_window_start=tail_window_start,
        argmin=mn[1],
        argmax=mx[1],
        grid=grid,
    )


def statistical_limit(
    x: Callable[[int], Fraction],
    target: Fraction,
    eps_grid: Sequence[Fraction],
    checkpoints: IndexSequence,
    slack: Fraction = Fraction(1, 100),
    tail_window: Optional[int] = None,
) -> StatReport:
    """Exception-density table for statistical convergence of x to ``target``.

    For each eps the exception set is {k : |x_k - target| >= eps}; the table
    reports its exact counting ratio at every checkpoint.  The verdict is
    "convergent at this tolerance profile" when every eps-row's tail stays
    within ``slack``.
    """
    eps_list = [Fraction(e) for e in eps_grid]
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps grid must be positive")
    pts = list(checkpoints.points())
    target = Fraction(target)
    counters = [0] * len(eps_list)
    table: list[list[tuple[int, Fraction]]] = [[] for _ in eps_list]
    it = iter(pts)
    nxt = next(it)
    for k in range(1, pts[-1] + 1):
        dev = abs(Fraction(x(k)) - target)
        for j, e in enumerate(eps_list):
            if dev >= e:
                counters[j] += 1
        if k == nxt:
            for j in range(len(eps_list)):
                table[j].append((k, Fraction(counters[j], k)))
            nxt = next(it, None)

    tail = _tail_len(len(pts), tail_window)
    rows = []
    for e, dens in zip(eps_list, table):
        tail_max = max(v for _, v in dens[-tail:])
        rows.append(StatRow(eps=e, densities=tuple(dens), tail_max=tail_max))
    return StatReport(
        target=target,
        checkpoints=tuple(pts),
        rows=tuple(rows),
        slack=slack,
        tail_window=tail,
        convergent=all(r.tail_max <= slack for r in rows),
    )


def full_density_witness(
    x: Callable[[int], Fraction],
    target: Fraction,
    horizon: int,
    eps_schedule: Sequence[Fraction],
    stage_ratio: int = 10,
    floor: Fraction = Fraction(9, 10),
) -> WitnessReport:
    """Extract an index set of counting ratio near 1 along which x -> target.

    [1, horizon] is partitioned into geometric stages; within stage j the
    indices with |x_k - target| >= eps_j are discarded.  Raises
    WitnessTooSparse when the witness ratio falls below ``floor`` (the
    sequence is then not statistically convergent to ``target`` at this
    profile).
    """
    if horizon < 10:
        raise ValueError("horizon must be >= 10")
    schedule = [Fraction(e) for e in eps_schedule]
    if not schedule or any(
        b >= a for a, b in zip(schedule, schedule[1:])
    ) or any(e <= 0 for e in schedule):
        raise ValueError("eps schedule must be nonempty, positive, decreasing")
    target = Fraction(target)

    bounds = []
    b = stage_ratio
    while b < horizon:
        bounds.append(b)
        b *= stage_ratio
    bounds.append(horizon)

    stages: list[tuple[int, int, Fraction]] = []
    lo = 1
    for j, hi in enumerate(bounds):
        eps = schedule[min(j, len(schedule) - 1)]
        stages.append((lo, hi, eps))
        lo = hi + 1

    kept: list[int] = []
    for lo, hi, eps in stages:
        for k in range(lo, hi + 1):
            if abs(Fraction(x(k)) - target) < eps:
                kept.append(k)
    ratio = Fraction(len(kept), horizon)
    if ratio < floor:
        raise WitnessTooSparse(ratio, floor)
    last_lo = stages[-1][0]
    tail_devs = [abs(Fraction(x(k)) - target) for k in kept if k >= last_lo]
    return WitnessReport(
        witness=FiniteList(tuple(kept)),
        ratio=ratio,
        horizon=horizon,
        stages=tuple(stages),
        removed=horizon - len(kept),
        max_tail_deviation=max(tail_devs) if tail_devs else Fraction(0),
    )
