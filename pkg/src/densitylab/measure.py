"""Finitely-additive density-measure surrogates and their checkers.

A surrogate assigns to a set the limit behaviour of A(n)/n along a declared
index sequence (or a two-point combination, or a finite convex mixture of
such rules).  Every report is stamped with its sequence; no claim about a
genuine ultrafilter limit is ever made, and oscillating inputs yield an
interval verdict rather than a fabricated value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence

from .asymptotics import (
    Doubled,
    Explicit,
    IndexSequence,
    LimitReport,
    limit_along,
)
from .errors import EnumerationBudgetExceeded, NoViolationFound
from .nset import (
    DEFAULT_ENUMERATION_BUDGET,
    Empty,
    Full,
    Predicate,
    SymbolicSet,
    inter,
    union,
)
from .perm import (
    Identity,
    InterlacedPairing,
    PermutationRule,
    QuarterBlockSwap,
    levy_witness_set,
)

# ---------------------------------------------------------------------------
# measure rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureRule:
    def to_expr(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_expr()


@dataclass(frozen=True)
class SubsequenceLimit(MeasureRule):
    """mu(A) = limit behaviour of A(n)/n along ``seq``."""

    seq: IndexSequence

    def to_expr(self):
        return f"sublim({self.seq.to_expr()})"


@dataclass(frozen=True)
class BlumlingerCombo(MeasureRule):
    """mu(A) = 2 * (limit along the doubled points) - (limit along ``seq``).

    Per evaluation point n the partial value is 2*A(2n)/(2n) - A(n)/n =
    (A(2n) - A(n))/n, which the doubling sandwich pins into [0, 1] exactly.
    """

    seq: IndexSequence

    def to_expr(self):
        return f"combo({self.seq.to_expr()})"


@dataclass(frozen=True)
class Mixture(MeasureRule):
    """Finite convex combination of primitive rules (depth 1 only)."""

    terms: tuple[tuple[Fraction, MeasureRule], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("mixture needs at least one term")
        total = Fraction(0)
        for w, rule in self.terms:
            if w <= 0:
                raise ValueError("mixture weights must be positive")
            if isinstance(rule, Mixture):
                raise ValueError("mixtures nest at most one level deep")
            total += w
        if total != 1:
            raise ValueError(f"mixture weights must sum to 1, got {total}")

    def to_expr(self):
        return (
            "mix("
            + ",".join(f"{w.numerator}/{w.denominator}:{r.to_expr()}" for w, r in self.terms)
            + ")"
        )


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureReport:
    rule: str
    set_expr: str
    converged: bool
    value: Optional[Fraction]
    achieved_tol: Optional[Fraction]
    lo: Fraction
    hi: Fraction
    partials: Optional[tuple[tuple[int, Fraction], ...]]
    diagnostics: tuple[LimitReport, ...]

    @property
    def verdict(self) -> str:
        return "value" if self.converged else "interval"


def _combo_partials(
    a: SymbolicSet, seq: IndexSequence, budget: Optional[int]
) -> list[tuple[int, Fraction]]:
    out = []
    for n in seq.points():
        c2 = a.count(2 * n, budget=budget)
        c1 = a.count(n, budget=budget)
        out.append((n, Fraction(c2 - c1, n)))
    return out


def evaluate(
    mu: MeasureRule,
    a: SymbolicSet,
    tol: Fraction = Fraction(1, 1000),
    budget: Optional[int] = None,
) -> MeasureReport:
    """Evaluate a measure surrogate on a set with exact rational arithmetic.

    Non-convergent constituents surface as an interval verdict, never as a
    fake value.
    """
    if isinstance(mu, SubsequenceLimit):
        rep = limit_along(a, mu.seq, tol, budget=budget)
        return MeasureReport(
            rule=mu.to_expr(),
            set_expr=a.to_expr(),
            converged=rep.converged,
            value=rep.value,
            achieved_tol=rep.achieved_tol,
            lo=rep.tail_inf,
            hi=rep.tail_sup,
            partials=tuple(zip(rep.points, rep.values)),
            diagnostics=(rep,),
        )
    if isinstance(mu, BlumlingerCombo):
        base = limit_along(a, mu.seq, tol, budget=budget)
        dbl = limit_along(a, Doubled(mu.seq), tol, budget=budget)
        partials = _combo_partials(a, mu.seq, budget)
        tail = ceil(len(partials) / 2)
        tail_vals = [v for _, v in partials[-tail:]]
        lo, hi = min(tail_vals), max(tail_vals)
        converged = base.converged and dbl.converged
        value = 2 * dbl.value - base.value if converged else None
        achieved = (
            2 * dbl.achieved_tol + base.achieved_tol if converged else None
        )
        return MeasureReport(
            rule=mu.to_expr(),
            set_expr=a.to_expr(),
            converged=converged,
            value=value,
            achieved_tol=achieved,
            lo=lo,
            hi=hi,
            partials=tuple(partials),
            diagnostics=(base, dbl),
        )
    if isinstance(mu, Mixture):
        reports = [evaluate(rule, a, tol, budget=budget) for _, rule in mu.terms]
        converged = all(r.converged for r in reports)
        lo = sum(w * r.lo for (w, _), r in zip(mu.terms, reports))
        hi = sum(w * r.hi for (w, _), r in zip(mu.terms, reports))
        value = (
            sum(w * r.value for (w, _), r in zip(mu.terms, reports))
            if converged
            else None
        )
        achieved = (
            max(r.achieved_tol for r in reports) if converged else None
        )
        return MeasureReport(
            rule=mu.to_expr(),
            set_expr=a.to_expr(),
            converged=converged,
            value=value,
            achieved_tol=achieved,
            lo=lo,
            hi=hi,
            partials=None,
            diagnostics=tuple(d for r in reports for d in r.diagnostics),
        )
    raise TypeError(f"unknown measure rule {mu!r}")


# ---------------------------------------------------------------------------
# image sets under a permutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageSet(SymbolicSet):
    """π(base) described through the inverse: m ∈ πA iff π⁻¹(m) ∈ A.

    Counting uses closed forms where the permutation structure allows them
    (identity, pairings moving the whole of one side to the other, the
    quarter-block swap's piecewise translations); otherwise it scans m <= n
    under the enumeration budget.
    """

    pi: PermutationRule
    base: SymbolicSet

    def contains(self, n):
        return n >= 1 and self.base.contains(self.pi.invert(n))

    def _count(self, n, budget):
        pi, base = self.pi, self.base
        if isinstance(pi, Identity):
            return base.count(n, budget=budget)
        if isinstance(pi, InterlacedPairing):
            if base == pi.a_only:
                return pi.b_only.count(n, budget=budget)
            if base == pi.b_only:
                return pi.a_only.count(n, budget=budget)
            moved = union(pi.set_a, pi.set_b)
            if inter(base, moved) == Empty():
                return base.count(n, budget=budget)
        if isinstance(pi, QuarterBlockSwap):
            return self._count_qswap(n, budget)
        if n > budget:
            raise EnumerationBudgetExceeded(n, budget, "image-count scan")
        return sum(1 for m in range(1, n + 1) if base.contains(pi.invert(m)))

    def _count_qswap(self, n, budget):
        base = self.base

        def seg(lo, hi):
            # members of base in [lo, hi]
            if hi < lo:
                return 0
            return base.count(hi, budget=budget) - base.count(lo - 1, budget=budget)

        total = seg(1, min(3, n))
        j = 1
        while 4**j <= 2 * n:
            b = 4**j
            # lower quarter shifts up by b: lands <= n iff k <= n - b
            total += seg(b, min(2 * b - 1, n - b))
            # middle quarter shifts down by b: lands <= n iff k <= n + b
            total += seg(2 * b, min(3 * b - 1, n + b))
            # top quarter is fixed
            total += seg(3 * b, min(4 * b - 1, n))
            j += 1
        return total

    def infinitude(self):
        return self.base.infinitude()

    def iter_elements(self, upto=None, budget=None):
        import itertools

        it = range(1, upto + 1) if upto is not None else itertools.count(1)
        for m in it:
            if budget is not None:
                budget.spend()
            if self.contains(m):
                yield m

    def to_expr(self):
        return f"image({self.pi.to_expr()},{self.base.to_expr()})"


# ---------------------------------------------------------------------------
# axiom and invariance checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRow:
    label: str
    deviation: Optional[Fraction]
    status: str  # "pass" | "fail" | "inconclusive"
    note: str = ""


@dataclass(frozen=True)
class AxiomReport:
    rule: str
    tol: Fraction
    normalization: CheckRow
    additivity: tuple[CheckRow, ...]
    extension: tuple[CheckRow, ...]
    passed: bool

    def rows(self):
        return (self.normalization, *self.additivity, *self.extension)


def _verify_disjoint(a: SymbolicSet, b: SymbolicSet, sample_horizon: int = 10**4):
    both = inter(a, b)
    if both == Empty():
        return "closed-form"
    for k in range(1, sample_horizon + 1):
        if a.contains(k) and b.contains(k):
            raise ValueError(f"sets {a} and {b} are not disjoint (share {k})")
    return f"sampled to {sample_horizon}"


def check_axioms(
    mu: MeasureRule,
    corpus: Sequence[SymbolicSet],
    disjoint_pairs: Sequence[tuple[SymbolicSet, SymbolicSet]],
    tol: Fraction = Fraction(1, 1000),
    budget: Optional[int] = None,
) -> AxiomReport:
    """Check normalization, finite additivity, and density extension.

    Additivity rows compare mu(A ∪ B) with mu(A) + mu(B) for verified
    disjoint pairs; extension rows compare mu(A) with the closed-form
    density of A.  Rows whose constituent limits oscillate are reported
    inconclusive, not failed.
    """

    def row(label, dev, note=""):
        if dev is None:
            return CheckRow(label, None, "inconclusive", note)
        return CheckRow(label, dev, "pass" if dev <= tol else "fail", note)

    full_rep = evaluate(mu, Full(), tol, budget=budget)
    norm = row(
        "mu(full) = 1",
        abs(full_rep.value - 1) if full_rep.converged else None,
    )

    additivity = []
    for a, b in disjoint_pairs:
        note = _verify_disjoint(a, b)
        ra = evaluate(mu, a, tol, budget=budget)
        rb = evaluate(mu, b, tol, budget=budget)
        rab = evaluate(mu, union(a, b), tol, budget=budget)
        label = f"mu({a} ⊔ {b})"
        if ra.converged and rb.converged and rab.converged:
            additivity.append(
                row(label, abs(rab.value - ra.value - rb.value), note)
            )
        else:
            additivity.append(CheckRow(label, None, "inconclusive", note))

    extension = []
    for a in corpus:
        d = a.exact_density()
        label = f"mu({a}) = d"
        if d is None:
            extension.append(
                CheckRow(label, None, "inconclusive", "no closed-form density")
            )
            continue
        r = evaluate(mu, a, tol, budget=budget)
        if r.converged:
            extension.append(row(label, abs(r.value - d), f"d={d}"))
        else:
            extension.append(
                CheckRow(label, None, "inconclusive", f"oscillating; d={d}")
            )

    all_rows = [norm, *additivity, *extension]
    passed = all(r.status != "fail" for r in all_rows)
    return AxiomReport(
        rule=mu.to_expr(),
        tol=tol,
        normalization=norm,
        additivity=tuple(additivity),
        extension=tuple(extension),
        passed=passed,
    )


@dataclass(frozen=True)
class InvarianceReport:
    rule: str
    permutation: str
    tol: Fraction
    rows: tuple[CheckRow, ...]
    max_deviation: Optional[Fraction]
    passed: bool


def check_invariance(
    mu: MeasureRule,
    pi: PermutationRule,
    corpus: Sequence[SymbolicSet],
    tol: Fraction = Fraction(1, 1000),
    budget: Optional[int] = None,
) -> InvarianceReport:
    """Tabulate |mu(πA) - mu(A)| over a set corpus.

    Image sets are evaluated through counting, never materialized.
    """
    rows = []
    devs = []
    for a in corpus:
        ra = evaluate(mu, a, tol, budget=budget)
        rimg = evaluate(mu, ImageSet(pi, a), tol, budget=budget)
        label = f"|mu(π{a}) - mu({a})|"
        if ra.converged and rimg.converged:
            dev = abs(rimg.value - ra.value)
            devs.append(dev)
            rows.append(
                CheckRow(label, dev, "pass" if dev <= tol else "fail")
            )
        else:
            # worst-case distance between the two interval verdicts
            dev = max(abs(ra.hi - rimg.lo), abs(rimg.hi - ra.lo))
            rows.append(CheckRow(label, dev, "inconclusive", "oscillating"))
    max_dev = max(devs) if devs else None
    passed = all(r.status != "fail" for r in rows)
    return InvarianceReport(
        rule=mu.to_expr(),
        permutation=pi.to_expr(),
        tol=tol,
        rows=tuple(rows),
        max_deviation=max_dev,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# invariance-violation certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ViolationCertificate:
    """A witness that some subsequence-limit measure moves under π.

    At every chosen point the exact identity
    count(witness, n) - (π witness)(n) = |{k : k <= n < π(k)}| holds, so the
    measure along the chosen subsequence assigns the witness and its image
    values separated by at least ``gap_estimate``.
    """

    permutation: PermutationRule
    witness_set: Predicate
    subsequence: Explicit
    gap_estimate: Fraction
    profile: tuple[tuple[int, Fraction], ...]

    def verify(self) -> bool:
        """Re-run the witness identity at the certificate's points."""
        pi = self.permutation
        w = self.witness_set
        img = ImageSet(pi, w)
        maxn = self.subsequence.values[-1]
        want = dict(self.profile)
        in_w = in_img = defect = 0
        ok = True
        targets = set(self.subsequence.values)
        for n in range(1, maxn + 1):
            if w.contains(n):
                in_w += 1
            if img.contains(n):
                in_img += 1
            defect += (1 if pi.apply(n) > n else 0) - (
                1 if pi.invert(n) < n else 0
            )
            if n in targets:
                gap = Fraction(in_w - in_img, n)
                ok = ok and gap == want[n] and in_w - in_img == defect
        return ok and min(want.values()) == self.gap_estimate


def find_invariance_violation(
    pi: PermutationRule,
    horizon: int = 4096,
    threshold: Fraction = Fraction(1, 10),
    budget: Optional[int] = None,
) -> ViolationCertificate:
    """Search for a set and subsequence on which π moves every
    subsequence-limit measure by a positive gap.

    The witness is the canonical set {k : π(k) > k}; the subsequence picks
    the last three interior local maxima of the defect ratio (defect peaks
    recur for non-Lévy-like permutations).  Raises NoViolationFound when the
    tail defect stays at or below ``threshold``.
    """
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if horizon > budget:
        raise EnumerationBudgetExceeded(horizon, budget, "violation scan")
    defects: list[Fraction] = []
    acc = 0
    for n in range(1, horizon + 1):
        acc += (1 if pi.apply(n) > n else 0) - (1 if pi.invert(n) < n else 0)
        defects.append(Fraction(acc, n))
    tail_max = max(defects[horizon // 2 :])
    if tail_max <= threshold:
        raise NoViolationFound(
            f"tail defect {tail_max} <= {threshold} at horizon {horizon}; "
            "the permutation looks Lévy-like"
        )
    peaks = [
        n
        for n in range(2, horizon)
        if defects[n - 2] < defects[n - 1] >= defects[n]
        and defects[n - 1] >= threshold
    ]
    if len(peaks) < 3:
        raise NoViolationFound(
            f"defect exceeds {threshold} but does not recur at 3 local maxima "
            f"within horizon {horizon}"
        )
    chosen = peaks[-3:]
    witness = levy_witness_set(pi, cap=4 * horizon)
    profile = tuple((n, defects[n - 1]) for n in chosen)
    cert = ViolationCertificate(
        permutation=pi,
        witness_set=witness,
        subsequence=Explicit(tuple(chosen)),
        gap_estimate=min(v for _, v in profile),
        profile=profile,
    )
    if not cert.verify():
        raise AssertionError("witness identity failed to re-verify")
    return cert


# ---------------------------------------------------------------------------
# equal-measure test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EqualMeasureReport:
    set_a: str
    set_b: str
    horizon: int
    tail_window_start: int
    tail_sup_diff: Fraction
    seq_rows: tuple[CheckRow, ...]
    equivalent_likely: bool


def equal_measure_test(
    a: SymbolicSet,
    b: SymbolicSet,
    seq_corpus: Sequence[IndexSequence],
    tol: Fraction = Fraction(1, 1000),
    horizon: int = 10**5,
    tail_window_start: Optional[int] = None,
    budget: Optional[int] = None,
) -> EqualMeasureReport:
    """Two-sided evidence for mu(A) = mu(B) under every surrogate.

    Side one: the tail supremum of |A(n) - B(n)| / n over every integer in
    the window.  Side two: |mu(A) - mu(B)| for each sequence in the corpus.
    """
    start = tail_window_start if tail_window_start is not None else max(1, horizon // 10)
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if horizon > budget:
        raise EnumerationBudgetExceeded(horizon, budget, "difference scan")
    ca = a.count(start - 1, budget=budget)
    cb = b.count(start - 1, budget=budget)
    best: tuple[int, int] = (0, 1)
    for n in range(start, horizon + 1):
        if a.contains(n):
            ca += 1
        if b.contains(n):
            cb += 1
        dev = abs(ca - cb)
        if dev * best[1] > best[0] * n:
            best = (dev, n)
    tail_sup = Fraction(*best)

    rows = []
    ok = tail_sup <= tol
    for seq in seq_corpus:
        # both profiles share the sequence's points, so the honest distance
        # statistic is the per-point difference of the two ratio profiles
        # over the tail window (identical sets give exactly zero even when
        # each profile oscillates on its own)
        pts = list(seq.points())
        tail_from = len(pts) - ceil(len(pts) / 2)
        dev = Fraction(0)
        converged = True
        for idx, n in enumerate(pts):
            if idx < tail_from:
                continue
            va = Fraction(a.count(n, budget=budget), n)
            vb = Fraction(b.count(n, budget=budget), n)
            dev = max(dev, abs(va - vb))
        mu = SubsequenceLimit(seq)
        ra = evaluate(mu, a, tol, budget=budget)
        rb = evaluate(mu, b, tol, budget=budget)
        if ra.converged and rb.converged:
            dev = max(dev, abs(ra.value - rb.value))
        else:
            converged = False
        label = f"|mu_{seq.to_expr()}(A) - mu_{seq.to_expr()}(B)|"
        status = (
            ("pass" if dev <= tol else "fail")
            if converged
            else "inconclusive"
        )
        note = "" if converged else "per-point tail difference; profiles oscillate"
        rows.append(CheckRow(label, dev, status, note))
        ok = ok and dev <= tol
    return EqualMeasureReport(
        set_a=a.to_expr(),
        set_b=b.to_expr(),
        horizon=horizon,
        tail_window_start=start,
        tail_sup_diff=tail_sup,
        seq_rows=tuple(rows),
        equivalent_likely=ok,
    )
