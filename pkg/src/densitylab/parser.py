"""Recursive-descent parser for the set / sequence / permutation / measure
expression grammars.

The grammars are whitespace-insensitive; integers are decimal.  Parsed
expressions are built through the canonicalizing constructors, so
pretty-printing a parsed rule and re-parsing yields a semantically
identical rule (possibly in simplified form).
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import asymptotics, measure, nset, perm
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z]+)|([()\[\],;:/]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ParseError(f"unexpected character {stripped[0]!r}", at)
            if m.group(1):
                self.items.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.items.append(("name", m.group(2), m.start(2)))
            else:
                self.items.append(("punct", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"got {tok[1]!r}", tok[2], expected=repr(want))
        return tok

    def expect_int(self) -> int:
        return int(self.expect("int")[1])


def _int_list(t: _Tokens) -> list[int]:
    out = []
    if t.peek()[:2] == ("punct", ")"):
        return out
    out.append(t.expect_int())
    while t.peek()[:2] == ("punct", ","):
        t.next()
        out.append(t.expect_int())
    return out


def _rational(t: _Tokens) -> Fraction:
    num = t.expect_int()
    if t.peek()[:2] == ("punct", "/"):
        t.next()
        den = t.expect_int()
        if den == 0:
            raise ParseError("zero denominator", t.peek()[2])
        return Fraction(num, den)
    return Fraction(num)


def _parse_set(t: _Tokens) -> nset.SymbolicSet:
    kind, name, pos = t.expect("name")
    if name == "empty":
        return nset.Empty()
    if name == "full":
        return nset.Full()
    if name == "finite":
        t.expect("punct", "(")
        elems = _int_list(t)
        t.expect("punct", ")")
        return nset.finite(*elems)
    if name == "periodic":
        t.expect("punct", "(")
        m = t.expect_int()
        t.expect("punct", ";")
        residues = _int_list(t)
        t.expect("punct", ")")
        return nset.periodic(m, residues)
    if name == "blocks":
        t.expect("punct", "(")
        if t.peek()[:2] == ("name", "dexp"):
            t.next()
            t.expect("punct", ")")
            return nset.blocks_dexp()
        intervals = []
        while True:
            t.expect("punct", "[")
            lo = t.expect_int()
            t.expect("punct", ",")
            hi = t.expect_int()
            t.expect("punct", ")")
            intervals.append((lo, hi))
            if t.peek()[:2] == ("punct", ","):
                t.next()
                continue
            break
        t.expect("punct", ")")
        return nset.blocks_explicit(intervals)
    if name == "scale":
        t.expect("punct", "(")
        factor = t.expect_int()
        t.expect("punct", ",")
        inner = _parse_set(t)
        t.expect("punct", ")")
        return nset.scale(inner, factor)
    if name in ("union", "inter", "diff"):
        t.expect("punct", "(")
        left = _parse_set(t)
        t.expect("punct", ",")
        right = _parse_set(t)
        t.expect("punct", ")")
        return {"union": nset.union, "inter": nset.inter, "diff": nset.diff}[name](left, right)
    if name == "compl":
        t.expect("punct", "(")
        inner = _parse_set(t)
        t.expect("punct", ")")
        return nset.compl(inner)
    raise ParseError(f"unknown set form {name!r}", pos, expected="a set expression")


def _parse_seq(t: _Tokens) -> asymptotics.IndexSequence:
    _, name, pos = t.expect("name")
    if name == "all":
        t.expect("punct", "(")
        n = t.expect_int()
        t.expect("punct", ")")
        return asymptotics.All(n)
    if name == "explicit":
        t.expect("punct", "(")
        pts = _int_list(t)
        t.expect("punct", ")")
        return asymptotics.Explicit(tuple(pts))
    if name == "dexp":
        t.expect("punct", "(")
        k = t.expect_int()
        t.expect("punct", ")")
        return asymptotics.DoubleExponential(k)
    if name == "doubled":
        t.expect("punct", "(")
        inner = _parse_seq(t)
        t.expect("punct", ")")
        return asymptotics.Doubled(inner)
    if name == "geom":
        t.expect("punct", "(")
        first = t.expect_int()
        t.expect("punct", ",")
        ratio = t.expect_int()
        t.expect("punct", ",")
        k = t.expect_int()
        t.expect("punct", ")")
        return asymptotics.Geometric(first, ratio, k)
    raise ParseError(f"unknown sequence form {name!r}", pos, expected="an index sequence")


def _parse_perm(t: _Tokens) -> perm.PermutationRule:
    _, name, pos = t.expect("name")
    if name == "id":
        return perm.Identity()
    if name == "qswap":
        return perm.QuarterBlockSwap()
    if name == "table":
        t.expect("punct", "(")
        pairs: list[tuple[int, int]] = []
        while t.peek()[:2] == ("punct", "("):
            t.next()
            cycle = [t.expect_int()]
            while t.peek()[0] == "int":
                cycle.append(t.expect_int())
            t.expect("punct", ")")
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                pairs.append((a, b))
        t.expect("punct", ")")
        return perm.FiniteTable(tuple(pairs))
    if name == "pair":
        t.expect("punct", "(")
        a = _parse_set(t)
        t.expect("punct", ",")
        b = _parse_set(t)
        t.expect("punct", ")")
        return perm.pairing_permutation(a, b)
    if name == "restrict":
        t.expect("punct", "(")
        base = _parse_perm(t)
        t.expect("punct", ",")
        exceptional = _parse_set(t)
        t.expect("punct", ")")
        if not isinstance(base, perm.InterlacedPairing):
            raise ParseError("restrict needs a pairing base", pos, expected="pair(...)")
        return perm.Restricted(base, exceptional)
    if name == "comp":
        t.expect("punct", "(")
        outer = _parse_perm(t)
        t.expect("punct", ",")
        inner = _parse_perm(t)
        t.expect("punct", ")")
        return perm.Compose(outer, inner)
    if name == "inv":
        t.expect("punct", "(")
        inner = _parse_perm(t)
        t.expect("punct", ")")
        return perm.Inverse(inner)
    raise ParseError(f"unknown permutation form {name!r}", pos, expected="a permutation")


def _parse_measure(t: _Tokens) -> measure.MeasureRule:
    _, name, pos = t.expect("name")
    if name == "sublim":
        t.expect("punct", "(")
        seq = _parse_seq(t)
        t.expect("punct", ")")
        return measure.SubsequenceLimit(seq)
    if name == "combo":
        t.expect("punct", "(")
        seq = _parse_seq(t)
        t.expect("punct", ")")
        return measure.BlumlingerCombo(seq)
    if name == "mix":
        t.expect("punct", "(")
        terms = []
        while True:
            w = _rational(t)
            t.expect("punct", ":")
            terms.append((w, _parse_measure(t)))
            if t.peek()[:2] == ("punct", ","):
                t.next()
                continue
            break
        t.expect("punct", ")")
        return measure.Mixture(tuple(terms))
    raise ParseError(f"unknown measure form {name!r}", pos, expected="a measure rule")


_PARSERS = {
    "set": _parse_set,
    "seq": _parse_seq,
    "perm": _parse_perm,
    "measure": _parse_measure,
}


def parse_expression(text: str, kind: str):
    """Parse ``text`` as one of the four grammars: set, seq, perm, measure."""
    if kind not in _PARSERS:
        raise ValueError(f"unknown expression kind {kind!r}")
    tokens = _Tokens(text)
    try:
        result = _PARSERS[kind](tokens)
    except ValueError as exc:
        # semantic validation inside constructors (bad residues, weights, ...)
        raise ParseError(str(exc), tokens.peek()[2]) from exc
    trailing = tokens.peek()
    if trailing[0] != "eof":
        raise ParseError(f"trailing input {trailing[1]!r}", trailing[2], expected="end of input")
    return result
