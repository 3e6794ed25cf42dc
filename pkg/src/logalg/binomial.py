"""Groebner bases of pure-difference binomial ideals.

A rule ``(lead, trail)`` stands for the binomial ``x^lead - x^trail`` with
``lead`` the larger monomial; ``trail is None`` encodes the monomial
``x^lead`` (used only to decide unit questions).  Only exponent vectors are
ever stored, because S-pairs of pure-difference binomials are again
pure-difference binomials.

The monomial order is graded reverse lexicographic, optionally preceded by
an elimination weight on a block of trailing variables.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import limits
from .errors import ResourceExceeded

DEFAULT_GB_CAP = 20_000

Exp = tuple[int, ...]
Rule = tuple[Exp, "Exp | None"]


def grevlex_key(a: Exp, elim: int = 0):
    """Sort key: bigger key = bigger monomial.

    With ``elim > 0`` the last ``elim`` variables are eliminated first
    (their total degree is compared before anything else)."""
    n = len(a)
    w = sum(a[n - elim :]) if elim else 0
    return (w, sum(a), tuple(-a[i] for i in range(n - 1, -1, -1)))


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


class BinomialGB:
    """Reduced Groebner basis of a pure-difference binomial (+ monomial) ideal."""

    def __init__(self, nvars: int, rules: list[Rule], elim: int = 0):
        self.nvars = nvars
        self.rules = rules
        self.elim = elim

    # -- reduction -------------------------------------------------------
    def reduce(self, w: Sequence[int]) -> Exp | None:
        """Normal form of ``x^w``; ``None`` if it reduces to zero."""
        w = tuple(w)
        rules = self.rules
        changed = True
        while changed:
            changed = False
            for lead, trail in rules:
                if _divides(lead, w):
                    if trail is None:
                        return None
                    w = tuple(x - l + t for x, l, t in zip(w, lead, trail))
                    changed = True
                    break
        return w

    def has_unit(self) -> bool:
        """Does the ideal contain 1 (the zero exponent is a monomial rule)?"""
        zero = (0,) * self.nvars
        return any(lead == zero and trail is None for lead, trail in self.rules)

    def key(self) -> tuple:
        return tuple(sorted(self.rules, key=lambda r: (r[0], r[1] is None, r[1] or ())))


def _order(a: Exp, b: Exp, elim: int) -> Rule | None:
    if a == b:
        return None
    return (a, b) if grevlex_key(a, elim) > grevlex_key(b, elim) else (b, a)


def _reduce_with(w: Exp, rules: list[Rule]) -> Exp | None:
    changed = True
    while changed:
        changed = False
        for lead, trail in rules:
            if _divides(lead, w):
                if trail is None:
                    return None
                w = tuple(x - l + t for x, l, t in zip(w, lead, trail))
                changed = True
                break
    return w


def _normalize_pair(a: Exp | None, b: Exp | None, elim: int) -> Rule | None:
    if a is None and b is None:
        return None
    if a is None:
        return (b, None)
    if b is None:
        return (a, None)
    return _order(a, b, elim)


def groebner(
    nvars: int,
    binomials: Iterable[tuple[Sequence[int], Sequence[int]]],
    monomials: Iterable[Sequence[int]] = (),
    *,
    elim: int = 0,
    cap: int = DEFAULT_GB_CAP,
) -> BinomialGB:
    """Buchberger completion for pure-difference binomials.

    Raises :class:`ResourceExceeded` once more than ``cap`` S-pairs have
    been processed."""
    rules: list[Rule] = []
    for a, b in binomials:
        r = _order(tuple(a), tuple(b), elim)
        if r is not None and r not in rules:
            rules.append(r)
    for m in monomials:
        r = (tuple(m), None)
        if r not in rules:
            rules.append(r)

    cap = limits.gb_cap(cap)
    pairs = [(i, j) for j in range(len(rules)) for i in range(j)]
    processed = 0
    while pairs:
        i, j = pairs.pop()
        processed += 1
        if processed % 256 == 0:
            limits.check_deadline()
        if processed > cap:
            raise ResourceExceeded(f"Groebner completion exceeded {cap} S-pairs")
        (l1, t1), (l2, t2) = rules[i], rules[j]
        if t1 is None and t2 is None:
            continue
        if all(min(x, y) == 0 for x, y in zip(l1, l2)):
            continue  # coprime leading terms
        L = tuple(max(x, y) for x, y in zip(l1, l2))
        s1 = None if t1 is None else tuple(x - l + t for x, l, t in zip(L, l1, t1))
        s2 = None if t2 is None else tuple(x - l + t for x, l, t in zip(L, l2, t2))
        s1 = None if s1 is None else _reduce_with(s1, rules)
        s2 = None if s2 is None else _reduce_with(s2, rules)
        new = _normalize_pair(s1, s2, elim)
        if new is None or new in rules:
            continue
        rules.append(new)
        k = len(rules) - 1
        pairs.extend((a, k) for a in range(k))
    return BinomialGB(nvars, _interreduce(rules, elim), elim)


def _interreduce(rules: list[Rule], elim: int) -> list[Rule]:
    # keep minimal leading terms, then bring trails to normal form
    rules = sorted(set(rules), key=lambda r: grevlex_key(r[0], elim))
    kept: list[Rule] = []
    for r in rules:
        if not any(_divides(k[0], r[0]) for k in kept):
            kept.append(r)
    out: list[Rule] = []
    for idx, (lead, trail) in enumerate(kept):
        others = kept[:idx] + kept[idx + 1 :]
        if trail is not None:
            trail = _reduce_with(trail, others)
            if trail == lead:
                continue
        if trail is None:
            out.append((lead, None))
        else:
            out.append((lead, trail))
    return sorted(out, key=lambda r: (r[0], r[1] is None, r[1] or ()))


def is_confluent(gb: BinomialGB) -> bool:
    """Every S-pair reduces to zero (local confluence)."""
    rules = gb.rules
    for j in range(len(rules)):
        for i in range(j):
            (l1, t1), (l2, t2) = rules[i], rules[j]
            if t1 is None and t2 is None:
                continue
            L = tuple(max(x, y) for x, y in zip(l1, l2))
            s1 = None if t1 is None else gb.reduce(tuple(x - l + t for x, l, t in zip(L, l1, t1)))
            s2 = None if t2 is None else gb.reduce(tuple(x - l + t for x, l, t in zip(L, l2, t2)))
            if s1 != s2:
                return False
    return True


def saturate_all(nvars: int, binomials, *, cap: int = DEFAULT_GB_CAP) -> BinomialGB:
    """GB of ``I : (x_1 ... x_n)^inf`` via elimination of ``y`` in
    ``I + (y x_1 ... x_n - 1)``."""
    ext = [(tuple(a) + (0,), tuple(b) + (0,)) for a, b in binomials]
    ext.append(((1,) * nvars + (1,), (0,) * (nvars + 1)))
    gb = groebner(nvars + 1, ext, elim=1, cap=cap)
    kept = [(l[:-1], t[:-1]) for l, t in gb.rules if t is not None and l[-1] == 0 and t[-1] == 0]
    return groebner(nvars, kept, cap=cap)
