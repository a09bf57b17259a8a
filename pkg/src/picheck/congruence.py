"""Structural congruence: normal forms, decidable matching, bounded unfolding.

The congruence splits into a decidable core (par is a commutative monoid,
unused restrictions drop, scopes extrude, alpha) and the replication law
``!P == P | !P``.  The core is decided by normal-form matching; the full
relation is only semi-decided, by unfolding replications a bounded number
of times on both sides and matching with the core.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator

from . import verdicts
from .syntax import (
    NIL,
    USER,
    Input,
    Name,
    Nil,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    Success,
    alpha_canonical,
    alpha_eq,
    apply_renaming,
    free_names,
    fresh,
    fresh_name,
    has_replication,
    names,
    par_all,
    substitute,
)
from .text import pprint
from .verdicts import Verdict

# Placeholder a user-space term can never contain; used to erase the identity
# of restricted names when computing order- and renaming-invariant keys.
_MASK = Name(USER, "\x00")


@dataclass(frozen=True)
class EqBudget:
    """Bounds for one bounded-equivalence query."""

    max_unfolds: int = 2
    max_candidates: int = 10000


@dataclass(frozen=True)
class NormalForm:
    """Top-level restrictions over a multiset of plain parallel components.

    Invariants: every restricted name occurs free in some component; no
    component is itself a parallel composition, a restriction, or the empty
    process (the empty multiset stands for the empty process).
    """

    restricted: frozenset
    components: tuple


def _flatten(q: Process) -> tuple[list[Name], list[Process]]:
    """Split an alpha-canonical term into restriction binders and components.

    Binder distinctness (guaranteed by alpha_canonical) makes unconditional
    scope extrusion safe.
    """
    restricted: list[Name] = []
    comps: list[Process] = []
    stack = [q]
    while stack:
        t = stack.pop()
        match t:
            case Nil():
                pass
            case Par(left=l, right=r):
                stack.append(r)
                stack.append(l)
            case Restrict(binder=b, body=body):
                restricted.append(b)
                stack.append(body)
            case _:
                comps.append(t)
    return restricted, comps


@lru_cache(maxsize=400000)
def _counts(p: Process) -> tuple[int, int, int, int]:
    """(outputs, inputs, replications, success leaves); invariant under the core congruence."""
    match p:
        case Nil():
            return (0, 0, 0, 0)
        case Success():
            return (0, 0, 0, 1)
        case Output(cont=c):
            o, i, r, k = _counts(c)
            return (o + 1, i, r, k)
        case Input(cont=c):
            o, i, r, k = _counts(c)
            return (o, i + 1, r, k)
        case Par(left=l, right=rt):
            a = _counts(l)
            b = _counts(rt)
            return tuple(x + y for x, y in zip(a, b))
        case Restrict(body=body) | Repl(body=body):
            return _counts(body)
    return (0, 0, 0, 0)


def _fingerprint(c: Process, restricted: frozenset) -> tuple:
    """Matching-invariant key: root shape, free names outside the restricted
    set, restricted-name usage count, constructor counts. Components that can
    match under some restricted-name renaming always share a fingerprint."""

    def name_key(n: Name) -> str:
        return "*" if n in restricted else f"{n.space}:{n.key}"

    match c:
        case Nil():
            root = ("0", "", "")
        case Success():
            root = ("ok", "", "")
        case Output(subject=s, obj=o):
            root = ("out", name_key(s), name_key(o))
        case Input(subject=s):
            root = ("in", name_key(s), "")
        case Repl():
            root = ("repl", "", "")
        case _:
            root = ("?", "", "")
    fn = free_names(c)
    outside = tuple(sorted(f"{n.space}:{n.key}" for n in fn - restricted))
    return root + (_counts(c), outside, len(fn & restricted))


@lru_cache(maxsize=200000)
def to_normal_form(p: Process) -> NormalForm:
    q = alpha_canonical(p)
    restricted, comps = _flatten(q)
    comps = [c for c in comps if c != NIL]
    used = frozenset().union(*(free_names(c) for c in comps)) if comps else frozenset()
    kept = frozenset(w for w in restricted if w in used)
    comps.sort(key=lambda c: (_fingerprint(c, kept), pprint(c)))
    return NormalForm(kept, tuple(comps))


def nf_to_process(nf: NormalForm) -> Process:
    term = par_all(nf.components)
    for w in sorted(nf.restricted, key=Name.sort_key, reverse=True):
        term = Restrict(w, term)
    return term


def _preorder_names(p: Process) -> Iterator[Name]:
    match p:
        case Output(subject=s, obj=o, cont=c):
            yield s
            yield o
            yield from _preorder_names(c)
        case Input(subject=s, binder=b, cont=c):
            yield s
            yield b
            yield from _preorder_names(c)
        case Par(left=l, right=r):
            yield from _preorder_names(l)
            yield from _preorder_names(r)
        case Restrict(binder=b, body=body):
            yield b
            yield from _preorder_names(body)
        case Repl(body=body):
            yield from _preorder_names(body)


def _order_and_wrap(restricted: frozenset, comps: list[Process]) -> Process:
    """Deterministically order components, neutralize restricted-name identity,
    and rebuild a single canonical term."""
    if not comps:
        return NIL
    mask_map = {w: _MASK for w in restricted}

    def masked(c: Process) -> str:
        return pprint(alpha_canonical(apply_renaming(c, mask_map)))

    comps = sorted(comps, key=lambda c: (masked(c), pprint(c)))
    top = 0
    for c in comps:
        for n in names(c):
            if n.is_fresh:
                top = max(top, n.key + 1)
    for w in restricted:
        if w.is_fresh:
            top = max(top, w.key + 1)
    mapping: dict[Name, Name] = {}
    for c in comps:
        for n in _preorder_names(c):
            if n in restricted and n not in mapping:
                mapping[n] = fresh(top + len(mapping))
    comps = [apply_renaming(c, mapping) for c in comps]
    comps.sort(key=pprint)
    term = par_all(comps)
    for w in reversed(list(mapping.values())):
        term = Restrict(w, term)
    return alpha_canonical(term)


@lru_cache(maxsize=200000)
def deep_canon(p: Process) -> Process:
    """Canonical form under the decidable core congruence, applied at every
    nesting level. Equal results imply congruent terms; the converse can fail
    on symmetric restricted-name ties, which the matching search resolves."""
    q = alpha_canonical(p)
    restricted, comps = _flatten(q)
    out = []
    for c in comps:
        match c:
            case Nil():
                continue
            case Output(subject=s, obj=o, cont=k):
                out.append(Output(s, o, deep_canon(k)))
            case Input(subject=s, binder=b, cont=k):
                out.append(Input(s, b, deep_canon(k)))
            case Repl(body=body):
                out.append(Repl(deep_canon(body)))
            case _:
                out.append(c)
    used = frozenset().union(*(free_names(c) for c in out)) if out else frozenset()
    kept = frozenset(w for w in restricted if w in used)
    return _order_and_wrap(kept, out)


def _refold(comps: list[Process]) -> list[Process]:
    """Fold back copies standing next to their own replication (P | !P -> !P)."""
    comps = list(comps)
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(comps):
            for j, d in enumerate(comps):
                if i != j and isinstance(d, Repl) and alpha_eq(c, d.body):
                    comps.pop(i)
                    changed = True
                    break
            if changed:
                break
    return comps


@lru_cache(maxsize=200000)
def canonical_state(p: Process) -> Process:
    """Dedup key for reachability searches: deep canonical form plus top-level
    refolding. Key equality implies full structural congruence; inequality
    implies nothing (missed merges cost time, never correctness)."""
    q = deep_canon(p)
    restricted, comps = _flatten(q)
    folded = _refold(comps)
    if len(folded) == len(comps):
        return q
    used = frozenset().union(*(free_names(c) for c in folded)) if folded else frozenset()
    kept = frozenset(w for w in restricted if w in used)
    return _order_and_wrap(kept, folded)


def _occurrences(p: Process, w: Name) -> int:
    match p:
        case Nil() | Success():
            return 0
        case Output(subject=s, obj=o, cont=c):
            return (s == w) + (o == w) + _occurrences(c, w)
        case Input(subject=s, binder=b, cont=c):
            return (s == w) + (0 if b == w else _occurrences(c, w))
        case Par(left=l, right=r):
            return _occurrences(l, w) + _occurrences(r, w)
        case Restrict(binder=b, body=body):
            return 0 if b == w else _occurrences(body, w)
        case Repl(body=body):
            return _occurrences(body, w)
    return 0


def _comp_eq(c: Process, d: Process) -> bool:
    match (c, d):
        case (Nil(), Nil()) | (Success(), Success()):
            return True
        case (Output(), Output()):
            return (
                c.subject == d.subject
                and c.obj == d.obj
                and struct_eq_s(c.cont, d.cont)
            )
        case (Input(), Input()):
            if c.subject != d.subject:
                return False
            if c.binder == d.binder:
                return struct_eq_s(c.cont, d.cont)
            nb = fresh_name(
                free_names(c.cont) | free_names(d.cont) | {c.binder, d.binder}
            )
            return struct_eq_s(
                substitute(c.cont, c.binder, nb), substitute(d.cont, d.binder, nb)
            )
        case (Repl(), Repl()):
            return struct_eq_s(c.body, d.body)
    return False


def _match_multiset(left: list[Process], right: list[Process], restricted: frozenset) -> bool:
    # Identical components pair off for free.
    rest_r = list(right)
    rest_l = []
    for c in left:
        if c in rest_r:
            rest_r.remove(c)
        else:
            rest_l.append(c)
    if len(rest_l) != len(rest_r):
        return False
    groups: dict[tuple, tuple[list, list]] = {}
    for c in rest_l:
        groups.setdefault(_fingerprint(c, restricted), ([], []))[0].append(c)
    for d in rest_r:
        key = _fingerprint(d, restricted)
        if key not in groups:
            return False
        groups[key][1].append(d)

    def backtrack(ga: list, gb: list) -> bool:
        if not ga:
            return True
        c = ga[0]
        for idx, d in enumerate(gb):
            if _comp_eq(c, d) and backtrack(ga[1:], gb[:idx] + gb[idx + 1 :]):
                return True
        return False

    return all(
        len(ga) == len(gb) and backtrack(ga, gb) for ga, gb in groups.values()
    )


def _sigma_candidates(a: NormalForm, b: NormalForm) -> Iterator[dict[Name, Name]]:
    """Injective maps from b's restricted names onto a's, grouped by a
    matching-invariant usage profile so hopeless pairings are never tried."""

    def profiles(nf: NormalForm) -> dict[tuple, list[Name]]:
        out: dict[tuple, list[Name]] = {}
        for w in sorted(nf.restricted, key=Name.sort_key):
            prof = tuple(
                sorted(
                    (_fingerprint(c, nf.restricted), _occurrences(c, w))
                    for c in nf.components
                    if w in free_names(c)
                )
            )
            out.setdefault(prof, []).append(w)
        return out

    pa, pb = profiles(a), profiles(b)
    if sorted(pa.keys()) != sorted(pb.keys()):
        return
    keys = sorted(pa.keys())
    if any(len(pa[k]) != len(pb[k]) for k in keys):
        return
    for perm_choice in product(*(permutations(pa[k]) for k in keys)):
        sigma: dict[Name, Name] = {}
        for k, targets in zip(keys, perm_choice):
            sigma.update(dict(zip(pb[k], targets)))
        yield sigma


def _nf_eq(a: NormalForm, b: NormalForm) -> bool:
    if len(a.restricted) != len(b.restricted):
        return False
    if len(a.components) != len(b.components):
        return False
    fa = sorted(_fingerprint(c, a.restricted) for c in a.components)
    fb = sorted(_fingerprint(c, b.restricted) for c in b.components)
    if fa != fb:
        return False
    if not b.restricted:
        return _match_multiset(list(a.components), list(b.components), a.restricted)
    for sigma in _sigma_candidates(a, b):
        renamed = [apply_renaming(c, sigma) for c in b.components]
        if _match_multiset(list(a.components), renamed, a.restricted):
            return True
    return False


@lru_cache(maxsize=300000)
def struct_eq_s(p: Process, q: Process) -> bool:
    """Decidable congruence check: everything except the replication law."""
    if p == q:
        return True
    if free_names(p) != free_names(q):
        return False
    if deep_canon(p) == deep_canon(q):
        return True
    return _nf_eq(to_normal_form(p), to_normal_form(q))


def _single_unfolds(p: Process) -> Iterator[Process]:
    """All results of one left-to-right replication unfolding, any position."""
    match p:
        case Nil() | Success():
            return
        case Repl(body=body):
            yield Par(body, p)
            for b2 in _single_unfolds(body):
                yield Repl(b2)
        case Par(left=l, right=r):
            for l2 in _single_unfolds(l):
                yield Par(l2, r)
            for r2 in _single_unfolds(r):
                yield Par(l, r2)
        case Output(subject=s, obj=o, cont=c):
            for c2 in _single_unfolds(c):
                yield Output(s, o, c2)
        case Input(subject=s, binder=b, cont=c):
            for c2 in _single_unfolds(c):
                yield Input(s, b, c2)
        case Restrict(binder=b, body=body):
            for b2 in _single_unfolds(body):
                yield Restrict(b, b2)


def unfold_replications(p: Process, depth: int, cap: int | None = None) -> tuple[Process, ...]:
    """Terms reachable by at most ``depth`` single unfoldings, including ``p``.

    Deduplicates up to alpha; an optional ``cap`` bounds the result size.
    """
    seen = {alpha_canonical(p): p}
    frontier = [p]
    for _ in range(depth):
        nxt = []
        for t in frontier:
            for t2 in _single_unfolds(t):
                k = alpha_canonical(t2)
                if k not in seen:
                    seen[k] = t2
                    nxt.append(t2)
                    if cap is not None and len(seen) >= cap:
                        return tuple(seen.values())
        if not nxt:
            break
        frontier = nxt
    return tuple(seen.values())


def expose(p: Process) -> Process:
    """One simultaneous unfolding of every unguarded replication; congruent to ``p``."""
    match p:
        case Repl(body=body):
            return Par(expose(body), p)
        case Par(left=l, right=r):
            return Par(expose(l), expose(r))
        case Restrict(binder=b, body=body):
            return Restrict(b, expose(body))
        case _:
            return p


def struct_eq_bounded(p: Process, q: Process, budget: EqBudget | None = None) -> Verdict:
    """Semi-decision of full structural congruence.

    Holds on a bounded-unfolding match; Violated only when both terms are
    replication-free (then the relation is decidable); otherwise a failed
    search is Inconclusive.
    """
    budget = budget or EqBudget()
    if struct_eq_s(p, q):
        return verdicts.holds(unfolds=0)
    if not has_replication(p) and not has_replication(q):
        return verdicts.violated((p, q))
    cap = budget.max_candidates
    left = unfold_replications(p, budget.max_unfolds, cap=cap)
    right = unfold_replications(q, budget.max_unfolds, cap=cap)
    examined = len(left) + len(right)
    right_keys = {deep_canon(t) for t in right}
    for a in left:
        if deep_canon(a) in right_keys:
            return verdicts.holds(unfolds=budget.max_unfolds, candidates=examined)
    for a in left:
        for b in right:
            if struct_eq_s(a, b):
                return verdicts.holds(unfolds=budget.max_unfolds, candidates=examined)
    return verdicts.inconclusive(
        witness=(p, q), unfolds=budget.max_unfolds, candidates=examined
    )
