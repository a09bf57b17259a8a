"""Communication steps, step traces, and bounded reachability probes.

A step contracts an unguarded output against an unguarded input on the same
subject, modulo congruence.  Redexes are found on normal forms after exposing
unguarded replications (one copy each per exposure level); one level is
enough to reveal every single-step redex, since a redex needs one unguarded
prefix from each of at most two components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from . import verdicts
from .congruence import (
    EqBudget,
    NormalForm,
    canonical_state,
    expose,
    struct_eq_bounded,
    to_normal_form,
)
from .syntax import (
    NIL,
    Input,
    Name,
    Nil,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    Success,
    free_names,
    has_replication,
    is_async,
    par_all,
    substitute,
    term_size,
)
from .verdicts import Outcome, Verdict


@dataclass(frozen=True)
class RedexDescriptor:
    """Which communication fired: channel, transmitted name, receiving binder."""

    subject: Name
    sent: Name
    binder: Name
    subject_restricted: bool
    expose_level: int
    inert: bool


@dataclass(frozen=True)
class TraceStep:
    source: Process
    target: Process
    redex: RedexDescriptor


@dataclass(frozen=True)
class Trace:
    start: Process
    steps: tuple[TraceStep, ...] = ()

    @property
    def end(self) -> Process:
        return self.steps[-1].target if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)


def _rebuild(restricted: frozenset, comps: list[Process]) -> Process:
    comps = [c for c in comps if c != NIL]
    used = frozenset().union(*(free_names(c) for c in comps)) if comps else frozenset()
    term = par_all(comps)
    for w in sorted(restricted & used, key=Name.sort_key, reverse=True):
        term = Restrict(w, term)
    return term


def _contract(nf: NormalForm, i: int, j: int) -> Process:
    out = nf.components[i]
    inp = nf.components[j]
    rest = [c for k, c in enumerate(nf.components) if k != i and k != j]
    rest.append(out.cont)
    rest.append(substitute(inp.cont, inp.binder, out.obj))
    return _rebuild(nf.restricted, rest)


def _unguarded_on(p: Process, v: Name) -> int:
    """Unguarded prefixes whose subject is v; never looks under a prefix."""
    match p:
        case Output(subject=s):
            return 1 if s == v else 0
        case Input(subject=s):
            return 1 if s == v else 0
        case Par(left=l, right=r):
            return _unguarded_on(l, v) + _unguarded_on(r, v)
        case Restrict(binder=b, body=body):
            return 0 if b == v else _unguarded_on(body, v)
        case Repl(body=body):
            return _unguarded_on(body, v)
    return 0


def _inert_ok(nf: NormalForm, i: int, j: int) -> bool:
    """A step is inert when it is the only thing its restricted channel can
    ever do: output carries no continuation, the channel is used by exactly
    the two reacting prefixes, and it vanishes from the result."""
    out = nf.components[i]
    inp = nf.components[j]
    v = out.subject
    if v not in nf.restricted or out.cont != NIL:
        return False
    if sum(_unguarded_on(c, v) for c in nf.components) != 2:
        return False
    for k, c in enumerate(nf.components):
        if k != i and k != j and v in free_names(c):
            return False
    return v not in free_names(substitute(inp.cont, inp.binder, out.obj))


@lru_cache(maxsize=150000)
def reduct_candidates(
    p: Process, unfold_depth: int = 1
) -> tuple[tuple[Process, RedexDescriptor], ...]:
    """All one-step reducts modulo congruence, deduplicated by canonical state.

    Pairs every unguarded output with every unguarded input on the same
    subject, at each replication-exposure level up to ``unfold_depth``.
    """
    results = []
    seen = set()
    variant = p
    for level in range(unfold_depth + 1):
        nf = to_normal_form(variant)
        outs = [(i, c) for i, c in enumerate(nf.components) if isinstance(c, Output)]
        ins = [(j, c) for j, c in enumerate(nf.components) if isinstance(c, Input)]
        for i, out in outs:
            for j, inp in ins:
                if out.subject != inp.subject:
                    continue
                q = _contract(nf, i, j)
                key = canonical_state(q)
                if key in seen:
                    continue
                seen.add(key)
                rd = RedexDescriptor(
                    subject=out.subject,
                    sent=out.obj,
                    binder=inp.binder,
                    subject_restricted=out.subject in nf.restricted,
                    expose_level=level,
                    inert=_inert_ok(nf, i, j),
                )
                results.append((q, rd))
        if level < unfold_depth:
            exposed = expose(variant)
            if exposed == variant:
                break
            variant = exposed
    return tuple(results)


def inert_reducts(p: Process) -> tuple[tuple[Process, RedexDescriptor], ...]:
    """Inert steps available on an asynchronous term, without any unfolding."""
    if not is_async(p):
        raise ValueError("inert steps are defined on asynchronous terms only")
    nf = to_normal_form(p)
    results = []
    seen = set()
    for i, out in enumerate(nf.components):
        if not isinstance(out, Output):
            continue
        for j, inp in enumerate(nf.components):
            if not isinstance(inp, Input) or inp.subject != out.subject:
                continue
            if not _inert_ok(nf, i, j):
                continue
            q = _contract(nf, i, j)
            key = canonical_state(q)
            if key in seen:
                continue
            seen.add(key)
            rd = RedexDescriptor(
                subject=out.subject,
                sent=out.obj,
                binder=inp.binder,
                subject_restricted=True,
                expose_level=0,
                inert=True,
            )
            results.append((q, rd))
    return tuple(results)


def has_success(p: Process) -> bool:
    """True when a success leaf sits at an unguarded position."""
    match p:
        case Success():
            return True
        case Par(left=l, right=r):
            return has_success(l) or has_success(r)
        case Restrict(body=body) | Repl(body=body):
            return has_success(body)
    return False


@lru_cache(maxsize=200000)
def _contains_success(p: Process) -> bool:
    """Success leaf anywhere, guarded or not.  Reduction steps never create
    one, so a term without any can never reach an unguarded one."""
    match p:
        case Success():
            return True
        case Output(cont=c) | Input(cont=c):
            return _contains_success(c)
        case Par(left=l, right=r):
            return _contains_success(l) or _contains_success(r)
        case Restrict(body=body) | Repl(body=body):
            return _contains_success(body)
    return False


def _bfs(
    p: Process,
    check: Callable[[Process], Outcome],
    step_budget: int,
    state_cap: int,
    unfold_depth: int,
) -> tuple[Trace | None, bool, bool, int, int]:
    """Breadth-first search for a state passing ``check``.

    Returns (trace to a passing state or None, whether any check was
    inconclusive, whether exploration was truncated, states seen, depth).
    """
    root = canonical_state(p)
    states: dict[Process, Process] = {root: p}
    parent: dict[Process, tuple[Process, TraceStep] | None] = {root: None}
    any_inconclusive = False
    truncated = False

    def trace_to(key: Process) -> Trace:
        steps = []
        cur = key
        while parent[cur] is not None:
            pk, st = parent[cur]
            steps.append(st)
            cur = pk
        steps.reverse()
        return Trace(p, tuple(steps))

    outcome = check(p)
    if outcome is Outcome.HOLDS:
        return Trace(p), any_inconclusive, truncated, 1, 0
    if outcome is Outcome.INCONCLUSIVE:
        any_inconclusive = True
    frontier = [root]
    depth = 0
    while frontier and depth < step_budget:
        nxt = []
        for k in frontier:
            for q, rd in reduct_candidates(states[k], unfold_depth):
                qk = canonical_state(q)
                if qk in states:
                    continue
                if len(states) >= state_cap:
                    truncated = True
                    continue
                states[qk] = q
                parent[qk] = (k, TraceStep(states[k], q, rd))
                outcome = check(q)
                if outcome is Outcome.HOLDS:
                    return trace_to(qk), any_inconclusive, truncated, len(states), depth + 1
                if outcome is Outcome.INCONCLUSIVE:
                    any_inconclusive = True
                nxt.append(qk)
        frontier = nxt
        depth += 1
    if frontier:
        truncated = True
    return None, any_inconclusive, truncated, len(states), depth


def reduces_to(
    p: Process,
    q: Process,
    *,
    step_budget: int = 64,
    eq_budget: EqBudget | None = None,
    state_cap: int = 10000,
    unfold_depth: int = 1,
) -> Verdict:
    """Can p reach a term congruent to q?  Holds with a trace witness;
    Violated only when the whole reachable graph was seen and every
    equivalence test was definite."""
    eq_budget = eq_budget or EqBudget()
    fn_q = free_names(q)

    def check(t: Process) -> Outcome:
        # Congruence preserves free names, so a mismatch is a definite no.
        if free_names(t) != fn_q:
            return Outcome.VIOLATED
        return struct_eq_bounded(t, q, eq_budget).outcome

    trace, any_inc, truncated, n_states, depth = _bfs(
        p, check, step_budget, state_cap, unfold_depth
    )
    if trace is not None:
        return verdicts.holds(witness=trace, steps=len(trace), states=n_states)
    if truncated or any_inc:
        return verdicts.inconclusive(witness=(p, q), states=n_states, depth=depth)
    return verdicts.violated(witness=(p, q), states=n_states, depth=depth)


def may_succeed(
    p: Process,
    *,
    step_budget: int = 64,
    state_cap: int = 10000,
    unfold_depth: int = 1,
) -> Verdict:
    """Can p reach a state with an unguarded success leaf?"""
    if not _contains_success(p):
        return verdicts.violated(witness=p, states=0, depth=0)

    def check(t: Process) -> Outcome:
        return Outcome.HOLDS if has_success(t) else Outcome.VIOLATED

    trace, _, truncated, n_states, depth = _bfs(
        p, check, step_budget, state_cap, unfold_depth
    )
    if trace is not None:
        return verdicts.holds(witness=trace, steps=len(trace), states=n_states)
    if truncated:
        return verdicts.inconclusive(witness=p, states=n_states, depth=depth)
    return verdicts.violated(witness=p, states=n_states, depth=depth)


def _prefix_count(p: Process) -> int:
    match p:
        case Output(cont=c) | Input(cont=c):
            return 1 + _prefix_count(c)
        case Par(left=l, right=r):
            return _prefix_count(l) + _prefix_count(r)
        case Restrict(body=body) | Repl(body=body):
            return _prefix_count(body)
    return 0


def diverges_bounded(
    p: Process,
    *,
    budget: int = 16,
    state_cap: int = 10000,
    unfold_depth: int = 1,
) -> Verdict:
    """Bounded divergence probe.

    Holds with a looping trace when some reduction path revisits a canonical
    state; Violated when every path provably terminates within the budget;
    Inconclusive otherwise.  Replication-free terms always resolve: each step
    consumes two prefixes, so the budget is raised to cover the term.
    """
    if not has_replication(p):
        budget = max(budget, _prefix_count(p) + 1)
    status: dict[Process, object] = {}
    path_keys: set[Process] = set()
    path_steps: list[TraceStep] = []
    visited = 0
    cap_hit = False

    def dfs(t: Process, key: Process, remaining: int) -> str:
        nonlocal visited, cap_hit
        if key in path_keys:
            return "div"
        st = status.get(key)
        if st == "term":
            return "term"
        if isinstance(st, int) and st >= remaining:
            return "unknown"
        succs = reduct_candidates(t, unfold_depth)
        if not succs:
            status[key] = "term"
            return "term"
        if remaining == 0:
            status[key] = max(0, status.get(key, 0) if isinstance(st, int) else 0)
            return "unknown"
        visited += 1
        if visited > state_cap:
            cap_hit = True
            return "unknown"
        path_keys.add(key)
        any_unknown = False
        for q, rd in succs:
            path_steps.append(TraceStep(t, q, rd))
            result = dfs(q, canonical_state(q), remaining - 1)
            if result == "div":
                return "div"
            path_steps.pop()
            if result == "unknown":
                any_unknown = True
        path_keys.discard(key)
        if any_unknown:
            prev = status.get(key)
            status[key] = max(remaining, prev) if isinstance(prev, int) else remaining
            return "unknown"
        status[key] = "term"
        return "term"

    result = dfs(p, canonical_state(p), budget)
    if result == "div":
        return verdicts.holds(witness=Trace(p, tuple(path_steps)), depth=budget)
    if result == "term" and not cap_hit:
        return verdicts.violated(witness=p, depth=budget, states=visited)
    return verdicts.inconclusive(witness=p, depth=budget, states=visited)


@dataclass
class ReductionGraph:
    """Bounded forward exploration: canonical states, edges, truncation flag."""

    root: Process
    states: dict
    edges: dict
    truncated: bool
    depth: int


def explore(
    p: Process,
    *,
    step_budget: int = 64,
    state_cap: int = 10000,
    unfold_depth: int = 1,
    size_cap: int | None = None,
) -> ReductionGraph:
    """Forward exploration up to the budgets.  ``size_cap`` stops expanding
    states larger than that many nodes (marking the graph truncated): only
    replication can grow a term, so runaway growth signals an infinite
    graph, and cutting it early never changes a definite answer because
    every caller treats a truncated graph as Inconclusive."""
    root = canonical_state(p)
    states: dict[Process, Process] = {root: p}
    edges: dict[Process, tuple] = {}
    truncated = False
    frontier = [root]
    depth = 0
    while frontier and depth < step_budget:
        nxt = []
        for k in frontier:
            if size_cap is not None and term_size(states[k]) > size_cap:
                truncated = True
                edges[k] = ()
                continue
            succ_keys = []
            for q, _ in reduct_candidates(states[k], unfold_depth):
                qk = canonical_state(q)
                succ_keys.append(qk)
                if qk not in states:
                    if len(states) >= state_cap:
                        truncated = True
                        continue
                    states[qk] = q
                    nxt.append(qk)
            edges[k] = tuple(dict.fromkeys(succ_keys))
        frontier = nxt
        depth += 1
    if frontier:
        truncated = True
    return ReductionGraph(root=root, states=states, edges=edges, truncated=truncated, depth=depth)
