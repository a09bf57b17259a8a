"""Terms of the choice-free synchronous pi-calculus with a success constant.

Names live in two disjoint spaces: user names (spelled identifiers, the only
kind the parser produces) and fresh names (machine-generated, rendered #k).
Keeping the spaces apart means fresh-name generation can never collide with
anything a user wrote.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

USER = "user"
FRESH = "fresh"


@dataclass(frozen=True)
class Name:
    """A channel name: ``space`` is "user" or "fresh", ``key`` a str or int."""

    space: str
    key: str | int

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.space, self.key)))

    def __hash__(self):
        return self._hash

    @property
    def is_fresh(self) -> bool:
        return self.space == FRESH

    def sort_key(self):
        # User names order before fresh ones; within a space, by key.
        return (1, self.key, "") if self.space == FRESH else (0, "", self.key)

    def __str__(self):
        return f"#{self.key}" if self.space == FRESH else str(self.key)


def user(key: str) -> Name:
    return Name(USER, key)


def fresh(index: int) -> Name:
    return Name(FRESH, index)


NameSet = frozenset  # alias used in signatures: frozenset[Name]

EMPTY: NameSet = frozenset()


class Process:
    """Base class for term nodes. All nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Nil(Process):
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("nil",)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Success(Process):
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("ok",)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Output(Process):
    subject: Name
    obj: Name
    cont: Process

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash(("out", self.subject, self.obj, self.cont))
        )

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Input(Process):
    subject: Name
    binder: Name
    cont: Process

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash(("in", self.subject, self.binder, self.cont))
        )

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("par", self.left, self.right)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Restrict(Process):
    binder: Name
    body: Process

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("new", self.binder, self.body)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Repl(Process):
    body: Process

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("repl", self.body)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Hole(Process):
    """Placeholder leaf used only inside contexts built by the encodings module."""

    index: int

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("hole", self.index)))

    def __hash__(self):
        return self._hash


NIL = Nil()
SUCCESS = Success()


@lru_cache(maxsize=500000)
def free_names(p: Process) -> NameSet:
    match p:
        case Nil() | Success() | Hole():
            return EMPTY
        case Output(subject=s, obj=o, cont=c):
            return free_names(c) | {s, o}
        case Input(subject=s, binder=b, cont=c):
            return (free_names(c) - {b}) | {s}
        case Par(left=l, right=r):
            return free_names(l) | free_names(r)
        case Restrict(binder=b, body=body):
            return free_names(body) - {b}
        case Repl(body=body):
            return free_names(body)
    raise TypeError(f"not a process: {p!r}")


@lru_cache(maxsize=500000)
def bound_names(p: Process) -> NameSet:
    match p:
        case Nil() | Success() | Hole():
            return EMPTY
        case Output(cont=c):
            return bound_names(c)
        case Input(binder=b, cont=c):
            return bound_names(c) | {b}
        case Par(left=l, right=r):
            return bound_names(l) | bound_names(r)
        case Restrict(binder=b, body=body):
            return bound_names(body) | {b}
        case Repl(body=body):
            return bound_names(body)
    raise TypeError(f"not a process: {p!r}")


def names(p: Process) -> NameSet:
    return free_names(p) | bound_names(p)


def fresh_name(avoid: Iterable[Name]) -> Name:
    """Least fresh-space name not in ``avoid``. Deterministic and pure."""
    taken = {n.key for n in avoid if isinstance(n, Name) and n.is_fresh}
    i = 0
    while i in taken:
        i += 1
    return fresh(i)


def _rename_binder(binder: Name, body: Process, avoid: NameSet):
    nb = fresh_name(avoid | {binder})
    return nb, substitute(body, binder, nb)


def substitute(p: Process, old: Name, new: Name) -> Process:
    """Capture-avoiding replacement of free occurrences of ``old`` by ``new``.

    Binders are renamed (into the fresh space) only when the replacement
    would actually capture, so ordinary cases keep their spelled names.
    """
    if old == new or old not in free_names(p):
        return p
    match p:
        case Output(subject=s, obj=o, cont=c):
            return Output(
                new if s == old else s,
                new if o == old else o,
                substitute(c, old, new),
            )
        case Input(subject=s, binder=b, cont=c):
            s2 = new if s == old else s
            if b == old:
                return Input(s2, b, c)
            if b == new and old in free_names(c):
                b2, c2 = _rename_binder(b, c, free_names(c) | {old, new})
                return Input(s2, b2, substitute(c2, old, new))
            return Input(s2, b, substitute(c, old, new))
        case Par(left=l, right=r):
            return Par(substitute(l, old, new), substitute(r, old, new))
        case Restrict(binder=b, body=body):
            if b == old:
                return p
            if b == new and old in free_names(body):
                b2, body2 = _rename_binder(b, body, free_names(body) | {old, new})
                return Restrict(b2, substitute(body2, old, new))
            return Restrict(b, substitute(body, old, new))
        case Repl(body=body):
            return Repl(substitute(body, old, new))
    raise TypeError(f"not a process: {p!r}")


def apply_renaming(p: Process, sigma: Mapping[Name, Name]) -> Process:
    """Simultaneous, possibly non-injective renaming of free names.

    ``sigma`` defaults to the identity outside its explicit domain.
    """
    relevant = {k: v for k, v in sigma.items() if k != v and k in free_names(p)}
    if not relevant:
        return p
    return _rename(p, relevant)


def _rename(p: Process, sigma: dict[Name, Name]) -> Process:
    def img(n: Name) -> Name:
        return sigma.get(n, n)

    match p:
        case Nil() | Success() | Hole():
            return p
        case Output(subject=s, obj=o, cont=c):
            return Output(img(s), img(o), _rename(c, sigma))
        case Par(left=l, right=r):
            return Par(_rename(l, sigma), _rename(r, sigma))
        case Repl(body=body):
            return Repl(_rename(body, sigma))
        case Input(subject=s, binder=b, cont=c):
            b2, c2 = _rename_under_binder(b, c, sigma)
            return Input(img(s), b2, c2)
        case Restrict(binder=b, body=body):
            b2, body2 = _rename_under_binder(b, body, sigma)
            return Restrict(b2, body2)
    raise TypeError(f"not a process: {p!r}")


def _rename_under_binder(b: Name, body: Process, sigma: dict[Name, Name]):
    inner = {k: v for k, v in sigma.items() if k != b and k in free_names(body)}
    if not inner:
        return b, body
    if any(v == b for v in inner.values()):
        # Some renamed free name would be captured by this binder.
        avoid = free_names(body) | set(inner.values())
        b2, body2 = _rename_binder(b, body, avoid)
        return b2, _rename(body2, inner)
    return b, _rename(body, inner)


@lru_cache(maxsize=400000)
def alpha_canonical(p: Process) -> Process:
    """Canonical representative of the alpha-class of ``p``.

    Binders are renumbered into the fresh space in preorder, starting above
    every fresh index that occurs free, so free names are never touched and
    the function is idempotent.
    """
    base = 0
    for n in free_names(p):
        if n.is_fresh:
            base = max(base, n.key + 1)
    counter = iter(range(base, base + 10**9))

    def go(q: Process, env: dict[Name, Name]) -> Process:
        match q:
            case Nil() | Success() | Hole():
                return q
            case Output(subject=s, obj=o, cont=c):
                return Output(env.get(s, s), env.get(o, o), go(c, env))
            case Input(subject=s, binder=b, cont=c):
                nb = fresh(next(counter))
                return Input(env.get(s, s), nb, go(c, {**env, b: nb}))
            case Par(left=l, right=r):
                return Par(go(l, env), go(r, env))
            case Restrict(binder=b, body=body):
                nb = fresh(next(counter))
                return Restrict(nb, go(body, {**env, b: nb}))
            case Repl(body=body):
                return Repl(go(body, env))
        raise TypeError(f"not a process: {q!r}")

    return go(p, {})


def alpha_eq(p: Process, q: Process) -> bool:
    return p == q or alpha_canonical(p) == alpha_canonical(q)


def is_async(p: Process) -> bool:
    """True iff every output prefix has an empty continuation."""
    match p:
        case Nil() | Success() | Hole():
            return True
        case Output(cont=c):
            return c == NIL
        case Input(cont=c):
            return is_async(c)
        case Par(left=l, right=r):
            return is_async(l) and is_async(r)
        case Restrict(body=body) | Repl(body=body):
            return is_async(body)
    raise TypeError(f"not a process: {p!r}")


def has_replication(p: Process) -> bool:
    match p:
        case Nil() | Success() | Hole():
            return False
        case Repl():
            return True
        case Output(cont=c) | Input(cont=c):
            return has_replication(c)
        case Par(left=l, right=r):
            return has_replication(l) or has_replication(r)
        case Restrict(body=body):
            return has_replication(body)
    raise TypeError(f"not a process: {p!r}")


def term_size(p: Process) -> int:
    """Constructor count; the empty process is size 0."""
    match p:
        case Nil():
            return 0
        case Success() | Hole():
            return 1
        case Output(cont=c) | Input(cont=c):
            return 1 + term_size(c)
        case Par(left=l, right=r):
            return 1 + term_size(l) + term_size(r)
        case Restrict(body=body) | Repl(body=body):
            return 1 + term_size(body)
    raise TypeError(f"not a process: {p!r}")


def par_all(parts: Iterable[Process]) -> Process:
    """Left-associated parallel composition; empty iterable gives 0."""
    out: Process | None = None
    for part in parts:
        out = part if out is None else Par(out, part)
    return NIL if out is None else out
