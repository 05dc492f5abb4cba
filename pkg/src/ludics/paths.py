"""Views, paths, duals, coherence of paths, visitable paths and the
incarnation pipeline computed from maximal cliques of dual paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence, Union

from .core import (
    DAIMON,
    Action,
    Address,
    Base,
    Design,
    LudicsError,
    NegRule,
    PosNode,
    ValidationReport,
    Violation,
    design_of_tree,
    format_chronicle,
    make_neg,
    make_pos,
)

_DAI = PosNode(DAIMON, ())


class PathError(LudicsError):
    pass


class BoundExceeded(LudicsError):
    """A bounded search hit its budget; the partial result is attached."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


NetBase = tuple  # tuple[Base, ...]


def net_base(base: Union[Base, Iterable[Base]]) -> NetBase:
    if isinstance(base, Base):
        return (base,)
    return tuple(base)


@dataclass(frozen=True)
class Path:
    base: NetBase
    actions: tuple = ()

    @staticmethod
    def on(base: Union[Base, Iterable[Base]], actions: Iterable[Action] = ()) -> Path:
        return Path(net_base(base), tuple(actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __str__(self) -> str:
        return format_chronicle(self.actions) if self.actions else "ε"


# --------------------------------------------------------------------- views

def _justifiers(s: Sequence[Action]) -> list[Optional[int]]:
    """Index of the justifier of each action (None if unjustified)."""
    opened: dict = {}
    out: list[Optional[int]] = []
    for k, a in enumerate(s):
        j = None
        if a.proper and a.address.steps:
            hit = opened.get(a.address)
            if hit is not None and s[hit].sign != a.sign:
                j = hit
        out.append(j)
        if a.proper:
            for b in a.opened():
                opened.setdefault(b, k)
    return out


def _initial(a: Action, base: NetBase) -> bool:
    if a.negative:
        return any(b.left == a.address for b in base)
    return any(a.address in b.right for b in base)


def _view_indices(s: Sequence[Action], base: Optional[NetBase] = None) -> list[list[int]]:
    """``out[k]`` lists the positions of the view of ``s[:k]``."""
    just = _justifiers(s)
    out: list[list[int]] = [[]]
    for k, a in enumerate(s):
        if a.positive:
            out.append(out[k] + [k])
            continue
        j = just[k]
        if j is None:
            if base is not None and not _initial(a, base):
                raise PathError(f"{a} is neither initial nor justified")
            out.append([k])
        else:
            out.append(out[j + 1] + [k])
    return out


def view(s: Union[Path, Sequence[Action]], base: Optional[Union[Base, NetBase]] = None) -> tuple:
    """The view of an action sequence.

    Without a base, an unjustified negative action is taken to be initial.
    """
    if isinstance(s, Path):
        base = s.base if base is None else base
        s = s.actions
    nb = net_base(base) if base is not None else None
    s = tuple(s)
    idx = _view_indices(s, nb)[len(s)]
    return tuple(s[i] for i in idx)


def prefix_views(s: Sequence[Action], base: Optional[NetBase] = None) -> list[tuple]:
    """Views of the non-empty prefixes of ``s``."""
    s = tuple(s)
    idx = _view_indices(s, base)
    return [tuple(s[i] for i in idx[k]) for k in range(1, len(s) + 1)]


# --------------------------------------------------------------- validation

def _sequent_of(a: Address, base: NetBase) -> Optional[int]:
    for i, b in enumerate(base):
        for x in b.addresses():
            if x.is_prefix_of(a):
                return i
    return None


def validate_path(p: Path) -> ValidationReport:
    """The six path conditions, each reported independently."""
    s, base = p.actions, p.base
    out: list[Violation] = []
    just = _justifiers(s)
    empty_left = [i for i, b in enumerate(base) if b.left is None]

    for k in range(1, len(s)):
        if s[k - 1].sign == s[k].sign:
            out.append(Violation("Alternation", f"{s[k - 1]} and {s[k]} have the same polarity"))

    for k, a in enumerate(s):
        if a.is_daimon:
            continue
        if just[k] is None and not _initial(a, base):
            out.append(Violation("Justification", f"{a} is neither an initial action nor justified"))

    try:
        views = _view_indices(s)
    except PathError:  # pragma: no cover - no base given here
        views = None
    for k, a in enumerate(s):
        if not (a.positive and a.proper):
            continue
        j = just[k]
        if j is not None:
            if s[j].negative and views is not None and j not in views[k]:
                out.append(Violation("Negative jump", f"{a} is justified by {s[j]}, which is not in the view"))
        elif _initial(a, base):
            i = next(i for i, b in enumerate(base) if a.address in b.right)
            if k == 0:
                if base[i].left is not None:
                    out.append(Violation("Negative jump", f"{a} is first but its sequent has a left address"))
            else:
                prev = s[k - 1]
                if not (prev.negative and prev.proper and _sequent_of(prev.address, base) == i):
                    out.append(Violation("Negative jump", f"initial {a} is not preceded by a negative action of its sequent"))

    seen: set = set()
    for a in s:
        if a.proper:
            if a.address in seen:
                out.append(Violation("Linearity", f"address {a.address} occurs twice"))
            seen.add(a.address)

    for k, a in enumerate(s):
        if a.is_daimon:
            if k != len(s) - 1:
                out.append(Violation("Daimon", "the daimon does not end the path"))
            if k == 0 and not empty_left:
                out.append(Violation("Daimon", "a path starting with the daimon needs an empty left side"))

    for i in empty_left:
        if not s:
            out.append(Violation("Totality", f"a path on {base[i]} is non-empty"))
        elif not (s[0].is_daimon or (s[0].positive and s[0].address in base[i].right)):
            out.append(Violation("Totality", f"a path on {base[i]} starts with the daimon or a positive action of it"))
    return ValidationReport(tuple(out))


def is_path(p: Path) -> bool:
    return validate_path(p).ok


# --------------------------------------------------------------------- duals

def dual_base(base: NetBase, actions: Sequence[Action] = ()) -> NetBase:
    """Counter base of a one-sequent base.

    The address played first (or the left one, or the least one) goes to the
    left of the dual sequent and the positive/negative sides are exchanged.
    """
    if len(base) != 1:
        raise PathError("duals are only computed for one-sequent bases")
    (b,) = base
    if b.left is not None:
        return (Base(None, frozenset({b.left}) | b.right),)
    first = next((a.address for a in actions if a.proper), None)
    if first is None or first not in b.right:
        first = min(b.right)
    return (Base(first, b.right - {first}),)


def opposite(actions: Iterable[Action]) -> tuple:
    return tuple(a.opposite() for a in actions)


def dual(p: Path) -> Path:
    """w✠ ↦ opposite(w), wκ⁺ ↦ opposite(wκ⁺)✠, wκ⁻ ↦ opposite(wκ⁻); ε ↦ ✠."""
    s = p.actions
    if any(a.is_daimon for a in s[:-1]):
        raise PathError("the daimon can only end a path")
    nb = dual_base(p.base, s)
    if not s:
        return Path(nb, (DAIMON,))
    if s[-1].is_daimon:
        return Path(nb, opposite(s[:-1]))
    if s[-1].positive:
        return Path(nb, opposite(s) + (DAIMON,))
    return Path(nb, opposite(s))


def dual_checked(p: Path) -> tuple[Path, ValidationReport]:
    q = dual(p)
    return q, validate_path(q)


# ----------------------------------------------------------------- coherence

def paths_coherent(p1: Path, p2: Path) -> bool:
    """Coherence of two paths on the same base."""
    s1, s2 = p1.actions, p2.actions
    if s1 and s2:
        a, b = s1[0], s2[0]
        if a.sign != b.sign or (a.positive and a != b):
            return False
    v1, v2 = _view_indices(s1), _view_indices(s2)

    def vw(s, v, k):
        return tuple(s[i] for i in v[k])

    pos1 = {}
    for k, a in enumerate(s1):
        if a.positive:
            pos1.setdefault(vw(s1, v1, k), set()).add(a)
    for k, b in enumerate(s2):
        if b.positive:
            for a in pos1.get(vw(s2, v2, k), ()):
                if a != b:
                    return False

    j1, j2 = _justifiers(s1), _justifiers(s2)

    def negs(s, v, j):
        out = []
        for k, a in enumerate(s):
            if not a.negative:
                continue
            w0 = () if j[k] is None else tuple(s[i] for i in v[j[k] + 1])
            later = {s[m].address for m in range(k + 1, len(s)) if k in v[m + 1] and s[m].proper}
            out.append((w0, a.address, later))
        return out

    for w1, x1, l1 in negs(s1, v1, j1):
        for w2, x2, l2 in negs(s2, v2, j2):
            if w1 == w2 and x1 != x2 and (l1 & l2):
                return False
    return True


# ---------------------------------------------------------------- shortening

def shorten_path(p: Path) -> set[Path]:
    """p itself and every prefix ending negative (or the empty prefix) followed by ✠."""
    s = p.actions
    out = {p}
    for k in range(len(s)):
        if s[k].positive and (k == 0 or s[k - 1].negative):
            if s[k].is_daimon and k == len(s) - 1:
                continue
            if k == 0 and not any(b.left is None for b in p.base):
                continue
            out.add(Path(p.base, s[:k] + (DAIMON,)))
    return out


def shorten_paths(ps: Iterable[Path]) -> set[Path]:
    out: set = set()
    for p in ps:
        out |= shorten_path(p)
    return out


def _shorten_tree(t) -> list:
    if isinstance(t, NegRule):
        options = [[(ram, q) for q in _shorten_tree(p)] for ram, p in t.branches]
        return [make_neg(t.address, list(choice)) for choice in product(*options)]
    if t.action.is_daimon:
        return [t]
    kept = [make_pos(t.action, list(rules)) for rules in product(*(_shorten_tree(r) for r in t.rules))]
    return kept + [_DAI]


def shorten_design(d: Design) -> set[Design]:
    """All designs obtained by cutting chronicles after negative actions with ✠."""
    if d.is_empty:
        return {d}
    return {design_of_tree(d.base, t) for t in _shorten_tree(d.tree)}


def shorten_designs(E: Iterable[Design]) -> set[Design]:
    out: set = set()
    for d in E:
        out |= shorten_design(d)
    return out


# ---------------------------------------------------------- paths of designs

def is_path_of(p: Union[Path, Sequence[Action]], d: Design) -> bool:
    """Every prefix view of ``p`` is a chronicle of ``d`` (and ``p`` is a path)."""
    s = p.actions if isinstance(p, Path) else tuple(p)
    chs = d.all_chronicles
    try:
        views = prefix_views(s, net_base(d.base))
    except PathError:
        return False
    return all(v in chs for v in views)


def paths_of_design(d: Design, positive_only: bool = False, limit: Optional[int] = None) -> set[Path]:
    """Every path whose prefix views are chronicles of ``d``.

    ``positive_only`` keeps the paths ending with a positive action.
    ``limit`` bounds the number of paths explored.
    """
    nb = net_base(d.base)
    chs = d.all_chronicles
    by_view: dict = {}
    for c in chs:
        by_view.setdefault(c[:-1], set()).add(c[-1])
    out: set = set()
    count = 0

    def grow(s: tuple, vidx: list, used: frozenset):
        nonlocal count
        count += 1
        if limit is not None and count > limit:
            raise BoundExceeded(f"more than {limit} paths of a design", out)
        p = Path(nb, s)
        if s and validate_path(p).ok:
            if not positive_only or s[-1].positive:
                out.add(p)
        elif not s and validate_path(p).ok and not positive_only:
            out.add(p)
        if s and s[-1].is_daimon:
            return
        last_pos = not s or s[-1].negative
        candidates: set = set()
        if last_pos:
            candidates = by_view.get(tuple(s[i] for i in vidx[-1]), set())
        else:
            # the next negative action can answer any positive action played so far
            for k in range(len(s)):
                if s[k].positive:
                    candidates |= {a for a in by_view.get(tuple(s[i] for i in vidx[k + 1]), ()) if a.negative}
            if not s:
                candidates = by_view.get((), set())
        for a in sorted(candidates, key=lambda x: x.sort_key()):
            if a.proper and a.address in used:
                continue
            t = s + (a,)
            try:
                v = _view_indices(t, nb)
            except PathError:
                continue
            if tuple(t[i] for i in v[-1]) not in chs:
                continue
            if not _prefix_ok(Path(nb, t)):
                continue
            grow(t, v, used | ({a.address} if a.proper else set()))

    grow((), [[]], frozenset())
    return out


def _prefix_ok(p: Path) -> bool:
    """Path conditions that can no longer be repaired by extending ``p``."""
    rep = validate_path(p)
    return not (rep.conditions() - {"Totality"})


# ------------------------------------------------------------- covering paths

def covering_path(d: Design, order: Optional[Sequence[int]] = None) -> Path:
    """Stitch the maximal chronicles of ``d`` in the given order.

    Each chronicle is entered at its first action differing from the
    chronicles already visited, which must be a negative action.
    """
    chs = list(d.chronicles)
    order = list(range(len(chs))) if order is None else list(order)
    if sorted(order) != list(range(len(chs))):
        raise PathError("order must be a permutation of the maximal chronicles")
    seq: list = []
    visited: list = []
    for i in order:
        c = chs[i]
        k = 0
        for v in visited:
            m = 0
            while m < len(c) and m < len(v) and c[m] == v[m]:
                m += 1
            k = max(k, m)
        if visited and (k >= len(c) or not c[k].negative):
            raise PathError(f"chronicle {format_chronicle(c)} does not branch off on a negative action")
        seq.extend(c[k:])
        visited.append(c)
    p = Path(net_base(d.base), tuple(seq))
    rep = validate_path(p)
    if not rep.ok:
        raise PathError(f"the stitched sequence is not a path: {rep}")
    return p


def covers(p: Path, d: Design) -> bool:
    return set(p.actions) == d.actions() and is_path_of(p, d)


# ----------------------------------------------------------- visitable paths

def _negative_stable(p: Path, E: Sequence[Design]) -> bool:
    s = p.actions
    for k, a in enumerate(s):
        if not a.negative:
            continue
        w = s[:k]
        for D in E:
            if is_path_of(w, D) and not is_path_of(s[: k + 1], D):
                return False
    return True


def is_visitable(p: Path, E: Sequence[Design]) -> bool:
    """Dual is a path and every negative step is forced in every design admitting the prefix."""
    try:
        if not is_path(dual(p)):
            return False
    except PathError:
        return False
    return _negative_stable(p, E)


def visitable_paths_naive(E: Iterable[Design], depth: Optional[int] = None, limit: Optional[int] = None) -> set[Path]:
    """Visitable paths of E by filtering the paths of each design (reference version)."""
    E = list(E)
    cand: set = set()
    for D in E:
        cand |= paths_of_design(D, limit=limit)
    if depth is not None:
        cand = {p for p in cand if len(p) <= depth}
    return {p for p in cand if is_visitable(p, E)}


def visitable_paths(E: Iterable[Design], depth: Optional[int] = None, limit: Optional[int] = None) -> set[Path]:
    """Visitable paths of E, optionally only those of length at most ``depth``.

    One search over all designs at once: the designs admitting the current
    prefix are carried along, a positive step splits them by the action they
    play, and a negative step is kept only when every one of them admits it.
    ``limit`` bounds the number of prefixes explored.
    """
    E = list(E)
    if not E:
        return set()
    bases = {d.base for d in E}
    if len(bases) != 1:
        raise PathError("designs on different bases")
    (base,) = bases
    nb = net_base(base)
    vid: dict = {}  # interned views
    nxt_pos: list = []
    nxt_neg: list = []
    for d in E:
        pos: dict = {}
        neg: dict = {}
        for c in d.all_chronicles:
            k = vid.setdefault(c[:-1], len(vid))
            if c[-1].positive:
                pos[k] = c[-1]
            else:
                neg.setdefault(k, set()).add(c[-1])
        nxt_pos.append(pos)
        nxt_neg.append(neg)
    out: set = set()
    count = 0

    def record(s: tuple):
        p = Path(nb, s)
        if not s and base.is_positive:
            return
        try:
            ok = validate_path(p).ok and validate_path(dual(p)).ok
        except PathError:
            ok = False
        if ok:
            out.add(p)

    def grow(s: tuple, views: list, used: frozenset, alive: list):
        nonlocal count
        count += 1
        if limit is not None and count > limit:
            raise BoundExceeded(f"more than {limit} prefixes explored", out)
        record(s)
        if (s and s[-1].is_daimon) or (depth is not None and len(s) >= depth):
            return
        if (not s and base.is_positive) or (s and s[-1].negative):
            k = vid.get(views[-1])
            if k is None:
                return
            split: dict = {}
            for i in alive:
                a = nxt_pos[i].get(k)
                if a is not None:
                    split.setdefault(a, []).append(i)
            for a in sorted(split, key=lambda x: x.sort_key()):
                if a.proper and a.address in used:
                    continue
                grow(s + (a,), views + [views[-1] + (a,)], used | {a.address} if a.proper else used, split[a])
            return
        # negative step: answer any positive action of s, or start when s is empty
        starts = [len(s)] if not s else [j + 1 for j in range(len(s)) if s[j].positive]
        for j in starts:
            k = vid.get(views[j])
            if k is None:
                continue
            common = None
            for i in alive:
                got = nxt_neg[i].get(k, set())
                common = set(got) if common is None else common & got
                if not common:
                    break
            for a in sorted(common or (), key=lambda x: x.sort_key()):
                if a.address in used:
                    continue
                grow(s + (a,), views + [views[j] + (a,)], used | {a.address}, alive)

    grow((), [()], frozenset(), list(range(len(E))))
    return out


# ------------------------------------------------------------ clique search

@dataclass(frozen=True)
class Clique:
    paths: frozenset  # dual paths forming the clique
    sources: frozenset  # the visitable paths they are duals of
    design: Design
    saturated: bool


def _steps(s: tuple) -> list[tuple]:
    """(view before, positive action) for every positive action of ``s``."""
    v = _view_indices(s)
    return [(tuple(s[i] for i in v[k]), a) for k, a in enumerate(s) if a.positive]


def maximal_cliques_naive(Q: Iterable[Path], budget: Optional[int] = None) -> list[frozenset]:
    """Maximal sets of pairwise coherent paths of Q (reference version).

    Two paths of one base are incoherent exactly when they choose different
    positive actions after the same view (or start with different positive
    actions), so a clique is fixed by one positive choice per view reached.
    The search enumerates those choice functions and keeps the maximal sets.
    """
    Q = sorted(set(Q), key=lambda p: (len(p), [a.sort_key() for a in p.actions]))
    steps = [_steps(p.actions) for p in Q]
    options: dict = {}
    for st in steps:
        for v, a in st:
            options.setdefault(v, set()).add(a)
    results: set = set()
    visited = 0

    def status(assign: dict):
        frontier = set()
        included = []
        for k, st in enumerate(steps):
            ok = True
            for v, a in st:
                got = assign.get(v)
                if got is None:
                    frontier.add(v)
                    ok = False
                    break
                if got != a:
                    ok = False
                    break
            if ok:
                included.append(k)
        return frontier, included

    def search(assign: dict):
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise BoundExceeded(f"clique search exceeded {budget} nodes", sorted(results, key=len))
        frontier, included = status(assign)
        if frontier:
            v = min(frontier, key=lambda x: (len(x), [a.sort_key() for a in x]))
            for a in sorted(options[v], key=lambda x: x.sort_key()):
                assign[v] = a
                search(assign)
                del assign[v]
            return
        witnessed = {v for k in included for v, _ in steps[k]}
        inc = set(included)
        for k, st in enumerate(steps):
            if k in inc:
                continue
            if not any(v in witnessed and assign.get(v) != a for v, a in st):
                return  # Q[k] could be added: not maximal
        results.add(frozenset(Q[k] for k in included))

    search({})
    return sorted(results, key=lambda c: sorted(str(p) for p in c))


def _clique_search(Q: list, budget: Optional[int], patient: bool) -> Iterator[tuple]:
    """Yield (indices of Q, chronicles) for each maximal clique of Q.

    Paths wait at the first view whose positive choice is still open.
    Fixing a choice there moves the waiting paths on, or drops those that
    disagree, and is undone on backtracking.  Only choices wanted by some
    waiting path are tried; with ``patient`` the daimon is offered only
    when nothing else is.
    """
    raw = [_steps(p.actions) for p in Q]
    views = sorted({v for st in raw for v, _ in st}, key=lambda v: (len(v), [a.sort_key() for a in v]))
    vid = {v: i for i, v in enumerate(views)}  # smaller id = shorter view
    steps = [[(vid[v], a) for v, a in st] for st in raw]
    n = len(Q)
    pos = [0] * n
    state = [0] * n  # 0 waiting, 1 dropped, 2 included
    wit = [0] * len(views)  # included paths through each view
    waiting: dict = {}
    assign: dict = {}
    log: list = []
    visited = 0

    def advance(k: int):
        st = steps[k]
        i = pos[k]
        while i < len(st):
            v, a = st[i]
            got = assign.get(v)
            if got is None:
                pos[k] = i
                waiting.setdefault(v, []).append(k)
                log.append((0, v))
                return
            if got != a:
                pos[k] = i
                state[k] = 1
                return
            i += 1
        pos[k] = i
        state[k] = 2
        for v, _ in st:
            wit[v] += 1

    for k in range(n):
        log.append((1, k, 0))
        advance(k)
    log.clear()

    def undo(mark: int):
        while len(log) > mark:
            e = log.pop()
            if e[0] == 0:
                waiting[e[1]].pop()
                if not waiting[e[1]]:
                    del waiting[e[1]]
            else:
                k = e[1]
                if state[k] == 2:
                    for v, _ in steps[k]:
                        wit[v] -= 1
                state[k] = 0
                pos[k] = e[2]

    def maximal() -> bool:
        for k in range(n):
            if state[k] != 1:
                continue
            st = steps[k]
            v, a = st[pos[k]]
            if wit[v]:
                continue
            if not any(wit[w] and assign.get(w) not in (None, b) for w, b in st):
                return False
        return True

    def search():
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise BoundExceeded(f"clique search exceeded {budget} nodes")
        if not waiting:
            if maximal():
                inc = tuple(k for k in range(n) if state[k] == 2)
                chs = frozenset(views[v] + (a,) for v, a in assign.items() if wit[v])
                yield inc, chs
            return
        v = min(waiting)
        here = waiting.pop(v)
        opts = {steps[k][pos[k]][1] for k in here}
        if patient and len(opts) > 1:
            opts.discard(DAIMON)
        for a in sorted(opts, key=lambda x: x.sort_key()):
            mark = len(log)
            assign[v] = a
            for k in here:
                log.append((1, k, pos[k]))
                advance(k)
            yield from search()
            del assign[v]
            undo(mark)
        waiting[v] = here

    yield from search()


def maximal_cliques(Q: Iterable[Path], budget: Optional[int] = None, patient: bool = False) -> list[frozenset]:
    """Maximal sets of pairwise coherent paths of Q.

    Two paths of one base are incoherent exactly when they choose different
    positive actions after the same view (or start with different positive
    actions), so a clique is fixed by one positive choice per view reached.
    With ``patient`` only the cliques that never choose the daimon where a
    proper action is available are returned.
    """
    Q = sorted(set(Q), key=lambda p: (len(p), [a.sort_key() for a in p.actions]))
    results = {frozenset(Q[k] for k in inc) for inc, _ in _clique_search(Q, budget, patient)}
    return sorted(results, key=lambda c: sorted(str(p) for p in c))


def design_of_paths(paths: Iterable[Path], base: Base) -> Design:
    """The design made of the views of the non-empty prefixes of the paths."""
    chs = set()
    for p in paths:
        chs.update(prefix_views(p.actions))
    return Design.of(base, chs)


def _prefix_set(paths: Iterable[Path]) -> set:
    out = set()
    for p in paths:
        for k in range(len(p.actions) + 1):
            out.add(p.actions[:k])
    return out


def saturated(C: Iterable[Path], V: Iterable[Path]) -> bool:
    """Every positive proper extension in V of a prefix of C is a prefix of C."""
    pref = _prefix_set(C)
    for p in V:
        s = p.actions
        if s and s[-1].positive and s[-1].proper and s[:-1] in pref and s not in pref:
            return False
    return True


def cliques_of(V: Iterable[Path], budget: Optional[int] = None, patient: bool = False) -> list[Clique]:
    """Maximal cliques of the duals of V, with their designs and saturation."""
    V = set(V)
    if not V:
        return []
    duals: dict = {}
    for p in V:
        duals.setdefault(dual(p), set()).add(p)
    bases = {q.base for q in duals}
    if len(bases) != 1:
        raise PathError("visitable paths on different bases")
    (nb,) = bases
    Q = sorted(duals, key=lambda p: (len(p), [a.sort_key() for a in p.actions]))
    # saturation bookkeeping on interned prefixes of V
    pid: dict = {}
    children: dict = {}
    for p in V:
        s = p.actions
        for k in range(len(s) + 1):
            pid.setdefault(s[:k], len(pid))
        if s and s[-1].positive and s[-1].proper:
            children.setdefault(pid[s[:-1]], []).append(pid[s])
    anc = [frozenset(pid[p.actions[:k]] for p in duals[q] for k in range(len(p.actions) + 1)) for q in Q]
    out = []
    seen: set = set()
    for inc, chs in _clique_search(Q, budget, patient):
        if inc in seen:
            continue
        seen.add(inc)
        pref = frozenset().union(*(anc[k] for k in inc))
        sat = all(c in pref for x in pref for c in children.get(x, ()))
        cl = frozenset(Q[k] for k in inc)
        src = frozenset(p for q in cl for p in duals[q])
        out.append(Clique(cl, src, Design.of(nb[0], chs), sat))
    return out


# ---------------------------------------------------------------- pipeline

@dataclass
class PipelineResult:
    visitable: set = field(default_factory=set)  # V_E
    orthogonal: set = field(default_factory=set)  # |E⊥|
    visitable_dual: set = field(default_factory=set)  # V' = V_|E⊥|
    bi_orthogonal: set = field(default_factory=set)  # |E⊥⊥|
    cliques: int = 0
    cliques_dual: int = 0
    unsaturated: int = 0
    notes: list = field(default_factory=list)

    def counts(self) -> dict:
        return {
            "visitable": len(self.visitable),
            "cliques": self.cliques,
            "incarnation_orthogonal": len(self.orthogonal),
            "visitable_dual": len(self.visitable_dual),
            "cliques_dual": self.cliques_dual,
            "incarnation_biorthogonal": len(self.bi_orthogonal),
            "unsaturated": self.unsaturated,
        }


def _incarnation_step(V: set, budget: Optional[int], patient: bool = False) -> tuple[set, int, int]:
    cl = cliques_of(V, budget=budget, patient=patient)
    keep = {c.design for c in cl if c.saturated}
    return keep, len(cl), sum(1 for c in cl if not c.saturated)


def incarnation_pipeline(
    E: Iterable[Design],
    depth: Optional[int] = None,
    budget: Optional[int] = None,
    core: bool = False,
) -> PipelineResult:
    """|E⊥| and |E⊥⊥| from the maximal cliques of dual visitable paths.

    With ``core`` the first round keeps only the cliques that never play the
    daimon where a proper action is available.  Every other element of |E⊥|
    is a daimon-shortening of one of those, so the visitable paths of |E⊥|
    are the kept designs' visitable paths closed under shortening, and the
    second round is unchanged.  Finite-stability holds trivially for the
    finite path sets used here.
    """
    E = list(E)
    res = PipelineResult()
    res.notes.append("finite-stability is vacuous on finite path sets")
    res.visitable = visitable_paths(E, limit=budget)
    res.orthogonal, res.cliques, u1 = _incarnation_step(res.visitable, budget, patient=core)
    vd = visitable_paths(res.orthogonal, limit=budget)
    res.visitable_dual = shorten_paths(vd) if core else vd
    res.bi_orthogonal, res.cliques_dual, u2 = _incarnation_step(res.visitable_dual, budget)
    res.unsaturated = u1 + u2
    if core:
        res.notes.append("first round restricted to daimon-maximal designs")
    if depth is not None:
        res.notes.append(f"computed for generators truncated at depth {depth}")
    return res
