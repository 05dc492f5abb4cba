"""Depth-bounded behaviour approximation: orthogonal sets, incarnation and
principality.

Two independent ways of computing |E⊥| and |E⊥⊥| are provided.  The first
goes through visitable paths and cliques (see ``paths``).  The second is a
search over counter-designs driven by interaction: a candidate is grown
only where a generator's play reaches it, so every candidate is material by
construction, and every branch that lets a generator fail is pruned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Optional, Sequence, Union

from .core import (
    DAIMON,
    Action,
    Address,
    Base,
    Design,
    LudicsError,
    NegRule,
    PosNode,
    design_of_tree,
    dumps,
    make_neg,
    make_pos,
)
from .interaction import normalize, orthogonal
from .paths import BoundExceeded, incarnation_pipeline, shorten_designs

DEFAULT_DEPTH = 5
DEFAULT_WIDTH = 2
DEFAULT_BUDGET = 2_000_000


class NotInBehaviour(LudicsError):
    """The design is not orthogonal to ``witness``."""

    def __init__(self, message: str, witness: Optional[Design] = None):
        super().__init__(message)
        self.witness = witness


class RouteDisagreement(LudicsError):
    pass


def counter_base(base: Base) -> Base:
    """Base of the designs forming a closed net with a design on a unary base."""
    if base.is_positive:
        if len(base.right) != 1:
            raise LudicsError(f"orthogonals are computed for unary bases, not {base}")
        (a,) = base.right
        return Base(a, frozenset())
    if base.right:
        raise LudicsError(f"orthogonals are computed for unary bases, not {base}")
    return Base(None, frozenset({base.left}))


def _subsets(width: int) -> list[frozenset]:
    items = range(width)
    out = [frozenset(c) for k in range(width + 1) for c in combinations(items, k)]
    return sorted(out, key=lambda r: (len(r), sorted(r)))


def sort_designs(ds: Iterable[Design]) -> list[Design]:
    return sorted(set(ds), key=dumps)


# ------------------------------------------------------- exhaustive enumeration

def all_designs(base: Base, depth: int, width: int, budget: Optional[int] = DEFAULT_BUDGET) -> list[Design]:
    """Every design on ``base`` whose chronicles have length at most ``depth``
    and whose ramifications are subsets of {0..width-1}."""
    rams = _subsets(width)
    count = 0

    def tick():
        nonlocal count
        count += 1
        if budget is not None and count > budget:
            raise BoundExceeded(f"more than {budget} designs within depth {depth}, width {width}")

    def positives(avail: tuple, used: frozenset, left: int) -> list:
        # avail: addresses the chronicle may still play on
        out = [PosNode(DAIMON, ())]
        if left <= 0:
            return out
        for a in avail:
            if a in used:
                continue
            for r in rams:
                kids = [a.child(i) for i in sorted(r)]
                rest = tuple(x for x in avail if x != a)
                if left == 1:
                    out.append(make_pos(Action("+", a, r)))
                    tick()
                    continue
                choices = [negatives(k, rest, used | {a}, left - 1) for k in kids]
                for rules in product(*choices):
                    out.append(make_pos(Action("+", a, r), [x for x in rules if x.branches]))
                    tick()
        return out

    def negatives(a: Address, avail: tuple, used: frozenset, left: int) -> list:
        # every subset of ramifications, each followed by any positive
        per = []
        for r in rams:
            kids = tuple(a.child(i) for i in sorted(r))
            per.append([None] + positives(avail + kids, used | {a}, left - 1))
        out = []
        for combo in product(*per):
            out.append(make_neg(a, [(r, p) for r, p in zip(rams, combo) if p is not None]))
            tick()
        return out

    if base.is_positive:
        trees = positives(tuple(sorted(base.right)), frozenset(), depth)
    else:
        if depth <= 0:
            return [Design(base, ())]
        trees = negatives(base.left, tuple(sorted(base.right)), frozenset(), depth)
    return [design_of_tree(base, t) for t in trees]


# ----------------------------------------------------------- material search

_FAIL, _OK, _HOLE = "fail", "ok", "hole"


class _Chronicles:
    """Interned chronicles of the counter-design: an id stands for (parent id, last action)."""

    def __init__(self):
        self.ids: dict = {}
        self.parent: list = [None]
        self.last: list = [None]
        self._tuples: dict = {0: ()}
        self._keys: dict = {}

    def ext(self, c: int, a: Action) -> int:
        k = (c, a)
        i = self.ids.get(k)
        if i is None:
            i = self.ids[k] = len(self.parent)
            self.parent.append(c)
            self.last.append(a)
        return i

    def neg(self, c: int, address: Address, ram: frozenset) -> int:
        k = (c, address, ram)
        i = self.ids.get(k)
        if i is None:
            i = self.ids[k] = self.ext(c, Action("-", address, ram))
        return i

    def chronicle(self, c: int) -> tuple:
        t = self._tuples.get(c)
        if t is None:
            t = self._tuples[c] = self.chronicle(self.parent[c]) + (self.last[c],)
        return t

    def key(self, c: int) -> tuple:
        k = self._keys.get(c)
        if k is None:
            ch = self.chronicle(c)
            k = self._keys[c] = (len(ch), [a.sort_key() for a in ch])
        return k


def _start(net: Sequence[Design], xbases: Sequence[Base], tab: _Chronicles) -> tuple:
    """Interaction state of a generator net against the empty counter-net."""
    dpend: dict = {}
    node = None
    for g in net:
        if g.base.is_positive:
            node = g.tree
        else:
            dpend[g.base.left] = g.tree
    xopen = {xb.left: 0 for xb in xbases if not xb.is_positive}
    if node is not None:
        return _step(node, xopen, dpend, tab)
    return (_HOLE, 0, xopen, dpend)


def _step(node: PosNode, xopen: dict, dpend: dict, tab: _Chronicles) -> tuple:
    """Play the generator's positive ``node``; ``xopen`` and ``dpend`` are updated in place."""
    act = node.action
    if act.is_daimon:
        return (_OK,)
    pre = xopen.pop(act.address, None)
    if pre is None:
        return (_FAIL,)
    for r in node.rules:
        dpend[r.address] = r
    return (_HOLE, tab.neg(pre, act.address, act.ramification), xopen, dpend)


def _resume(state: tuple, assign: dict, tab: _Chronicles) -> tuple:
    """Continue a generator stopped at a hole that ``assign`` may now fill.

    ``assign`` maps chronicles of the counter-net ending with a negative
    action (or the empty one) to its next positive action.  Returns ok,
    fail, or (hole, chronicle, xopen, dpend) for the next unassigned
    chronicle that the play reaches.
    """
    _, xchron, xopen, dpend = state
    xopen, dpend = dict(xopen), dict(dpend)
    while True:
        choice = assign.get(xchron)
        if choice is None:
            return (_HOLE, xchron, xopen, dpend)
        if choice.is_daimon:
            return (_OK,)
        here = tab.ext(xchron, choice)
        for b in choice.opened():
            xopen[b] = here
        rule = dpend.pop(choice.address, None)
        if rule is None:
            return (_FAIL,)
        node = rule.branch(choice.ramification)
        if node is None:
            return (_FAIL,)
        r = _step(node, xopen, dpend, tab)
        if r[0] != _HOLE:
            return r
        xchron = r[1]


def _available(chron: tuple, initial: Sequence[Address]) -> list[Address]:
    used = {a.address for a in chron if a.proper}
    out = [a for a in initial if a not in used]
    for a in chron:
        if a.negative:
            out.extend(b for b in a.opened() if b not in used)
    return out


def _check_closed(net: Sequence[Design], xbases: Sequence[Base]) -> None:
    seen: dict = {}
    for b in [g.base for g in net] + list(xbases):
        if b.left is not None:
            seen.setdefault(b.left, []).append("left")
        for a in b.right:
            seen.setdefault(a, []).append("right")
    bad = sorted(str(a) for a, sides in seen.items() if sorted(sides) != ["left", "right"])
    if bad:
        raise LudicsError(f"generators and counter bases do not form closed nets (at {', '.join(bad)})")


def material_search(
    nets: Sequence[Sequence[Design]],
    xbases: Sequence[Base],
    width: int = DEFAULT_WIDTH,
    budget: Optional[int] = DEFAULT_BUDGET,
    patient: bool = False,
    daimon: bool = True,
) -> list[tuple]:
    """Material counter-nets on ``xbases`` orthogonal to every generator net.

    Interaction-driven: holes of the candidate are discovered by running it
    against every generator net, and each hole is filled with the daimon or
    with a positive action within the width that no generator reaching the
    hole refuses outright.  ``patient`` uses the daimon only at holes where
    no such action exists; ``daimon=False`` never uses it.  Each result is
    a tuple with one design per counter base.
    """
    nets = [tuple(n) for n in nets]
    xbases = tuple(xbases)
    if not nets:
        raise LudicsError("the material search needs at least one generator")
    shapes = {tuple(g.base for g in n) for n in nets}
    if len(shapes) != 1:
        raise LudicsError("generators must share one base")
    _check_closed(nets[0], xbases)
    if sum(1 for b in xbases if b.is_positive) > 1:
        raise LudicsError("at most one counter design is positive")
    rams = _subsets(width)
    positive_part = next((b for b in xbases if b.is_positive), None)
    by_left = {b.left: b for b in xbases if not b.is_positive}
    tab = _Chronicles()
    results: list = []
    nodes = 0

    def initial(ch: tuple) -> list:
        part = positive_part if not ch or ch[0].positive else by_left[ch[0].address]
        return sorted(part.right)

    def build(assign: dict) -> tuple:
        kids: dict = {}
        for c in assign:
            if c:
                kids.setdefault(tab.parent[c], []).append(c)

        def pos(c: int) -> PosNode:
            a = assign[c]
            by: dict = {}
            for k in kids.get(tab.ids.get((c, a)), ()):
                n = tab.last[k]
                by.setdefault(n.address, []).append((n.ramification, pos(k)))
            return make_pos(a, [make_neg(b, br) for b, br in by.items()])

        out = []
        for xb in xbases:
            if xb.is_positive:
                out.append(Design._of_tree(xb, pos(0)))
            else:
                first = [(tab.last[k].ramification, pos(k)) for k in kids.get(0, ()) if tab.last[k].address == xb.left]
                out.append(Design._of_tree(xb, make_neg(xb.left, first)))
        return tuple(out)

    avail: dict = {}

    def search(assign: dict, holes: dict):
        # holes: unassigned chronicle -> interaction states of the generators stopped there
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BoundExceeded(f"material search exceeded {budget} nodes", [build(a) for a in results])
        if not holes:
            results.append(dict(assign))
            return
        h = min(holes, key=tab.key)
        states = holes[h]
        rest = {c: s for c, s in holes.items() if c != h}
        if h not in avail:
            ch = tab.chronicle(h)
            avail[h] = [Action("+", a, r) for a in _available(ch, initial(ch)) for r in rams]
        proper = [
            p for p in avail[h]
            if all(p.address in st[3] and st[3][p.address].branch(p.ramification) is not None for st in states)
        ]
        if not daimon or (patient and proper):
            choices = proper
        else:
            choices = [DAIMON] + proper
        for ch in choices:
            assign[h] = ch
            nxt = dict(rest)
            fresh: set = set()
            ok = True
            for st in states:
                r = _resume(st, assign, tab)
                if r[0] == _FAIL:
                    ok = False
                    break
                if r[0] == _HOLE:
                    c = r[1]
                    if c not in fresh:  # lists in ``rest`` are shared with the caller
                        nxt[c] = list(nxt.get(c, ()))
                        fresh.add(c)
                    nxt[c].append(r)
            if ok:
                search(assign, nxt)
            del assign[h]

    holes: dict = {}
    for n in nets:
        r = _start(n, xbases, tab)
        if r[0] == _FAIL:
            return []
        if r[0] == _HOLE:
            holes.setdefault(r[1], []).append(r)
    search({}, holes)
    return [build(a) for a in results]


def material_orthogonals(
    E: Sequence[Design],
    width: int = DEFAULT_WIDTH,
    budget: Optional[int] = DEFAULT_BUDGET,
    patient: bool = False,
    sort: bool = True,
) -> list[Design]:
    """All material designs of E⊥ whose ramifications lie in {0..width-1}.

    The single-design case of ``material_search``.  ``sort=False`` skips the
    canonical ordering of the result.
    """
    E = list(E)
    if not E:
        raise LudicsError("the material search needs at least one generator")
    bases = {d.base for d in E}
    if len(bases) != 1:
        raise LudicsError("generators must share one base")
    (gbase,) = bases
    out = [t[0] for t in material_search([(d,) for d in E], (counter_base(gbase),), width, budget, patient)]
    return sort_designs(out) if sort else out


# ----------------------------------------------------------- enumeration API

def enumerate_orthogonal(
    E: Iterable[Design],
    depth: int = DEFAULT_DEPTH,
    width: int = DEFAULT_WIDTH,
    mode: str = "all",
    base: Optional[Base] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> list[Design]:
    """Designs orthogonal to every element of E.

    ``mode="all"``: every design on the counter base with chronicles of length
    at most ``depth`` and ramifications in {0..width-1}.  ``mode="material"``:
    only the material elements of E⊥ (``depth`` is then the generators' own
    truncation and is not used).
    """
    E = list(E)
    if mode == "material":
        return material_orthogonals(E, width, budget)
    if mode != "all":
        raise LudicsError(f"unknown mode {mode!r}")
    if base is None:
        if not E:
            raise LudicsError("a base is needed when E is empty")
        base = counter_base(E[0].base)
    cands = all_designs(base, depth, width, budget)
    return sort_designs(c for c in cands if all(orthogonal(c, d) for d in E))


# ---------------------------------------------------------------- incarnation

def visited(d: Design, partner: Design) -> Optional[Design]:
    """Part of ``d`` visited by its interaction with ``partner`` (None if not orthogonal)."""
    trace: list = []
    out = normalize([d, partner], trace=trace)
    if not (isinstance(out, Design) and out.chronicles == ((DAIMON,),)):
        return None
    chs = [s.chronicle for s in trace if s.origin == 0 and s.action.positive]
    return Design.of(d.base, chs)


@dataclass
class BehaviourApprox:
    """The behaviour generated by ``generators``, known through |generators⊥|."""

    generators: list
    width: int = DEFAULT_WIDTH
    depth: Optional[int] = None
    orthogonal: Optional[list] = None

    def __post_init__(self):
        self.generators = list(self.generators)
        if self.orthogonal is None:
            self.orthogonal = material_orthogonals(self.generators, self.width)
        for f in self.orthogonal:
            for g in self.generators:
                if not orthogonal(g, f):
                    raise LudicsError("cached orthogonal element fails against a generator")

    def __contains__(self, d: Design) -> bool:
        return all(orthogonal(d, f) for f in self.orthogonal)


def incarnation_of(d: Design, B: BehaviourApprox) -> Design:
    """Smallest sub-design of ``d`` orthogonal to every element of |B⊥|.

    It is the union of the parts of ``d`` visited against those elements.
    """
    chs: set = set()
    for f in B.orthogonal:
        v = visited(d, f)
        if v is None:
            raise NotInBehaviour("the design is not orthogonal to an element of the orthogonal", f)
        chs.update(v.chronicles)
    return Design.of(d.base, chs)


def is_material(d: Design, B: BehaviourApprox) -> bool:
    return incarnation_of(d, B) == d


def incarnation_by_deletion(d: Design, B: BehaviourApprox) -> Design:
    """Incarnation as the intersection of all sub-designs in B (brute force)."""
    if d not in B:
        raise NotInBehaviour("the design is not in the behaviour")
    subs = [s for s in sub_designs(d) if s in B]
    common = frozenset.intersection(*(s.all_chronicles for s in subs))
    return Design.of(d.base, common)


def sub_designs(d: Design) -> list[Design]:
    """Every sub-design of ``d`` (prefix-closed, same base, valid)."""
    if d.is_empty:
        return [d]

    def pos(p: PosNode) -> list:
        if not p.rules:
            return [p]
        return [make_pos(p.action, [r for r in rules if r.branches]) for rules in product(*(neg(r) for r in p.rules))]

    def neg(r: NegRule) -> list:
        per = [[None] + pos(p) for _, p in r.branches]
        out = []
        for combo in product(*per):
            out.append(make_neg(r.address, [(ram, p) for (ram, _), p in zip(r.branches, combo) if p is not None]))
        return out

    t = d.tree
    trees = pos(t) if isinstance(t, PosNode) else neg(t)
    return [design_of_tree(d.base, x) for x in trees]


# --------------------------------------------------------------- principality

@dataclass
class PrincipalityReport:
    family: str
    depth: int
    width: int
    is_daimon_free: bool
    generators: list = field(default_factory=list)
    orthogonal_incarnation: list = field(default_factory=list)
    incarnation_at_depth: list = field(default_factory=list)
    shortening: list = field(default_factory=list)
    pipeline_counts: dict = field(default_factory=dict)
    routes_agree: Optional[bool] = None
    core: bool = True
    verdict: str = "unknown"  # "equal", "counterexample", "not daimon-free"
    counterexample: Optional[Design] = None
    notes: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.verdict == "equal"

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "depth": self.depth,
            "width": self.width,
            "is_daimon_free": self.is_daimon_free,
            "generators": len(self.generators),
            "orthogonal_incarnation": len(self.orthogonal_incarnation),
            "incarnation_at_depth": len(self.incarnation_at_depth),
            "shortening": len(self.shortening),
            "pipeline": self.pipeline_counts,
            "routes_agree": self.routes_agree,
            "orthogonal_daimon_maximal_only": self.core,
            "verdict": self.verdict,
            "counterexample": dumps(self.counterexample) if self.counterexample is not None else None,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = [
            f"family: {self.family}",
            f"bounds: depth {self.depth}, width {self.width}",
            f"daimon-free: {'yes' if self.is_daimon_free else 'no'}",
            f"generators: {len(self.generators)}",
            f"|E⊥| at bounds{' (daimon-maximal part)' if self.core else ''}: {len(self.orthogonal_incarnation)}",
            f"|E⊥⊥| at bounds: {len(self.incarnation_at_depth)}",
            f"E^✠: {len(self.shortening)}",
        ]
        if self.routes_agree is not None:
            lines.append(f"pipeline and search agree: {'yes' if self.routes_agree else 'no'}")
        lines.append(f"verdict: {self.verdict} (verified up to depth {self.depth})")
        if self.counterexample is not None:
            lines.append("counterexample:")
            lines.append(dumps(self.counterexample).rstrip())
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def search_route(
    E: Sequence[Design], width: int, budget: Optional[int] = DEFAULT_BUDGET, core: bool = True
) -> tuple[set, set]:
    """|E⊥| (its daimon-maximal part with ``core``) and |E⊥⊥| by two rounds of the material search."""
    orth = material_orthogonals(E, width, budget, patient=core, sort=False)
    bi = material_orthogonals(orth, width, budget, sort=False) if orth else []
    return set(orth), set(bi)


def pipeline_route(E: Sequence[Design], budget: Optional[int] = DEFAULT_BUDGET, core: bool = True):
    res = incarnation_pipeline(E, budget=budget, core=core)
    return res.orthogonal, res.bi_orthogonal, res


def check_principal(
    E: Union[Iterable[Design], "object"],
    depth: int = DEFAULT_DEPTH,
    width: int = DEFAULT_WIDTH,
    name: Optional[str] = None,
    routes: str = "both",
    budget: Optional[int] = DEFAULT_BUDGET,
    core: bool = True,
) -> PrincipalityReport:
    """Bounded check of |E⊥⊥| = E^✠.

    ``E`` is a list of designs or a family (called with ``depth``).  Both the
    path pipeline and the interaction search are run unless ``routes`` says
    otherwise; if they disagree a RouteDisagreement is raised.  With
    ``core`` the intermediate |E⊥| is reduced to its daimon-maximal designs,
    which leaves |E⊥⊥| unchanged.
    """
    if callable(E) and not isinstance(E, (list, tuple, set)):
        label = name or getattr(E, "name", "family")
        gens = list(E(depth))
    else:
        gens = list(E)
        label = name or "designs"
    rep = PrincipalityReport(label, depth, width, all(g.daimon_free for g in gens), gens)
    if not rep.is_daimon_free:
        rep.verdict = "not daimon-free"
        rep.counterexample = next(g for g in gens if not g.daimon_free)
        return rep
    rep.shortening = sort_designs(shorten_designs(gens))
    got = {}
    if routes in ("both", "pipeline"):
        o, b, res = pipeline_route(gens, budget, core)
        got["pipeline"] = (o, b)
        rep.pipeline_counts = res.counts()
        rep.notes.extend(res.notes)
    if routes in ("both", "search"):
        got["search"] = search_route(gens, width, budget, core)
    if routes == "both":
        agree = got["pipeline"] == got["search"]
        rep.routes_agree = agree
        if not agree:
            raise RouteDisagreement(
                "pipeline and interaction search disagree: "
                f"|E⊥| {len(got['pipeline'][0])} vs {len(got['search'][0])}, "
                f"|E⊥⊥| {len(got['pipeline'][1])} vs {len(got['search'][1])}"
            )
    orth, bi = next(iter(got.values()))
    rep.orthogonal_incarnation, rep.incarnation_at_depth = sort_designs(orth), sort_designs(bi)
    rep.core = core
    short = set(rep.shortening)
    if set(bi) == short:
        rep.verdict = "equal"
    else:
        rep.verdict = "counterexample"
        extra = sort_designs(set(bi) - short) or sort_designs(short - set(bi))
        rep.counterexample = extra[0]
    return rep


# -------------------------------------------------------------- function sets

def function_members(
    args: Iterable[Design],
    target,
    left: Address,
    right: Address,
    width: int = DEFAULT_WIDTH,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> list[Design]:
    """The designs of (Π x ∈ args) target(x) on ``left ⊢ right``.

    ``target`` maps an argument to the list of designs it may be sent to (a
    list is accepted for the non-dependent arrow).  The members are found as
    the daimon-free designs that are material against every net (x, G) with
    x an argument and G a daimon-maximal element of |target(x)⊥|.
    """
    pick = target if callable(target) else (lambda x: target)
    nets = []
    for x in args:
        nets.extend((x, g) for g in material_orthogonals(list(pick(x)), width, budget, patient=True))
    found = material_search(nets, (Base.negative(left, right),), width, budget, daimon=False)
    return sort_designs(t[0] for t in found)


def counter_nets(
    members: Iterable[Design],
    left: Address,
    right: Address,
    width: int = DEFAULT_WIDTH,
    budget: Optional[int] = DEFAULT_BUDGET,
    patient: bool = True,
) -> list[tuple]:
    """Material counter-nets (F on ⊢left, G on right⊢) of designs on left ⊢ right."""
    return material_search(
        [(d,) for d in members], (Base.positive(left), Base.negative(right)), width, budget, patient=patient
    )


def function_biorthogonal(
    members: Iterable[Design],
    left: Address,
    right: Address,
    width: int = DEFAULT_WIDTH,
    budget: Optional[int] = DEFAULT_BUDGET,
    counters: Optional[list] = None,
) -> set[Design]:
    """|members⊥⊥| on left ⊢ right, computed against the daimon-maximal counter-nets."""
    if counters is None:
        counters = counter_nets(members, left, right, width, budget)
    if not counters:
        raise LudicsError("the set has no material counter-net at these bounds")
    return {t[0] for t in material_search(counters, (Base.negative(left, right),), width, budget)}
