"""Cut-nets, normalization and orthogonality.

Normalization walks the tree views of the designs of a net, following the
main design's positive actions through the cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
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
    make_neg,
    make_pos,
)


class NetError(LudicsError):
    pass


class FuelExhausted(LudicsError):
    pass


@dataclass(frozen=True)
class Failure:
    """The positive main action found no matching branch: ``action.ramification`` not in ``available``."""

    action: Action
    available: frozenset
    origin: int = -1
    partner: int = -1

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        rams = sorted("{" + ",".join(map(str, sorted(r))) + "}" for r in self.available)
        return f"Failure: {self.action} against ramifications [{', '.join(rams)}]"


Outcome = Union[Design, Failure]


@dataclass(frozen=True)
class TraceStep:
    action: Action
    origin: int
    chronicle: tuple  # chronicle of the origin design ending with ``action``
    kind: str = "visit"  # "visit" for consumed actions, "copy" for commuted ones

    def line(self) -> str:
        a = self.action
        if a.is_daimon:
            return "#"
        sign = "+" if a.positive else "-"
        return f"{sign} {a.address} {{{','.join(map(str, sorted(a.ramification)))}}}"


def format_trace(trace: Iterable[TraceStep]) -> str:
    return "".join(s.line() + "\n" for s in trace)


# ----------------------------------------------------------------- cut-nets

@dataclass(frozen=True)
class CutNet:
    designs: tuple
    cuts: frozenset
    main: int
    base: Base  # the part of the bases left after cut elimination

    @property
    def closed(self) -> bool:
        return self.base.is_positive and not self.base.right

    def __len__(self) -> int:
        return len(self.designs)


def build_cut_net(designs: Iterable[Design]) -> CutNet:
    ds = tuple(designs)
    if not ds:
        raise NetError("a cut-net has at least one design")
    occurrences: dict = {}
    for k, d in enumerate(ds):
        probs = d.base.problems()
        if probs:
            raise NetError(probs[0])
        if d.base.left is not None:
            occurrences.setdefault(d.base.left, []).append((k, "left"))
        for a in d.base.right:
            occurrences.setdefault(a, []).append((k, "right"))
    addrs = sorted(occurrences)
    for i, a in enumerate(addrs):
        for b in addrs[i + 1:]:
            if not a.disjoint(b):
                raise NetError(f"base addresses {a} and {b} are neither disjoint nor equal")
    cuts, edges = set(), []
    for a, occ in occurrences.items():
        if len(occ) > 2:
            raise NetError(f"address {a} appears in more than two bases")
        if len(occ) == 2:
            (k1, s1), (k2, s2) = occ
            if s1 == s2 or k1 == k2:
                raise NetError(f"address {a} appears twice without forming a cut")
            cuts.add(a)
            edges.append((k1, k2))
    if len(edges) != len(ds) - 1:
        raise NetError("the cut graph is cyclic or disconnected")
    adj: dict = {k: [] for k in range(len(ds))}
    for k1, k2 in edges:
        adj[k1].append(k2)
        adj[k2].append(k1)
    seen, todo = {0}, [0]
    while todo:
        for m in adj[todo.pop()]:
            if m not in seen:
                seen.add(m)
                todo.append(m)
    if len(seen) != len(ds):
        raise NetError("the cut graph is disconnected")
    positives = [k for k, d in enumerate(ds) if d.base.is_positive]
    if len(positives) > 1:
        raise NetError("a cut-net has at most one positive design")
    if positives:
        main = positives[0]
    else:
        free = [k for k, d in enumerate(ds) if d.base.left not in cuts]
        main = free[0]
    lefts = [d.base.left for d in ds if d.base.left is not None and d.base.left not in cuts]
    rights = frozenset(a for d in ds for a in d.base.right if a not in cuts)
    base = Base(lefts[0] if lefts else None, rights)
    return CutNet(ds, frozenset(cuts), main, base)


# ------------------------------------------------------------ normalization
#
# The machine keeps one table from addresses to the negative rules waiting on
# them.  Addresses are linear, so every cut is consumed at most once and the
# subdesigns that the conversion rule would discard are simply never reached.
# A commutation step copies the table for each premise or branch: in an
# acyclic net the premises share no pending rule.

class _Fail(Exception):
    def __init__(self, failure: Failure):
        self.failure = failure


class _Machine:
    def __init__(self, outputs: frozenset, trace: Optional[list], fuel: Optional[int]):
        self.outputs = outputs
        self.trace = trace
        self.fuel = fuel

    def is_output(self, a: Address) -> bool:
        return any(o.is_prefix_of(a) for o in self.outputs)

    def record(self, action: Action, origin: int, chronicle, kind: str) -> None:
        self.trace.append(TraceStep(action, origin, chronicle, kind))

    def negative(self, rule: NegRule, origin: int, pre, pend: dict) -> NegRule:
        kept = []
        tracing = self.trace is not None
        for ram, p in rule.branches:
            act = Action("-", rule.address, ram)
            here = pre + (act,) if tracing else None
            if tracing:
                self.record(act, origin, here, "copy")
            try:
                kept.append((ram, self.positive(p, origin, here, dict(pend))))
            except _Fail:
                continue
        return make_neg(rule.address, kept)

    def positive(self, node: PosNode, origin: int, pre, pend: dict) -> PosNode:
        tracing = self.trace is not None
        while True:
            if self.fuel is not None:
                self.fuel -= 1
                if self.fuel < 0:
                    raise FuelExhausted("normalization ran out of fuel")
            act = node.action
            here = pre + (act,) if tracing else None
            if act.is_daimon:
                if tracing:
                    self.record(act, origin, here, "visit")
                return PosNode(DAIMON, ())
            hit = pend.pop(act.address, None)
            if hit is None:
                if not self.is_output(act.address):
                    if tracing:
                        self.record(act, origin, here, "visit")
                    raise _Fail(Failure(act, frozenset(), origin, -1))
                # positive commutation: the action belongs to the result
                if tracing:
                    self.record(act, origin, here, "copy")
                rules = [self.negative(r, origin, here, dict(pend)) for r in node.rules]
                return make_pos(act, rules)
            rule, owner, opre = hit
            target = rule.branch(act.ramification)
            if tracing:
                self.record(act, origin, here, "visit")
            if target is None:
                raise _Fail(Failure(act, rule.ramifications, origin, owner))
            for r in node.rules:
                pend[r.address] = (r, origin, here)
            nact = Action("-", act.address, act.ramification)
            npre = opre + (nact,) if tracing else None
            if tracing:
                self.record(nact, owner, npre, "visit")
            node, origin, pre = target, owner, npre


def normalize(
    net: Union[CutNet, Sequence[Design]],
    trace: Optional[list] = None,
    fuel: Optional[int] = None,
) -> Outcome:
    """Normal form of a cut-net, or a Failure.

    When ``trace`` is a list, the visited actions are appended to it in visit
    order.  ``fuel`` bounds the number of conversion steps.
    """
    if not isinstance(net, CutNet):
        net = build_cut_net(net)
    pend = {}
    for k, d in enumerate(net.designs):
        if k != net.main and d.base.left is not None:
            pend[d.base.left] = (d.tree, k, ())
    m = _Machine(net.base.addresses(), trace, fuel)
    main = net.designs[net.main]
    try:
        if main.base.is_positive:
            t = m.positive(main.tree, net.main, (), pend)
        else:
            t = m.negative(main.tree, net.main, (), pend)
    except _Fail as f:
        return f.failure
    return design_of_tree(net.base, t)


def orthogonal(d: Design, r: Union[Design, Iterable[Design]]) -> bool:
    """True iff the closed net formed by ``d`` and ``r`` normalizes to the daimon."""
    rest = [r] if isinstance(r, Design) else list(r)
    net = build_cut_net([d, *rest])
    if not net.closed:
        raise NetError("orthogonality needs a closed cut-net")
    out = normalize(net)
    return isinstance(out, Design) and out.chronicles == ((DAIMON,),)


def is_daimon(outcome: Outcome) -> bool:
    return isinstance(outcome, Design) and outcome.chronicles == ((DAIMON,),)


# ----------------------------------------------------- closed two-design runs

def closed_pair(p: PosNode, n: NegRule, visited: Optional[list] = None) -> Union[bool, Failure]:
    """Interaction of a positive tree with a negative tree on the dual base.

    A lean evaluator for the common case of two designs cut on one address:
    returns True for the daimon and a Failure otherwise.  ``visited`` collects
    (side, chronicle) pairs, side 0 for ``p`` and 1 for ``n``.
    """
    pend = [{}, {n.address: (n, ())}]
    side, node, pre = 0, p, ()
    while True:
        act = node.action
        here = pre + (act,)
        if visited is not None:
            visited.append((side, here))
        if act.is_daimon:
            return True
        other = 1 - side
        hit = pend[other].pop(act.address, None)
        if hit is None:
            return Failure(act, frozenset(), side, other)
        rule, opre = hit
        target = rule.branch(act.ramification)
        if target is None:
            return Failure(act, rule.ramifications, side, other)
        for r in node.rules:
            pend[side][r.address] = (r, here)
        nact = Action("-", act.address, act.ramification)
        side, node, pre = other, target, opre + (nact,)
        if visited is not None:
            visited.append((side, pre))
