"""Concrete designs: naturals, lists, counter-designs, copycats and functions.

Every constructor takes its base addresses as parameters (defaults are the
usual names sigma, xi, alpha, beta, gamma) and returns a finite Design.
Infinite objects are produced as truncations: the ``depth`` argument says
how many levels of the input the design is able to read.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, Sequence, Union

from .core import (
    DAIMON,
    Action,
    Address,
    Base,
    Design,
    LudicsError,
    NegRule,
    PosNode,
    ram_key,
    addr,
    design_of_tree,
    make_neg,
    make_pos,
    rooted_at,
)
from .interaction import normalize

SIGMA = addr("sigma")
XI = addr("xi")
ALPHA = addr("alpha")
BETA = addr("beta")
GAMMA = addr("gamma")

DEFAULT_DEPTH = 16
DEFAULT_LIST_DEPTH = 8


class DecodeError(LudicsError):
    pass


def over(n: int) -> tuple[int, ...]:
    """Steps of the address reached after reading n units: 0,1 repeated n times."""
    return (0, 1) * n


def under(i: int) -> tuple[int, ...]:
    """Steps of the i-th tail of a list: 1,1 repeated i times."""
    return (1, 1) * i


def _p(a: Address, ram: Iterable[int] = (), rules: Iterable[NegRule] = ()) -> PosNode:
    return make_pos(Action("+", a, frozenset(ram)), rules)


def _n(a: Address, *branches: tuple) -> NegRule:
    return make_neg(a, branches)


_DAI = PosNode(DAIMON, ())


# ----------------------------------------------------------------- naturals

def nat_tree(n: int, at: Address) -> PosNode:
    node = _p(at.child(*over(n)))
    for k in reversed(range(n)):
        a = at.child(*over(k))
        node = _p(a, {0}, [_n(a.child(0), ({1}, node))])
    return node


def nat(n: int, base: Address = SIGMA) -> Design:
    if n < 0:
        raise ValueError("naturals are non-negative")
    return design_of_tree(Base.positive(base), nat_tree(n, base))


_ONE = frozenset({1})
_ZERO = frozenset({0})


def _nat_of_tree(t, at: Address) -> int:
    n = 0
    while True:
        if not isinstance(t, PosNode) or t.action.address != at:
            raise DecodeError("not a natural number")
        ram = t.action.ramification
        if not ram and not t.rules:
            return n
        if ram != _ZERO or len(t.rules) != 1:
            raise DecodeError("not a natural number")
        r = t.rules[0]
        if r.address != at.child(0) or len(r.branches) != 1 or r.branches[0][0] != _ONE:
            raise DecodeError("not a natural number")
        t, at, n = r.branches[0][1], at.child(0, 1), n + 1


def nat_decode(d: Design) -> int:
    addrs = d.base.addresses()
    if not d.base.is_positive or len(addrs) != 1 or d.is_empty:
        raise DecodeError("not a natural number: expected a unary positive base")
    return _nat_of_tree(d.tree, addrs[0])


def is_nat(d: Design) -> bool:
    try:
        nat_decode(d)
        return True
    except DecodeError:
        return False


def f_sigma(depth: int, base: Address = SIGMA, without: Iterable[int] = ()) -> Design:
    """Counter-design of all naturals up to ``depth``.

    Level i answers (+,base.i,{}) with the daimon and (+,base.i,{0}) by asking
    for the next level; the deepest level only has the daimon branch.
    ``without`` lists levels whose daimon branch is removed.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    gone = set(without)
    rule = None
    for i in reversed(range(depth + 1)):
        a = base.child(*over(i))
        branches = []
        if i not in gone:
            branches.append((frozenset(), _DAI))
        if rule is not None:
            branches.append(({0}, _p(a.child(0), {1}, [rule])))
        rule = make_neg(a, branches)
    return design_of_tree(Base.negative(base), rule)


# -------------------------------------------------------------------- lists

def list_tree(values: Sequence[int], at: Address) -> PosNode:
    if not values:
        return _p(at)
    head = _n(at.child(0), ({1}, nat_tree(values[0], at.child(0, 1))))
    tail = _n(at.child(1), ({1}, list_tree(values[1:], at.child(1, 1))))
    return _p(at, {0, 1}, [head, tail])


def list_design(values: Sequence[int], base: Address = XI) -> Design:
    return design_of_tree(Base.positive(base), list_tree(tuple(values), base))


def list_decode(d: Design) -> tuple[int, ...]:
    addrs = d.base.addresses()
    if not d.base.is_positive or len(addrs) != 1 or d.is_empty:
        raise DecodeError("not a list: expected a unary positive base")
    t, at = d.tree, addrs[0]
    out = []
    while True:
        if not isinstance(t, PosNode) or t.action.address != at:
            raise DecodeError("not a list")
        ram = t.action.ramification
        if not ram and not t.rules:
            return tuple(out)
        if ram != frozenset({0, 1}) or len(t.rules) != 2:
            raise DecodeError("not a list")
        head, tail = t.rules  # sorted by address: .0 then .1
        if (head.address != at.child(0) or tail.address != at.child(1)
                or len(head.branches) != 1 or head.branches[0][0] != _ONE
                or len(tail.branches) != 1 or tail.branches[0][0] != _ONE):
            raise DecodeError("not a list")
        out.append(_nat_of_tree(head.branches[0][1], at.child(0, 1)))
        t, at = tail.branches[0][1], at.child(1, 1)


def list_span(length: int, entries: int, base: Address = XI) -> list[Design]:
    """Constant lists covering every action of every list within the bounds."""
    return [list_design([v] * n, base) for n in range(length + 1) for v in range(entries + 1)]


# ----------------------------------------------------------------- copycat

def _ramifications_below(targets: Iterable[Design], frm: Address) -> tuple[dict, dict]:
    rpos: dict = {}
    rneg: dict = {}
    for d in targets:
        for a in d.actions():
            if a.is_daimon or not frm.is_prefix_of(a.address):
                continue
            rel = a.address.steps[len(frm.steps):]
            (rpos if a.positive else rneg).setdefault(rel, set()).add(a.ramification)
    return rpos, rneg


def id_for(
    targets: Iterable[Design],
    frm: Address,
    to: Address,
    negative: Optional[bool] = None,
) -> Design:
    """Finite copycat forwarding what the targets do at ``frm`` onto ``to``.

    Only the ramifications occurring in the targets are kept.  When the
    targets act positively on ``frm`` the result is based on frm |- to; when
    they act negatively on it the result is based on to |- frm.
    """
    targets = list(targets)
    rpos, rneg = _ramifications_below(targets, frm)
    if negative is None:
        negative = () in rneg and () not in rpos

    def src(rel: tuple) -> NegRule:
        # the targets play at frm.rel, the copy is replayed at to.rel
        branches = []
        for k in sorted(rpos.get(rel, ()), key=ram_key):
            branches.append((k, _p(to.child(*rel), k, [dst(rel + (i,)) for i in sorted(k)])))
        return make_neg(frm.child(*rel), branches)

    def dst(rel: tuple) -> NegRule:
        branches = []
        for j in sorted(rneg.get(rel, ()), key=ram_key):
            branches.append((j, _p(frm.child(*rel), j, [src(rel + (i,)) for i in sorted(j)])))
        return make_neg(to.child(*rel), branches)

    if negative:
        return design_of_tree(Base.negative(to, frm), dst(()))
    return design_of_tree(Base.negative(frm, to), src(()))


def _id_rule(targets: Iterable[Design], frm: Address, to: Address, negative: Optional[bool] = None) -> NegRule:
    return id_for(targets, frm, to, negative).tree


def nat_span(depth: int, base: Address) -> list[Design]:
    return [nat(k, base) for k in range(depth + 1)]


# ----------------------------------------------------------------- the cod prefix

def cod_encode(d: Design, gamma: Address = GAMMA) -> Design:
    """Turn a design on gamma.0.0.0 |- gamma.0.1 into one on |- gamma."""
    alpha, beta = gamma.child(0, 0, 0), gamma.child(0, 1)
    if d.base != Base.negative(alpha, beta):
        raise LudicsError(f"cod expects the base {alpha} |- {beta}, got {d.base}")
    inner = _p(gamma.child(0, 0), {0}, [d.tree])
    t = _p(gamma, {0}, [_n(gamma.child(0), ({0, 1}, inner))])
    return design_of_tree(Base.positive(gamma), t)


# ------------------------------------------------------------ arithmetic

def _steps(out: Address, start: int, count: int, last: PosNode) -> PosNode:
    """``count`` successor steps written on ``out`` from level ``start``, then ``last``."""
    node = last
    for k in reversed(range(start, start + count)):
        a = out.child(*over(k))
        node = _p(a, {0}, [_n(a.child(0), ({1}, node))])
    return node


def su(n: int, depth: int = DEFAULT_DEPTH, sigma: Address = SIGMA, beta: Address = BETA) -> Design:
    """Adds n to its argument; handles arguments up to ``depth``."""
    branches = [(frozenset(), nat_tree(n, beta))]
    if depth >= 1:
        src = sigma.child(0, 1)
        copy = _id_rule(nat_span(depth - 1, src), src, beta.child(*over(n + 1)))
        ask = _p(sigma.child(0), {1}, [copy])
        branches.append(({0}, _steps(beta, 0, n + 1, ask)))
    return design_of_tree(Base.negative(sigma, beta), make_neg(sigma, branches))


def predecessor(depth: int = DEFAULT_DEPTH, sigma: Address = SIGMA, alpha: Address = ALPHA) -> Design:
    """The predecessor, answering the daimon on 0; reads arguments up to ``depth``."""

    def p(i: int) -> PosNode:
        nxt = sigma.child(*over(i + 1))
        a = alpha.child(*over(i))
        branches = [(frozenset(), _p(a))]
        if i + 1 < depth:
            branches.append(({0}, _p(a, {0}, [_n(a.child(0), ({1}, p(i + 1)))])))
        return _p(sigma.child(*over(i), 0), {1}, [make_neg(nxt, branches)])

    branches = [(frozenset(), _DAI)]
    if depth >= 1:
        branches.append(({0}, p(0)))
    return design_of_tree(Base.negative(sigma, alpha), make_neg(sigma, branches))


def sum_nat(depth: int = 2 * DEFAULT_DEPTH, sigma: Address = SIGMA, alpha: Address = ALPHA) -> Design:
    """Sum of a pair: reads n on sigma.1.1 while writing it on alpha, then m on sigma.2.2.

    Handles pairs with n + m <= ``depth``.
    """
    first, second = sigma.child(1, 1), sigma.child(2, 2)

    def f(n: int, j: int) -> NegRule:
        a = alpha.child(*over(n + j))
        src = second.child(*over(j))
        branches = [(frozenset(), _p(a))]
        if n + j < depth:
            nxt = _p(src.child(0), {1}, [f(n, j + 1)])
            branches.append(({0}, _p(a, {0}, [_n(a.child(0), ({1}, nxt))])))
        return make_neg(src, branches)

    def g(i: int) -> NegRule:
        a = alpha.child(*over(i))
        src = first.child(*over(i))
        branches = [(frozenset(), _p(sigma.child(2), {2}, [f(i, 0)]))]
        if i < depth:
            nxt = _p(src.child(0), {1}, [g(i + 1)])
            branches.append(({0}, _p(a, {0}, [_n(a.child(0), ({1}, nxt))])))
        return make_neg(src, branches)

    t = _n(sigma, ({1, 2}, _p(sigma.child(1), {1}, [g(0)])))
    return design_of_tree(Base.negative(sigma, alpha), t)


# ----------------------------------------------------------- list functions

def cons(b: int, depth: int = DEFAULT_LIST_DEPTH, xi: Address = XI, sigma: Address = SIGMA) -> Design:
    """Puts b in head position of lists of length and entries up to ``depth``."""
    span = list_span(depth, depth, xi)
    tail = sigma.child(1, 1)
    copy = _p(tail, {0, 1}, [
        _id_rule(span, xi.child(0), tail.child(0)),
        _id_rule(span, xi.child(1), tail.child(1)),
    ])
    out = _p(sigma, {0, 1}, [
        _n(sigma.child(0), ({1}, nat_tree(b, sigma.child(0, 1)))),
        _n(sigma.child(1), ({1}, copy)),
    ])
    t = _n(xi, (frozenset(), list_tree((b,), sigma)), ({0, 1}, out))
    return design_of_tree(Base.negative(xi, sigma), t)


def el(k: int, depth: int = DEFAULT_LIST_DEPTH, xi: Address = XI, sigma: Address = SIGMA) -> Design:
    """Deletes the element in position k (counted from 1), if there is one."""
    if k < 1:
        raise ValueError("positions are counted from 1")
    span = list_span(depth, depth, xi)

    def after_root(k: int, src: Address, dst: Address) -> PosNode:
        # the root (+,src,{0,1}) of the input list has just been read
        nxt = src.child(1, 1)
        if k == 1:
            rest = _p(dst, {0, 1}, [
                _id_rule(span, nxt.child(0), dst.child(0)),
                _id_rule(span, nxt.child(1), dst.child(1)),
            ])
            return _p(src.child(1), {1}, [_n(nxt, (frozenset(), _p(dst)), ({0, 1}, rest))])
        ask = _p(src.child(1), {1}, [
            _n(nxt, (frozenset(), _p(dst.child(1, 1))), ({0, 1}, after_root(k - 1, nxt, dst.child(1, 1))))
        ])
        return _p(dst, {0, 1}, [
            _id_rule(span, src.child(0), dst.child(0)),
            _n(dst.child(1), ({1}, ask)),
        ])

    t = _n(xi, (frozenset(), _p(sigma)), ({0, 1}, after_root(k, xi, sigma)))
    return design_of_tree(Base.negative(xi, sigma), t)


def el2(depth: int = DEFAULT_LIST_DEPTH, xi: Address = XI, sigma: Address = SIGMA) -> Design:
    return el(2, depth, xi, sigma)


# -------------------------------------------------------------------- pairs

def sigma_pair(a: Design, b: Design, sigma: Address = SIGMA) -> Design:
    """The pair: (+,sigma,{1,2}) then a on sigma.1.1 and b on sigma.2.2."""
    a = rooted_at(a, sigma.child(1, 1))
    b = rooted_at(b, sigma.child(2, 2))
    t = _p(sigma, {1, 2}, [
        _n(sigma.child(1), ({1}, a.tree)),
        _n(sigma.child(2), ({2}, b.tree)),
    ])
    return design_of_tree(Base.positive(sigma), t)


def pair_nat(n: int, m: int, sigma: Address = SIGMA) -> Design:
    return sigma_pair(nat(n), nat(m), sigma)


def _projection(which: int, targets, depth: int, sigma: Address, alpha: Address) -> Design:
    slot = sigma.child(which, which)
    if targets is None:
        targets = nat_span(depth, slot)
    else:
        targets = [rooted_at(t, slot) for t in targets]
    copy = _id_rule(targets, slot, alpha)
    t = _n(sigma, ({1, 2}, _p(sigma.child(which), {which}, [copy])))
    return design_of_tree(Base.negative(sigma, alpha), t)


def proj1(targets: Optional[Iterable[Design]] = None, depth: int = DEFAULT_DEPTH,
          sigma: Address = SIGMA, alpha: Address = ALPHA) -> Design:
    """First projection, copying the first component onto alpha.

    ``targets`` are the designs the copycat must forward (naturals up to
    ``depth`` by default).
    """
    return _projection(1, targets, depth, sigma, alpha)


def proj2(targets: Optional[Iterable[Design]] = None, depth: int = DEFAULT_DEPTH,
          sigma: Address = SIGMA, alpha: Address = ALPHA) -> Design:
    return _projection(2, targets, depth, sigma, alpha)


# --------------------------------------------------------------- generators

@dataclass(frozen=True)
class DesignGenerator:
    """A family of finite truncations; ``produce(d)`` reads inputs up to depth d."""

    name: str
    produce: Callable[[int], Design]

    def __call__(self, depth: int) -> Design:
        return self.produce(depth)


def _reader(lists: Callable[[int], Sequence[int]], depth: int, sigma: Address, xi: Address) -> Design:
    def e(i: int) -> NegRule:
        a = sigma.child(*over(i))
        branches = [(frozenset(), list_tree(tuple(lists(i)), xi))]
        if i < depth:
            branches.append(({0}, _p(a.child(0), {1}, [e(i + 1)])))
        return make_neg(a, branches)

    return design_of_tree(Base.negative(sigma, xi), e(0))


def pi_example_ep(p: Sequence[int], sigma: Address = SIGMA, xi: Address = XI) -> DesignGenerator:
    """On input n, outputs the list of the first n entries of ``p``."""
    p = tuple(p)

    def produce(depth: int) -> Design:
        if depth > len(p):
            raise ValueError(f"the sequence has only {len(p)} entries, depth {depth} needs more")
        return _reader(lambda i: p[:i], depth, sigma, xi)

    return DesignGenerator(f"E^p({','.join(map(str, p))})", produce)


def gl_generator(lists: Union[Callable[[int], Sequence[int]], Sequence[Sequence[int]]],
                 sigma: Address = SIGMA, xi: Address = XI) -> DesignGenerator:
    """On input i, outputs the list l_i (of length i)."""
    pick = lists if callable(lists) else (lambda i: lists[i])

    def checked(i: int) -> Sequence[int]:
        li = tuple(pick(i))
        if len(li) != i:
            raise ValueError(f"l_{i} must have length {i}, got {li}")
        return li

    return DesignGenerator("G^l", lambda depth: _reader(checked, depth, sigma, xi))


def f_sigma_generator(base: Address = SIGMA) -> DesignGenerator:
    return DesignGenerator("F_sigma", lambda depth: f_sigma(depth, base))


def predecessor_generator() -> DesignGenerator:
    return DesignGenerator("P", predecessor)


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class Family:
    """A set of designs truncated by a depth bound (the entries read)."""

    name: str
    members: Callable[[int], list]
    base: Base

    def __call__(self, depth: int) -> list:
        return self.members(depth)


def nat_family(base: Address = SIGMA) -> Family:
    return Family("nat", lambda d: nat_span(d, base), Base.positive(base))


def list_family(n: int, base: Address = XI) -> Family:
    """Lists of length n; at depth d the entries are at most d."""
    def members(d: int) -> list:
        return [list_design(v, base) for v in product(range(d + 1), repeat=n)]
    return Family(f"list{n}", members, Base.positive(base))


def family(name: str) -> Family:
    if name == "nat":
        return nat_family()
    if name.startswith("list") and name[4:].isdigit():
        return list_family(int(name[4:]))
    raise LudicsError(f"unknown family {name!r} (expected nat or listN)")


# -------------------------------------------------- membership in function sets

@dataclass(frozen=True)
class MembershipReport:
    member: bool
    outputs_ok: bool
    minimal: bool
    failures: tuple = ()  # (argument, outcome) pairs whose output is outside the target
    witness: Optional[Design] = None  # smaller design with the same property
    skipped: int = 0  # deletions that did not yield a design
    method: str = "chronicle-deletion minimality"

    def __bool__(self) -> bool:
        return self.member


def _as_oracle(b) -> Callable[[Design], bool]:
    if callable(b):
        return b
    pool = {d for d in b}
    return lambda d: d in pool


def _outputs_ok(d: Design, args: Sequence[Design], target: Callable[[Design], Callable[[Design], bool]]):
    bad = []
    for a in args:
        out = normalize([a, d])
        if not isinstance(out, Design) or not target(a)(out):
            bad.append((a, out))
    return bad


def _minimality(d: Design, args, target) -> tuple[bool, Optional[Design], int]:
    from .core import validate_chronicles

    skipped = 0
    for c in d.chronicles:
        rest = [x for x in d.chronicles if x != c]
        sub = Design.of(d.base, rest)
        if not validate_chronicles(sub.base, sub.all_chronicles).ok:
            skipped += 1
            continue
        if not _outputs_ok(sub, args, target):
            return False, sub, skipped
    return True, None, skipped


def pi_member(d: Design, args: Iterable[Design], target: Callable[[Design], object]) -> MembershipReport:
    """Dependent product membership: [[d, a]] lies in target(a) for each a, and d is minimal."""
    args = list(args)
    tgt = lambda a: _as_oracle(target(a))
    bad = _outputs_ok(d, args, tgt)
    if bad:
        return MembershipReport(False, False, False, tuple(bad))
    minimal, witness, skipped = _minimality(d, args, tgt)
    return MembershipReport(minimal, True, minimal, (), witness, skipped)


def arrow_member(d: Design, args: Iterable[Design], target) -> MembershipReport:
    """Function set membership: [[d, a]] lies in ``target`` for each a, and d is minimal."""
    oracle = _as_oracle(target)
    return pi_member(d, args, lambda a: oracle)


# -------------------------------------------------- the product counterexample

def pi_counterexample(alpha: Address = ALPHA, beta: Address = BETA) -> dict[str, Design]:
    """Arguments A1, A2, outputs B1 = B(A1), B2 = B(A2) and the design D of the remark."""
    a1 = design_of_tree(Base.positive(alpha), _p(alpha, {0}, [_n(alpha.child(0), ({1}, _p(alpha.child(0, 1))))]))
    a2 = design_of_tree(Base.positive(alpha), _p(alpha, {1}, [_n(alpha.child(1), ({2}, _p(alpha.child(1, 2))))]))
    b1_tree = _p(beta)
    b2_tree = _p(beta, {0}, [_n(beta.child(0), ({2}, _p(beta.child(0, 2))))])
    b1 = design_of_tree(Base.positive(beta), b1_tree)
    b2 = design_of_tree(Base.positive(beta), b2_tree)
    t = _n(
        alpha,
        ({0}, _p(alpha.child(0), {1}, [_n(alpha.child(0, 1), (frozenset(), b1_tree))])),
        ({1}, _p(alpha.child(1), {2}, [_n(alpha.child(1, 2), (frozenset(), b2_tree))])),
    )
    d = design_of_tree(Base.negative(alpha, beta), t)
    return {"A1": a1, "A2": a2, "B1": b1, "B2": b2, "D": d}
