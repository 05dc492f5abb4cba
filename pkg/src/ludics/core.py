"""Addresses, actions, chronicles and designs.

A design is stored as a sorted tuple of its maximal chronicles; the prefix
closure is implicit.  The tree view (positive nodes carrying negative rules)
is derived on demand and is what the interaction engine walks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Optional, Union

DEFAULT_WIDTH = 16


class LudicsError(Exception):
    pass


class ParseError(LudicsError):
    pass


class InvalidDesign(LudicsError):
    pass


# ---------------------------------------------------------------- addresses

@dataclass(frozen=True, order=True)
class Address:
    root: str
    steps: tuple[int, ...] = ()

    def child(self, *ks: int) -> Address:
        return Address(self.root, self.steps + tuple(ks))

    @property
    def parent(self) -> Optional[Address]:
        if not self.steps:
            return None
        return Address(self.root, self.steps[:-1])

    @property
    def last(self) -> int:
        return self.steps[-1]

    def is_prefix_of(self, other: Address) -> bool:
        """True when ``other`` is built from ``self`` (reflexive)."""
        n = len(self.steps)
        return self.root == other.root and other.steps[:n] == self.steps

    def disjoint(self, other: Address) -> bool:
        return not (self.is_prefix_of(other) or other.is_prefix_of(self))

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = self.__dict__["_h"] = hash((self.root, self.steps))
        return h

    def __str__(self) -> str:
        return ".".join([self.root, *map(str, self.steps)])

    def __repr__(self) -> str:
        return f"Address({str(self)!r})"


_SYMBOL = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_NUMERAL = re.compile(r"(0|[1-9][0-9]*)\Z")


def parse_address(text: str, bases: Optional[Iterable[str]] = None) -> Address:
    """Parse ``symbol(.digits)*``; ``bases`` restricts the allowed roots."""
    parts = text.strip().split(".")
    root, nums = parts[0], parts[1:]
    if not _SYMBOL.match(root):
        raise ParseError(f"malformed base symbol in address {text!r}")
    if bases is not None and root not in set(bases):
        raise ParseError(f"unknown base symbol {root!r} in address {text!r}")
    for n in nums:
        if not _NUMERAL.match(n):
            raise ParseError(f"malformed numeral {n!r} in address {text!r}")
    return Address(root, tuple(int(n) for n in nums))


def addr(text: str) -> Address:
    return parse_address(text)


# ------------------------------------------------------------------ actions

@dataclass(frozen=True)
class Action:
    """``sign`` is '+' or '-'; the daimon is the positive action without address."""

    sign: str
    address: Optional[Address]
    ramification: frozenset = frozenset()

    @property
    def positive(self) -> bool:
        return self.sign == "+"

    @property
    def negative(self) -> bool:
        return self.sign == "-"

    @property
    def is_daimon(self) -> bool:
        return self.address is None

    @property
    def proper(self) -> bool:
        return self.address is not None

    def opposite(self) -> Action:
        if self.is_daimon:
            raise ValueError("the daimon has no opposite")
        return Action("-" if self.positive else "+", self.address, self.ramification)

    def opened(self) -> tuple[Address, ...]:
        """Addresses this action makes available to the other side."""
        if self.is_daimon:
            return ()
        return tuple(self.address.child(i) for i in sorted(self.ramification))

    def __hash__(self) -> int:
        # actions are hashed constantly as parts of chronicles
        h = self.__dict__.get("_h")
        if h is None:
            h = self.__dict__["_h"] = hash((self.sign, self.address, self.ramification))
        return h

    def sort_key(self) -> tuple:
        k = self.__dict__.get("_k")
        if k is None:
            k = (0,) if self.is_daimon else (1, self.address, tuple(sorted(self.ramification)), self.sign)
            self.__dict__["_k"] = k
        return k

    def __str__(self) -> str:
        if self.is_daimon:
            return "#"
        return f"{self.sign}{self.address}{_fmt_ints(self.ramification)}"

    __repr__ = __str__


DAIMON = Action("+", None, frozenset())


def pos(address: Union[Address, str], ramification: Iterable[int] = ()) -> Action:
    if isinstance(address, str):
        address = parse_address(address)
    return Action("+", address, frozenset(ramification))


def neg(address: Union[Address, str], ramification: Iterable[int] = ()) -> Action:
    if isinstance(address, str):
        address = parse_address(address)
    return Action("-", address, frozenset(ramification))


def _fmt_ints(ints: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(ints)) + "}"


Chronicle = tuple  # tuple[Action, ...]


def chronicle_key(c: Chronicle) -> tuple:
    return tuple(a.sort_key() for a in c)


def format_chronicle(c: Iterable[Action]) -> str:
    return " ".join(str(a) for a in c)


# -------------------------------------------------------------------- bases

@dataclass(frozen=True)
class Base:
    left: Optional[Address] = None
    right: frozenset = frozenset()

    @staticmethod
    def positive(*right: Union[Address, str]) -> Base:
        return Base(None, frozenset(_as_addr(a) for a in right))

    @staticmethod
    def negative(left: Union[Address, str], *right: Union[Address, str]) -> Base:
        return Base(_as_addr(left), frozenset(_as_addr(a) for a in right))

    @property
    def is_positive(self) -> bool:
        return self.left is None

    def addresses(self) -> tuple[Address, ...]:
        out = sorted(self.right)
        return ((self.left,) if self.left is not None else ()) + tuple(out)

    def roots(self) -> set[str]:
        return {a.root for a in self.addresses()}

    def problems(self) -> list[str]:
        out = []
        for a, b in combinations(self.addresses(), 2):
            if not a.disjoint(b):
                out.append(f"base addresses {a} and {b} are not disjoint")
        return out

    def __str__(self) -> str:
        left = str(self.left) if self.left is not None else ""
        right = ", ".join(str(a) for a in sorted(self.right))
        return f"{left} |- {right}".strip()


def _as_addr(a: Union[Address, str]) -> Address:
    return parse_address(a) if isinstance(a, str) else a


# --------------------------------------------------------------- chronicles

def justifier_index(seq: Iterable[Action], k: int) -> Optional[int]:
    """Index of the action justifying ``seq[k]``, or None if there is none."""
    seq = tuple(seq)
    a = seq[k]
    if a.is_daimon or not a.address.steps:
        return None
    parent, i = a.address.parent, a.address.last
    for j in range(k - 1, -1, -1):
        b = seq[j]
        if b.proper and b.address == parent and b.sign != a.sign and i in b.ramification:
            return j
    return None


def chronicle_problems(c: Iterable[Action], base: Base) -> list[str]:
    """Violations of the chronicle conditions for a chronicle on ``base``."""
    c = tuple(c)
    out = []
    if not c:
        return ["a chronicle is non-empty"]
    seen = set()
    for k, a in enumerate(c):
        if k and c[k - 1].sign == a.sign:
            out.append(f"Alternation: {c[k - 1]} and {a} have the same polarity")
        if a.is_daimon:
            if k != len(c) - 1:
                out.append("Daimon: the daimon must be the last action")
            continue
        if a.address in seen:
            out.append(f"Linearity: address {a.address} occurs twice")
        seen.add(a.address)
        if a.negative:
            if a.address == base.left:
                if k != 0:
                    out.append(f"Justification: initial negative action {a} is not first")
            elif k == 0 or justifier_index(c, k) != k - 1:
                out.append(f"Justification: {a} is not justified by the preceding action")
        else:
            if a.address in base.right:
                continue
            if justifier_index(c, k) is None:
                out.append(f"Justification: {a} is neither initial nor justified")
    if base.left is not None and not (c[0].negative and c[0].address == base.left):
        out.append(f"Base: a chronicle on {base} starts with a negative action on {base.left}")
    return out


def chronicles_coherent(c1: Iterable[Action], c2: Iterable[Action]) -> bool:
    """Comparability plus propagation."""
    c1, c2 = tuple(c1), tuple(c2)
    k = 0
    while k < len(c1) and k < len(c2) and c1[k] == c2[k]:
        k += 1
    if k == len(c1) or k == len(c2):
        return True
    a, b = c1[k], c2[k]
    if not (a.negative and b.negative):
        return False
    if a.address == b.address:
        return True
    left = {x.address for x in c1[k:] if x.proper}
    right = {x.address for x in c2[k:] if x.proper}
    return not (left & right)


def prefixes(c: Chronicle) -> Iterator[Chronicle]:
    for k in range(1, len(c) + 1):
        yield c[:k]


# -------------------------------------------------------------------- trees

@dataclass(frozen=True)
class PosNode:
    """A positive action with the negative rules standing on its premises."""

    action: Action
    rules: tuple = ()  # tuple[NegRule, ...], sorted by address, none empty

    def rule(self, a: Address) -> Optional[NegRule]:
        for r in self.rules:
            if r.address == a:
                return r
        return None

    @cached_property
    def addresses(self) -> frozenset:
        """Every address occurring in this subtree."""
        here = {self.action.address} if self.action.proper else set()
        return frozenset(here.union(*(r.addresses for r in self.rules)))


@dataclass(frozen=True)
class NegRule:
    """All negative actions on one address: ramification -> positive node."""

    address: Address
    branches: tuple = ()  # tuple[(frozenset, PosNode), ...], sorted

    @cached_property
    def table(self) -> dict:
        return dict(self.branches)

    def branch(self, ram: frozenset) -> Optional[PosNode]:
        return self.table.get(ram)

    @property
    def ramifications(self) -> frozenset:
        return frozenset(r for r, _ in self.branches)

    @cached_property
    def addresses(self) -> frozenset:
        return frozenset({self.address}.union(*(p.addresses for _, p in self.branches)))


def ram_key(r: frozenset) -> tuple:
    return tuple(sorted(r))


def make_pos(action: Action, rules: Iterable[NegRule] = ()) -> PosNode:
    rs = tuple(sorted((r for r in rules if r.branches), key=lambda r: r.address))
    return PosNode(action, rs)


def make_neg(address: Address, branches: Iterable[tuple]) -> NegRule:
    bs = tuple(sorted(((frozenset(r), p) for r, p in branches), key=lambda b: ram_key(b[0])))
    return NegRule(address, bs)


Tree = Union[PosNode, NegRule]


def tree_chronicles(t: Tree, prefix: Chronicle = ()) -> Iterator[Chronicle]:
    """Maximal chronicles of a tree, in tree order."""
    if isinstance(t, NegRule):
        for ram, p in t.branches:
            yield from tree_chronicles(p, prefix + (Action("-", t.address, ram),))
        return
    here = prefix + (t.action,)
    if not t.rules:
        yield here
        return
    for r in t.rules:
        yield from tree_chronicles(r, here)


def _tree_of(chs: list[Chronicle], depth: int, negative_at: Optional[Address]) -> Tree:
    if negative_at is not None:
        groups: dict = {}
        for c in chs:
            a = c[depth]
            if not a.negative or a.address != negative_at:
                raise InvalidDesign(f"expected a negative action on {negative_at}, got {a}")
            groups.setdefault(a.ramification, []).append(c)
        return make_neg(negative_at, [(ram, _tree_of(g, depth + 1, None)) for ram, g in groups.items()])
    heads = {c[depth] for c in chs if len(c) > depth}
    if len(heads) != 1:
        raise InvalidDesign(f"chronicles differ on a positive action: {sorted(map(str, heads))}")
    (act,) = heads
    if any(not c[depth].positive for c in chs):
        raise InvalidDesign(f"expected a positive action at position {depth}")
    rest = [c for c in chs if len(c) > depth + 1]
    byaddr: dict = {}
    for c in rest:
        byaddr.setdefault(c[depth + 1].address, []).append(c)
    rules = [_tree_of(g, depth + 1, a) for a, g in byaddr.items()]
    return make_pos(act, rules)


# ------------------------------------------------------------------ designs

class Design:
    """A design on a base, held as its sorted maximal chronicles or as its tree.

    Either representation is computed from the other on demand.  Equality and
    hashing use the canonical tree, so they do not force the chronicles.
    """

    __slots__ = ("base", "_chronicles", "_tree", "__dict__")

    def __init__(self, base: Base, chronicles: tuple = ()):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_chronicles", tuple(chronicles))
        object.__setattr__(self, "_tree", None)

    def __setattr__(self, name, value):
        raise AttributeError("Design is immutable")

    @staticmethod
    def _of_tree(base: Base, t: Tree) -> Design:
        d = object.__new__(Design)
        object.__setattr__(d, "base", base)
        object.__setattr__(d, "_chronicles", None)
        object.__setattr__(d, "_tree", t)
        return d

    @property
    def chronicles(self) -> tuple:
        if self._chronicles is None:
            object.__setattr__(self, "_chronicles", tuple(tree_chronicles(self._tree)))
        return self._chronicles

    @property
    def tree(self) -> Tree:
        if self._tree is None:
            object.__setattr__(self, "_tree", tree_view(self))
        return self._tree

    def _key(self):
        if self._tree is None and self.base.is_positive and not self._chronicles:
            return ()
        return self.tree

    def __eq__(self, other) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return self is other or (self.base == other.base and self._key() == other._key())

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.base, self._key()))
            self.__dict__["_hash"] = h
        return h

    def __repr__(self) -> str:
        return f"Design({self.base!r}, {self.chronicles!r})"

    @staticmethod
    def of(base: Base, chronicles: Iterable[Iterable[Action]]) -> Design:
        """Build from any chronicle set; only the maximal ones are kept."""
        chs = {tuple(c) for c in chronicles}
        chs.discard(())
        maximal = [c for c in chs if not any(len(d) > len(c) and d[: len(c)] == c for d in chs)]
        return Design(base, tuple(sorted(maximal, key=chronicle_key)))

    @staticmethod
    def from_tree(base: Base, t: Tree) -> Design:
        return design_of_tree(base, t)

    @cached_property
    def all_chronicles(self) -> frozenset:
        return frozenset(p for c in self.chronicles for p in prefixes(c))

    @property
    def is_positive(self) -> bool:
        return self.base.is_positive

    @property
    def is_empty(self) -> bool:
        if self._chronicles is None:
            return isinstance(self._tree, NegRule) and not self._tree.branches
        return not self._chronicles

    def actions(self) -> set[Action]:
        return {a for c in self.chronicles for a in c}

    @property
    def daimon_free(self) -> bool:
        return all(c[-1] != DAIMON for c in self.chronicles)

    @property
    def size(self) -> int:
        return len(self.all_chronicles)

    @property
    def depth(self) -> int:
        return max((len(c) for c in self.chronicles), default=0)

    def issubset(self, other: Design) -> bool:
        return self.base == other.base and self.all_chronicles <= other.all_chronicles

    def __le__(self, other: Design) -> bool:
        return self.issubset(other)

    def __lt__(self, other: Design) -> bool:
        return self.issubset(other) and self != other

    def restrict(self, chronicles: Iterable[Chronicle]) -> Design:
        return Design.of(self.base, chronicles)

    def sort_key(self) -> str:
        return dumps(self)

    def __str__(self) -> str:
        return dumps(self)


def dai(base: Base) -> Design:
    """The design whose only action is the daimon."""
    if not base.is_positive:
        raise InvalidDesign("the daimon design lives on a positive base")
    return Design(base, ((DAIMON,),))


def tree_view(d: Design) -> Tree:
    """Group negative actions on the same address into negative rules."""
    chs = list(d.chronicles)
    if d.base.is_positive:
        if not chs:
            raise InvalidDesign("Totality: a positive design is non-empty")
        return _tree_of(chs, 0, None)
    if not chs:
        return NegRule(d.base.left, ())
    return _tree_of(chs, 0, d.base.left)


def design_of_tree(base: Base, t: Tree) -> Design:
    if base.is_positive != isinstance(t, PosNode):
        raise InvalidDesign(f"tree polarity does not match base {base}")
    # trees built with make_pos/make_neg are sorted, so tree order is chronicle order
    return Design._of_tree(base, t)


def canonical_tree(t: Tree) -> Tree:
    if isinstance(t, NegRule):
        return make_neg(t.address, [(r, canonical_tree(p)) for r, p in t.branches])
    return make_pos(t.action, [canonical_tree(r) for r in t.rules])


# --------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    condition: str
    message: str
    chronicles: tuple = ()

    def __str__(self) -> str:
        return f"{self.condition}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def validate_chronicles(base: Base, chronicles: Iterable[Iterable[Action]]) -> ValidationReport:
    """Check an explicit chronicle set (not assumed prefix-closed)."""
    chs = sorted({tuple(c) for c in chronicles}, key=chronicle_key)
    out = [Violation("Base", m) for m in base.problems()]
    present = set(chs)
    for c in chs:
        for p in list(prefixes(c))[:-1]:
            if p not in present:
                out.append(Violation("Forest", f"prefix {format_chronicle(p)} is missing", (c,)))
                break
        for m in chronicle_problems(c, base):
            out.append(Violation("Chronicle", f"{format_chronicle(c)}: {m}", (c,)))
    for c1, c2 in combinations(chs, 2):
        if not chronicles_coherent(c1, c2):
            out.append(Violation("Coherence", "chronicles are not coherent", (c1, c2)))
    maximal = [c for c in chs if not any(len(d) > len(c) and d[: len(c)] == c for d in chs)]
    for c in maximal:
        if not c[-1].positive:
            out.append(Violation("Positivity", f"maximal chronicle {format_chronicle(c)} ends negative", (c,)))
    if base.is_positive:
        if not chs:
            out.append(Violation("Totality", "a design on a positive base is non-empty"))
        elif len({c[0] for c in chs}) != 1 or not chs[0][0].positive:
            out.append(Violation("Totality", "chronicles do not share a unique first positive action"))
    return ValidationReport(tuple(out))


def validate_design(d: Design) -> ValidationReport:
    """Forest, Coherence, Positivity and Totality (plus chronicle well-formedness).

    Only maximal chronicles are stored, so Forest holds by construction and
    coherence is checked on pairs of maximal chronicles.
    """
    return validate_chronicles(d.base, d.all_chronicles)


def is_valid(d: Design) -> bool:
    return validate_design(d).ok


# ------------------------------------------------------------ serialization

def _fmt_pos(p: PosNode, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if p.action.is_daimon:
        out.append(pad + "#")
        return
    a = p.action
    if not p.rules:
        out.append(f"{pad}(+ {a.address} {_fmt_ints(a.ramification)})")
        return
    out.append(f"{pad}(+ {a.address} {_fmt_ints(a.ramification)}")
    for r in p.rules:
        _fmt_neg(r, indent + 1, out)
    out[-1] += ")"


def _fmt_neg(r: NegRule, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    out.append(f"{pad}(- {r.address}")
    for ram, p in r.branches:
        if p.action.is_daimon or not p.rules:
            sub: list[str] = []
            _fmt_pos(p, 0, sub)
            out.append(f"{pad}  ({_fmt_ints(ram)} {sub[0]})")
        else:
            out.append(f"{pad}  ({_fmt_ints(ram)}")
            _fmt_pos(p, indent + 2, out)
            out[-1] += ")"
    out[-1] += ")"


def format_base(base: Base) -> str:
    left = f"(left {base.left}) " if base.left is not None else ""
    right = " ".join(str(a) for a in sorted(base.right))
    return f"(base {left}(right{' ' if right else ''}{right}))"


def dumps(d: Design) -> str:
    """Canonical text: a base header followed by the tree."""
    lines = [format_base(d.base)]
    if d.chronicles:
        t = d.tree
        if isinstance(t, PosNode):
            _fmt_pos(t, 0, lines)
        else:
            _fmt_neg(t, 0, lines)
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\{[^}]*\})|([^\s(){}]+))")


def _tokenize(text: str) -> list[str]:
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    toks, i = [], 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            if text[i:].strip():
                raise ParseError(f"unexpected character at offset {i}: {text[i]!r}")
            break
        if m.lastindex is None:
            break
        toks.append(m.group(m.lastindex))
        i = m.end()
    return toks


class _Reader:
    def __init__(self, toks: list[str], width: int):
        self.toks, self.i, self.width = toks, 0, width
        self.roots: Optional[set[str]] = None

    def peek(self) -> Optional[str]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: Optional[str] = None) -> str:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        if expected is not None and t != expected:
            raise ParseError(f"expected {expected!r}, got {t!r}")
        self.i += 1
        return t

    def address(self) -> Address:
        return parse_address(self.take(), self.roots)

    def ints(self) -> frozenset:
        t = self.take()
        if not (t.startswith("{") and t.endswith("}")):
            raise ParseError(f"expected a ramification {{...}}, got {t!r}")
        body = t[1:-1].strip()
        if not body:
            return frozenset()
        vals = []
        for piece in body.split(","):
            piece = piece.strip()
            if not _NUMERAL.match(piece):
                raise ParseError(f"malformed numeral {piece!r} in {t}")
            vals.append(int(piece))
        if vals != sorted(set(vals)):
            raise ParseError(f"ramification {t} is not sorted ascending without repeats")
        if vals and vals[-1] >= self.width:
            raise ParseError(f"ramification {t} exceeds the width bound {self.width}")
        return frozenset(vals)

    def base(self) -> Base:
        self.take("(")
        self.take("base")
        left = None
        self.take("(")
        if self.peek() == "left":
            self.take()
            left = parse_address(self.take())
            self.take(")")
        right = []
        # the (right ...) part may be omitted when it is empty
        if left is None or self.peek() == "(":
            if left is not None:
                self.take("(")
            self.take("right")
            while self.peek() != ")":
                right.append(parse_address(self.take()))
            self.take(")")
        self.take(")")
        b = Base(left, frozenset(right))
        if len(right) != len(set(right)):
            raise ParseError("repeated address in base")
        probs = b.problems()
        if probs:
            raise ParseError(probs[0])
        self.roots = {a.root for a in b.addresses()}
        return b

    def pos(self) -> PosNode:
        if self.peek() == "#":
            self.take()
            return PosNode(DAIMON, ())
        self.take("(")
        self.take("+")
        a = self.address()
        ram = self.ints()
        rules = []
        while self.peek() == "(":
            rules.append(self.neg())
        self.take(")")
        act = Action("+", a, ram)
        seen = [r.address for r in rules]
        if len(seen) != len(set(seen)):
            raise ParseError(f"two negative rules on the same address under {act}")
        return make_pos(act, rules)

    def neg(self) -> NegRule:
        self.take("(")
        self.take("-")
        a = self.address()
        branches = []
        while self.peek() == "(":
            self.take("(")
            ram = self.ints()
            branches.append((ram, self.pos()))
            self.take(")")
        self.take(")")
        if not branches:
            raise ParseError(f"negative rule on {a} has no branch")
        rams = [r for r, _ in branches]
        if len(rams) != len(set(rams)):
            raise ParseError(f"repeated ramification in negative rule on {a}")
        return make_neg(a, branches)


def loads(text: str, width: int = DEFAULT_WIDTH, validate: bool = True) -> Design:
    """Parse the design text format; raises ParseError or InvalidDesign."""
    r = _Reader(_tokenize(text), width)
    base = r.base()
    if r.peek() is None:
        if base.is_positive:
            raise InvalidDesign("Totality: a design on a positive base is non-empty")
        d = Design(base, ())
    else:
        if base.is_positive:
            t = r.pos()
        else:
            t = r.neg()
            if t.address != base.left:
                raise InvalidDesign(f"Base: the negative rule must be on {base.left}, not {t.address}")
        d = design_of_tree(base, t)
    if r.peek() is not None:
        raise ParseError(f"trailing input starting at {r.peek()!r}")
    if validate:
        report = validate_design(d)
        if not report.ok:
            raise InvalidDesign(str(report))
    return d


def read_design(path: str, width: int = DEFAULT_WIDTH) -> Design:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), width)


# --------------------------------------------------------------- relocation

def move_address(a: Optional[Address], old: Address, new: Address) -> Optional[Address]:
    if a is None or not old.is_prefix_of(a):
        return a
    return Address(new.root, new.steps + a.steps[len(old.steps):])


def move_action(act: Action, old: Address, new: Address) -> Action:
    if act.is_daimon:
        return act
    return Action(act.sign, move_address(act.address, old, new), act.ramification)


def move_tree(t: Tree, old: Address, new: Address) -> Tree:
    if isinstance(t, NegRule):
        return make_neg(move_address(t.address, old, new), [(r, move_tree(p, old, new)) for r, p in t.branches])
    return make_pos(move_action(t.action, old, new), [move_tree(r, old, new) for r in t.rules])


def relocate(d: Design, old: Address, new: Address) -> Design:
    """Rename every address built from ``old`` so that it is built from ``new``."""
    base = Base(move_address(d.base.left, old, new), frozenset(move_address(a, old, new) for a in d.base.right))
    if d.is_empty:
        return Design(base, ())
    return design_of_tree(base, move_tree(d.tree, old, new))


def rooted_at(d: Design, new: Address) -> Design:
    """A unary-based design moved onto ``new``."""
    addrs = d.base.addresses()
    if len(addrs) != 1:
        raise InvalidDesign(f"expected a unary base, got {d.base}")
    return d if addrs[0] == new else relocate(d, addrs[0], new)
