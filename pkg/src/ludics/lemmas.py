"""Bounded executable versions of the lemmas about designs, paths and the
type encodings.

Each check returns a ``LemmaResult``; ``check_lemma_suite`` runs them all.
Bounds are parameters with the defaults used by the acceptance tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Optional

from .checker import (
    BehaviourApprox,
    all_designs,
    counter_base,
    counter_nets,
    function_biorthogonal,
    function_members,
    incarnation_by_deletion,
    incarnation_of,
    material_orthogonals,
    material_search,
)
from .core import DAIMON, Action, Base, Design, chronicle_problems, dumps, format_chronicle
from .interaction import normalize, orthogonal
from .library import (
    ALPHA,
    BETA,
    SIGMA,
    id_for,
    list_design,
    nat,
    nat_decode,
    nat_span,
    over,
    pi_counterexample,
    pi_member,
    predecessor,
)
from .paths import (
    Path,
    covering_path,
    covers,
    dual,
    paths_coherent,
    paths_of_design,
    shorten_designs,
    visitable_paths,
)


@dataclass
class LemmaResult:
    name: str
    passed: bool
    checked: int = 0
    detail: str = ""
    witness: Optional[str] = None

    def line(self) -> str:
        s = f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.checked} cases)"
        if self.witness:
            s += "\n  witness: " + self.witness.replace("\n", "\n  ")
        return s


@dataclass
class LemmaSuiteReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> LemmaResult:
        return next(r for r in self.results if r.name == name)

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        lines.append(f"{sum(r.passed for r in self.results)}/{len(self.results)} lemmas pass")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "lemmas": [
                {"name": r.name, "passed": r.passed, "checked": r.checked, "detail": r.detail, "witness": r.witness}
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _result(name: str, bad: list, checked: int, detail: str, show=str) -> LemmaResult:
    return LemmaResult(name, not bad, checked, detail, show(bad[0]) if bad else None)


def _lists(n: int, entries: int) -> list[Design]:
    from itertools import product

    return [list_design(v) for v in product(range(entries + 1), repeat=n)]


def _chain(c) -> str:
    return format_chronicle(c)


# ------------------------------------------------------- shortening lemmas

def lemma_edai(k: int = 4, width: int = 2, exhaustive_k: int = 0, exhaustive_depth: int = 2) -> LemmaResult:
    """Every ✠-shortening of Nat≤k is orthogonal to every element of (Nat≤k)⊥.

    (Nat≤k)⊥ is known through its material part, which is enough because a
    design orthogonal to a sub-design of F is orthogonal to F.  For a small
    k the whole of (Nat≤k)⊥ within the depth bound is enumerated as well.
    """
    E = nat_span(k, SIGMA)
    orth = material_orthogonals(E, width)
    short = sorted(shorten_designs(E), key=lambda d: d.sort_key())
    bad = [(d, f) for d in short for f in orth if not orthogonal(d, f)]
    checked = len(short) * len(orth)
    small = nat_span(exhaustive_k, SIGMA)
    every = [f for f in all_designs(counter_base(small[0].base), exhaustive_depth, width) if all(orthogonal(f, e) for e in small)]
    small_short = shorten_designs(small)
    bad += [(d, f) for d in small_short for f in every if not orthogonal(d, f)]
    checked += len(small_short) * len(every)
    return _result(
        "Edai", bad, checked,
        f"{len(short)} shortenings of Nat<={k} against {len(orth)} material orthogonals; "
        f"Nat<={exhaustive_k} against all {len(every)} orthogonals of depth <= {exhaustive_depth}",
        lambda p: dumps(p[0]) + dumps(p[1]),
    )


def lemma_matdes(n: int = 3, k: int = 4, width: int = 2) -> LemmaResult:
    """Each ✠-shortening of nat(n) is material in the behaviour generated by Nat≤k.

    Materiality is decided twice: by the union of visited parts and by
    intersecting all sub-designs that stay in the behaviour.
    """
    B = BehaviourApprox(nat_span(k, SIGMA), width)
    short = sorted(shorten_designs([nat(n)]), key=lambda d: d.sort_key())
    bad = []
    for d in short:
        if d not in B or incarnation_of(d, B) != d or incarnation_by_deletion(d, B) != d:
            bad.append(d)
    return _result("matdes", bad, len(short), f"{len(short)} shortenings of nat({n}) in Nat<={k}", dumps)


def lemma_matset(k: int = 4, width: int = 2) -> LemmaResult:
    """Nat≤k is made of material designs, and so is its whole ✠-shortening."""
    E = nat_span(k, SIGMA)
    B = BehaviourApprox(E, width)
    bad = [d for d in E if incarnation_of(d, B) != d]
    short = sorted(shorten_designs(E), key=lambda d: d.sort_key())
    bad += [d for d in short if incarnation_of(d, B) != d]
    return _result("matset", bad, len(E) + len(short), f"Nat<={k} and its {len(short)} shortenings", dumps)


# ---------------------------------------------------------- Nat chronicles

def _dual_chronicle_problems(c, base: Base) -> list[str]:
    p = dual(Path.on(base, c))
    return chronicle_problems(p.actions, p.base[0])


def lemma_oppch(k: int = 16) -> LemmaResult:
    """The dual of every chronicle of nat(n), n ≤ k, is a chronicle."""
    bad, checked = [], 0
    for n in range(k + 1):
        d = nat(n)
        for c in sorted(d.all_chronicles, key=len):
            checked += 1
            probs = _dual_chronicle_problems(c, d.base)
            if probs:
                bad.append((n, c, probs))
    return _result("oppch", bad, checked, f"all chronicles of nat(0..{k})", lambda b: f"nat({b[0]}) {_chain(b[1])}: {b[2]}")


def lemma_chnat(k: int = 16) -> LemmaResult:
    """The three-way comparison of chronicles of nat(n) and nat(n′).

    The stated clauses are checked for every maximal chronicle.  A
    non-maximal chronicle of nat(n) that stops before the point where the
    two numbers part satisfies the first clause instead (it belongs to
    nat(n′)); both situations are counted.
    """
    bad, literal, shared = [], 0, 0
    designs = [nat(n) for n in range(k + 1)]
    for n, d in enumerate(designs):
        maximal = set(d.chronicles)
        for n2, d2 in enumerate(designs):
            other = d2.all_chronicles
            for c in d.all_chronicles:
                ok = _chnat_clause(n, n2, c, other)
                if c in maximal:
                    literal += 1
                    if not ok:
                        bad.append((n, n2, c))
                elif not ok:
                    shared += 1
                    if c not in other:
                        bad.append((n, n2, c))
    return _result(
        "chNat", bad, literal + shared,
        f"clauses hold for all maximal chronicles ({literal} cases); "
        f"{shared} shorter chronicles are shared with nat(n')",
        lambda b: f"nat({b[0]}) vs nat({b[1]}): {_chain(b[2])}",
    )


def _chnat_clause(n: int, n2: int, c: tuple, other: frozenset) -> bool:
    if n == n2:
        return c in other
    if n > n2:
        at = SIGMA.child(*over(n2))
        for i, a in enumerate(c):
            if a == Action("+", at, frozenset({0})):
                return c[:i] + (Action("+", at, frozenset()),) in other
        return False
    at = SIGMA.child(*over(n))
    return c[-1] == Action("+", at, frozenset()) and c[:-1] + (Action("+", at, frozenset({0})),) in other


def lemma_negact(k: int = 16) -> LemmaResult:
    """After a common chronicle, two designs of Nat≤k never play different negative actions."""
    after: dict = {}
    for n in range(k + 1):
        for c in nat(n).all_chronicles:
            if c[-1].negative:
                after.setdefault(c[:-1], set()).add(c[-1])
    bad = [(c, s) for c, s in after.items() if len(s) > 1]
    return _result("negact", bad, len(after), f"chronicles of nat(0..{k}) followed by a negative action",
                   lambda b: f"{_chain(b[0])} then {sorted(map(str, b[1]))}")


# --------------------------------------------------------- list lemmas

def _list_families(nmax: int, entries: int, last_entries: int) -> list[tuple[int, list]]:
    return [(n, _lists(n, entries if n < nmax else last_entries)) for n in range(nmax + 1)]


def lemma_oppchln(nmax: int = 3, entries: int = 2, last_entries: int = 1) -> LemmaResult:
    """The dual of every chronicle of every list design is a chronicle."""
    bad, checked = [], 0
    for n, L in _list_families(nmax, entries, last_entries):
        for d in L:
            for c in d.all_chronicles:
                checked += 1
                probs = _dual_chronicle_problems(c, d.base)
                if probs:
                    bad.append((d, c, probs))
    return _result("oppchLn", bad, checked, f"chronicles of L_0..L_{nmax}",
                   lambda b: f"{_chain(b[1])}: {b[2]}")


def _proper_paths(d: Design) -> set[tuple]:
    return {p.actions for p in paths_of_design(d) if p.actions}


def lemma_kpos(nmax: int = 3, entries: int = 2, last_entries: int = 1) -> LemmaResult:
    """If q is a path of E and F and qκ a path of E only, then κ is positive."""
    bad, checked = [], 0
    for n, L in _list_families(nmax, entries, last_entries):
        paths = {d: _proper_paths(d) for d in L}
        for E in L:
            for F in L:
                PF = paths[F]
                for p in paths[E]:
                    q = p[:-1]
                    if (not q or q in PF) and p not in PF:
                        checked += 1
                        if not p[-1].positive:
                            bad.append(p)
    return _result("kpos", bad, checked, f"one-step divergences between paths of L_0..L_{nmax}", _chain)


def lemma_vispathln(nmax: int = 3, entries: int = 2, last_entries: int = 1) -> LemmaResult:
    """The visitable paths of L_n are exactly the paths of its elements."""
    bad, checked = [], 0
    for n, L in _list_families(nmax, entries, last_entries):
        own = set().union(*(_proper_paths(d) for d in L))
        vis = {p.actions for p in visitable_paths(L) if p.actions}
        checked += len(own)
        if own != vis:
            diff = sorted(own ^ vis, key=len)
            bad.append((n, diff[0], diff[0] in vis))
    return _result("vispathLn", bad, checked, f"paths of L_0..L_{nmax} against the visitable paths",
                   lambda b: f"L_{b[0]}: {_chain(b[1])} ({'visitable only' if b[2] else 'not visitable'})")


def lemma_pathcov(nmax: int = 3, entries: int = 2, last_entries: int = 1) -> LemmaResult:
    """Every order of the maximal chronicles of a list design gives a covering path."""
    bad, checked = [], 0
    for n, L in _list_families(nmax, entries, last_entries):
        for d in L:
            for order in permutations(range(len(d.chronicles))):
                checked += 1
                try:
                    p = covering_path(d, order)
                except Exception as e:  # the construction reports non-paths
                    bad.append((d, order, str(e)))
                    continue
                if not covers(p, d):
                    bad.append((d, order, "does not cover"))
    return _result("pathcov", bad, checked, f"all orders on L_0..L_{nmax}",
                   lambda b: f"{list(b[1])}: {b[2]}\n{dumps(b[0])}")


def lemma_cohpath(nmax: int = 2, entries: int = 2) -> LemmaResult:
    """Covering paths of two distinct lists in one order are incoherent; their duals are coherent.

    The maximal chronicles of a list design are kept in canonical order,
    which is the order of the positions they end at, so one permutation
    means the same visiting order for every list of the same length.
    """
    bad, checked = [], 0
    for n in range(1, nmax + 1):
        L = _lists(n, entries)
        for order in permutations(range(n + 1)):
            cov = [covering_path(d, order) for d in L]
            duals = [dual(p) for p in cov]
            for i in range(len(L)):
                for j in range(i + 1, len(L)):
                    checked += 1
                    if paths_coherent(cov[i], cov[j]) or not paths_coherent(duals[i], duals[j]):
                        bad.append((L[i], L[j], order))
    return _result("cohpath", bad, checked, f"pairs of distinct lists of length 1..{nmax}",
                   lambda b: f"order {list(b[2])}\n{dumps(b[0])}{dumps(b[1])}")


def lemma_difford(nmax: int = 3, entries: int = 2, last_entries: int = 1) -> LemmaResult:
    """Two orders on one design: the covering paths part on a negative action, the duals are incoherent."""
    bad, checked = [], 0
    for n, L in _list_families(nmax, entries, last_entries):
        for d in L:
            orders = list(permutations(range(len(d.chronicles))))
            cov = {o: covering_path(d, o) for o in orders}
            for i, o1 in enumerate(orders):
                for o2 in orders[i + 1:]:
                    checked += 1
                    p, q = cov[o1].actions, cov[o2].actions
                    k = next(m for m in range(min(len(p), len(q)) + 1) if m == len(p) or m == len(q) or p[m] != q[m])
                    negative_split = k < len(p) and k < len(q) and p[k].negative and q[k].negative
                    if not negative_split or paths_coherent(dual(cov[o1]), dual(cov[o2])):
                        bad.append((d, o1, o2))
    return _result("difford", bad, checked, f"pairs of orders on L_1..L_{nmax}",
                   lambda b: f"orders {list(b[1])} and {list(b[2])}\n{dumps(b[0])}")


# ------------------------------------------------------------ function sets

def _outputs_in(d: Design, args, target: Callable) -> bool:
    return pi_member(d, args, target).outputs_ok


def lemma_prefreccia(k: int = 4, full_k: int = 2, sample: int = 400, width: int = 2) -> LemmaResult:
    """Nat≤k ⇒ Nat≤k: its members, and bounded principality for a smaller k.

    For Nat≤full_k ⇒ Nat≤full_k: every design with a daimon that the
    search admits sends some argument to a design with a daimon (so the
    function set is daimon-free), and |(A ⇒ B)⊥⊥| equals (A ⇒ B)^✠.  For
    Nat≤k ⇒ Nat≤k: every member is daimon-free, a sample passes the
    membership test (outputs in Nat≤k and chronicle-deletion minimality),
    is orthogonal to each net (F, G) with F ∈ Nat≤k and G ∈ |Nat≤k⊥| with
    the three-design normal form equal to the two-step one, and is material
    against those nets together with all its ✠-shortenings.  The copycat on
    Nat≤k is among the members and the predecessor is not.
    """
    problems: list = []
    checked = 0

    # bounded principality at full_k
    A = nat_span(full_k, SIGMA)
    Bs = nat_span(full_k, BETA)
    M = function_members(A, Bs, SIGMA, BETA, width)
    nets = [(x, g) for x in A for g in material_orthogonals(Bs, width, patient=True)]
    with_dai = [t[0] for t in material_search(nets, (Base.negative(SIGMA, BETA),), width, None)]
    for d in with_dai:
        checked += 1
        if not d.daimon_free and all(_daimon_free_output(d, x) for x in A):
            problems.append(("a design with a daimon has only daimon-free outputs", d))
    bi = function_biorthogonal(M, SIGMA, BETA, width)
    short = shorten_designs(M)
    checked += len(bi)
    if bi != short:
        problems.append(("|(A=>B)^bot bot| differs from (A=>B)^dai", sorted(bi ^ short, key=lambda d: d.sort_key())[0]))

    # member-level at k
    A = nat_span(k, SIGMA)
    Bs = nat_span(k, BETA)
    M = function_members(A, Bs, SIGMA, BETA, width)
    members = set(M)
    problems += [("member with a daimon", d) for d in M if not d.daimon_free]
    copy = id_for(A, SIGMA, BETA)
    if copy not in members:
        problems.append(("the copycat is not a member", copy))
    pred = predecessor(k, SIGMA, BETA)
    if pred in members or pi_member(pred, A, lambda x: Bs).member:
        problems.append(("the predecessor is a member", pred))
    counters = material_orthogonals(Bs, width)
    step = max(1, len(M) // sample)
    picked = M[::step] + [copy]
    for d in picked:
        checked += 1
        if not pi_member(d, A, lambda x: Bs).member:
            problems.append(("sampled member fails the membership test", d))
            continue
        visited: set = set()
        for x in A:
            once = normalize([d, x])
            for g in counters:
                trace: list = []
                three = normalize([d, x, g], trace=trace)
                two = normalize([once, g])
                if not _is_dai(three) or not _is_dai(two):
                    problems.append(("not orthogonal to a net (F, G)", d))
                visited.update(s.chronicle for s in trace if s.origin == 0 and s.action.positive)
        if Design.of(d.base, visited) != d:
            problems.append(("member not material against the nets (F, G)", d))
    for d in picked[:: max(1, len(picked) // 20)]:
        for s in shorten_designs([d]):
            checked += 1
            seen: set = set()
            for x in A:
                for g in counters:
                    trace = []
                    out = normalize([s, x, g], trace=trace)
                    if not _is_dai(out):
                        problems.append(("shortening not orthogonal", s))
                    seen.update(t.chronicle for t in trace if t.origin == 0 and t.action.positive)
            if Design.of(s.base, seen) != s:
                problems.append(("shortening not material", s))
    return LemmaResult(
        "prefreccia", not problems, checked,
        f"Nat<={full_k}=>Nat<={full_k}: {len(short)} designs on both sides; "
        f"Nat<={k}=>Nat<={k}: {len(M)} members, {len(picked)} checked in depth",
        f"{problems[0][0]}\n{dumps(problems[0][1])}" if problems else None,
    )


def _is_dai(out) -> bool:
    return isinstance(out, Design) and out.chronicles == ((DAIMON,),)


def _daimon_free_output(d: Design, x: Design) -> bool:
    out = normalize([d, x])
    return isinstance(out, Design) and out.daimon_free


def lemma_pinter(width: int = 2) -> LemmaResult:
    """(Π x ∈ A) B(x) and ⋂ (x ⇒ B(x)) have the same biorthogonal, for A = {nat(0), nat(1)}, B(x) = {x+1}.

    Both behaviours are compared through their incarnations: the material
    designs against the counter-nets of Π, and against the union of the
    counter-nets of all the x ⇒ B(x).  The common value is also the
    ✠-shortening of Π, as principality of Π predicts.
    """
    A = [nat(0), nat(1)]
    B = lambda x: [nat(nat_decode(x) + 1, BETA)]
    P = function_members(A, B, SIGMA, BETA, width)
    problems = [("not a member", d) for d in P if not pi_member(d, A, B).member]
    lhs = function_biorthogonal(P, SIGMA, BETA, width)
    parts = []
    for x in A:
        parts.extend(counter_nets(function_members([x], B, SIGMA, BETA, width), SIGMA, BETA, width))
    rhs = function_biorthogonal([], SIGMA, BETA, width, counters=parts)
    if lhs != rhs:
        problems.append(("the two sides differ", sorted(lhs ^ rhs, key=lambda d: d.sort_key())[0]))
    short = shorten_designs(P)
    if lhs != short:
        problems.append(("the product is not principal at the bound", sorted(lhs ^ short, key=lambda d: d.sort_key())[0]))
    return LemmaResult(
        "pinter", not problems, len(lhs) + len(rhs),
        f"{len(P)} members of the product; both sides have {len(lhs)} material designs, equal to the shortening",
        f"{problems[0][0]}\n{dumps(problems[0][1])}" if problems else None,
    )


def lemma_pi_counterexample(width: int = 3) -> LemmaResult:
    """For A = {A1, A2} and B(Ai) = {Bi}: ⋂ (Ai ⇒ Bi) is empty and D ∈ (Π x ∈ A) B(x)."""
    c = pi_counterexample()
    A = [c["A1"], c["A2"]]
    out = {c["A1"]: [c["B1"]], c["A2"]: [c["B2"]]}
    B = lambda x: out[x]
    first = [function_members([x], B, ALPHA, BETA, width) for x in A]
    common = set(first[0]) & set(first[1])
    roots = [{d.tree.branches[0][0] for d in f} for f in first]
    P = function_members(A, B, ALPHA, BETA, width)
    problems = []
    if common:
        problems.append(("the intersection is not empty", sorted(common, key=lambda d: d.sort_key())[0]))
    if roots != [{frozenset({0})}, {frozenset({1})}]:
        problems.append((f"first actions {roots}", first[0][0]))
    if c["D"] not in P or not pi_member(c["D"], A, B).member:
        problems.append(("D is not in the product", c["D"]))
    return LemmaResult(
        "pi-counterexample", not problems, sum(map(len, first)) + len(P),
        f"{len(first[0])} and {len(first[1])} members for A1 and A2, none shared; D among {len(P)} product members",
        f"{problems[0][0]}\n{dumps(problems[0][1])}" if problems else None,
    )


LEMMAS: dict[str, Callable[[], LemmaResult]] = {
    "Edai": lemma_edai,
    "matdes": lemma_matdes,
    "matset": lemma_matset,
    "oppch": lemma_oppch,
    "chNat": lemma_chnat,
    "negact": lemma_negact,
    "oppchLn": lemma_oppchln,
    "kpos": lemma_kpos,
    "vispathLn": lemma_vispathln,
    "pathcov": lemma_pathcov,
    "cohpath": lemma_cohpath,
    "difford": lemma_difford,
    "prefreccia": lemma_prefreccia,
    "pinter": lemma_pinter,
    "pi-counterexample": lemma_pi_counterexample,
}


def check_lemma_suite(names: Optional[list] = None) -> LemmaSuiteReport:
    """Run the named lemma checks (all of them by default) at their default bounds."""
    rep = LemmaSuiteReport()
    for name in names or LEMMAS:
        if name not in LEMMAS:
            raise KeyError(f"unknown lemma {name!r}; known: {', '.join(LEMMAS)}")
        rep.results.append(LEMMAS[name]())
    return rep
