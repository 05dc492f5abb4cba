"""The ``lud`` command.

Exit codes: 0 success, 1 mathematical negative (not valid, not orthogonal,
failure, not principal, lemma failing), 2 input error, 3 bound exhaustion,
4 disagreement between the two principality routes.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from .checker import (
    BehaviourApprox,
    NotInBehaviour,
    RouteDisagreement,
    check_principal,
    incarnation_of,
)
from .core import (
    DAIMON,
    DEFAULT_WIDTH,
    Action,
    Base,
    Design,
    LudicsError,
    ParseError,
    dumps,
    format_base,
    format_chronicle,
    loads,
    parse_address,
    validate_design,
)
from .dot import emit_dot
from .interaction import FuelExhausted, build_cut_net, format_trace, normalize
from .library import (
    BETA,
    SIGMA,
    XI,
    cod_encode,
    cons,
    el,
    el2,
    f_sigma,
    family,
    id_for,
    list_design,
    nat,
    nat_span,
    pair_nat,
    pi_example_ep,
    predecessor,
    proj1,
    proj2,
    sigma_pair,
    su,
    sum_nat,
)
from .paths import BoundExceeded, Path, dual, paths_of_design, validate_path, visitable_paths

OK, NEGATIVE, INPUT, BOUND, DISAGREE = 0, 1, 2, 3, 4


class InputError(LudicsError):
    pass


# ------------------------------------------------------------------ files

def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def read_designs(paths: list[str], width: int) -> list[Design]:
    """Design files, with ``.net`` files expanded to the designs they list.

    A net file lists one design file per line (relative to the net file);
    blank lines and lines starting with ``;`` are ignored.  An optional
    ``(base ...)`` line declares the base the net must normalize on.
    """
    out = []
    for p in paths:
        if p.endswith(".net"):
            out.extend(read_net(p, width)[0])
        else:
            out.append(loads(read_text(p), _cap(width)))
    return out


def _cap(width: int) -> int:
    # --width bounds enumeration; files may use any ramification up to the parser cap
    return max(width, DEFAULT_WIDTH)


def read_net(path: str, width: int) -> tuple[list[Design], Optional[Base]]:
    here = os.path.dirname(path)
    designs, declared = [], None
    for raw in read_text(path).splitlines():
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("(base"):
            declared = _parse_base(line)
            continue
        designs.append(loads(read_text(os.path.join(here, line)), _cap(width)))
    if not designs:
        raise InputError(f"{path} lists no designs")
    return designs, declared


def _parse_base(text: str) -> Base:
    # a base header followed by the daimon, or by nothing for a negative base
    try:
        return loads(text + " #", validate=False).base
    except ParseError:
        return loads(text, validate=False).base


def parse_action(token: str) -> Action:
    """``+ xi.1 {0,2}``, ``- xi.1 {}`` (or with the minus sign ``−``), or ``#``."""
    t = token.strip()
    if t == "#":
        return DAIMON
    sign, rest = t[0], t[1:].strip()
    if sign not in "+-−":
        raise ParseError(f"an action starts with +, - or #: {token!r}")
    if "{" not in rest or not rest.endswith("}"):
        raise ParseError(f"an action needs a ramification in braces: {token!r}")
    a, ram = rest.split("{", 1)
    ints = [x.strip() for x in ram[:-1].split(",") if x.strip()]
    if not all(x.isdigit() for x in ints):
        raise ParseError(f"malformed ramification in {token!r}")
    return Action("+" if sign == "+" else "-", parse_address(a.strip()), frozenset(int(x) for x in ints))


def read_path(path: str) -> Path:
    """A base header line followed by one action per line (the trace format)."""
    lines = [l.strip() for l in read_text(path).splitlines() if l.strip() and not l.strip().startswith(";")]
    if not lines or not lines[0].startswith("(base"):
        raise InputError(f"{path}: a path file starts with a (base ...) line")
    return Path.on(_parse_base(lines[0]), [parse_action(l) for l in lines[1:]])


def format_path(p: Path) -> str:
    head = "".join(format_base(b) + "\n" for b in p.base)
    return head + "".join(_action_line(a) + "\n" for a in p.actions)


def _action_line(a: Action) -> str:
    if a.is_daimon:
        return "#"
    return f"{'+' if a.positive else '-'} {a.address} {{{','.join(map(str, sorted(a.ramification)))}}}"


def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------- verbs

def _ints(text: str) -> list[int]:
    if text in ("", "e", "eps"):
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"expected comma-separated naturals, got {text!r}") from None


def _addr(text: Optional[str], default):
    return default if text is None else parse_address(text)


MAKERS = {
    "nat": "nat N: the natural number N on ⊢base (default sigma)",
    "list": "list A,B,...: a list of naturals on ⊢base (default xi); 'e' is the empty list",
    "fsigma": "fsigma D: the counter-design of the naturals truncated at depth D",
    "su": "su N: adds N, on sigma ⊢ beta",
    "pred": "pred: the predecessor, on sigma ⊢ alpha",
    "sum": "sum: the sum of a pair, on sigma ⊢ alpha",
    "pair": "pair N M: the pair of naturals on ⊢sigma",
    "cons": "cons B: prepends B to a list, on xi ⊢ sigma",
    "el2": "el2: deletes the element in position 2, on xi ⊢ sigma",
    "el": "el K: deletes the element in position K, on xi ⊢ sigma",
    "proj1": "proj1: first projection of a pair, on sigma ⊢ alpha",
    "proj2": "proj2: second projection of a pair, on sigma ⊢ alpha",
    "id": "id: the copycat from sigma to beta on naturals up to --depth",
    "ep": "ep P1,P2,...: on input n, the list of the first n entries",
    "sigma-pair": "sigma-pair FILE FILE: the pair of two designs on ⊢sigma.1.1 and ⊢sigma.2.2",
    "cod": "cod FILE: the cod encoding of a design on gamma.0.0.0 ⊢ gamma.0.1",
}


def cmd_make(a) -> int:
    kind, args = a.kind, a.args
    depth = a.depth
    base = a.base

    def need(k: int):
        if len(args) != k:
            raise InputError(f"make {kind} takes {k} argument(s): {MAKERS[kind]}")

    if kind not in MAKERS:
        raise InputError(f"unknown kind {kind!r}; known: {', '.join(MAKERS)}")
    if kind == "nat":
        need(1)
        d = nat(int(args[0]), _addr(base, SIGMA))
    elif kind == "list":
        need(1)
        d = list_design(_ints(args[0]), _addr(base, XI))
    elif kind == "fsigma":
        need(1)
        d = f_sigma(int(args[0]), _addr(base, SIGMA))
    elif kind == "su":
        need(1)
        d = su(int(args[0]), depth)
    elif kind == "pred":
        need(0)
        d = predecessor(depth)
    elif kind == "sum":
        need(0)
        d = sum_nat(depth)
    elif kind == "pair":
        need(2)
        d = pair_nat(int(args[0]), int(args[1]))
    elif kind == "cons":
        need(1)
        d = cons(int(args[0]), depth)
    elif kind == "el2":
        need(0)
        d = el2(depth)
    elif kind == "el":
        need(1)
        d = el(int(args[0]), depth)
    elif kind in ("proj1", "proj2"):
        need(0)
        d = (proj1 if kind == "proj1" else proj2)(None, depth)
    elif kind == "id":
        need(0)
        d = id_for(nat_span(depth, SIGMA), SIGMA, BETA)
    elif kind == "ep":
        need(1)
        p = _ints(args[0])
        d = pi_example_ep(p)(min(depth, len(p)))
    elif kind == "sigma-pair":
        need(2)
        d = sigma_pair(*read_designs(args, a.width))
    else:
        need(1)
        d = cod_encode(read_designs(args, a.width)[0])
    emit(dumps(d), a.out)
    return OK


def cmd_validate(a) -> int:
    code = OK
    for p in a.files:
        d = loads(read_text(p), _cap(a.width), validate=False)
        rep = validate_design(d)
        if rep.ok:
            print(f"{p}: valid")
        else:
            code = NEGATIVE
            print(f"{p}: invalid")
            print(str(rep))
    return code


def cmd_normalize(a) -> int:
    designs = read_designs(a.files, a.width)
    declared = None
    for p in a.files:
        if p.endswith(".net"):
            declared = read_net(p, a.width)[1] or declared
    net = build_cut_net(designs)
    if declared is not None and declared != net.base:
        raise InputError(f"the net is based on {net.base}, not on the declared {declared}")
    trace: list = []
    out = normalize(net, trace=trace, fuel=a.fuel)
    if a.dot:
        with open(a.dot, "w", encoding="utf-8") as fh:
            fh.write(emit_dot(designs, trace))
    text = dumps(out) if isinstance(out, Design) else f"failure: {out}\n"
    if a.trace:
        text += "; trace\n" + format_trace(trace)
    emit(text, a.out)
    return OK if isinstance(out, Design) else NEGATIVE


def cmd_orth(a) -> int:
    designs = read_designs(a.files, a.width)
    net = build_cut_net(designs)
    if not net.closed:
        raise InputError(f"orthogonality needs a closed net; these designs leave {net.base}")
    trace: list = []
    out = normalize(net, trace=trace, fuel=a.fuel)
    yes = isinstance(out, Design) and out.chronicles == ((DAIMON,),)
    text = "orthogonal\n" if yes else f"not orthogonal: {out if not isinstance(out, Design) else 'normal form is not the daimon'}\n"
    if a.trace:
        text += format_trace(trace)
    if a.dot:
        with open(a.dot, "w", encoding="utf-8") as fh:
            fh.write(emit_dot(designs, trace))
    emit(text, a.out)
    return OK if yes else NEGATIVE


def cmd_paths(a) -> int:
    designs = read_designs(a.files, a.width)
    if a.visitable:
        ps = visitable_paths(designs, depth=a.path_depth)
    else:
        if len(designs) != 1:
            raise InputError("paths of a design take one design (use --visitable for a set)")
        ps = paths_of_design(designs[0])
    lines = sorted(format_chronicle(p.actions) if p.actions else "ε" for p in ps)
    emit("".join(l + "\n" for l in lines), a.out)
    return OK


def cmd_dual(a) -> int:
    p = read_path(a.file)
    rep = validate_path(p)
    if not rep.ok:
        raise InputError(f"the input is not a path: {rep}")
    q = dual(p)
    rq = validate_path(q)
    text = format_path(q)
    if not rq.ok:
        text += f"; not a path: {rq}\n"
    emit(text, a.out)
    return OK if rq.ok else NEGATIVE


def _generators(a) -> list[Design]:
    if a.family:
        return list(family(a.family)(a.depth))
    if not a.generators:
        raise InputError("give --family or --generators")
    return read_designs(a.generators, a.width)


def cmd_incarnate(a) -> int:
    d = read_designs([a.file], a.width)[0]
    B = BehaviourApprox(_generators(a), a.width)
    try:
        inc = incarnation_of(d, B)
    except NotInBehaviour as e:
        msg = f"not in the behaviour: {e}\n"
        if e.witness is not None:
            msg += "; not orthogonal to\n" + dumps(e.witness)
        emit(msg, a.out)
        return NEGATIVE
    text = dumps(inc)
    text += "; material\n" if inc == d else "; proper sub-design (not material)\n"
    emit(text, a.out)
    return OK


def cmd_principal(a) -> int:
    if a.family:
        gens, name = family(a.family), a.family
    else:
        gens, name = read_designs(a.generators or [], a.width), "designs"
        if not gens:
            raise InputError("give --family or --generators")
    rep = check_principal(gens, a.depth, a.width, name=name, routes=a.routes)
    emit(rep.to_json() + "\n" if a.json else rep.text(), a.out)
    return OK if rep.verdict == "equal" else NEGATIVE


def cmd_lemmas(a) -> int:
    from .lemmas import check_lemma_suite

    rep = check_lemma_suite(a.names or None)
    emit(rep.to_json() + "\n" if a.json else rep.text(), a.out)
    return OK if rep.passed else NEGATIVE


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=5, help="depth bound (default 5)")
    common.add_argument("--width", type=int, default=2, help="ramification width bound (default 2)")
    common.add_argument("--out", metavar="FILE", help="write the result to FILE")
    p = argparse.ArgumentParser(prog="lud", description="Ludics interaction engine")
    sub = p.add_subparsers(dest="verb", required=True)

    m = sub.add_parser("make", parents=[common], help="build a library design",
                       description="\n".join(MAKERS.values()),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    m.add_argument("kind")
    m.add_argument("args", nargs="*")
    m.add_argument("--base", help="base address for nat, list and fsigma")
    m.set_defaults(run=cmd_make)

    v = sub.add_parser("validate", parents=[common], help="check the design conditions")
    v.add_argument("files", nargs="+")
    v.set_defaults(run=cmd_validate)

    for verb, fn, hlp in (("normalize", cmd_normalize, "normal form of a cut-net"),
                          ("orth", cmd_orth, "orthogonality of a closed net")):
        n = sub.add_parser(verb, parents=[common], help=hlp)
        n.add_argument("files", nargs="+", help="design files and .net files")
        n.add_argument("--trace", action="store_true", help="print the visited actions")
        n.add_argument("--dot", metavar="FILE", help="write the net and its trace as DOT")
        n.add_argument("--fuel", type=int, help="bound on conversion steps")
        n.set_defaults(run=fn)

    q = sub.add_parser("paths", parents=[common], help="paths of a design, or visitable paths of a set")
    q.add_argument("files", nargs="+")
    q.add_argument("--visitable", action="store_true")
    q.add_argument("--path-depth", type=int, help="length bound for visitable paths")
    q.set_defaults(run=cmd_paths)

    d = sub.add_parser("dual", parents=[common], help="dual of a path")
    d.add_argument("file", help="a (base ...) line followed by one action per line")
    d.set_defaults(run=cmd_dual)

    i = sub.add_parser("incarnate", parents=[common], help="incarnation in a behaviour")
    i.add_argument("file")
    i.add_argument("--family", help="nat or listN, truncated at --depth")
    i.add_argument("--generators", nargs="+", metavar="FILE")
    i.set_defaults(run=cmd_incarnate)

    r = sub.add_parser("principal", parents=[common], help="bounded principality check")
    r.add_argument("--family", help="nat or listN, truncated at --depth")
    r.add_argument("--generators", nargs="+", metavar="FILE")
    r.add_argument("--routes", choices=("both", "pipeline", "search"), default="both")
    r.add_argument("--json", action="store_true", help="machine-readable report")
    r.set_defaults(run=cmd_principal)

    s = sub.add_parser("lemmas", parents=[common], help="run the lemma suite")
    s.add_argument("names", nargs="*")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_lemmas)
    return p


def run(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT if e.code else OK
    try:
        return a.run(a)
    except (BoundExceeded, FuelExhausted) as e:
        print(f"lud: bound exhausted: {e}", file=sys.stderr)
        return BOUND
    except RouteDisagreement as e:
        print(f"lud: {e}", file=sys.stderr)
        return DISAGREE
    except (LudicsError, ValueError, KeyError) as e:
        print(f"lud: {e}", file=sys.stderr)
        return INPUT


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # output closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = OK
    sys.exit(code)
