"""Graphviz DOT rendering of design trees and interaction traces."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

from .core import Action, Design, NegRule
from .interaction import TraceStep


def _label(a) -> str:
    return str(a).replace('"', '\\"')


def _walk(t, prefix: tuple, parent: Optional[str], ids: dict, key, lines: list) -> None:
    """Emit one node per action of the tree ``t`` (and the edges to its children)."""
    if isinstance(t, NegRule):
        for ram, p in t.branches:
            act = Action("-", t.address, ram)
            here = prefix + (act,)
            nid = _node(here, act, ids, key, lines)
            if parent is not None:
                lines.append(f"  {parent} -> {nid};")
            _walk(p, here, nid, ids, key, lines)
        return
    here = prefix + (t.action,)
    nid = _node(here, t.action, ids, key, lines)
    if parent is not None:
        lines.append(f"  {parent} -> {nid};")
    for r in t.rules:
        _walk(r, here, nid, ids, key, lines)


def _node(chron: tuple, act, ids: dict, key, lines: list) -> str:
    nid = f"n{len(ids)}"
    ids[key(chron)] = nid
    lines.append(f'  {nid} [label="{_label(act)}"];')
    return nid


def emit_dot(
    obj: Union[Design, Sequence[Design], Iterable[TraceStep]],
    trace: Optional[Sequence[TraceStep]] = None,
    name: str = "ludics",
) -> str:
    """DOT text for a design, a net of designs, or a bare trace.

    Each action is a node labelled like ``+xi{1,3}`` (the daimon is ``#``)
    and tree edges go from an action to the actions it justifies.  A trace,
    given alone or together with the net it was recorded on, is drawn as a
    dashed line through the visited actions in order.
    """
    lines = [f"digraph {name} {{", "  node [shape=plaintext];", "  edge [arrowhead=none];"]
    ids: dict = {}
    if isinstance(obj, Design):
        designs = [obj]
    elif trace is None and all(isinstance(s, TraceStep) for s in obj):
        trace, designs = list(obj), []
    else:
        designs = list(obj)
    for k, d in enumerate(designs):
        if len(designs) > 1:
            lines.append(f"  subgraph cluster_{k} {{")
        if d.chronicles:
            _walk(d.tree, (), None, ids, lambda c, k=k: (k, c), lines)
        if len(designs) > 1:
            lines.append("  }")
    if trace:
        prev = None
        for i, s in enumerate(trace):
            nid = ids.get((s.origin, s.chronicle))
            if nid is None:
                nid = f"t{i}"
                lines.append(f'  {nid} [label="{_label(s.action)}"];')
            if prev is not None:
                lines.append(f"  {prev} -> {nid} [style=dashed, arrowhead=normal, constraint=false];")
            prev = nid
    lines.append("}")
    return "\n".join(lines) + "\n"
