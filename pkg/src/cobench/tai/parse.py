"""Solution text -> ParsedSolution.

The parser is total: any input string yields a ParsedSolution, never an
exception. It scans for the expected answer label ("Route:", "Set:", ...),
takes the LAST well-formed occurrence (models often restate their final
answer), reads the bracketed payload, and picks up a following
"Objective: <number>" if present.
"""

from __future__ import annotations

import ast
import re
from typing import List, Optional, Sequence, Tuple

from ..problems.types import (
    JobOrder,
    MachineSchedules,
    ProblemKind,
    Route,
    RouteSet,
    Solution,
    VertexSet,
)
from .types import GRAMMAR_BY_KIND, OutputGrammar, ParsedSolution

# Single routes accept both labels: instruction text says "Route" but some
# outputs (and the nested grammar) use "Routes".
_LABELS = {
    OutputGrammar.ROUTE: ("Route", "Routes"),
    OutputGrammar.ROUTES: ("Routes", "Route"),
    OutputGrammar.SET: ("Set",),
    OutputGrammar.ORDER: ("Order",),
    OutputGrammar.SCHEDULE: ("Schedule",),
}

_OBJECTIVE_RE = re.compile(
    r"objective\s*\**\s*[:=]\s*\**\s*(-?\d+(?:\.\d+)?)", re.IGNORECASE
)


def _find_label_positions(text: str, labels: Sequence[str]) -> List[int]:
    pat = re.compile(
        r"(?:" + "|".join(re.escape(l) for l in labels) + r")\s*\**\s*[:=]",
        re.IGNORECASE,
    )  # alternation backtracks, so "Route" before "Routes" still matches both
    return [m.end() for m in pat.finditer(text)]


def _scan_bracket(text: str, start: int) -> Optional[Tuple[str, int]]:
    """Return (bracketed substring, end index) for the first balanced
    [...] beginning at or shortly after `start`."""
    i = start
    n = len(text)
    # Tolerate whitespace and markdown adornment between the label and '['.
    while i < n and text[i] in " \t\r\n*_`":
        i += 1
    if i >= n or text[i] != "[":
        return None
    depth = 0
    for j in range(i, n):
        c = text[j]
        if c == "[":
            depth += 1
        elif c == "]":
            depth -= 1
            if depth == 0:
                return text[i : j + 1], j + 1
    return None


def _as_int_list(obj) -> Optional[List[int]]:
    if not isinstance(obj, (list, tuple)) or not obj:
        return None
    out = []
    for v in obj:
        if isinstance(v, bool) or not isinstance(v, int):
            return None
        out.append(v)
    return out


def _as_nested_int_lists(obj) -> Optional[List[List[int]]]:
    if not isinstance(obj, (list, tuple)) or not obj:
        return None
    out = []
    for row in obj:
        vals = _as_int_list(row)
        if vals is None:
            return None
        out.append(vals)
    return out


def _payload_to_solution(kind: ProblemKind, obj) -> Optional[Solution]:
    grammar = GRAMMAR_BY_KIND[kind]
    if grammar is OutputGrammar.ROUTE:
        flat = _as_int_list(obj)
        return Route(tuple(flat)) if flat is not None else None
    if grammar is OutputGrammar.ROUTES:
        nested = _as_nested_int_lists(obj)
        if nested is not None:
            return RouteSet(tuple(tuple(r) for r in nested))
        flat = _as_int_list(obj)  # a single flat route is one vehicle
        return RouteSet((tuple(flat),)) if flat is not None else None
    if grammar is OutputGrammar.SET:
        if isinstance(obj, (list, tuple)) and len(obj) == 0:
            return VertexSet(frozenset())
        flat = _as_int_list(obj)
        return VertexSet.of(flat) if flat is not None else None
    if grammar is OutputGrammar.ORDER:
        flat = _as_int_list(obj)
        if flat is None:
            return None
        # Orders display 1-based; shift down. Bad ids then fail feasibility,
        # they never crash the parse.
        return JobOrder(tuple(j - 1 for j in flat))
    nested = _as_nested_int_lists(obj)
    return MachineSchedules(tuple(tuple(r) for r in nested)) if nested is not None else None


def _stated_objective(text: str, after: int) -> Optional[float]:
    m = _OBJECTIVE_RE.search(text, pos=after)
    if m:
        try:
            return float(m.group(1))
        except ValueError:  # pragma: no cover - regex guarantees a float
            return None
    return None


def parse(text, kind: ProblemKind) -> ParsedSolution:
    """Parse a model output for `kind`. Total function, never raises."""
    failed = ParsedSolution(solution=None, stated_objective=None, format_ok=False)
    if not isinstance(text, str) or not text:
        return failed
    try:
        grammar = GRAMMAR_BY_KIND[kind]
        positions = _find_label_positions(text, _LABELS[grammar])
        for pos in reversed(positions):
            scanned = _scan_bracket(text, pos)
            if scanned is None:
                continue
            payload_text, end = scanned
            try:
                obj = ast.literal_eval(payload_text)
            except (ValueError, SyntaxError, MemoryError, RecursionError):
                continue
            sol = _payload_to_solution(kind, obj)
            if sol is None:
                continue
            return ParsedSolution(
                solution=sol,
                stated_objective=_stated_objective(text, end),
                format_ok=True,
            )
        return failed
    except Exception:
        # Parsing is a gate, not a failure mode: anything unexpected is zeta=0.
        return failed


def strip_thinking(text: str) -> str:
    """Drop <think>...</think> spans (and an unterminated leading block)."""
    if "<think>" not in text:
        return text
    out = re.sub(r"<think>.*?</think>", "", text, flags=re.DOTALL)
    # An unclosed think block swallows the rest of the string.
    out = re.sub(r"<think>.*\Z", "", out, flags=re.DOTALL)
    return out
