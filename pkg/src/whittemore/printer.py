"""Printing of values.

print_value is the canonical writer: reading its output back yields an equal
value for every literal (and for models, data signatures and queries, which
print as their constructor expressions). display_value is what the REPL and
script runner show; it differs only for values with a friendlier rendering
(sample tables, distributions, formulas).
"""
from __future__ import annotations

from typing import Any, Mapping, Sequence

from .distribution import CategoricalDistribution
from .formula import Fail, Formula
from .identify import Query
from .model import Data, Model, Variable


class TextBlock(str):
    """A string displayed raw (no quoting) by the REPL."""

    __slots__ = ()


def _escape(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{out}"'


def print_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Variable):
        return ":" + str.__str__(value)
    if isinstance(value, str) and not isinstance(value, TextBlock):
        return _escape(value)
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + " ".join(print_value(x) for x in value) + "]"
    if isinstance(value, (set, frozenset)):
        items = sorted(print_value(x) for x in value)
        return "#{" + " ".join(items) + "}"
    if isinstance(value, Mapping):
        pairs = sorted(
            (print_value(k), print_value(v)) for k, v in value.items()
        )
        return "{" + ", ".join(f"{k} {v}" for k, v in pairs) + "}"
    if isinstance(value, Model):
        return _print_model(value)
    if isinstance(value, Data):
        return "(data [" + " ".join(print_value(v) for v in value.joint) + "])"
    if isinstance(value, Query):
        return _print_query(value)
    return display_value(value)


def _print_model(m: Model) -> str:
    entries = ", ".join(
        f"{print_value(v)} [{' '.join(print_value(p) for p in ps)}]"
        for v, ps in sorted(m.dag.items())
    )
    confs = [
        "#{" + " ".join(print_value(c) for c in sorted(g)) + "}"
        for g in sorted(m.confounding, key=lambda g: sorted(g))
    ]
    return "(model {" + entries + "}" + ("".join(" " + c for c in confs)) + ")"


def _print_query(q: Query) -> str:
    if q.effect_values is not None:
        effect = print_value(q.effect_values)
    else:
        effect = "[" + " ".join(print_value(v) for v in q.effect) + "]"
    parts = ["(q", effect]
    for marker, vars_, values in (
        (":do", q.do, q.do_values),
        (":given", q.given, q.given_values),
    ):
        if not vars_:
            continue
        if values is None:
            parts.append(marker + " [" + " ".join(print_value(v) for v in vars_) + "]")
        else:
            parts.append(marker + " " + print_value(values))
    return " ".join(parts) + ")"


def _is_sample_collection(value: Any) -> bool:
    if not isinstance(value, (list, tuple)) or not value:
        return False
    if not all(isinstance(x, Mapping) and x for x in value):
        return False
    keys = set(value[0])
    return all(set(x) == keys for x in value)


def _sample_table(samples: Sequence[Mapping[Variable, Any]]) -> str:
    columns = list(samples[0])
    headers = [str(c) for c in columns]
    rows = [[_cell(s[c]) for c in columns] for s in samples]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(len(columns))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def _cell(v: Any) -> str:
    if isinstance(v, str) and not isinstance(v, Variable):
        return v
    return print_value(v)


def display_value(value: Any) -> str:
    if isinstance(value, TextBlock):
        return str(value)
    if isinstance(value, Formula):
        from .render import to_text

        return to_text(value)
    if isinstance(value, Fail):
        return "Fail: " + value.message
    if isinstance(value, CategoricalDistribution):
        vs = " ".join(print_value(v) for v in value.variables)
        return f"#categorical[{vs}]"
    if _is_sample_collection(value):
        return _sample_table(value)
    return print_value(value)
