"""Emitters: causal diagrams as DOT text, formulas as LaTeX math.

Output is deterministic: nodes, edges, subscripts and conditioning sets are
ordered by name; product factors are ordered by their rendered text
(descending, which puts bracketed sums ahead of plain conditionals, the
order probability factorizations are conventionally displayed in).
"""
from __future__ import annotations

from .formula import Fail, Form, Formula, Fraction, Prob, Product, Sum
from .model import Model
from .printer import print_value


def _names(vs) -> list[str]:
    return [str(v) for v in sorted(vs)]


def _latex_form(form: Form) -> str:
    if isinstance(form, Prob):
        inside = ", ".join(_names(form.p))
        if form.given:
            inside += " \\mid " + ", ".join(_names(form.given))
        return f"P({inside})"
    if isinstance(form, Sum):
        return "\\sum_{" + ", ".join(_names(form.sub)) + "} " + _latex_form(form.body)
    if isinstance(form, Product):
        rendered = []
        for factor in form.factors:
            text = _latex_form(factor)
            if isinstance(factor, Sum):
                text = "\\left[ " + text + " \\right]"
            rendered.append(text)
        return " ".join(sorted(rendered, reverse=True))
    return "\\frac{" + _latex_form(form.numer) + "}{" + _latex_form(form.denom) + "}"


def to_latex(f: Formula | Form) -> str:
    """LaTeX math for a formula; bindings become a trailing `where:` line."""
    if isinstance(f, Formula):
        math = _latex_form(f.form)
        if f.bindings:
            pairs = ", ".join(
                f"{v}={print_value(val)}" for v, val in sorted(f.bindings.items())
            )
            return math + "\nwhere: " + pairs
        return math
    return _latex_form(f)


def _text_form(form: Form) -> str:
    if isinstance(form, Prob):
        inside = ", ".join(_names(form.p))
        if form.given:
            inside += " | " + ", ".join(_names(form.given))
        return f"P({inside})"
    if isinstance(form, Sum):
        return "Σ_{" + ", ".join(_names(form.sub)) + "} " + _text_form(form.body)
    if isinstance(form, Product):
        rendered = []
        for factor in form.factors:
            text = _text_form(factor)
            if isinstance(factor, Sum):
                text = "[" + text + "]"
            rendered.append(text)
        return " ".join(sorted(rendered, reverse=True))
    return "(" + _text_form(form.numer) + ") / (" + _text_form(form.denom) + ")"


def to_text(f: Formula | Form | Fail) -> str:
    """Plain-text rendering of a formula, used by the REPL."""
    if isinstance(f, Fail):
        return "Fail: " + f.message
    if isinstance(f, Formula):
        text = _text_form(f.form)
        if f.bindings:
            pairs = ", ".join(
                f"{v}={print_value(val)}" for v, val in sorted(f.bindings.items())
            )
            return text + "\n  where: " + pairs
        return text
    return _text_form(f)


def to_dot(m: Model) -> str:
    """The diagram as a DOT digraph; confounding becomes dashed <-> edges."""
    lines = ["digraph G {"]
    for v in sorted(m.vertices):
        lines.append(f"  {v};")
    directed = sorted((p, v) for v, ps in m.dag.items() for p in ps)
    for p, v in directed:
        lines.append(f"  {p} -> {v};")
    for pair in sorted(m.bidirected_pairs(), key=sorted):
        a, b = sorted(pair)
        lines.append(f"  {a} -> {b} [dir=both, style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
