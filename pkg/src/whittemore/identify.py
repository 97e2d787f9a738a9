"""Causal queries and the complete identification algorithm.

identify compiles P(effect | do, given) against a causal diagram into a
probability formula over the available joint, or returns Fail with a hedge
witness when no such formula exists. The recursion is the standard complete
algorithm of Shpitser & Pearl (2006); conditional queries are reduced to the
unconditional case by a fraction.
"""
from __future__ import annotations

from typing import Any, Iterable, Mapping

from .errors import QueryError, UnknownVariableError
from .formula import (
    Fail,
    Form,
    Formula,
    Fraction,
    Hedge,
    Prob,
    Sum,
    free_variables,
    product,
    sum_over,
)
from .model import (
    Data,
    Model,
    Variable,
    ancestors,
    c_components,
    d_separated,
    latent_projection,
    subgraph,
    topological_order,
    variables,
)
from .simplify import simplify_form


def _normalize_part(value, what: str):
    """Return (variables_tuple, values_map_or_None) for effect/do/given input."""
    if value is None:
        return (), {}
    if isinstance(value, Mapping):
        out = {}
        for k, v in value.items():
            out[Variable(k)] = v
        if len(out) != len(value):
            raise QueryError(f"duplicate variable in {what}")
        return tuple(out), dict(out)
    if isinstance(value, (str, Variable)):
        value = (value,)
    vs = tuple(Variable(v) for v in value)
    if len(set(vs)) != len(vs):
        raise QueryError(f"duplicate variable in {what}")
    return vs, None


class Query:
    """A statistical or causal query in unbound, bound, or event form.

    Unbound queries name bare variables throughout; bound queries map do/given
    variables to values; event queries additionally map the effect variables
    to values, denoting a single probability.
    """

    __slots__ = ("effect", "effect_values", "do", "do_values", "given", "given_values")

    def __init__(self, effect, do=None, given=None):
        effect_vars, effect_values = _normalize_part(effect, "effect")
        do_vars, do_values = _normalize_part(do, "do")
        given_vars, given_values = _normalize_part(given, "given")
        if not effect_vars:
            raise QueryError("query effect must name at least one variable")
        parts = (set(effect_vars), set(do_vars), set(given_vars))
        for i in range(3):
            for j in range(i + 1, 3):
                overlap = parts[i] & parts[j]
                if overlap:
                    raise QueryError(
                        f"effect, do and given must be disjoint; {sorted(overlap)} repeats"
                    )
        # one binding style per query: bare-variable parts and valued parts
        # may not be mixed (empty parts are compatible with either)
        some_bound = any(v is not None and v for v in (do_values, given_values))
        some_bound = some_bound or effect_values is not None
        some_unbound = (do_values is None and do_vars) or (
            given_values is None and given_vars
        )
        if some_bound and some_unbound:
            raise QueryError("cannot mix bound and unbound parts in one query")
        object.__setattr__(self, "effect", effect_vars)
        object.__setattr__(self, "effect_values", effect_values)
        object.__setattr__(self, "do", do_vars)
        object.__setattr__(self, "do_values", do_values)
        object.__setattr__(self, "given", given_vars)
        object.__setattr__(self, "given_values", given_values)

    def __setattr__(self, name, value):
        raise AttributeError("Query is immutable")

    @property
    def kind(self) -> str:
        if self.effect_values is not None:
            return "event"
        if (self.do and self.do_values is None) or (
            self.given and self.given_values is None
        ):
            return "unbound"
        return "bound"

    def bound_values(self) -> dict[Variable, Any]:
        """All variable->value pairs the query fixes (do, given, event effect)."""
        out: dict[Variable, Any] = {}
        for values in (self.do_values, self.given_values, self.effect_values):
            if values:
                out.update(values)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Query):
            return NotImplemented
        return (
            set(self.effect) == set(other.effect)
            and self.effect_values == other.effect_values
            and set(self.do) == set(other.do)
            and self.do_values == other.do_values
            and set(self.given) == set(other.given)
            and self.given_values == other.given_values
        )

    __hash__ = None

    def __repr__(self) -> str:
        parts = [f"effect={self.effect_values or list(self.effect)}"]
        if self.do:
            parts.append(f"do={self.do_values or list(self.do)}")
        if self.given:
            parts.append(f"given={self.given_values or list(self.given)}")
        return "<Query " + " ".join(parts) + ">"


def make_query(effect, do=None, given=None) -> Query:
    """Validate and build a Query; do and given default to empty."""
    return Query(effect, do, given)


def identify(model: Model, data_or_query, query: Query | None = None) -> Formula | Fail:
    """Compile a query against a model into a formula over the given joint.

    Callable as identify(model, query) or identify(model, data, query); the
    data signature defaults to the full observational joint. Returns Fail
    (not an exception) when the query is provably non-identifiable.
    """
    if query is None:
        data = Data(sorted(model.vertices))
        query = data_or_query
    else:
        data = data_or_query
    if not isinstance(query, Query):
        raise QueryError(f"expected a query, got {type(query).__name__}")
    if not data.joint_set <= model.vertices:
        raise UnknownVariableError(
            f"data variables not in model: {sorted(data.joint_set - model.vertices)}"
        )
    q_vars = set(query.effect) | set(query.do) | set(query.given)
    missing = q_vars - data.joint_set
    if missing:
        raise UnknownVariableError(
            f"query variables absent from the data signature: {sorted(missing)}"
        )

    g = model
    if data.joint_set < model.vertices:
        g = latent_projection(model, data.joint_set)

    y = variables(query.effect)
    x = variables(query.do)
    z = variables(query.given)
    joint = Prob(g.vertices)

    result = _id(y | z, x, joint, g)
    if isinstance(result, Fail):
        return result
    form: Form = result
    # Variables pulled into the intervention by step 3 can survive as free
    # conditioning variables; the result is constant in them, so averaging
    # over their observational marginal removes the dependence.
    stray = free_variables(form) - (y | x | z)
    if stray:
        form = sum_over(product([form, Prob(stray)]), stray)
    if z:
        # P(y | z, do(x)) = P(y, z | do(x)) / sum_y P(y, z | do(x))
        form = Fraction(form, sum_over(form, y))
    form = simplify_form(form)
    free = free_variables(form)
    bindings = {v: val for v, val in query.bound_values().items() if v in free}
    return Formula(form, bindings, effect=y)


def _sorted_components(g: Model) -> list[frozenset[Variable]]:
    return sorted(c_components(g), key=lambda c: tuple(sorted(c)))


def _ancestors_after_cut(g: Model, roots: frozenset[Variable], cut: frozenset[Variable]):
    """Ancestors of roots once edges into `cut` are deleted."""
    seen = set(roots)
    stack = list(roots)
    while stack:
        v = stack.pop()
        if v in cut:
            continue
        for p in g.parents(v):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def _prune_conditioning(
    g: Model, v: Variable, conditioning: frozenset[Variable]
) -> frozenset[Variable]:
    """Drop conditioning variables d-separated from v given the rest.

    Each removal is a conditional independence of every distribution
    compatible with g, so the conditional probability is unchanged.
    """
    keep = set(conditioning)
    changed = True
    while changed:
        changed = False
        for w in sorted(keep):
            if d_separated(g, v, (w,), keep - {w}):
                keep.discard(w)
                changed = True
                break
    return frozenset(keep)


def _conditional_factor(
    p_form: Form, v: Variable, order: list[Variable], g: Model
) -> Form:
    """The current distribution conditioned: P(v | topological predecessors)."""
    vertex_set = g.vertices
    predecessors = frozenset(order[: order.index(v)])
    if isinstance(p_form, Prob) and p_form.p == vertex_set and not p_form.given:
        # conditionals of the plain joint: emit directly, minus irrelevancies
        return Prob(frozenset((v,)), _prune_conditioning(g, v, predecessors))
    numer = sum_over(p_form, vertex_set - (predecessors | {v}))
    denom = sum_over(p_form, vertex_set - predecessors)
    return Fraction(numer, denom)


def _id(
    y: frozenset[Variable], x: frozenset[Variable], p_form: Form, g: Model
) -> Form | Fail:
    v = g.vertices

    # 1: no intervention left; marginalize the current distribution
    if not x:
        return sum_over(p_form, v - y)

    # 2: restrict to the ancestors of the effect
    anc = ancestors(g, y)
    if anc != v:
        return _id(y, x & anc, sum_over(p_form, v - anc), subgraph(g, anc))

    # 3: grow the intervention with vertices that no longer reach the effect
    #    once the intervention's incoming edges are cut
    w = (v - x) - _ancestors_after_cut(g, y, x)
    if w:
        return _id(y, x | w, p_form, g)

    # 4: factor across the confounded components of the do-removed subgraph
    components = _sorted_components(subgraph(g, v - x))
    if len(components) > 1:
        factors = []
        for s in components:
            r = _id(s, v - s, p_form, g)
            if isinstance(r, Fail):
                return r
            factors.append(r)
        return sum_over(product(factors), v - (y | x))

    s = components[0]
    g_components = _sorted_components(g)

    # 5: the whole graph is one confounded component; a hedge blocks the query
    if len(g_components) == 1:
        hedge = Hedge(forest=g, subforest=subgraph(g, s), witness=y)
        message = (
            f"P({', '.join(sorted(y))} | do({', '.join(sorted(x))})) is not "
            f"identifiable: hedge over {sorted(v)} with confounded subforest {sorted(s)}"
        )
        return Fail(hedge, message)

    order = topological_order(g)

    # 6: the component stands alone; truncate by chain factorization
    if s in g_components:
        factors = [_conditional_factor(p_form, u, order, g) for u in sorted(s)]
        return sum_over(product(factors), s - y)

    # 7: recurse into the enclosing component with a rewritten distribution
    s_prime = next(c for c in g_components if s <= c)
    factors = [_conditional_factor(p_form, u, order, g) for u in sorted(s_prime)]
    return _id(y, x & s_prime, product(factors), subgraph(g, s_prime))
