"""Probability formulas: recursive forms plus a variable-binding environment.

A form is one of four shapes: an atomic conditional probability, a sum over
subscripted variables, a product of forms, or a fraction. Binding is lexical:
a variable is resolved by the innermost enclosing sum that subscripts it,
otherwise by the formula's root binding map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Union

from .model import Model, Variable, variables


@dataclass(frozen=True)
class Prob:
    """P(p | given): an atomic conditional-probability term."""

    p: frozenset[Variable]
    given: frozenset[Variable] = frozenset()


@dataclass(frozen=True)
class Sum:
    """Summation of `body` over every joint value of the `sub` variables."""

    body: "Form"
    sub: frozenset[Variable]


@dataclass(frozen=True)
class Product:
    """Product of factors; order-insensitive (stored in a canonical order)."""

    factors: tuple["Form", ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=form_key)))


@dataclass(frozen=True)
class Fraction:
    numer: "Form"
    denom: "Form"


Form = Union[Prob, Sum, Product, Fraction]

ONE = Prob(frozenset())  # P() of nothing: the constant 1


def prob(p: Iterable[Any], given: Iterable[Any] = ()) -> Prob:
    return Prob(variables(p), variables(given))


def sum_over(body: Form, sub: Iterable[Any]) -> Form:
    """Sum `body` over `sub`; an empty subscript is the identity."""
    subs = variables(sub)
    return Sum(body, subs) if subs else body


def product(factors: Iterable[Form]) -> Form:
    """Build a product, unwrapping empty and singleton factor lists."""
    fs = tuple(factors)
    if not fs:
        return ONE
    if len(fs) == 1:
        return fs[0]
    return Product(fs)


def fraction(numer: Form, denom: Form) -> Fraction:
    return Fraction(numer, denom)


def form_key(f: Form):
    """Total order on forms, used to canonicalize product factor storage."""
    if isinstance(f, Prob):
        return (0, tuple(sorted(f.p)), tuple(sorted(f.given)))
    if isinstance(f, Sum):
        return (1, tuple(sorted(f.sub)), form_key(f.body))
    if isinstance(f, Product):
        return (2, tuple(form_key(x) for x in f.factors))
    return (3, form_key(f.numer), form_key(f.denom))


def count_nodes(f: Form) -> int:
    if isinstance(f, Prob):
        return 1
    if isinstance(f, Sum):
        return 1 + count_nodes(f.body)
    if isinstance(f, Product):
        return 1 + sum(count_nodes(x) for x in f.factors)
    return 1 + count_nodes(f.numer) + count_nodes(f.denom)


@dataclass(frozen=True, eq=False)
class Formula:
    """A form plus the root bindings of its free variables.

    `effect` records which free variables the formula is a distribution over;
    it is carried as metadata and ignored by structural equality.
    """

    form: Form
    bindings: Mapping[Variable, Any] = field(default_factory=dict)
    effect: frozenset[Variable] | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.form == other.form and dict(self.bindings) == dict(other.bindings)

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Hedge:
    """Witness of non-identifiability: a pair of nested confounded forests.

    `forest` and `subforest` are induced submodels with subforest contained in
    forest; `witness` is the sub-effect set they block.
    """

    forest: Model
    subforest: Model
    witness: frozenset[Variable]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hedge):
            return NotImplemented
        return (
            self.forest == other.forest
            and self.subforest == other.subforest
            and self.witness == other.witness
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Fail:
    """The negative result of identification, carrying its hedge."""

    hedge: Hedge
    message: str

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fail):
            return NotImplemented
        return self.hedge == other.hedge

    __hash__ = None


def free_variables(f: Formula | Form) -> frozenset[Variable]:
    """Variables of f not captured by any enclosing sum subscript."""
    if isinstance(f, Formula):
        f = f.form
    if isinstance(f, Prob):
        return f.p | f.given
    if isinstance(f, Sum):
        return free_variables(f.body) - f.sub
    if isinstance(f, Product):
        out: frozenset[Variable] = frozenset()
        for x in f.factors:
            out |= free_variables(x)
        return out
    return free_variables(f.numer) | free_variables(f.denom)
