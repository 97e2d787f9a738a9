"""Categorical distributions, the distribution protocol, and formula evaluation.

Any object implementing estimate/measure/signature can stand in for a
distribution; the only shipped implementation is a categorical joint with
empirical (maximum-likelihood) weights. Sample-built distributions keep
integer counts so that measures are exact sample ratios.
"""
from __future__ import annotations

import itertools
import math
from typing import Any, Iterable, Mapping, Sequence

from .errors import DataFormatError, EstimationError, UnknownVariableError
from .formula import Fail, Form, Formula, Fraction, Prob, Product, Sum, free_variables
from .identify import Query, identify
from .model import Data, Model, Variable

Event = Mapping[Variable, Any]

_NORMALIZATION_TOL = 1e-9


def _as_event(event: Mapping[Any, Any]) -> dict[Variable, Any]:
    return {Variable(k): v for k, v in event.items()}


class CategoricalDistribution:
    """A finite joint distribution over categorical variables.

    Cells are keyed by value tuples aligned with the sorted variable order.
    `total` is the normalizer: the sample count for empirical distributions,
    1.0 for distributions given directly by weights.
    """

    def __init__(
        self,
        variables: Sequence[Variable],
        support: Mapping[Variable, tuple],
        cells: Mapping[tuple, float | int],
        total: float | int,
    ):
        self._variables = tuple(variables)
        self._support = dict(support)
        self._cells = dict(cells)
        self._total = total

    @classmethod
    def from_samples(cls, samples: Sequence[Mapping[Any, Any]]) -> "CategoricalDistribution":
        if not samples:
            raise DataFormatError("cannot infer a distribution from zero samples")
        first = _as_event(samples[0])
        names = tuple(sorted(first))
        support: dict[Variable, list] = {v: [] for v in names}
        cells: dict[tuple, int] = {}
        for i, raw in enumerate(samples):
            sample = _as_event(raw)
            if tuple(sorted(sample)) != names:
                raise DataFormatError(
                    f"sample {i} has variables {sorted(sample)}, expected {list(names)}"
                )
            for v in names:
                if sample[v] not in support[v]:
                    support[v].append(sample[v])
            key = tuple(sample[v] for v in names)
            cells[key] = cells.get(key, 0) + 1
        return cls(
            names,
            {v: tuple(vals) for v, vals in support.items()},
            cells,
            len(samples),
        )

    @classmethod
    def from_counts(
        cls, counts: Iterable[tuple[Mapping[Any, Any], int]]
    ) -> "CategoricalDistribution":
        """Build from (full event, nonnegative integer count) pairs."""
        events = [(_as_event(e), n) for e, n in counts]
        if not events:
            raise DataFormatError("empty count table")
        names = tuple(sorted(events[0][0]))
        support: dict[Variable, list] = {v: [] for v in names}
        cells: dict[tuple, int] = {}
        total = 0
        for event, n in events:
            if tuple(sorted(event)) != names:
                raise DataFormatError("count table events must share one variable set")
            for v in names:
                if event[v] not in support[v]:
                    support[v].append(event[v])
            cells[tuple(event[v] for v in names)] = n
            total += n
        return cls(names, {v: tuple(vals) for v, vals in support.items()}, cells, total)

    @classmethod
    def from_weights(
        cls, weights: Iterable[tuple[Mapping[Any, Any], float]], tolerance: float = 1e-12
    ) -> "CategoricalDistribution":
        """Build from (full event, probability) pairs summing to one."""
        events = [(_as_event(e), w) for e, w in weights]
        if not events:
            raise DataFormatError("empty weight table")
        names = tuple(sorted(events[0][0]))
        support: dict[Variable, list] = {v: [] for v in names}
        cells: dict[tuple, float] = {}
        for event, w in events:
            if tuple(sorted(event)) != names:
                raise DataFormatError("weight table events must share one variable set")
            if w < -tolerance:
                raise DataFormatError(f"negative probability {w!r}")
            for v in names:
                if event[v] not in support[v]:
                    support[v].append(event[v])
            cells[tuple(event[v] for v in names)] = w
        mass = math.fsum(cells.values())
        if abs(mass - 1.0) > tolerance:
            raise EstimationError(
                f"weights sum to {mass!r}, not 1 (tolerance {tolerance:g})"
            )
        return cls(names, {v: tuple(vals) for v, vals in support.items()}, cells, 1.0)

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self._variables

    @property
    def support(self) -> dict[Variable, tuple]:
        return dict(self._support)

    def signature(self) -> Data:
        return Data(self._variables)

    def measure(self, event: Mapping[Any, Any]) -> float:
        """Probability of the event; unmentioned variables are marginalized."""
        ev = _as_event(event)
        unknown = set(ev) - set(self._variables)
        if unknown:
            raise UnknownVariableError(f"not in distribution: {sorted(unknown)}")
        picks = [
            (i, ev[v]) for i, v in enumerate(self._variables) if v in ev
        ]
        matching = [
            w for key, w in self._cells.items() if all(key[i] == val for i, val in picks)
        ]
        return math.fsum(matching) / self._total

    def estimate(self, target: Formula | Query):
        """Apply a formula (or query) to this distribution.

        Bound targets yield a new distribution over the effect variables;
        fully bound (event) targets yield a scalar probability.
        """
        if isinstance(target, Fail):
            raise EstimationError(f"cannot estimate a failed identification: {target.message}")
        if isinstance(target, Query):
            target = self._query_formula(target)
        if not isinstance(target, Formula):
            raise EstimationError(f"cannot estimate a {type(target).__name__}")
        free = free_variables(target)
        effect = target.effect if target.effect is not None else free - set(target.bindings)
        required = (free - effect) - set(target.bindings)
        if required:
            raise EstimationError(
                "formula cannot be used as an argument to estimate without first "
                f"providing the necessary variable bindings: {sorted(required)}"
            )
        open_vars = tuple(sorted(effect - set(target.bindings)))
        if not open_vars:
            return evaluate(self, target)
        for v in open_vars:
            if v not in self._support:
                raise UnknownVariableError(f"not in distribution: {v!r}")
        cells: dict[tuple, float] = {}
        for combo in itertools.product(*(self._support[v] for v in open_vars)):
            context = dict(zip(open_vars, combo))
            cells[combo] = evaluate(self, target, context)
        mass = math.fsum(cells.values())
        if abs(mass - 1.0) > _NORMALIZATION_TOL:
            raise EstimationError(
                f"estimated distribution over {list(open_vars)} has total mass {mass!r}; "
                "the formula does not define a normalized distribution here"
            )
        support = {v: self._support[v] for v in open_vars}
        return CategoricalDistribution(open_vars, support, cells, 1.0)

    def _query_formula(self, query: Query) -> Formula:
        if query.do:
            raise EstimationError(
                "causal query has no meaning without a model: use identify or infer"
            )
        form = Prob(frozenset(query.effect), frozenset(query.given))
        bindings = query.bound_values()
        return Formula(form, bindings, effect=frozenset(query.effect))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CategoricalDistribution):
            return NotImplemented
        if self._variables != other._variables:
            return False
        keys = set(self._cells) | set(other._cells)
        return all(
            math.isclose(
                self._cells.get(k, 0) / self._total,
                other._cells.get(k, 0) / other._total,
                rel_tol=0.0,
                abs_tol=1e-12,
            )
            for k in keys
        )

    __hash__ = None

    def __repr__(self) -> str:
        vs = " ".join(repr(v) for v in self._variables)
        return f"<categorical over [{vs}], {len(self._cells)} outcomes>"


def categorical(samples: Sequence[Mapping[Any, Any]]) -> CategoricalDistribution:
    """Infer an empirical categorical joint from a vector of sample events."""
    return CategoricalDistribution.from_samples(samples)


def signature(distribution) -> Data:
    return distribution.signature()


def measure(distribution, event: Mapping[Any, Any]) -> float:
    return distribution.measure(event)


def estimate(distribution, target):
    return distribution.estimate(target)


class _Evaluator:
    """Recursive form evaluation against one categorical distribution."""

    def __init__(self, dist: CategoricalDistribution):
        self.dist = dist
        self.zero_conditionals = 0  # diagnostic: 0/0 conditionals hit

    def run(self, form: Form, env: Mapping[Variable, Any]) -> float:
        if isinstance(form, Prob):
            joint = {v: self._lookup(env, v) for v in form.p | form.given}
            numer = self.dist.measure(joint)
            if not form.given:
                return numer
            denom = self.dist.measure({v: joint[v] for v in form.given})
            if denom == 0.0:
                self.zero_conditionals += 1
                return 0.0
            return numer / denom
        if isinstance(form, Sum):
            subs = sorted(form.sub)
            supports = []
            for v in subs:
                if v not in self.dist.support:
                    raise UnknownVariableError(f"not in distribution: {v!r}")
                supports.append(self.dist.support[v])
            total = 0.0
            for combo in itertools.product(*supports):
                inner = dict(env)
                inner.update(zip(subs, combo))
                total += self.run(form.body, inner)
            return total
        if isinstance(form, Product):
            out = 1.0
            for factor in form.factors:
                out *= self.run(factor, env)
            return out
        if isinstance(form, Fraction):
            denom = self.run(form.denom, env)
            if denom == 0.0:
                self.zero_conditionals += 1
                return 0.0
            return self.run(form.numer, env) / denom
        raise EstimationError(f"cannot evaluate {type(form).__name__}")

    def _lookup(self, env: Mapping[Variable, Any], v: Variable):
        if v in env:
            return env[v]
        raise EstimationError(f"unbound variable {v!r} during formula evaluation")


def evaluate(
    dist: CategoricalDistribution,
    formula: Formula | Form,
    context: Mapping[Any, Any] | None = None,
) -> float:
    """Evaluate a formula to a probability under the given variable context.

    The root environment is the formula's bindings overlaid by `context`;
    sums shadow both, giving lexical scoping.
    """
    if isinstance(formula, Formula):
        env = dict(formula.bindings)
        form = formula.form
    else:
        env = {}
        form = formula
    if context:
        env.update(_as_event(context))
    return _Evaluator(dist).run(form, env)


def infer(model: Model, distribution, query: Query):
    """identify against the distribution's signature, then estimate.

    A Fail from identification is returned as-is.
    """
    result = identify(model, distribution.signature(), query)
    if isinstance(result, Fail):
        return result
    return distribution.estimate(result)
