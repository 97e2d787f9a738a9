"""Semi-Markovian causal diagrams and the graph primitives used by identification.

A model is a DAG over endogenous variables together with a collection of
confounding sets. A confounding set {a, b, ...} states that the background
noises of its members are dependent; for graph algorithms it is expanded to
the pairwise bidirected edges among its members.
"""
from __future__ import annotations

import heapq
import itertools
from typing import Any, Iterable, Mapping

from .errors import (
    ConfoundingArityError,
    CyclicGraphError,
    DuplicateParentError,
    UnknownVariableError,
    VariableNameError,
)

_RESERVED_CHARS = frozenset("()[]{}#")


class Variable(str):
    """An endogenous variable name; the DSL renders these as keywords (:x)."""

    __slots__ = ()

    def __new__(cls, name: Any) -> "Variable":
        if isinstance(name, Variable):
            return name
        text = str(name)
        if not text:
            raise VariableNameError("variable name must be non-empty")
        if any(ch.isspace() or ch in _RESERVED_CHARS for ch in text):
            raise VariableNameError(f"invalid variable name: {text!r}")
        return str.__new__(cls, text)

    def __repr__(self) -> str:
        return ":" + str.__str__(self)


def variables(names: Iterable[Any]) -> frozenset[Variable]:
    """Normalize an iterable of names (strings or Variables) to a variable set."""
    return frozenset(Variable(n) for n in names)


class Model:
    """A validated causal diagram. Instances are immutable once constructed.

    dag maps each variable to its parents; the given parent order is kept for
    display but carries no meaning (duplicates are rejected). confounding is
    a frozenset of frozensets, each of size >= 2.
    """

    __slots__ = ("dag", "confounding", "_parent_sets", "_children", "_bipairs")

    def __init__(
        self,
        dag: Mapping[Any, Iterable[Any]],
        confounding: Iterable[Iterable[Any]] = (),
    ):
        normalized: dict[Variable, tuple[Variable, ...]] = {}
        for var, parents in dag.items():
            v = Variable(var)
            ps = tuple(Variable(p) for p in parents)
            if len(set(ps)) != len(ps):
                raise DuplicateParentError(f"duplicate parent in parents of {v!r}")
            normalized[v] = ps
        vertex_set = frozenset(normalized)
        for v, ps in normalized.items():
            for p in ps:
                if p not in vertex_set:
                    raise UnknownVariableError(f"parent {p!r} of {v!r} is not a dag key")
        groups = set()
        for group in confounding:
            g = variables(group)
            if len(g) < 2:
                raise ConfoundingArityError(
                    f"confounding set must have at least 2 variables, got {sorted(g)}"
                )
            for c in g:
                if c not in vertex_set:
                    raise UnknownVariableError(f"confounding variable {c!r} is not a dag key")
            groups.add(g)

        parent_sets = {v: frozenset(ps) for v, ps in normalized.items()}
        children: dict[Variable, set[Variable]] = {v: set() for v in normalized}
        for v, ps in parent_sets.items():
            for p in ps:
                children[p].add(v)
        object.__setattr__(self, "dag", normalized)
        object.__setattr__(self, "confounding", frozenset(groups))
        object.__setattr__(self, "_parent_sets", parent_sets)
        object.__setattr__(
            self, "_children", {v: frozenset(cs) for v, cs in children.items()}
        )
        pairs = set()
        for g in self.confounding:
            for a, b in itertools.combinations(sorted(g), 2):
                pairs.add(frozenset((a, b)))
        object.__setattr__(self, "_bipairs", frozenset(pairs))
        _check_acyclic(parent_sets)

    def __setattr__(self, name, value):
        raise AttributeError("Model is immutable")

    @property
    def vertices(self) -> frozenset[Variable]:
        return frozenset(self.dag)

    def parents(self, v: Variable) -> frozenset[Variable]:
        return self._parent_sets[v]

    def children(self, v: Variable) -> frozenset[Variable]:
        return self._children[v]

    def bidirected_pairs(self) -> frozenset[frozenset[Variable]]:
        """Pairwise expansion of the confounding sets."""
        return self._bipairs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return (
            self._parent_sets == other._parent_sets
            and self.confounding == other.confounding
        )

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None  # unhashable, like other mutable-looking mappings

    def __repr__(self) -> str:
        edges = ", ".join(
            f"{v!r}<-[{' '.join(repr(p) for p in ps)}]" for v, ps in sorted(self.dag.items())
        )
        confs = " ".join(
            "{" + " ".join(repr(c) for c in sorted(g)) + "}"
            for g in sorted(self.confounding, key=lambda g: sorted(g))
        )
        return f"<Model {edges}" + (f" | {confs}>" if confs else ">")


def make_model(
    dag: Mapping[Any, Iterable[Any]], confounding: Iterable[Iterable[Any]] = ()
) -> Model:
    """Validate and build a Model from raw user input."""
    return Model(dag, confounding)


class Data:
    """The signature of a probability function: which joint is available."""

    __slots__ = ("joint",)

    def __init__(self, joint: Iterable[Any]):
        vs = tuple(Variable(v) for v in joint)
        if not vs:
            raise UnknownVariableError("data signature must name at least one variable")
        if len(set(vs)) != len(vs):
            raise DuplicateParentError("duplicate variable in data signature")
        object.__setattr__(self, "joint", vs)

    def __setattr__(self, name, value):
        raise AttributeError("Data is immutable")

    @property
    def joint_set(self) -> frozenset[Variable]:
        return frozenset(self.joint)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Data):
            return NotImplemented
        return self.joint_set == other.joint_set

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self) -> str:
        return "<Data [" + " ".join(repr(v) for v in self.joint) + "]>"


def _check_acyclic(parent_sets: Mapping[Variable, frozenset[Variable]]) -> None:
    order = _kahn_order(parent_sets)
    if len(order) != len(parent_sets):
        stuck = sorted(set(parent_sets) - set(order))
        raise CyclicGraphError(f"model contains a directed cycle through {stuck}")


def _kahn_order(parent_sets: Mapping[Variable, frozenset[Variable]]) -> list[Variable]:
    # Kahn's algorithm with a heap: ties broken by variable name.
    children: dict[Variable, list[Variable]] = {v: [] for v in parent_sets}
    indegree = {v: len(ps) for v, ps in parent_sets.items()}
    for v, ps in parent_sets.items():
        for p in ps:
            children[p].append(v)
    ready = [v for v, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order: list[Variable] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for c in children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)
    return order


def _contained(m: Model, s: Iterable[Any]) -> frozenset[Variable]:
    vs = variables(s)
    unknown = vs - m.vertices
    if unknown:
        raise UnknownVariableError(f"not in model: {sorted(unknown)}")
    return vs


def topological_order(m: Model) -> list[Variable]:
    """Deterministic topological order: parents first, ties by name."""
    return _kahn_order(m._parent_sets)


def ancestors(m: Model, s: Iterable[Any]) -> frozenset[Variable]:
    """s together with everything that reaches s along directed edges."""
    seed = _contained(m, s)
    seen = set(seed)
    stack = list(seed)
    while stack:
        v = stack.pop()
        for p in m.parents(v):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def c_components(m: Model) -> frozenset[frozenset[Variable]]:
    """Partition of the vertices into maximal bidirected-connected sets."""
    adjacency: dict[Variable, set[Variable]] = {v: set() for v in m.vertices}
    for pair in m.bidirected_pairs():
        a, b = sorted(pair)
        adjacency[a].add(b)
        adjacency[b].add(a)
    out = set()
    unseen = set(m.vertices)
    while unseen:
        start = unseen.pop()
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        unseen -= comp
        out.add(frozenset(comp))
    return frozenset(out)


def subgraph(m: Model, s: Iterable[Any]) -> Model:
    """Induced subgraph over s; confounding sets are intersected with s."""
    keep = _contained(m, s)
    dag = {v: tuple(p for p in m.dag[v] if p in keep) for v in m.dag if v in keep}
    confounding = frozenset(g & keep for g in m.confounding if len(g & keep) >= 2)
    return Model(dag, confounding)


def d_separated(
    m: Model, a: Any, b: Iterable[Any], conditioning: Iterable[Any] = ()
) -> bool:
    """Whether a is d-separated from every variable in b given `conditioning`.

    Bidirected edges are treated as a latent common parent, matching the
    noise semantics of confounding.
    """
    source = Variable(a)
    targets = _contained(m, b)
    observed = _contained(m, conditioning)
    if source in targets or (targets & observed) or source in observed:
        raise UnknownVariableError("d-separation arguments must be disjoint")

    parents: dict[Any, set] = {v: set(m.parents(v)) for v in m.vertices}
    children: dict[Any, set] = {v: set(m.children(v)) for v in m.vertices}
    for i, pair in enumerate(sorted(m.bidirected_pairs(), key=sorted)):
        latent = ("latent", i)
        parents[latent] = set()
        children[latent] = set(pair)
        for v in pair:
            parents[v].add(latent)

    # ancestors of the conditioning set, for collider activation
    anc_z = set(observed)
    stack = list(observed)
    while stack:
        v = stack.pop()
        for p in parents[v]:
            if p not in anc_z:
                anc_z.add(p)
                stack.append(p)

    # Shachter-style reachability over (vertex, arrival direction) states
    frontier = [(source, "up")]
    visited: set = set()
    reached: set = set()
    while frontier:
        state = frontier.pop()
        if state in visited:
            continue
        visited.add(state)
        v, direction = state
        if v not in observed:
            reached.add(v)
            if targets & reached:
                return False
        if direction == "up" and v not in observed:
            for p in parents[v]:
                frontier.append((p, "up"))
            for c in children[v]:
                frontier.append((c, "down"))
        elif direction == "down":
            if v not in observed:
                for c in children[v]:
                    frontier.append((c, "down"))
            if v in anc_z:
                for p in parents[v]:
                    frontier.append((p, "up"))
    return True


def latent_projection(m: Model, observed: Iterable[Any]) -> Model:
    """Project the diagram onto `observed`, absorbing the other vertices.

    Directed edge a->b iff some directed path a->...->b runs entirely through
    unobserved intermediates. Bidirected edge a<->b iff a confounding path
    (arrowheads at both ends, all intermediates unobserved non-colliders)
    connects them: either a shared unobserved ancestor, or a bidirected edge
    whose endpoints reach a and b through unobserved descent.
    """
    obs = _contained(m, observed)
    if obs == m.vertices:
        return m
    hidden = m.vertices - obs

    down_cache: dict[Variable, frozenset[Variable]] = {}

    def observed_below(u: Variable) -> frozenset[Variable]:
        # Observed vertices reachable from hidden u through hidden vertices.
        if u in down_cache:
            return down_cache[u]
        found: set[Variable] = set()
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for c in m.children(w):
                if c in obs:
                    found.add(c)
                elif c not in seen:
                    seen.add(c)
                    stack.append(c)
        result = frozenset(found)
        down_cache[u] = result
        return result

    parent_map: dict[Variable, set[Variable]] = {v: set() for v in obs}
    for a in obs:
        targets: set[Variable] = set()
        for c in m.children(a):
            if c in obs:
                targets.add(c)
            else:
                targets |= observed_below(c)
        for b in targets:
            parent_map[b].add(a)

    pairs: set[frozenset[Variable]] = set()
    for pair in m.bidirected_pairs():
        s, t = tuple(pair)
        ends_s = frozenset((s,)) if s in obs else observed_below(s)
        ends_t = frozenset((t,)) if t in obs else observed_below(t)
        for a in ends_s:
            for b in ends_t:
                if a != b:
                    pairs.add(frozenset((a, b)))
    for u in hidden:
        below = sorted(observed_below(u))
        for a, b in itertools.combinations(below, 2):
            pairs.add(frozenset((a, b)))

    dag = {v: tuple(sorted(parent_map[v])) for v in sorted(obs)}
    return Model(dag, frozenset(pairs))
