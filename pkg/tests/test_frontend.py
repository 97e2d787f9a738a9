import random

import pytest

from whittemore import (
    Data,
    Formula,
    Model,
    Query,
    Variable,
    eval_expr,
    eval_program,
    make_model,
    make_query,
    parse,
    print_value,
    standard_environment,
)
from whittemore.errors import (
    EvalError,
    ParseError,
    RedefinitionError,
    UnboundSymbolError,
)
from whittemore.printer import display_value
from whittemore.reader import Apply, MapLit, SetLit, Symbol, VectorLit


class TestParse:
    def test_model_expression(self):
        (expr,) = parse("(model {:x [] :z [:x] :y [:z]} #{:x :y})")
        assert isinstance(expr, Apply)
        assert expr.op == Symbol("model")
        assert isinstance(expr.args[0], MapLit)
        assert isinstance(expr.args[1], SetLit)

    def test_keyword_constant(self):
        (expr,) = parse(":x")
        assert expr == Variable("x")

    def test_query_expression(self):
        (expr,) = parse("(q [:y] :do {:x 0})")
        assert expr.op == Symbol("q")
        assert isinstance(expr.args[0], VectorLit)
        assert expr.args[1] == Variable("do")

    def test_commas_are_whitespace(self):
        (expr,) = parse("{:x 0, :y 1}")
        assert isinstance(expr, MapLit)
        assert len(expr.pairs) == 2

    def test_comments_ignored(self):
        exprs = parse("; a comment\n42 ; trailing\n")
        assert exprs == [42]

    def test_numbers_and_strings(self):
        assert parse('[1 -2 3.5 1e-3 "hi\\n"]')[0].items == (1, -2, 3.5, 1e-3, "hi\n")

    def test_unbalanced_is_incomplete(self):
        with pytest.raises(ParseError) as err:
            parse("(model {:x []}")
        assert err.value.incomplete

    def test_mismatched_closer(self):
        with pytest.raises(ParseError) as err:
            parse("(model ]")
        assert not err.value.incomplete

    def test_odd_map_arity(self):
        with pytest.raises(ParseError):
            parse("{:x}")

    def test_duplicate_set_element(self):
        with pytest.raises(ParseError):
            parse("#{:x :x}")

    def test_error_positions(self):
        with pytest.raises(ParseError) as err:
            parse("\n  #oops")
        assert (err.value.line, err.value.col) == (2, 3)


class TestEval:
    def test_define_and_lookup(self):
        values, env = eval_program("(define x 1) x")
        assert values == [1, 1]
        assert env.lookup("x") == 1

    def test_define_cannot_rebind(self):
        with pytest.raises(RedefinitionError):
            eval_program("(define x 1) (define x 2)")

    def test_define_docstring(self):
        values, env = eval_program('(define x "the answer" 42)')
        assert values == [42]
        assert env.doc("x") == "the answer"

    def test_unbound_symbol(self):
        with pytest.raises(UnboundSymbolError) as err:
            eval_program("mystery")
        assert "mystery" in str(err.value)

    def test_front_door_model_evaluates(self, front_door):
        values, env = eval_program(
            "(define front-door\n"
            "  (model\n"
            "    {:x []\n"
            "     :z [:x]\n"
            "     :y [:z]}\n"
            "    #{:x :y}))\n"
            "front-door"
        )
        assert values[1] == front_door

    def test_environment_is_not_mutated(self):
        env = standard_environment()
        (expr,) = parse("(define x 1)")
        _, extended = eval_expr(env, expr)
        assert "x" not in env.bindings
        assert extended.lookup("x") == 1

    def test_strings_interchangeable_with_keywords(self):
        a, _ = eval_program('(model {"x" [] "y" ["x"]})')
        b, _ = eval_program("(model {:x [] :y [:x]})")
        assert a == b

    def test_vectors_interchangeable_with_sets(self):
        a, _ = eval_program("(model {:x [] :y [:x]} [:x :y])")
        b, _ = eval_program("(model {:x [] :y [:x]} #{:x :y})")
        assert a == b

    def test_unknown_operator(self):
        with pytest.raises(EvalError):
            eval_program("(frobnicate 1)")

    def test_q_keyword_arguments_any_order(self):
        a, _ = eval_program("(q [:y] :do {:x 0} :given {:w 1})")
        b, _ = eval_program("(q [:y] :given {:w 1} :do {:x 0})")
        assert a[0] == b[0]

    def test_identify_through_language(self, front_door):
        values, _ = eval_program(
            "(identify (model {:x [] :z [:x] :y [:z]} #{:x :y}) (q [:y] :do {:x 0}))"
        )
        assert isinstance(values[0], Formula)
        assert values[0].bindings == {"x": 0}

    def test_data_surrogate_slot_rejected(self):
        with pytest.raises(EvalError):
            eval_program("(data [:x] :do [:z])")

    def test_identify_with_restricted_data(self):
        from whittemore import Fail

        values, _ = eval_program(
            "(identify (model {:x [] :z [:x] :y [:z]} #{:x :y})\n"
            "          (data [:x :y])\n"
            "          (q [:y] :do {:x 0}))"
        )
        assert isinstance(values[0], Fail)

    def test_purity(self):
        env = standard_environment()
        (expr,) = parse("(model {:x [] :y [:x]})")
        first, _ = eval_expr(env, expr)
        second, _ = eval_expr(env, expr)
        assert first == second


class TestPrintValue:
    def test_probability_prints_shortest_repr(self):
        assert print_value(289 / 350) == "0.8257142857142857"

    def test_set(self):
        assert print_value(frozenset({Variable("x")})) == "#{:x}"

    def test_map(self):
        assert print_value({Variable("x"): 0, Variable("y"): 1}) == "{:x 0, :y 1}"

    def test_booleans_and_strings(self):
        assert print_value(True) == "true"
        assert print_value('say "hi"') == '"say \\"hi\\""'

    def test_model_round_trips(self, concomitant):
        values, _ = eval_program(print_value(concomitant))
        assert values[0] == concomitant

    def test_data_round_trips(self):
        values, _ = eval_program(print_value(Data(["x", "y"])))
        assert values[0] == Data(["x", "y"])

    def test_query_round_trips(self):
        for q in (
            make_query(["y"], do={"x": 0}),
            make_query({"y": 1}, given={"x": 1}),
            make_query(["y"], do=["x"], given=["w"]),
        ):
            values, _ = eval_program(print_value(q))
            assert values[0] == q


def _random_literal(rng, depth=0):
    atoms = [
        lambda: rng.randint(-10**6, 10**6),
        lambda: rng.choice([0.5, -1.25, 3.14159, 1e-9, 12345.6789, 2.0]),
        lambda: rng.uniform(-1e6, 1e6),
        lambda: "".join(
            rng.choice('abc xyz_:#"\\\n\t([{') for _ in range(rng.randint(0, 8))
        ),
        lambda: rng.choice([True, False]),
        lambda: Variable(
            "".join(rng.choice("abcxyz_'") for _ in range(rng.randint(1, 6)))
        ),
    ]
    if depth >= 2:
        return rng.choice(atoms)()
    kind = rng.randint(0, 8)
    if kind <= 5:
        return rng.choice(atoms)()
    if kind == 6:
        return [_random_literal(rng, depth + 1) for _ in range(rng.randint(0, 4))]
    if kind == 7:
        out = {}
        for _ in range(rng.randint(0, 4)):
            out[_random_literal(rng, 2)] = _random_literal(rng, depth + 1)
        return out
    return frozenset(_random_literal(rng, 2) for _ in range(rng.randint(0, 4)))


def test_print_parse_round_trip_on_random_literals():
    rng = random.Random(20260811)
    for _ in range(1000):
        value = _random_literal(rng)
        values, _ = eval_program(print_value(value))
        assert len(values) == 1
        assert values[0] == value


class TestDisplay:
    def test_sample_collection_renders_as_table(self):
        samples = [
            {Variable("x"): "0", Variable("y"): "ab"},
            {Variable("x"): "11", Variable("y"): "c"},
        ]
        text = display_value(samples)
        lines = text.splitlines()
        assert lines[0].split() == ["x", "y"]
        assert lines[1].split() == ["0", "ab"]
        assert lines[2].split() == ["11", "c"]

    def test_formula_display_mentions_bindings(self, front_door):
        values, _ = eval_program(
            "(identify (model {:x [] :z [:x] :y [:z]} #{:x :y}) (q [:y] :do {:x 0}))"
        )
        text = display_value(values[0])
        assert "where: x=0" in text
