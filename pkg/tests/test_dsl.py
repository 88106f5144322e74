from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BIT
from dsl.ast_nodes import (QUERY_KINDS, ChannelDecl, Compose, LetDecl,
                           ModelAST, PriorDecl, Query, Ref, SpaceDecl, Tensor,
                           seq_factors)
from dsl.evaluator import describe, run_query
from dsl.parser import parse_file, parse_model
from dsl.printer import HEADER, print_model
from dsl.validator import validate_model
from models.channel import binary_symmetric, seq_compose, tensor
from models.dist import Dist
from models.errors import (DuplicateName, EmptyPushforward, ForwardReference,
                           ModelSyntaxError, NotNormalized, SpaceMismatch,
                           UnknownElement, ValidationError)
from models.report import Report
from models.run_config import RunConfig
from utils.numeric import NumericMode

CONFIG = RunConfig()


def load(fixture_path, name, mode=NumericMode.RATIONAL):
    return validate_model(parse_file(fixture_path(name)), mode)


def test_sprinkler_posterior(fixture_path):
    model = load(fixture_path, "sprinkler.blens")
    weather = model.spaces["Weather"]
    posterior = run_query(model, model.queries[0], CONFIG)
    assert posterior == Dist(weather, {"rain": Fraction(9, 13), "dry": Fraction(4, 13)})


def test_sprinkler_other_queries(fixture_path):
    model = load(fixture_path, "sprinkler.blens")
    predicted = run_query(model, model.queries[1], CONFIG)
    assert predicted.mass("wet") == Fraction(13, 50)
    report = run_query(model, model.queries[2], CONFIG)
    assert isinstance(report, Report)
    assert report.ok
    getput, putget, putput = run_query(model, model.queries[3], CONFIG)
    assert getput.holds and putget.holds
    assert not putput.holds
    assert "GetPut" in describe([getput, putget, putput])


def test_sprinkler_float_mode(fixture_path):
    model = load(fixture_path, "sprinkler.blens", NumericMode.FLOAT)
    config = RunConfig(numeric_mode=NumericMode.FLOAT)
    posterior = run_query(model, model.queries[0], config)
    assert posterior.mass("rain") == pytest.approx(9 / 13, abs=1e-9)


def test_chain_matches_library_composition(fixture_path):
    model = load(fixture_path, "chain.blens")
    expected = seq_compose(binary_symmetric(Fraction(1, 5), BIT), binary_symmetric(Fraction(1, 10), BIT))
    assert model.lets["both"] == expected
    posterior = run_query(model, model.queries[0], CONFIG)
    assert posterior == Dist(BIT, {"0": Fraction(182, 404), "1": Fraction(222, 404)})
    report = run_query(model, model.queries[1], CONFIG)
    assert report.ok
    assert report.sections['splits'] == [{'split': 1, 'holds': True, 'gap': '0'}]


def test_query_verify_report_echo_and_timing(fixture_path):
    model = load(fixture_path, "chain.blens")
    report = run_query(model, model.queries[1], RunConfig(trials=7))
    assert report.config == {'numeric_mode': 'rational', 'tolerance': CONFIG.tolerance}
    assert report.wall_clock > 0
    assert 'trials' not in report.to_dict()['config']


def test_tensor_pipeline(fixture_path):
    model = load(fixture_path, "tensor.blens")
    noisy, keep = model.channels["noisy"], model.channels["keep"]
    assert model.lets["pair"] == tensor(noisy, keep)
    posterior = run_query(model, model.queries[0], CONFIG)
    assert posterior.mass("(0,hi)") == Fraction(1, 5)
    assert posterior.mass("(1,hi)") == Fraction(4, 5)
    assert run_query(model, model.queries[1], CONFIG).mass("(1,lo)") == Fraction(1, 4)


def test_zero_mass_observation(fixture_path):
    model = load(fixture_path, "zero_obs.blens")
    with pytest.raises(EmptyPushforward) as info:
        run_query(model, model.queries[0], CONFIG)
    assert info.value.predicted.mass("u") == 1


def test_syntax_error_position(fixture_path):
    with pytest.raises(ModelSyntaxError) as info:
        parse_file(fixture_path("bad_syntax.blens"))
    assert info.value.line == 2
    assert info.value.column == 23
    assert "," in info.value.expected


def test_unexpected_end_of_file():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model("space B = {0, 1")
    assert info.value.line == 1


def test_zero_denominator_is_syntax_error():
    with pytest.raises(ModelSyntaxError):
        parse_model("space B = {0, 1}\nprior p : B = {0: 1/0, 1: 1}")


def test_duplicate_names():
    with pytest.raises(DuplicateName):
        parse_model("space B = {0, 1}\nspace B = {a, b}")
    with pytest.raises(DuplicateName):
        parse_model("space B = {0, 0}")
    # 不同种类的名字互不冲突
    parse_model("space B = {0, 1}\nprior B : B = {0: 1}")


def test_forward_reference():
    with pytest.raises(ForwardReference):
        parse_model("prior p : B = {0: 1}\nspace B = {0, 1}")
    with pytest.raises(ForwardReference):
        parse_model("space B = {0, 1}\nlet d = c >> c")


@pytest.mark.parametrize("source, cause", [
    ("space B = {0, 1}\nprior p : B = {0: 1/2, 1: 1/3}", NotNormalized),
    ("space B = {0, 1}\nprior p : B = {2: 1}", UnknownElement),
    ("space B = {0, 1}\nspace C = {a, b}\nprior p : C = {a: 1}\n"
     "channel c : B -> B = {\n 0 -> {0: 1}\n 1 -> {1: 1}\n}\npredict c prior p", SpaceMismatch),
])
def test_validation_errors_carry_position(source, cause):
    with pytest.raises(ValidationError) as info:
        validate_model(parse_model(source))
    assert isinstance(info.value.cause, cause)
    assert info.value.line >= 2


def test_composition_mismatch_points_at_operator():
    source = (
        "space B = {0, 1}\nspace C = {a, b}\n"
        "channel f : B -> B = {\n 0 -> {0: 1}\n 1 -> {1: 1}\n}\n"
        "channel g : C -> C = {\n a -> {a: 1}\n b -> {b: 1}\n}\n"
        "let h = f >> g\n"
    )
    with pytest.raises(ValidationError) as info:
        validate_model(parse_model(source))
    assert (info.value.line, info.value.column) == (11, 11)
    assert isinstance(info.value.cause, SpaceMismatch)


def test_precedence_and_associativity():
    ast = parse_model("space B = {0, 1}\n"
                      "channel a : B -> B = {\n 0 -> {0: 1}\n 1 -> {1: 1}\n}\n"
                      "let b = a\nlet c = a\n"
                      "let x = a >> b | c\nlet y = a >> b >> c\nlet z = a | b | c")
    lets = {d.name: d.expr for d in ast.declarations if isinstance(d, LetDecl)}
    assert lets["x"] == Tensor(Compose(Ref("a"), Ref("b")), Ref("c"))
    assert lets["y"] == Compose(Compose(Ref("a"), Ref("b")), Ref("c"))
    assert lets["z"] == Tensor(Tensor(Ref("a"), Ref("b")), Ref("c"))
    assert seq_factors(lets["y"]) == (Ref("a"), Ref("b"), Ref("c"))


def test_query_requires_observation_only_for_infer():
    with pytest.raises(ValueError):
        Query("infer", Ref("c"), "p")
    with pytest.raises(ValueError):
        Query("predict", Ref("c"), "p", observation="0")


def test_printer_output(fixture_path):
    text = print_model(parse_file(fixture_path("sprinkler.blens")))
    assert text.startswith(HEADER)
    assert "prior p : Weather = {rain: 1/5, dry: 4/5}" in text
    assert text.endswith("laws sensor prior p\n")


def test_printer_is_idempotent(fixture_path):
    for name in ("sprinkler.blens", "chain.blens", "tensor.blens", "zero_obs.blens"):
        ast = parse_file(fixture_path(name))
        once = print_model(ast)
        assert parse_model(once) == ast
        assert print_model(parse_model(once)) == once


# 随机生成的模型：打印再解析得到结构相等的语法树

fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)


def _exprs(names):
    leaf = st.sampled_from(names).map(Ref)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(st.builds(Compose, inner, inner), st.builds(Tensor, inner, inner)),
        max_leaves=5,
    )


@st.composite
def model_asts(draw):
    spaces = []
    for i in range(draw(st.integers(1, 3))):
        dim = draw(st.integers(1, 3))
        spaces.append(SpaceDecl(f"S{i}", tuple(f"e{i}_{k}" for k in range(dim))))
    declarations = list(spaces)

    priors = []
    for i in range(draw(st.integers(1, 2))):
        space = draw(st.sampled_from(spaces))
        masses = tuple((e, draw(fractions)) for e in space.elements)
        priors.append(PriorDecl(f"p{i}", space.name, masses))
    declarations += priors

    names = []
    for i in range(draw(st.integers(1, 3))):
        dom, cod = draw(st.sampled_from(spaces)), draw(st.sampled_from(spaces))
        rows = tuple((x, tuple((y, draw(fractions)) for y in cod.elements)) for x in dom.elements)
        declarations.append(ChannelDecl(f"c{i}", dom.name, cod.name, rows))
        names.append(f"c{i}")
    for i in range(draw(st.integers(0, 2))):
        declarations.append(LetDecl(f"l{i}", draw(_exprs(names))))
        names.append(f"l{i}")

    queries = []
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(QUERY_KINDS))
        observation = draw(st.sampled_from(["e0_0", "(e0_0,e0_0)"])) if kind == 'infer' else None
        prior = draw(st.sampled_from(priors)).name
        queries.append(Query(kind, draw(_exprs(names)), prior, observation))
    return ModelAST(tuple(declarations), tuple(queries))


@settings(max_examples=200)
@given(model_asts())
def test_parse_print_round_trip(ast):
    assert parse_model(print_model(ast)) == ast
