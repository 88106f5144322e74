from fractions import Fraction

import pytest
from hypothesis import given

from analyzers.verifier import corrupted_invert
from conftest import BIT, chains, seeds
from models.channel import (binary_symmetric, identity_channel, push_state,
                            seq_compose)
from models.dist import Dist, dirac
from models.errors import NotFound, SpaceMismatch
from models.lens import BayesLens
from models.report import LawReport, Witness
from models.run_config import RunConfig
from models.space import Space
from models.stat_channel import StatChannel
from processors.inversion import almost_equal, invert
from processors.lens import (COUNTEREXAMPLE_GAP, CounterexampleSearch,
                             check_getput, check_putget_at, check_putput_at,
                             exact_lens, is_exact_at, lens_compose,
                             lens_identity, lenses_agree_at,
                             putget_counterexample, putput_counterexample,
                             verify_composition)
from utils.random_utils import (random_channel, random_prior_list,
                                random_space, trial_rng)


def test_exact_lens_of_bsc_is_self_inverse(bsc, uniform_bit):
    lens = exact_lens(bsc(0.2))
    assert lens.backward(uniform_bit) == bsc(0.2)
    assert is_exact_at(lens, uniform_bit)


def test_composition_example(bsc):
    prior = Dist(BIT, {"0": Fraction(7, 10), "1": Fraction(3, 10)})
    report = verify_composition(bsc(0.2), bsc(0.1), prior)
    expected = Dist(BIT, {"0": Fraction(182, 404), "1": Fraction(222, 404)})
    assert report.holds
    assert report.max_gap == 0
    assert report.lhs.rows["1"] == expected
    assert report.rhs.rows["1"] == expected


def test_identity_lens_is_unit(bsc, uniform_bit):
    lens = exact_lens(bsc(0.2))
    left = lens_compose(lens_identity(BIT), lens)
    right = lens_compose(lens, lens_identity(BIT))
    assert lenses_agree_at(left, lens, [uniform_bit, dirac(BIT, "0")])
    assert lenses_agree_at(right, lens, [uniform_bit, dirac(BIT, "0")])


def test_corrupted_lens_is_approximate(bsc):
    prior = Dist(BIT, {"0": Fraction(7, 10), "1": Fraction(3, 10)})
    c = bsc(0.2)
    lens = exact_lens(c, corrupted_invert)
    assert not is_exact_at(lens, prior)
    assert is_exact_at(exact_lens(c), prior)


def test_hand_built_lens_must_match_index_space(bsc):
    backward = StatChannel(BIT, BIT, BIT, lambda pi: bsc(0.2))
    assert BayesLens(bsc(0.2), backward).is_simple
    other = Space("C", ("lo", "hi"))
    with pytest.raises(SpaceMismatch):
        BayesLens(bsc(0.2), StatChannel(other, BIT, BIT, lambda pi: bsc(0.2)))


def test_getput_example(bsc, uniform_bit):
    report = check_getput(bsc(0.2), uniform_bit)
    assert report.holds
    assert report.gap == 0


def test_putget_fails_at_dirac(bsc, uniform_bit):
    report = check_putget_at(bsc(0.2), uniform_bit, dirac(BIT, "1"))
    assert not report.holds
    assert report.gap == Fraction(8, 25)
    assert report.witness.lhs == Dist(BIT, {"0": Fraction(8, 25), "1": Fraction(17, 25)})


def test_putget_holds_at_prediction(bsc):
    prior = Dist(BIT, {"0": Fraction(7, 10), "1": Fraction(3, 10)})
    predicted = Dist(BIT, {"0": Fraction(31, 50), "1": Fraction(19, 50)})
    assert check_putget_at(bsc(0.2), prior, predicted).holds


def test_putput_example(bsc, uniform_bit):
    report = check_putput_at(bsc(0.2), uniform_bit, "1", "1")
    assert not report.holds
    assert report.witness.lhs == Dist(BIT, {"0": Fraction(1, 17), "1": Fraction(16, 17)})
    assert report.gap == Fraction(12, 85)
    assert float(report.gap) == pytest.approx(0.141, abs=1e-3)
    assert report.gap > COUNTEREXAMPLE_GAP


def test_counterexample_searches_find_witnesses():
    search = CounterexampleSearch(RunConfig(trials=100))
    putget = search.putget()
    assert putget.trials <= 100
    assert putget.gap >= COUNTEREXAMPLE_GAP
    putput = search.putput()
    assert putput.trials <= 100
    assert putput.gap > COUNTEREXAMPLE_GAP


def test_putput_search_not_found_for_deterministic_channels():
    with pytest.raises(NotFound):
        putput_counterexample(RunConfig(trials=50, deterministic=True))


@given(chains())
def test_composition_theorem(chain):
    c, d, pi = chain
    report = verify_composition(c, d, pi)
    assert report.holds
    assert report.max_gap == 0


@given(chains(sparse=True))
def test_composition_theorem_partial_support(chain):
    c, d, pi = chain
    assert verify_composition(c, d, pi).holds


@given(chains())
def test_getput_always_holds(chain):
    c, _, pi = chain
    assert check_getput(c, pi).holds


def _three_lenses(chain, seed):
    c, d, pi = chain
    rng = trial_rng(seed, 0)
    e = random_channel(d.cod, random_space(rng, "W", 4), rng)
    return c, d, e, pi, rng


@given(chains(), seeds)
def test_lens_compose_is_associative(chain, seed):
    c, d, e, _, rng = _three_lenses(chain, seed)
    first, second, third = exact_lens(c), exact_lens(d), exact_lens(e)
    left = lens_compose(lens_compose(first, second), third)
    right = lens_compose(first, lens_compose(second, third))
    assert lenses_agree_at(left, right, random_prior_list(c.dom, rng, 10, sparse=True))


@given(chains(), seeds)
def test_three_factor_coherence(chain, seed):
    c, d, e, pi, _ = _three_lenses(chain, seed)
    composite = seq_compose(seq_compose(c, d), e)
    expected = invert(composite, pi).channel
    predicted = push_state(composite, pi)
    first, second, third = exact_lens(c), exact_lens(d), exact_lens(e)
    left = lens_compose(lens_compose(first, second), third).backward(pi)
    right = lens_compose(first, lens_compose(second, third)).backward(pi)
    assert almost_equal(left, expected, predicted)
    assert almost_equal(right, expected, predicted)


@given(chains(), seeds)
def test_exact_lens_of_identity_is_identity_lens(chain, seed):
    c, _, _ = chain
    space = c.dom
    lens = exact_lens(identity_channel(space))
    priors = random_prior_list(space, trial_rng(seed, 0), 10, sparse=True)
    for rho in priors:
        assert almost_equal(lens.backward(rho), lens_identity(space).backward(rho), rho)
    assert lenses_agree_at(lens, lens_identity(space), random_prior_list(space, trial_rng(seed, 1), 10))


def test_getput_float_zero_tolerance_reports_instead_of_raising():
    c = binary_symmetric(Fraction(1, 10), BIT).as_float()
    prior = Dist(BIT, {"0": 0.7, "1": 0.3})
    report = check_getput(c, prior, tolerance=0.0)
    assert report.tolerance == 0.0
    if not report.holds:
        assert report.witness.gap > 0


def test_law_report_witness_gap_is_judged_by_its_tolerance():
    lhs = Dist(BIT, {"0": 0.7, "1": 0.3})
    rhs = Dist(BIT, {"0": 0.7 + 1e-15, "1": 0.3 - 1e-15})
    witness = Witness({}, lhs, rhs, 1e-15)
    assert not LawReport('GetPut', False, witness, 1e-15, tolerance=0.0).holds
    with pytest.raises(ValueError):
        LawReport('GetPut', False, witness, 1e-15)


def test_counterexample_entry_points_match_search():
    config = RunConfig(trials=100)
    search = CounterexampleSearch(config)
    assert putget_counterexample(config).note == search.putget().note
    assert putput_counterexample(config).trials == search.putput().trials
