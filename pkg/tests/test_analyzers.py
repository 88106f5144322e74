import json

import pytest

from analyzers.law_checker import LawChecker, cmd_laws
from analyzers.property_checker import (APPENDIX_PROPS, DENSITY_PROPS,
                                        STRUCTURAL_LAWS, PropertyChecker,
                                        check_density_props)
from analyzers.trial_runner import TrialResult, run_trials
import analyzers.verifier as verifier
from analyzers.verifier import CompositionVerifier, cmd_verify, theorem_trial
from dsl.parser import parse_file
from dsl.validator import validate_model
from models.report import MAX_WITNESSES
from models.run_config import RunConfig
from processors.inversion import invert
from utils.numeric import NumericMode


def _payload(report):
    return json.dumps(report.to_dict(include_wall_clock=False), sort_keys=True)


def _square(index):
    return TrialResult(index, index % 3 != 0, index * index)


def test_run_trials_sorted_by_index():
    serial = run_trials(_square, 10)
    parallel = run_trials(_square, 10, workers=3)
    assert [r.index for r in serial] == list(range(10))
    assert [(r.index, r.holds, r.gap) for r in parallel] == [(r.index, r.holds, r.gap) for r in serial]


def test_verify_passes_with_zero_gap():
    report = cmd_verify(RunConfig(trials=40))
    assert report.ok
    assert report.passed == 40
    assert report.max_gap == 0
    assert report.sections['bayes_relation']['failed'] == 0
    assert report.sections['density']['trials'] == 10
    assert report.sections['density']['failed'] == 0


def test_verify_float_mode_within_tolerance():
    report = cmd_verify(RunConfig(trials=30, numeric_mode=NumericMode.FLOAT))
    assert report.ok
    assert float(report.max_gap) <= 1e-9


def test_verify_sparse_priors():
    assert cmd_verify(RunConfig(trials=30, sparse=True)).ok


def test_corrupted_inversion_is_caught():
    report = cmd_verify(RunConfig(trials=20, corrupt=True))
    assert not report.ok
    assert report.failed > 0
    assert 0 < len(report.witnesses) <= MAX_WITNESSES
    witness = report.witnesses[0]
    assert witness['seed'] == 42
    assert not all(witness['checks'].values())


def test_theorem_trial_is_reproducible():
    config = RunConfig(seed=7)
    first, second = theorem_trial(config, 3), theorem_trial(config, 3)
    assert first.holds and second.holds
    assert first.checks == second.checks


def test_verify_report_identical_serial_and_parallel():
    serial = CompositionVerifier(RunConfig(trials=24, seed=11)).run()
    parallel = CompositionVerifier(RunConfig(trials=24, seed=11, workers=2)).run()
    assert _payload(serial) == _payload(parallel)
    assert 'workers' not in serial.config


def test_laws_report():
    report = cmd_laws(RunConfig(trials=100))
    assert report.ok
    assert report.sections['getput'] == {'trials': 100, 'passed': 100, 'failed': 0}
    assert report.sections['putget_predicted']['failed'] == 0
    assert report.sections['putget_dirac']['violations'] > 0
    assert report.sections['putget_search']['found']
    assert report.sections['putput_search']['found']
    assert report.sections['putput_search']['trials'] <= 100


def test_laws_deterministic_generators_report_not_found():
    report = cmd_laws(RunConfig(trials=30, deterministic=True))
    assert report.ok
    assert report.sections['putput_search']['found'] is False


def test_laws_with_model(fixture_path):
    model = validate_model(parse_file(fixture_path("sprinkler.blens")))
    report = LawChecker(RunConfig(trials=10)).run(model)
    assert report.ok
    assert len(report.sections['model']) == 1
    laws = [r['law'] for r in report.sections['model'][0]['reports']]
    assert laws == ['GetPut', 'PutGet', 'PutPut']


def test_property_checker_passes():
    checker = PropertyChecker(RunConfig(trials=25))
    structural = checker.check_structural()
    assert structural['failed'] == 0
    assert set(structural['laws']) == set(STRUCTURAL_LAWS)
    assert structural['laws']['copy_not_natural']['passed'] > 0
    appendix = checker.check_appendix()
    assert appendix['failed'] == 0
    assert set(appendix['laws']) == set(APPENDIX_PROPS)
    assert appendix['laws']['almost_inverses_agree']['passed'] > 0


def test_density_props():
    result = check_density_props(RunConfig(trials=40))
    assert result['failed'] == 0
    assert set(result['laws']) == set(DENSITY_PROPS)
    assert all(counts['passed'] > 0 for counts in result['laws'].values())


def test_props_report_is_reproducible():
    config = RunConfig(trials=10, seed=5)
    first, second = PropertyChecker(config).run(), PropertyChecker(config).run()
    assert first.ok
    assert _payload(first) == _payload(second)


@pytest.mark.parametrize("seed", [0, 1, 2 ** 64 - 1])
def test_verify_accepts_full_seed_range(seed):
    assert cmd_verify(RunConfig(trials=4, seed=seed)).ok


def test_theorem_trial_inverts_each_channel_once(monkeypatch):
    calls = []

    def counting(c, pi):
        calls.append((c.dom.name, c.cod.name))
        return invert(c, pi)

    monkeypatch.setattr(verifier, 'invert', counting)
    result = theorem_trial(RunConfig(seed=3), 0)
    assert result.holds
    assert sorted(calls) == [('X', 'Y'), ('X', 'Z'), ('Y', 'Z')]


def test_verify_float_zero_tolerance_runs():
    report = cmd_verify(RunConfig(trials=20, numeric_mode=NumericMode.FLOAT, tolerance=0.0))
    assert report.passed + report.failed == 20
    assert report.sections['density']['trials'] == 5
