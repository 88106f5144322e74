#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
透镜定律检查器

GetPut 在所有试验上必须成立；PutGet 在 obs = c∘π 处必须成立，在随机 Dirac
观测处的失败作为预期见证记录；PutGet / PutPut 的反例搜索找不到时只记录
NotFound，不算失败。
"""

import time
from functools import partial
from typing import List, Optional

from analyzers.trial_runner import TrialResult, run_trials
from dsl.evaluator import run_query
from models.channel import push_state
from models.dist import dirac
from models.errors import NotFound
from models.report import Report
from models.run_config import RunConfig
from processors.lens import (CounterexampleSearch, check_getput,
                             check_putget_at)
from utils.logger import get_logger
from utils.numeric import number_to_json
from utils.random_utils import (random_channel, random_dist, random_space,
                                trial_rng)

logger = get_logger(__name__)

LAW_STREAM = 6


def law_trial(config: RunConfig, index: int) -> TrialResult:
    """单次定律试验：GetPut、obs = c∘π 处的 PutGet、随机 Dirac 观测处的 PutGet"""
    rng = trial_rng(config.seed, index, LAW_STREAM)
    source = random_space(rng, "X", config.max_dim)
    target = random_space(rng, "Y", config.max_dim)
    c = random_channel(source, target, rng, config.numeric_mode, config.sparse, config.deterministic)
    pi = random_dist(source, rng, config.numeric_mode, config.sparse)
    tol = config.tolerance

    getput = check_getput(c, pi, tol)
    predicted = push_state(c, pi)
    putget = check_putget_at(c, pi, predicted, tol)
    checks = {'getput': getput.holds, 'putget_predicted': putget.holds}

    y = predicted.support()[int(rng.integers(0, len(predicted.support())))]
    obs = dirac(target, y)
    if not config.exact:
        obs = obs.as_float()
    at_dirac = check_putget_at(c, pi, obs, tol)
    checks['putget_dirac'] = at_dirac.holds

    holds = getput.holds and putget.holds
    failing = getput if not getput.holds else putget
    witness = None
    if not holds:
        witness = {'seed': config.seed, 'trial': index, **failing.to_dict()}
    elif not at_dirac.holds:
        witness = {'seed': config.seed, 'trial': index, **at_dirac.to_dict()}
    return TrialResult(index, holds, max(getput.gap, putget.gap), witness, checks)


class LawChecker:
    """透镜定律的随机检查，可附带一个模型文件中的 laws 查询"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)

    def run(self, model=None) -> Report:
        """
        执行定律检查

        Args:
            model: 已验证的模型（可选），其中的 laws 查询会一并执行

        Returns:
            Report: laws 命令的报告
        """
        config = self.config
        started = time.perf_counter()
        report = Report('laws', config.to_dict())

        self.logger.info(f"开始透镜定律检查: {config.trials} 次试验")
        results = run_trials(partial(law_trial, config), config.trials, config.workers)
        expected = []
        for result in results:
            report.record(result.holds, result.gap, result.witness if not result.holds else None)
            if result.holds and result.witness is not None:
                expected.append(result.witness)
        report.sections['getput'] = self._count(results, 'getput')
        report.sections['putget_predicted'] = self._count(results, 'putget_predicted')
        report.sections['putget_dirac'] = {
            'trials': len(results),
            'violations': len(expected),
            'first_witness': expected[0] if expected else None,
        }
        search = CounterexampleSearch(config)
        report.sections['putget_search'] = self._search(search.putget)
        report.sections['putput_search'] = self._search(search.putput)

        if model is not None:
            report.sections['model'] = self._model_section(model, report)

        report.wall_clock = time.perf_counter() - started
        self.logger.info(f"GetPut 通过 {report.sections['getput']['passed']}/{config.trials}")
        return report

    @staticmethod
    def _count(results: List[TrialResult], key: str):
        passed = sum(1 for r in results if r.checks.get(key))
        return {'trials': len(results), 'passed': passed, 'failed': len(results) - passed}

    def _search(self, search) -> dict:
        try:
            found = search()
        except NotFound as e:
            self.logger.info(f"反例搜索: {e}")
            return {'found': False, 'trials': self.config.trials, 'note': str(e)}
        return {
            'found': True,
            'trials': found.trials,
            'gap': number_to_json(found.gap),
            'witness': found.witness.to_dict() if found.witness else None,
        }

    def _model_section(self, model, report: Report) -> List[dict]:
        entries = []
        for number, query in enumerate(model.queries, start=1):
            if query.kind != 'laws':
                continue
            law_reports = run_query(model, query, self.config)
            getput, putget = law_reports[0], law_reports[1]
            for law_report in (getput, putget):
                witness = law_report.witness.to_dict() if law_report.witness else None
                report.record(law_report.holds, law_report.gap, witness)
            entries.append({'query': number, 'reports': [r.to_dict() for r in law_reports]})
        if not entries:
            self.logger.warning("模型中没有 laws 查询")
        return entries


def cmd_laws(config: RunConfig, model: Optional[object] = None) -> Report:
    return LawChecker(config).run(model)
