#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
复合定理验证器

在随机的 (c, d, π) 上检查：复合信道的贝叶斯反演与精确透镜复合的后向分量
关于 d∘c∘π 几乎相等；每一个产生的反演都满足贝叶斯关系。另外在四分之一的
试验上走密度路线重复检查。
"""

import time
from functools import partial
from typing import List

from analyzers.trial_runner import TrialResult, run_trials
from models.channel import Channel, max_row_gap, push_state, seq_compose
from models.dist import Dist
from models.report import Report
from models.run_config import RunConfig
from models.stat_channel import InversionResult
from processors.density import (density_compose, density_lens,
                                 invert_via_density, realize_channel,
                                 rescale_base)
from processors.inversion import (almost_equal, invert,
                                  invert_by_disintegration, posterior_row,
                                  satisfies_bayes_relation)
from processors.lens import lens_compose, verify_composition
from utils.logger import get_logger
from utils.numeric import NumericMode, number_to_json
from utils.random_utils import (random_channel, random_density_channel,
                                random_dist, random_space, trial_rng)

logger = get_logger(__name__)

THEOREM_STREAM = 0
DENSITY_STREAM = 1


def corrupted_invert(c: Channel, pi: Dist) -> InversionResult:
    """
    负对照：只把似然按行归一化，忽略先验

    先验不是均匀分布时，这样得到的“后验”不满足贝叶斯关系。
    """
    rows = {}
    for y in c.cod:
        likelihood = {x: c.prob(y, x) for x in c.dom}
        total = sum(likelihood.values())
        if total == 0:
            rows[y] = pi
            continue
        rows[y] = posterior_row(c.dom, {x: v / total for x, v in likelihood.items()})
    return InversionResult(Channel(c.cod, c.dom, rows), frozenset())


class InversionCache:
    """
    单次试验内复用反演结果：同一信道对象在相等的先验下只反演一次

    复合检查与各分量的贝叶斯关系检查需要同样的几个反演。
    """

    def __init__(self, inverter):
        self.inverter = inverter
        self._entries = []

    def __call__(self, c: Channel, pi: Dist) -> InversionResult:
        for channel, prior, result in self._entries:
            if channel is c and prior == pi:
                return result
        result = self.inverter(c, pi)
        self._entries.append((c, pi, result))
        return result


def _random_triple(config: RunConfig, rng):
    source = random_space(rng, "X", config.max_dim)
    middle = random_space(rng, "Y", config.max_dim)
    target = random_space(rng, "Z", config.max_dim)
    c = random_channel(source, middle, rng, config.numeric_mode, config.sparse, config.deterministic)
    d = random_channel(middle, target, rng, config.numeric_mode, config.sparse, config.deterministic)
    pi = random_dist(source, rng, config.numeric_mode, config.sparse)
    return c, d, pi


def theorem_trial(config: RunConfig, index: int) -> TrialResult:
    """单次复合定理试验；顶层函数，以便进程池 pickle"""
    rng = trial_rng(config.seed, index, THEOREM_STREAM)
    c, d, pi = _random_triple(config, rng)
    inverter = InversionCache(corrupted_invert if config.corrupt else invert)
    tol = config.tolerance

    composition = verify_composition(c, d, pi, tol, inverter)
    composite = seq_compose(c, d)
    predicted_y = push_state(c, pi)
    predicted_z = push_state(composite, pi)
    checks = {
        'composition': composition.holds,
        'bayes_composite': satisfies_bayes_relation(composite, pi, composition.lhs, tol),
        'bayes_first': satisfies_bayes_relation(c, pi, inverter(c, pi).channel, tol),
        'bayes_second': satisfies_bayes_relation(d, predicted_y, inverter(d, predicted_y).channel, tol),
        'disintegration': almost_equal(composition.lhs, invert_by_disintegration(composite, pi),
                                       predicted_z, tol),
    }
    holds = all(checks.values())
    witness = None
    if not holds:
        witness = {
            'seed': config.seed,
            'trial': index,
            'checks': checks,
            'c': c.to_dict(),
            'd': d.to_dict(),
            'prior': pi.to_dict(),
            'gap': number_to_json(composition.max_gap),
            'lhs': composition.lhs.to_dict(),
            'rhs': composition.rhs.to_dict(),
        }
    return TrialResult(index, holds, composition.max_gap, witness, checks)


def density_trial(config: RunConfig, index: int) -> TrialResult:
    """密度路线的单次试验：与直接反演逐行比较，并在复合效应上检查定理"""
    rng = trial_rng(config.seed, index, DENSITY_STREAM)
    c, d, pi = _random_triple(config, rng)
    dc = random_density_channel(c, rng, config.numeric_mode)
    dd = random_density_channel(d, rng, config.numeric_mode)
    tol = config.tolerance

    predicted_y = push_state(c, pi)
    direct = invert(c, pi).channel
    via = invert_via_density(dc, pi).channel
    route_gap = max_row_gap(direct, via, predicted_y.support())

    joint = density_compose(dc, dd)
    lhs = invert_via_density(joint, pi).channel
    rhs = lens_compose(density_lens(dc), density_lens(dd)).backward(pi)
    predicted_z = push_state(seq_compose(c, d), pi)

    y = predicted_y.support()[int(rng.integers(0, len(predicted_y.support())))]
    scale = 2.0 if config.numeric_mode == NumericMode.FLOAT else 2
    rescaled = invert_via_density(rescale_base(dc, y, scale), pi).channel

    checks = {
        'route': all(direct.rows[v].approx_equal(via.rows[v], tol) for v in predicted_y.support()),
        'bayes_route': satisfies_bayes_relation(c, pi, via, tol),
        'composite': almost_equal(lhs, rhs, predicted_z, tol),
        'bayes_composite': satisfies_bayes_relation(realize_channel(joint), pi, lhs, tol),
        'rescale': all(via.rows[v].approx_equal(rescaled.rows[v], tol) for v in predicted_y.support()),
    }
    holds = all(checks.values())
    witness = None
    if not holds:
        witness = {
            'seed': config.seed,
            'trial': index,
            'checks': checks,
            'c_density': dc.to_dict(),
            'd_density': dd.to_dict(),
            'prior': pi.to_dict(),
            'route_gap': number_to_json(route_gap),
        }
    return TrialResult(index, holds, route_gap, witness, checks)


class CompositionVerifier:
    """
    复合定理的随机验证

    主计数来自定理试验；密度路线与贝叶斯关系的统计放在报告的小节里。
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)

    def run(self) -> Report:
        """
        执行验证

        Returns:
            Report: verify 命令的报告
        """
        config = self.config
        started = time.perf_counter()
        report = Report('verify', config.to_dict())
        if config.corrupt:
            self.logger.warning("负对照已开启：使用被破坏的反演")

        self.logger.info(f"开始复合定理验证: {config.trials} 次试验，seed={config.seed}")
        results = run_trials(partial(theorem_trial, config), config.trials, config.workers)
        for result in results:
            report.record(result.holds, result.gap, result.witness)
        report.sections['bayes_relation'] = self._bayes_section(results)

        density_count = max(1, config.trials // 4)
        self.logger.info(f"开始密度路线验证: {density_count} 次试验")
        density_results = run_trials(partial(density_trial, config), density_count, config.workers)
        report.sections['density'] = self._density_section(density_results)

        report.wall_clock = time.perf_counter() - started
        if report.ok:
            self.logger.info(f"验证通过: {report.passed}/{config.trials}")
        else:
            self.logger.error(f"验证失败: 定理试验失败 {report.failed} 次，"
                              f"密度路线失败 {report.sections['density']['failed']} 次")
        return report

    @staticmethod
    def _bayes_section(results: List[TrialResult]):
        keys = ('bayes_composite', 'bayes_first', 'bayes_second')
        checked = sum(1 for r in results for k in keys if k in r.checks)
        failed = sum(1 for r in results for k in keys if not r.checks.get(k, True))
        return {'checked': checked, 'failed': failed}

    @staticmethod
    def _density_section(results: List[TrialResult]):
        failed = [r for r in results if not r.holds]
        max_gap = max((r.gap for r in results), default=0)
        return {
            'trials': len(results),
            'passed': len(results) - len(failed),
            'failed': len(failed),
            'max_gap': number_to_json(max_gap),
            'witness': failed[0].witness if failed else None,
        }


def cmd_verify(config: RunConfig) -> Report:
    return CompositionVerifier(config).run()
