#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
性质检查器

结构映射的等式（余幺半群律、结合律、交换律、复制的非自然性）、几乎相等的
保持性质，以及密度路线的两条引理，在随机实例上逐一检查。
"""

import time
from collections import Counter
from fractions import Fraction
from functools import partial
from typing import Dict, List

from analyzers.trial_runner import TrialResult, run_trials
from models.channel import (Channel, associator, channels_equal, copy_channel,
                            discard_channel, identity_channel, is_deterministic,
                            lift_function, projection_channel, push_state,
                            seq_compose, swap_channel, tensor)
from models.measure import Effect
from models.report import Report
from models.run_config import RunConfig
from models.space import UNIT, product_space
from processors.density import (almost_inverse, counting_measure,
                                effects_almost_equal, is_almost_inverse,
                                likelihood_effect, measure_joint,
                                posterior_kernel, realize_channel)
from processors.inversion import (almost_equal, invert,
                                  invert_by_disintegration,
                                  satisfies_bayes_relation)
from utils.logger import get_logger
from utils.numeric import NumericMode
from utils.random_utils import (random_channel, random_density_channel,
                                random_dist, random_effect, random_measure,
                                random_partial_dist, random_space, trial_rng)

logger = get_logger(__name__)

STRUCTURAL_STREAM = 4
APPENDIX_STREAM = 5
DENSITY_STREAM = 7

# 三重乘积空间的维数上限
STRUCTURAL_MAX_DIM = 4

PASS, FAIL, EXCLUDED = 'pass', 'fail', 'excluded'

STRUCTURAL_LAWS = (
    'counit_left', 'counit_right', 'coassociative', 'commutative', 'swap_involutive',
    'compose_associative', 'identity', 'interchange', 'projection_natural',
    'causal', 'copy_not_natural', 'lift_deterministic',
)
APPENDIX_PROPS = ('composition_preserves', 'almost_inverses_agree',
                  'inversions_agree', 'double_inversion')
DENSITY_PROPS = ('kernel_joint', 'blocks_almost_equal')


def _verdict(precondition: bool, conclusion: bool) -> str:
    if not precondition:
        return EXCLUDED
    return PASS if conclusion else FAIL


def _perturb_rows(f, rows, rng, config: RunConfig):
    """把 f 在给定行上替换成新的随机行"""
    if not rows:
        return f
    other = random_channel(f.dom, f.cod, rng, config.numeric_mode)
    replaced = {x: (other.rows[x] if x in rows else f.rows[x]) for x in f.dom}
    return Channel(f.dom, f.cod, replaced)


def structural_trial(config: RunConfig, index: int) -> TrialResult:
    """单次结构律试验；每条定律返回 pass / fail"""
    rng = trial_rng(config.seed, index, STRUCTURAL_STREAM)
    dim = min(config.max_dim, STRUCTURAL_MAX_DIM)
    mode = config.numeric_mode
    tol = config.tolerance
    xs = random_space(rng, "X", dim)
    ys = random_space(rng, "Y", dim)
    zs = random_space(rng, "Z", dim)
    ws = random_space(rng, "W", dim)

    copy = copy_channel(xs)
    ident = identity_channel(xs)
    laws: Dict[str, bool] = {}
    laws['counit_left'] = channels_equal(
        seq_compose(seq_compose(copy, tensor(ident, discard_channel(xs))), projection_channel(xs, UNIT, 1)),
        ident, tol)
    laws['counit_right'] = channels_equal(
        seq_compose(seq_compose(copy, tensor(discard_channel(xs), ident)), projection_channel(UNIT, xs, 2)),
        ident, tol)
    laws['coassociative'] = channels_equal(
        seq_compose(seq_compose(copy, tensor(copy, ident)), associator(xs, xs, xs)),
        seq_compose(copy, tensor(ident, copy)), tol)
    laws['commutative'] = channels_equal(seq_compose(copy, swap_channel(xs, xs)), copy, tol)
    laws['swap_involutive'] = channels_equal(
        seq_compose(swap_channel(xs, ys), swap_channel(ys, xs)),
        identity_channel(product_space(xs, ys)), tol)

    p = random_channel(xs, ys, rng, mode, config.sparse)
    q = random_channel(ys, zs, rng, mode, config.sparse)
    r = random_channel(zs, ws, rng, mode, config.sparse)
    laws['compose_associative'] = channels_equal(
        seq_compose(seq_compose(p, q), r), seq_compose(p, seq_compose(q, r)), tol)
    laws['identity'] = (channels_equal(seq_compose(ident, p), p, tol)
                        and channels_equal(seq_compose(p, identity_channel(ys)), p, tol))

    f = random_channel(xs, zs, rng, mode, config.sparse)
    g = random_channel(ys, ws, rng, mode, config.sparse)
    f2 = random_channel(zs, xs, rng, mode, config.sparse)
    g2 = random_channel(ws, ys, rng, mode, config.sparse)
    laws['interchange'] = channels_equal(
        seq_compose(tensor(f, g), tensor(f2, g2)),
        tensor(seq_compose(f, f2), seq_compose(g, g2)), tol)
    laws['projection_natural'] = channels_equal(
        seq_compose(tensor(f, g), projection_channel(zs, ws, 1)),
        seq_compose(projection_channel(xs, ys, 1), f), tol)
    laws['causal'] = channels_equal(seq_compose(p, discard_channel(ys)), discard_channel(xs), tol)

    # 全支撑、陪域至少两个元素的随机信道不是确定性的
    noisy = random_channel(xs, ys, rng, mode)
    laws['copy_not_natural'] = not is_deterministic(noisy, tol)
    targets = [ys.elements[int(v)] for v in rng.integers(0, len(ys), size=len(xs))]
    mapping = dict(zip(xs.elements, targets))
    laws['lift_deterministic'] = is_deterministic(lift_function(xs, ys, mapping.__getitem__), tol)

    verdicts = {k: PASS if v else FAIL for k, v in laws.items()}
    holds = all(laws.values())
    witness = None if holds else {'seed': config.seed, 'trial': index,
                                  'failed': [k for k, v in laws.items() if not v]}
    return TrialResult(index, holds, 0, witness, verdicts)


def appendix_trial(config: RunConfig, index: int) -> TrialResult:
    """几乎相等相关性质的单次试验；前提不满足的性质记为 excluded"""
    rng = trial_rng(config.seed, index, APPENDIX_STREAM)
    mode = config.numeric_mode
    tol = config.tolerance
    xs = random_space(rng, "X", config.max_dim)
    ys = random_space(rng, "Y", config.max_dim)
    ws = random_space(rng, "W", config.max_dim)
    verdicts: Dict[str, str] = {}

    # 复合保持几乎相等
    pi = random_partial_dist(xs, rng, mode)
    f = random_channel(xs, ys, rng, mode)
    off_support = [x for x in xs if x not in pi.masses]
    g = _perturb_rows(f, off_support, rng, config)
    h = random_channel(ys, ws, rng, mode)
    verdicts['composition_preserves'] = _verdict(
        almost_equal(f, g, pi, tol),
        almost_equal(seq_compose(f, h), seq_compose(g, h), pi, tol))

    # 同一效应的两个几乎逆关于 μ 几乎相等；e 在 supp(μ) 上有零点时不存在几乎逆，记为排除
    e = random_effect(ys, rng, mode)
    mu = random_measure(ys, rng, mode)
    first = almost_inverse(e, mu)
    values = dict(first.values)
    for y in ys:
        if mu.weight(y) == 0:
            values[y] = _random_value(rng, mode)
    second = Effect(ys, values)
    verdicts['almost_inverses_agree'] = _verdict(
        is_almost_inverse(e, first, mu, tol) and is_almost_inverse(e, second, mu, tol),
        effects_almost_equal(first, second, mu, tol))

    # 两个满足贝叶斯关系的反演几乎相等；反演两次回到原信道
    c = random_channel(xs, ys, rng, mode, sparse=True)
    prior = random_dist(xs, rng, mode)
    predicted = push_state(c, prior)
    dagger = invert(c, prior).channel
    other = invert_by_disintegration(c, prior)
    verdicts['inversions_agree'] = _verdict(
        satisfies_bayes_relation(c, prior, dagger, tol) and satisfies_bayes_relation(c, prior, other, tol),
        almost_equal(dagger, other, predicted, tol))
    verdicts['double_inversion'] = _verdict(
        True, almost_equal(invert(dagger, predicted).channel, c, prior, tol))

    holds = FAIL not in verdicts.values()
    witness = None if holds else {'seed': config.seed, 'trial': index,
                                  'failed': [k for k, v in verdicts.items() if v == FAIL]}
    return TrialResult(index, holds, 0, witness, verdicts)


def density_props_trial(config: RunConfig, index: int) -> TrialResult:
    """
    两条密度引理的单次试验

    kernel_joint: 似然几乎逆 q 与在 μ 上与之相等的 r 产生的后验核，与 μ 的联合相同；
    blocks_almost_equal: d 关于 ν 有密度且 f ∼ν g 时，对任意 ρ 有 f ∼(d∘ρ) g。
    """
    rng = trial_rng(config.seed, index, DENSITY_STREAM)
    mode = config.numeric_mode
    tol = config.tolerance
    xs = random_space(rng, "X", config.max_dim)
    ys = random_space(rng, "Y", config.max_dim)
    ws = random_space(rng, "W", config.max_dim)
    verdicts: Dict[str, str] = {}

    c = random_channel(xs, ys, rng, mode, sparse=True)
    dc = random_density_channel(c, rng, mode)
    pi = random_dist(xs, rng, mode)
    mu = dc.base
    q = almost_inverse(likelihood_effect(dc, pi), mu)
    # 在 μ 的支撑外改写；四分之一的试验再改写一个随机点，作为前提不成立的对照
    changed = [y for y in ys if mu.weight(y) == 0]
    touched = ys.elements[int(rng.integers(0, len(ys)))]
    if rng.integers(0, 4) == 0 and touched not in changed:
        changed.append(touched)
    values = dict(q.values)
    for y in changed:
        values[y] = _random_value(rng, mode)
    r = Effect(ys, values)
    alpha = measure_joint(mu, posterior_kernel(dc, pi, q))
    beta = measure_joint(mu, posterior_kernel(dc, pi, r))
    verdicts['kernel_joint'] = _verdict(
        effects_almost_equal(q, r, mu, tol),
        effects_almost_equal(alpha, beta, counting_measure(alpha.dom), tol))

    d = realize_channel(dc)
    f = random_channel(ys, ws, rng, mode)
    g = _perturb_rows(f, changed, rng, config)
    rho = random_dist(xs, rng, mode)
    agree_on_base = all(f.rows[y].approx_equal(g.rows[y], tol) for y in mu.support())
    verdicts['blocks_almost_equal'] = _verdict(
        agree_on_base, almost_equal(f, g, push_state(d, rho), tol))

    holds = FAIL not in verdicts.values()
    witness = None if holds else {'seed': config.seed, 'trial': index, 'density': dc.to_dict(),
                                  'prior': pi.to_dict(),
                                  'failed': [k for k, v in verdicts.items() if v == FAIL]}
    return TrialResult(index, holds, 0, witness, verdicts)


def _random_value(rng, mode: NumericMode):
    value = Fraction(int(rng.integers(1, 9)), 4)
    return float(value) if mode == NumericMode.FLOAT else value


def _tally(results: List[TrialResult], names) -> Dict[str, Dict[str, int]]:
    tally = {}
    for name in names:
        counts = Counter(r.checks.get(name, EXCLUDED) for r in results)
        tally[name] = {'passed': counts[PASS], 'failed': counts[FAIL], 'excluded': counts[EXCLUDED]}
    return tally


class PropertyChecker:
    """结构律与几乎相等性质的随机检查"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)

    def _run(self, trial_fn, names) -> Dict:
        results = run_trials(partial(trial_fn, self.config), self.config.trials, self.config.workers)
        tally = _tally(results, names)
        witness = next((r.witness for r in results if not r.holds), None)
        failed = sum(t['failed'] for t in tally.values())
        if failed:
            self.logger.error(f"性质检查失败 {failed} 次，第一个见证: {witness}")
        return {'laws': tally, 'failed': failed, 'witness': witness}

    def check_structural(self) -> Dict:
        self.logger.info(f"检查结构律: {self.config.trials} 个随机实例")
        return self._run(structural_trial, STRUCTURAL_LAWS)

    def check_appendix(self) -> Dict:
        self.logger.info(f"检查几乎相等性质: {self.config.trials} 次试验")
        return self._run(appendix_trial, APPENDIX_PROPS)

    def check_density_props(self) -> Dict:
        self.logger.info(f"检查密度引理: {self.config.trials} 次试验")
        return self._run(density_props_trial, DENSITY_PROPS)

    def run(self) -> Report:
        started = time.perf_counter()
        report = Report('props', self.config.to_dict())
        for name, section in (('structural', self.check_structural()),
                              ('almost_equality', self.check_appendix()),
                              ('density', self.check_density_props())):
            report.sections[name] = section
            for counts in section['laws'].values():
                report.passed += counts['passed']
                report.failed += counts['failed']
            if section['witness'] is not None:
                report.witnesses.append(section['witness'])
        report.wall_clock = time.perf_counter() - started
        return report


def check_density_props(config: RunConfig) -> Dict:
    """
    密度引理的随机验证

    Returns:
        dict: 每条引理的 passed / failed / excluded 计数，以及第一个见证
    """
    return PropertyChecker(config).check_density_props()


def cmd_props(config: RunConfig) -> Report:
    return PropertyChecker(config).run()
