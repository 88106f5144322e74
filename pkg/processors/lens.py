#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
贝叶斯透镜处理器

精确透镜构造、Grothendieck 复合、复合定理检查，以及 GetPut / PutGet / PutPut
三条透镜定律的状态层面形式。
"""

from typing import Callable, Iterable

from models.channel import (Channel, identity_channel, max_row_gap,
                            push_state, seq_compose)
from models.dist import Dist, dirac, total_variation
from models.errors import NotFound
from models.lens import BayesLens
from models.report import CompositionReport, LawReport, Witness
from models.run_config import RunConfig
from models.space import Space, require_same
from models.stat_channel import InversionResult, StatChannel
from processors.inversion import (almost_equal, invert,
                                  satisfies_bayes_relation, stat_agree_at,
                                  stat_compose, stat_identity, stat_pullback)
from utils.logger import get_logger
from utils.numeric import TAU_CMP, is_exact
from utils.random_utils import (random_channel, random_dist, random_space,
                                trial_rng)


Inverter = Callable[[Channel, Dist], InversionResult]

# 反例的全变差阈值：排除浮点噪声，同时容纳 BSC(0.2) 的见证（约 0.141）
COUNTEREXAMPLE_GAP = 0.05

PUTGET_STREAM = 2
PUTPUT_STREAM = 3


def exact_lens(c: Channel, inverter: Inverter = invert) -> BayesLens:
    """
    精确贝叶斯透镜 ⟨c, c†⟩

    Args:
        c: 前向信道 X → Y
        inverter: 反演函数（默认精确反演，负对照时可替换）

    Returns:
        BayesLens: 后向分量为 π ↦ c†_π
    """
    backward = StatChannel(c.dom, c.cod, c.dom, lambda pi: inverter(c, pi).channel, "dagger")
    return BayesLens(c, backward)


def lens_identity(space: Space, local: Space = None) -> BayesLens:
    """恒等透镜 (id_X, ρ ↦ id_A)；local 缺省时 A = X"""
    local = local or space
    return BayesLens(identity_channel(space), stat_identity(space, local))


def lens_compose(first: BayesLens, second: BayesLens) -> BayesLens:
    """
    透镜复合

    first: (X, A) ↛ (Y, B)，second: (Y, B) ↛ (Z, C)。
    前向为 second.forward∘first.forward；后向为 π ↦ first.backward(π)∘second.backward(first.forward∘π)。

    Returns:
        BayesLens: (X, A) ↛ (Z, C)
    """
    require_same(first.forward.cod, second.forward.dom, "透镜复合的前向中间空间")
    require_same(first.backward.dom, second.backward.cod, "透镜复合的后向中间空间")
    forward = seq_compose(first.forward, second.forward)
    pulled = stat_pullback(first.forward, second.backward)
    return BayesLens(forward, stat_compose(pulled, first.backward))


def is_exact_at(lens: BayesLens, pi: Dist, tolerance: float = TAU_CMP) -> bool:
    """简单透镜在 π 处是否精确：后向分量满足贝叶斯关系；不精确的透镜称为近似透镜"""
    return satisfies_bayes_relation(lens.forward, pi, lens.backward(pi), tolerance)


def lenses_agree_at(first: BayesLens, second: BayesLens, priors: Iterable[Dist],
                    tolerance: float = TAU_CMP) -> bool:
    """前向信道相同且后向分量在采样先验上逐点相同"""
    if first.forward.dom != second.forward.dom or first.forward.cod != second.forward.cod:
        return False
    if any(not first.forward.rows[x].approx_equal(second.forward.rows[x], tolerance)
           for x in first.forward.dom):
        return False
    return stat_agree_at(first.backward, second.backward, priors, tolerance)


def verify_composition(c: Channel, d: Channel, pi: Dist, tolerance: float = TAU_CMP,
                       inverter: Inverter = invert) -> CompositionReport:
    """
    检查复合定理：(d∘c)†_π 与 c†_π ∘ d†_{c∘π} 关于 d∘c∘π 几乎相等

    Args:
        c: 信道 X → Y
        d: 信道 Y → Z
        pi: X 上的先验
        tolerance: 浮点比较容差
        inverter: 反演函数

    Returns:
        CompositionReport: 是否成立以及支撑上的最大逐行全变差
    """
    composite = seq_compose(c, d)
    lhs = inverter(composite, pi).channel
    rhs = lens_compose(exact_lens(c, inverter), exact_lens(d, inverter)).backward(pi)
    predicted = push_state(composite, pi)
    holds = almost_equal(lhs, rhs, predicted, tolerance)
    support = predicted.support()
    return CompositionReport(holds, max_row_gap(lhs, rhs, support), lhs, rhs, support)


def check_getput(c: Channel, pi: Dist, tolerance: float = TAU_CMP) -> LawReport:
    """
    GetPut 的状态形式：c†_π ∘ (c∘π) = π

    对因果信道应当总是成立。
    """
    require_same(c.dom, pi.space, "GetPut 的先验空间")
    predicted = push_state(c, pi)
    recovered = push_state(invert(c, pi).channel, predicted)
    return _law_report('GetPut', recovered, pi, {'channel': c.to_dict(), 'prior': pi.to_dict()}, tolerance)


def check_putget_at(c: Channel, pi: Dist, obs: Dist, tolerance: float = TAU_CMP) -> LawReport:
    """
    PutGet 在指定观测处的形式：c∘c†_π∘obs = obs

    obs = c∘π 时必然成立；一般观测下可能失败。
    """
    require_same(c.cod, obs.space, "PutGet 的观测空间")
    updated = push_state(invert(c, pi).channel, obs)
    repredicted = push_state(c, updated)
    inputs = {'channel': c.to_dict(), 'prior': pi.to_dict(), 'observation': obs.to_dict()}
    return _law_report('PutGet', repredicted, obs, inputs, tolerance)


def check_putput_at(c: Channel, pi: Dist, first: str, second: str,
                    tolerance: float = TAU_CMP) -> LawReport:
    """
    PutPut：先后观测 first、second 两次更新，与只观测 second 一次更新比较

    Args:
        c: 信道 X → Y
        pi: 先验
        first: 第一次观测 y1
        second: 第二次观测 y2
    """
    posterior = invert(c, pi).channel
    once = posterior.rows[c.cod.check(second)]
    intermediate = posterior.rows[c.cod.check(first)]
    second_update = invert(c, intermediate)
    inputs = {'channel': c.to_dict(), 'prior': pi.to_dict(), 'first': first, 'second': second}
    if second in second_update.zero_support:
        # 第二次观测在中间信念下不可能出现，更新只由约定决定，不作判定
        return LawReport('PutPut', True, None, 0, note="第二次观测的证据为 0")
    twice = second_update.channel.rows[second]
    return _law_report('PutPut', twice, once, inputs, tolerance)


def _law_report(law: str, lhs: Dist, rhs: Dist, inputs, tolerance: float) -> LawReport:
    gap = total_variation(lhs, rhs)
    # 按全变差判定：不成立时见证差距必然大于容差
    holds = gap == 0 if is_exact(gap) else gap <= tolerance
    witness = None if holds else Witness(inputs, lhs, rhs, gap)
    return LawReport(law, holds, witness, gap, tolerance=tolerance)


class CounterexampleSearch:
    """
    PutGet / PutPut 的随机反例搜索

    按运行配置的 seed、trials、max_dim、numeric_mode 与 deterministic 生成实例，
    返回第一个全变差达到 COUNTEREXAMPLE_GAP 的见证。
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)

    def putget(self) -> LawReport:
        """
        在随机的非确定性 2×2 信道与随机 Dirac 观测上搜索 PutGet 的反例

        Raises:
            NotFound: 试验预算内没有差距超过阈值的见证
        """
        config = self.config
        for index in range(config.trials):
            rng = trial_rng(config.seed, index, PUTGET_STREAM)
            space = Space("X", ("x0", "x1"))
            target = Space("Y", ("y0", "y1"))
            c = random_channel(space, target, rng, config.numeric_mode,
                               deterministic=config.deterministic)
            pi = random_dist(space, rng, config.numeric_mode)
            y = target.elements[int(rng.integers(0, len(target)))]
            if push_state(c, pi).mass(y) == 0:
                continue
            report = check_putget_at(c, pi, self._as_mode(dirac(target, y)), config.tolerance)
            if not report.holds and report.gap >= COUNTEREXAMPLE_GAP:
                return self._found('PutGet', report, index)
        raise NotFound(f"{config.trials} 次试验内没有找到 PutGet 反例")

    def putput(self) -> LawReport:
        """
        随机搜索 PutPut 的反例：更新两次与更新一次的全变差超过 0.05

        Returns:
            LawReport: holds=False 的报告，附带第一个见证

        Raises:
            NotFound: 预算内没有找到（例如生成器全部是确定性信道）
        """
        config = self.config
        for index in range(config.trials):
            rng = trial_rng(config.seed, index, PUTPUT_STREAM)
            source = random_space(rng, "X", config.max_dim)
            target = random_space(rng, "Y", config.max_dim)
            c = random_channel(source, target, rng, config.numeric_mode,
                               deterministic=config.deterministic)
            pi = random_dist(source, rng, config.numeric_mode)
            first = target.elements[int(rng.integers(0, len(target)))]
            second = target.elements[int(rng.integers(0, len(target)))]
            report = check_putput_at(c, pi, first, second, config.tolerance)
            if not report.holds and report.gap > COUNTEREXAMPLE_GAP:
                return self._found('PutPut', report, index)
        raise NotFound(f"{config.trials} 次试验内没有找到 PutPut 反例")

    def _found(self, law: str, report: LawReport, index: int) -> LawReport:
        report.trials = index + 1
        report.note = f"seed={self.config.seed} trial={index}"
        self.logger.info(f"在第 {index + 1} 次试验找到 {law} 反例，差距 {float(report.gap):.4f}")
        return report

    def _as_mode(self, dist: Dist) -> Dist:
        return dist if self.config.exact else dist.as_float()


def putget_counterexample(config: RunConfig) -> LawReport:
    """按配置搜索 PutGet 的反例，见 CounterexampleSearch.putget"""
    return CounterexampleSearch(config).putget()


def putput_counterexample(config: RunConfig) -> LawReport:
    """按配置搜索 PutPut 的反例，见 CounterexampleSearch.putput"""
    return CounterexampleSearch(config).putput()
