#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
测试公共设施：二元对称信道、夹具路径与 hypothesis 策略
"""

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from models.channel import binary_symmetric
from models.dist import Dist
from models.space import Space
from utils.numeric import NumericMode
from utils.random_utils import (random_channel, random_dist,
                                random_partial_dist, random_space, trial_rng)

FIXTURES = Path(__file__).with_name('fixtures')

settings.register_profile('default', max_examples=50, deadline=None)
settings.load_profile('default')

BIT = Space("B", ("0", "1"))


@pytest.fixture
def bit():
    return BIT


@pytest.fixture
def bsc():
    """BSC(ε) 工厂，ε 按精确小数解析"""
    return lambda eps: binary_symmetric(Fraction(str(eps)), BIT)


@pytest.fixture
def uniform_bit():
    return Dist(BIT, {"0": Fraction(1, 2), "1": Fraction(1, 2)})


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@st.composite
def spaces(draw, name="X", max_dim=4):
    rng = trial_rng(draw(seeds), 0)
    return random_space(rng, name, max_dim)


@st.composite
def dists(draw, space=None, sparse=False, mode=NumericMode.RATIONAL):
    rng = trial_rng(draw(seeds), 1)
    space = space or random_space(rng, "X", 4)
    return random_dist(space, rng, mode, sparse)


@st.composite
def partial_dists(draw, space):
    return random_partial_dist(space, trial_rng(draw(seeds), 2))


@st.composite
def channels(draw, dom=None, cod=None, sparse=False, deterministic=False):
    rng = trial_rng(draw(seeds), 3)
    dom = dom or random_space(rng, "X", 4)
    cod = cod or random_space(rng, "Y", 4)
    return random_channel(dom, cod, rng, NumericMode.RATIONAL, sparse, deterministic)


@st.composite
def chains(draw, sparse=False):
    """(c: X → Y, d: Y → Z, π on X)"""
    rng = trial_rng(draw(seeds), 4)
    x, y, z = (random_space(rng, name, 4) for name in ("X", "Y", "Z"))
    c = random_channel(x, y, rng, NumericMode.RATIONAL, sparse)
    d = random_channel(y, z, rng, NumericMode.RATIONAL, sparse)
    pi = random_dist(x, rng, NumericMode.RATIONAL, sparse)
    return c, d, pi
