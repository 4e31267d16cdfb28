"""
공용 hypothesis 전략
"""

import math

import hypothesis.strategies as st
from hypothesis import settings

from polyneq.models import GammaWeights, RootForm

settings.register_profile("polyneq", max_examples=25, deadline=None)
settings.load_profile("polyneq")


@st.composite
def roots_in_disk(draw, k: float = 1.0, min_degree: int = 1, max_degree: int = 6) -> RootForm:
    """|z_j| <= k 인 근 형태 (선행계수는 단위원 위)"""
    n = draw(st.integers(min_degree, max_degree))
    radii = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    angles = draw(st.lists(st.floats(0.0, 2 * math.pi), min_size=n, max_size=n))
    lead_angle = draw(st.floats(0.0, 2 * math.pi))
    roots = [k * r * complex(math.cos(t), math.sin(t)) for r, t in zip(radii, angles)]
    return RootForm(leading=complex(math.cos(lead_angle), math.sin(lead_angle)), roots=roots)


@st.composite
def gamma_weights(draw, n: int) -> GammaWeights:
    weights = draw(st.lists(st.floats(0.05, 3.0), min_size=n, max_size=n))
    return GammaWeights(gamma=tuple(weights))
