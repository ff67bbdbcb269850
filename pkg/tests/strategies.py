"""Hypothesis strategies shared by the test modules."""
from math import comb

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from g2strom.exterior import DIM, KForm

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def forms(k):
    return arrays(np.float64, (comb(DIM, k),), elements=finite).map(lambda c: KForm(k, c))


def degrees(max_deg=DIM):
    return st.integers(0, max_deg)


unit_covectors = arrays(np.float64, (DIM,), elements=st.floats(-1, 1, allow_nan=False)).filter(
    lambda v: np.linalg.norm(v) > 0.1).map(lambda v: v / np.linalg.norm(v))


@st.composite
def spd_metrics(draw):
    A = draw(arrays(np.float64, (DIM, DIM), elements=st.floats(-1, 1, allow_nan=False)))
    return A @ A.T + np.eye(DIM)
