"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shiftpert.model import build_operator

finite = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, rows, cols):
    re = draw(arrays(np.float64, (rows, cols), elements=finite))
    im = draw(arrays(np.float64, (rows, cols), elements=finite))
    return re + 1j * im


@st.composite
def specs(draw, max_d=4, max_k=3, contraction=False):
    d = draw(st.integers(1, max_d))
    k = draw(st.integers(1, max_k))
    C = draw(complex_matrices(d + k, d))
    if contraction:
        margin = draw(st.floats(0.01, 0.9))
        norm = np.linalg.norm(C, 2)
        if norm < 1e-3:
            C = np.zeros_like(C)
        else:
            C *= (1 - margin) / norm
    return build_operator(d, k, C)


@st.composite
def hermitian(draw, n_max=8):
    n = draw(st.integers(1, n_max))
    A = draw(complex_matrices(n, n))
    return 0.5 * (A + A.conj().T)
