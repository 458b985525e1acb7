import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mainextract.evalkit import _kernels as k
from oracles import levenshtein_full_matrix


@given(st.text("abcd", max_size=30), st.text("abcd", max_size=30))
def test_numpy_levenshtein_matches_oracle(a, b):
    assert k.levenshtein_numpy(k.codepoints(a), k.codepoints(b)) == levenshtein_full_matrix(a, b)


@pytest.mark.skipif(not k.HAVE_NUMBA, reason="numba not available")
@given(st.text("abcdé", max_size=40), st.text("abcdé", max_size=40))
def test_numba_levenshtein_parity(a, b):
    ca, cb = k.codepoints(a), k.codepoints(b)
    assert k.levenshtein(ca, cb, use_numba=True) == k.levenshtein(ca, cb, use_numba=False)


def test_long_strings_parity():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 5, 700)
    b = rng.integers(0, 5, 650)
    assert k.levenshtein(a, b, use_numba=True) == k.levenshtein(a, b, use_numba=False)


def test_codepoints():
    assert k.codepoints("a中").tolist() == [97, 0x4E2D]
    assert k.codepoints("").shape == (0,)


def test_env_flag_disables_numba():
    code = "from mainextract.evalkit import _kernels as k; print(k.HAVE_NUMBA)"
    env = dict(os.environ, MAINEXTRACT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env["MAINEXTRACT_NO_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str(k.HAVE_NUMBA)
