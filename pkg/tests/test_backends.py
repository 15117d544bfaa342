import numpy as np
import pytest

from snextremes import _backend
from snextremes.skew_normal import log_survival
from snextremes.special import owen_t_scaled

compiled = pytest.importorskip("snextremes._kernels")


def test_compiled_is_default():
    assert _backend.BACKEND == "compiled"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


@pytest.mark.parametrize("lam", (-7.0, -1.0, -0.2, 0.4, 1.0, 9.0))
def test_survival_agrees(lam):
    xs = np.linspace(-4, 40, 300)
    a = log_survival(lam, xs, backend="python")[0]
    b = log_survival(lam, xs, backend="compiled")[0]
    assert np.all(np.abs(a - b) <= 1e-14 * np.maximum(1.0, np.abs(a)))


def test_owen_agrees():
    h = np.linspace(0, 9, 200)
    for a in (0.1, 1.0, 30.0):
        x = owen_t_scaled(h, a, backend="python")
        y = owen_t_scaled(h, a, backend="compiled")
        assert np.max(np.abs(x - y)) <= 1e-15


def test_block_max_identical():
    for lam, n in ((1.0, 1), (-2.0, 1000), (0.0, 12345)):
        d = lam / np.sqrt(1 + lam * lam)
        w = np.sqrt(1 - d * d)
        a = _backend.get_kernels("python").block_max(np.random.PCG64(3), n, d, w)
        b = compiled.block_max(np.random.PCG64(3), n, d, w)
        assert a == b


def test_env_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SNEXTREMES_BACKEND="python")
    res = subprocess.run([sys.executable, "-c", "import snextremes; print(snextremes.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert res.stdout.strip() == "python"
