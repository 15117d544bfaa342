"""Pure-NumPy kernels; reference twins of ``_kernels.pyx``."""
import numpy as np
from scipy.special import erfcx

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)


def _panel_grid(panels):
    # unit-interval abscissae/weights of the composite rule
    j = np.arange(panels)[:, None]
    t = ((j + 0.5 * (_NODES + 1.0)) / panels).ravel()
    w = np.tile(0.5 * _WEIGHTS / panels, panels)
    return t, w


def owen_scaled(h, hi, panels):
    """int_0^hi exp(-h^2 tan^2(th)/2) dth, elementwise over h, hi."""
    h = np.asarray(h, dtype=float)
    hi = np.asarray(hi, dtype=float)
    t, w = _panel_grid(panels)
    th = hi[:, None] * t
    tn = np.tan(th)
    f = np.exp(-0.5 * (h[:, None] * tn) ** 2)
    return hi * (f @ w)


def tail_scaled(x, k, hi, panels):
    """int_0^hi exp(-c(x s + s^2/2)) erfcx(k(x+s)/sqrt2) ds with c = 1 + k^2."""
    x = np.asarray(x, dtype=float)
    hi = np.asarray(hi, dtype=float)
    c = 1.0 + k * k
    t, w = _panel_grid(panels)
    s = hi[:, None] * t
    xs = x[:, None]
    f = np.exp(-c * s * (xs + 0.5 * s)) * erfcx(k * (xs + s) / np.sqrt(2.0))
    return hi * (f @ w)


def block_max(bitgen, n, delta, omega):
    """Max of n draws delta*|U0| + omega*U1, consuming normals pairwise."""
    z = np.random.Generator(bitgen).standard_normal(2 * n)
    return float(np.max(delta * np.abs(z[0::2]) + omega * z[1::2]))
