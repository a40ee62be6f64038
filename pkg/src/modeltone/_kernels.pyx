# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 loops for the coefficient ODE and the radial shooting ODE.

Signatures mirror ``_pykernels`` exactly; ``kernels`` picks one at import.
"""


def rk4_coefficient(const double[::1] G_half, double h,
                    double[::1] g, double[::1] gp, Py_ssize_t start):
    """Integrate g'' = G g over a uniform grid.

    ``G_half[k]`` is G at r = k*h/2; ``g``/``gp`` hold the state at grid
    index ``start`` on entry and are filled up to the last index.
    """
    cdef Py_ssize_t n = g.shape[0] - 1
    cdef Py_ssize_t i
    cdef double y, p, G0, G1, G2, k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p
    cdef double hh = 0.5 * h
    cdef double h6 = h / 6.0
    y = g[start]
    p = gp[start]
    for i in range(start, n):
        G0 = G_half[2 * i]
        G1 = G_half[2 * i + 1]
        G2 = G_half[2 * i + 2]
        k1y = p
        k1p = G0 * y
        k2y = p + hh * k1p
        k2p = G1 * (y + hh * k1y)
        k3y = p + hh * k2p
        k3p = G1 * (y + hh * k2y)
        k4y = p + h * k3p
        k4p = G2 * (y + h * k3y)
        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        p = p + h6 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        g[i + 1] = y
        gp[i + 1] = p


def rk4_radial(const double[::1] q_half, double h, double c, double lam,
               double v0, double w0, Py_ssize_t start, Py_ssize_t n,
               double[::1] v_out=None, double[::1] w_out=None,
               bint stop_at_zero=False):
    """Integrate v'' + c q(t) v' + lam v = 0 from grid index ``start`` to ``n``.

    ``q_half[k]`` is q at t = k*h/2.  Returns ``(v_end, w_end, zero_count,
    last_index)``; with ``stop_at_zero`` the loop ends at the first sign
    change of v.
    """
    cdef Py_ssize_t i
    cdef Py_ssize_t zeros = 0
    cdef double v = v0, w = w0, vn
    cdef double q0, q1, q2, k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w
    cdef double hh = 0.5 * h
    cdef double h6 = h / 6.0
    cdef bint store = v_out is not None
    for i in range(start, n):
        q0 = c * q_half[2 * i]
        q1 = c * q_half[2 * i + 1]
        q2 = c * q_half[2 * i + 2]
        k1v = w
        k1w = -q0 * w - lam * v
        k2v = w + hh * k1w
        k2w = -q1 * k2v - lam * (v + hh * k1v)
        k3v = w + hh * k2w
        k3w = -q1 * k3v - lam * (v + hh * k2v)
        k4v = w + h * k3w
        k4w = -q2 * k4v - lam * (v + h * k3v)
        vn = v + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        w = w + h6 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        if (v > 0.0 and vn <= 0.0) or (v < 0.0 and vn >= 0.0):
            zeros += 1
            if stop_at_zero:
                return vn, w, zeros, i + 1
        v = vn
        if store:
            v_out[i + 1] = v
            w_out[i + 1] = w
    return v, w, zeros, n
