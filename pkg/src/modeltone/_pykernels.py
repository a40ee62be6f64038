"""Pure-Python versions of the RK4 loops in ``_kernels.pyx``.

Used when the compiled extension is unavailable or ``MODELTONE_PURE_PYTHON``
is set.  Arithmetic is ordered identically so both backends agree to the
last few ulps.
"""


def rk4_coefficient(G_half, h, g, gp, start):
    n = len(g) - 1
    Gh = G_half.tolist()
    hh = 0.5 * h
    h6 = h / 6.0
    y = float(g[start])
    p = float(gp[start])
    ys = []
    ps = []
    for i in range(start, n):
        G0 = Gh[2 * i]
        G1 = Gh[2 * i + 1]
        G2 = Gh[2 * i + 2]
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
        ys.append(y)
        ps.append(p)
    g[start + 1:] = ys
    gp[start + 1:] = ps


def rk4_radial(q_half, h, c, lam, v0, w0, start, n,
               v_out=None, w_out=None, stop_at_zero=False):
    qh = q_half.tolist()
    zeros = 0
    v = float(v0)
    w = float(w0)
    hh = 0.5 * h
    h6 = h / 6.0
    store = v_out is not None
    for i in range(start, n):
        q0 = c * qh[2 * i]
        q1 = c * qh[2 * i + 1]
        q2 = c * qh[2 * i + 2]
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
