"""Independent reference computations shared by the test modules."""

import math


def isotropic_relaxation(s0, eta0, y0, T, n, cv=1.0, gamma=1.4, K0=0.5, K1=0.5, alpha=1.0,
                         k_B=1.0, zeta=4.0, rho=1.0, rho_R=1.0):
    """Fixed-step RK4 for homogeneous relaxation with ``F = I``, ``Y = s I``, ``q = v = 0``.

    The metric stays isotropic, so the system reduces to three scalar ODEs
    for ``(eta, s, y)`` with ``C = s^{-1/2} I``:

        ds/dt   = (8K/zeta) s - (8 k theta/zeta) s^{3/2}
        dy/dt   = (24/zeta) y (k theta s^{1/2} - K)
        deta/dt = (6 alpha/(zeta theta)) (K c^{1/2} - k theta c^{-1/2})^2

    with ``K = K0 + K1 theta`` and ``theta`` from the polytropic law at the
    shifted entropy. Returns the list of ``(t, theta, tr C, y det Y)``.
    """

    def theta_of(eta, s, y):
        c = s ** -0.5
        log_det = math.log((rho_R / rho) ** 2 * math.sqrt(y))
        eta_t = eta + 0.5 * alpha * (K1 * 3.0 * c - k_B * log_det)
        return rho ** (gamma - 1.0) * math.exp(eta_t / cv)

    def rhs(eta, s, y):
        th = theta_of(eta, s, y)
        K = K0 + K1 * th
        c = s ** -0.5
        kt = k_B * th
        ds = 8.0 * K / zeta * s - 8.0 * kt / zeta * s ** 1.5
        dy = 24.0 / zeta * y * (kt * math.sqrt(s) - K)
        deta = 6.0 * alpha / (zeta * th) * (K * math.sqrt(c) - kt / math.sqrt(c)) ** 2
        return deta, ds, dy

    h = T / n
    eta, s, y = eta0, s0, y0
    out = [(0.0, theta_of(eta, s, y), 3.0 * s ** -0.5, y * s ** 3)]
    for k in range(n):
        a = rhs(eta, s, y)
        b = rhs(eta + 0.5 * h * a[0], s + 0.5 * h * a[1], y + 0.5 * h * a[2])
        c = rhs(eta + 0.5 * h * b[0], s + 0.5 * h * b[1], y + 0.5 * h * b[2])
        d = rhs(eta + h * c[0], s + h * c[1], y + h * c[2])
        eta += h / 6.0 * (a[0] + 2 * b[0] + 2 * c[0] + d[0])
        s += h / 6.0 * (a[1] + 2 * b[1] + 2 * c[1] + d[1])
        y += h / 6.0 * (a[2] + 2 * b[2] + 2 * c[2] + d[2])
        out.append(((k + 1) * h, theta_of(eta, s, y), 3.0 * s ** -0.5, y * s ** 3))
    return out
