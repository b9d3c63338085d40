"""Independent reference implementations used only by the tests."""

from decimal import Decimal, getcontext
import math

import numpy as np


def bessel_series(n, x, digits=60):
    """J_n(x) from the ascending power series in extended-precision decimals."""
    getcontext().prec = digits
    half = Decimal(repr(float(x))) / 2
    sign = 1
    if n < 0:
        n, sign = -n, (-1) ** n
    if half == 0:
        return float(n == 0)
    term = half**n / math.factorial(n)
    total = term
    k = 0
    tiny = Decimal(10) ** (-(digits - 10))
    while True:
        k += 1
        term = -term * half * half / (k * (k + n))
        total += term
        if abs(term) < tiny and k > abs(float(half)):
            break
    return sign * float(total)


def standard_map(phi, rho, K, steps):
    """Chirikov standard map with the rotor's sign and ordering, unwrapped rho."""
    out = []
    for _ in range(steps):
        rho = rho + K * math.sin(phi)
        phi = (phi + rho) % (2 * math.pi)
        out.append((phi, rho))
    return out


def fd_jacobian_det(step, phi, rho, h=1e-6):
    """Central-difference Jacobian determinant of a map (phi, rho) -> (phi', rho')."""
    def f(p, r):
        return np.array(step(p, r))
    dphi = (f(phi + h, rho) - f(phi - h, rho)) / (2 * h)
    drho = (f(phi, rho + h) - f(phi, rho - h)) / (2 * h)
    return dphi[0] * drho[1] - dphi[1] * drho[0]
