"""Odd-girth eigenvalue bound: for valency-k graphs of odd girth g, the
smallest eigenvalue satisfies theta_min >= -(1 - epsilon1) k on the branch
where c_t <= zeta k (t = (g-1)/2).

The machinery: a schedule N_i controlling |u_i - (theta/k)^i| <= N_i zeta,
the constants M1 = sum 2 N_i and M2 = 1/cos((t-1) pi / g), the polynomial
f(x, y) = sum_{i<=t} p_i(x) y^i, and the smallest root in (-1, 0) of
f(eta, y) + M1 zeta = 0 at eta = 2 cos(2 pi (t-1) / g).  Two schedules are
exposed: the generic recurrence N_i = 2 N_{i-1} + 4, and a sharper girth-5
variant with N_2 = 2 / (1 - zeta).

Only this computable branch constant is produced; the remaining case
constants of the full bound are minima over finite graph families that are
not effectively enumerable, so reported bounds carry that caveat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from .feasibility import p_polynomials
from .precision import workdps
from .spectral import as_mpf

MODE_GENERAL = "general"
MODE_SHARP_G5 = "sharp-g5"
MODES = (MODE_GENERAL, MODE_SHARP_G5)

EPSILON_CAVEAT = ("epsilon1 covers the c_t <= zeta*k branch only; the full "
                  "constant is a minimum over further finite graph families "
                  "that are not computed here")

_GRID = 4096


class BoundError(ValueError):
    pass


def _require_odd_girth(g: int, minimum: int = 5) -> int:
    if g < minimum or g % 2 == 0:
        raise BoundError(f"need odd girth >= {minimum}, got {g}")
    return (g - 1) // 2


def f_poly(x, y, t: int):
    """sum_{i=0}^t p_i(x) y^i via the recurrence (the rational closed form is
    singular where lambda y = 1, so it is only used in tests)."""
    if t < 2:
        raise BoundError("f_poly needs t >= 2")
    ps = p_polynomials(t, x)
    acc = ps[-1] * (y ** 0)
    for p in reversed(ps[:-1]):
        acc = acc * y + p
    return acc


def schedule_n(g: int, mode: str = MODE_GENERAL, zeta=None) -> list:
    """N_0..N_t; the sharp girth-5 schedule needs zeta to be known."""
    t = _require_odd_girth(g)
    if mode == MODE_GENERAL:
        N = [0, 0]
        for _ in range(2, t + 1):
            N.append(2 * N[-1] + 4)
        return N
    if mode == MODE_SHARP_G5:
        if g != 5:
            raise BoundError("sharp-g5 schedule is specific to girth 5")
        if zeta is None:
            raise BoundError("sharp-g5 schedule needs zeta")
        z = as_mpf(zeta)
        return [mp.mpf(0), mp.mpf(0), 2 / (1 - z)]
    raise BoundError(f"unknown mode {mode!r}")


def m2_constant(g: int):
    t = _require_odd_girth(g)
    return 1 / mp.cos((t - 1) * mp.pi / g)


def zeta_star(g: int, mode: str = MODE_GENERAL):
    """min{M2 / (2 M1), 1/2}; for the sharp girth-5 schedule M1 depends on
    zeta itself and the minimum solves to M2 / (8 + M2)."""
    with workdps():
        _require_odd_girth(g)
        M2 = m2_constant(g)
        if mode == MODE_SHARP_G5:
            if g != 5:
                raise BoundError("sharp-g5 schedule is specific to girth 5")
            return min(M2 / (8 + M2), mp.mpf(1) / 2)
        M1 = 2 * sum(schedule_n(g, mode))
        if M1 == 0:
            return mp.mpf(1) / 2
        return min(M2 / (2 * M1), mp.mpf(1) / 2)


def _shifted_poly_coeffs(g: int, zeta, mode: str):
    """Coefficients (low to high) of f(eta, y) + M1 zeta with eta at j = t - 1."""
    t = _require_odd_girth(g)
    eta = 2 * mp.cos(2 * mp.pi * (t - 1) / g)
    ps = p_polynomials(t, eta)
    if mode == MODE_SHARP_G5:
        if g != 5:
            raise BoundError("sharp-g5 schedule is specific to girth 5")
        z = as_mpf(zeta)
        shift = 4 * z / (1 - z)
    else:
        M1 = 2 * sum(schedule_n(g, mode))
        shift = M1 * as_mpf(zeta)
    coeffs = [mp.mpf(p) for p in ps]
    coeffs[0] += shift
    return coeffs, eta, shift


def _leftmost_root(coeffs) -> mp.mpf | None:
    """Smallest root of sum coeffs[i] y^i in (-1, 0): leftmost sign change on
    a 4096-point grid, then bisection and Newton polish."""
    fl = np.array([float(c) for c in coeffs])
    ys = np.linspace(-1.0, 0.0, _GRID + 1)
    vals = np.polynomial.polynomial.polyval(ys, fl)
    sign = np.sign(vals)
    idx = None
    for i in range(_GRID):
        if sign[i] != 0 and sign[i + 1] != 0 and sign[i] != sign[i + 1]:
            idx = i
            break
        if sign[i + 1] == 0:
            idx = i
            break
    if idx is None:
        return None

    def ev(y):
        acc = mp.mpf(0)
        for c in reversed(coeffs):
            acc = acc * y + c
        return acc

    a, b = mp.mpf(ys[idx]), mp.mpf(ys[idx + 1])
    sa = mp.sign(ev(a))
    for _ in range(80):
        m = (a + b) / 2
        if mp.sign(ev(m)) == sa:
            a = m
        else:
            b = m
        if b - a < mp.mpf("1e-12"):
            break
    root = (a + b) / 2
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:]

    def dev(y):
        acc = mp.mpf(0)
        for c in reversed(dcoeffs):
            acc = acc * y + c
        return acc

    for _ in range(60):
        d = dev(root)
        if d == 0:
            break
        step = ev(root) / d
        nxt = root - step
        if not (a - (b - a) <= nxt <= b + (b - a)):
            break
        root = nxt
        if abs(step) < mp.mpf(10) ** (-(mp.dps - 5)):
            break
    return root


@dataclass(frozen=True)
class BoundParameters:
    g: int
    t: int
    mode: str
    zeta: object
    N: tuple
    M1: object
    M2: object
    eta: object
    epsilon1: object  # None when the equation has no root in (-1, 0)

    @property
    def theta_over_k(self):
        return None if self.epsilon1 is None else -(1 - self.epsilon1)


def epsilon1(g: int, mode: str = MODE_GENERAL, zeta=None) -> BoundParameters:
    """Branch constant at zeta (default zeta_star): -(1 - epsilon1) is the
    smallest root of f(eta, y) + M1 zeta in (-1, 0).

    With zeta = zeta_star the bracket is guaranteed: the value at y = -1 is
    -M2 + M1 zeta <= -M2/2 < 0 and at y = 0 it is 1 + M1 zeta > 0; both facts
    are asserted before root hunting.
    """
    with workdps():
        t = _require_odd_girth(g)
        at_star = zeta is None
        if at_star:
            zeta = zeta_star(g, mode)
        z = as_mpf(zeta)
        if not 0 <= z <= mp.mpf(1) / 2:
            raise BoundError("zeta must lie in [0, 1/2]")
        coeffs, eta, shift = _shifted_poly_coeffs(g, z, mode)
        M2 = m2_constant(g)
        at_m1 = mp.fsum(c * (-1) ** i for i, c in enumerate(coeffs))
        at_0 = coeffs[0]
        assert at_0 > 0, "f(eta,0) + M1 zeta must be positive"
        if at_star:
            # at zeta_star the bracket is forced: value -M2 + M1 zeta <= -M2/2
            assert at_m1 <= -M2 / 2 + mp.mpf("1e-30"), "bracketing sign fact failed"
        root = _leftmost_root(coeffs)
        eps = None if root is None else 1 + root
        if mode == MODE_SHARP_G5:
            N = tuple(schedule_n(g, mode, z))
        else:
            N = tuple(schedule_n(g, mode))
        M1 = 2 * mp.fsum(mp.mpf(x) for x in N)
        return BoundParameters(g, t, mode, z, N, M1, M2, eta, eps)


def theta_bound_given_zeta(g: int, zeta, mode: str = MODE_GENERAL):
    """Lower bound on theta/k for a caller-supplied zeta; None when the
    shifted polynomial has no root in (-1, 0) (no information)."""
    params = epsilon1(g, mode, zeta)
    return params.theta_over_k


def conservative_2dp(x) -> str:
    """Round a lower bound downward to 2 decimals (safe direction)."""
    return f"{math.floor(float(x) * 100) / 100:.2f}"


def polygon_epsilon_upper(g: int):
    """2 cos^2(t pi / (2t+1)): the gap 1 + theta_min/k of the g-gon itself,
    an upper bound for any valid branch-independent constant."""
    if g < 3 or g % 2 == 0:
        raise BoundError(f"need odd g >= 3, got {g}")
    t = (g - 1) // 2
    with workdps():
        return 2 * mp.cos(t * mp.pi / g) ** 2


def diameter_bound(t: int, zeta) -> int:
    """ceil(4 t / zeta^2), exact for rational zeta."""
    if t < 1:
        raise BoundError("t must be >= 1")
    z = Fraction(zeta) if not isinstance(zeta, Fraction) else zeta
    if not 0 < z <= Fraction(1, 2):
        raise BoundError("zeta must lie in (0, 1/2]")
    val = Fraction(4 * t) / (z * z)
    return -((-val.numerator) // val.denominator)


def bound_table(g_min: int, g_max: int, mode: str = MODE_GENERAL):
    """Rows (g, zeta_star, epsilon1, theta/k bound) for odd g in [g_min, g_max]."""
    rows = []
    for g in range(g_min if g_min % 2 else g_min + 1, g_max + 1, 2):
        params = epsilon1(g, mode)
        rows.append((g, params.zeta, params.epsilon1, params.theta_over_k))
    return rows
