"""Spectra of intersection matrices: eigenvalues, standard sequences, multiplicities.

The tridiagonal intersection matrix L of an intersection array has D+1 real,
simple eigenvalues.  Everything here leans on exact integer arithmetic as far
as possible:

* the characteristic polynomial has integer coefficients, computed exactly;
* rational eigenvalues (necessarily integers, the polynomial being monic) are
  extracted by exact divisor tests and get exact standard sequences and
  multiplicities;
* irrational eigenvalues are isolated by exact Sturm counts on the minor
  sequence and only then polished with mpmath Newton iteration, keeping a
  certified rational enclosure from the exact phase.

Eigenvalue counting uses the classical fact that for a Jacobi matrix the
leading principal minors det(xI - L_i) form a Sturm sequence: with zero values
skipped, (D+1) minus the number of sign changes equals #{eigenvalues <= x}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging

import numpy as np
import scipy.linalg
from mpmath import mp

from .core import IntersectionArray
from .precision import workdps, working_dps

log = logging.getLogger(__name__)

Exact = (int, Fraction)

# isolation width 2^-ISOLATE_BITS for the exact enclosure phase
_ISOLATE_BITS = 48


class SpectralError(ValueError):
    pass


def as_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def num_str(x) -> str:
    """Decimal string at working precision (exact values print exactly)."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator > 1 else str(x.numerator)
    return mp.nstr(as_mpf(x), working_dps())


def intersection_matrix(arr: IntersectionArray) -> np.ndarray:
    """L as a dense (D+1)x(D+1) integer matrix: diag a_i, super b_i, sub c_i."""
    D = arr.D
    L = np.zeros((D + 1, D + 1), dtype=np.int64)
    for i in range(D + 1):
        L[i, i] = arr.a[i]
        if i < D:
            L[i, i + 1] = arr.b[i]
            L[i + 1, i] = arr.c[i]
    return L


def charpoly(arr: IntersectionArray) -> list[int]:
    """Coefficients (low to high degree) of det(xI - L), exact integers."""
    a = arr.a
    prev = [1]
    cur = [-a[0], 1]
    for i in range(2, arr.D + 2):
        w = arr.b[i - 2] * arr.c[i - 2]  # b_{i-2} * c_{i-1}
        nxt = [0] * (len(cur) + 1)
        for j, coef in enumerate(cur):
            nxt[j + 1] += coef
            nxt[j] -= a[i - 1] * coef
        for j, coef in enumerate(prev):
            nxt[j] -= w * coef
        prev, cur = cur, nxt
    return cur


def _poly_eval_frac(coeffs: list[int], x: Fraction) -> int:
    """Sign-faithful integer evaluation of sum c_i x^i, scaled by den(x)^deg."""
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for coef in reversed(coeffs):
        acc = acc * p + coef * qpow
        qpow *= q
    return acc


def sturm_count_leq(arr: IntersectionArray, x: Fraction) -> int:
    """Exact number of eigenvalues of L that are <= x."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    a = arr.a
    phi_prev, phi = 1, p - a[0] * q
    signs = [1]
    if phi != 0:
        signs.append(1 if phi > 0 else -1)
    for i in range(2, arr.D + 2):
        w = arr.b[i - 2] * arr.c[i - 2] * q * q
        phi_prev, phi = phi, (p - a[i - 1] * q) * phi - w * phi_prev
        if phi != 0:
            signs.append(1 if phi > 0 else -1)
    changes = sum(1 for s, t in zip(signs, signs[1:]) if s != t)
    return (arr.D + 1) - changes


def _integer_roots(coeffs: list[int], k: int) -> list[int]:
    """All integer roots (simple here) of a monic integer polynomial, in [-k, k]."""
    roots = []
    c0 = coeffs[0]
    if c0 == 0:
        roots.append(0)
    cands = set()
    n = abs(c0)
    if n:
        d = 1
        while d * d <= n:
            if n % d == 0:
                for r in (d, n // d):
                    if r <= k:
                        cands.update((r, -r))
            d += 1
    for r in sorted(cands):
        if _poly_eval_frac(coeffs, Fraction(r)) == 0:
            roots.append(r)
    return sorted(roots)


def _deflate(coeffs: list[int], root: int) -> list[int]:
    """Exact synthetic division by (x - root)."""
    high = list(reversed(coeffs))
    quot = [high[0]]
    for coef in high[1:-1]:
        quot.append(coef + root * quot[-1])
    rem = high[-1] + root * quot[-1]
    if rem != 0:
        raise SpectralError(f"{root} is not a root")
    return list(reversed(quot))


def _poly_sign(coeffs: list[int], x: Fraction) -> int:
    val = _poly_eval_frac(coeffs, x)
    return (val > 0) - (val < 0)


def _isolate_irrational(arr: IntersectionArray, q: list[int], int_roots: list[int]):
    """Isolating rational intervals (lo, hi), one per root of the deflated poly q."""
    k = arr.k
    lo, hi = Fraction(-k - 1), Fraction(k + 1)
    want = len(q) - 1
    boxes = [(lo, hi, want)]
    done = []
    ints = sorted(int_roots)

    def count_open(a: Fraction, b: Fraction) -> int:
        n_int = sum(1 for r in ints if a < r <= b)
        return sturm_count_leq(arr, b) - sturm_count_leq(arr, a) - n_int

    guard = 0
    while boxes:
        guard += 1
        if guard > 10000:
            raise SpectralError("failed to isolate eigenvalues")
        a, b, cnt = boxes.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            done.append((a, b))
            continue
        m = (a + b) / 2
        cl = count_open(a, m)
        boxes.append((a, m, cl))
        boxes.append((m, b, cnt - cl))
    if len(done) != want:
        raise SpectralError("failed to isolate eigenvalues")

    refined = []
    for a, b in sorted(done):
        sa = _poly_sign(q, a)
        while b - a > Fraction(1, 2 ** _ISOLATE_BITS):
            m = (a + b) / 2
            sm = _poly_sign(q, m)
            if sm == 0:  # cannot happen for irrational roots
                a = b = m
                break
            if sm == sa:
                a = m
            else:
                b = m
        refined.append((a, b))
    return refined


def _newton_polish(q: list[int], lo: Fraction, hi: Fraction):
    """mpmath Newton iteration for the single root of q inside (lo, hi)."""
    dq = [i * c for i, c in enumerate(q)][1:]

    def ev(cs, y):
        acc = mp.mpf(0)
        for coef in reversed(cs):
            acc = acc * y + coef
        return acc

    a, b = as_mpf(lo), as_mpf(hi)
    y = (a + b) / 2
    tol = mp.mpf(10) ** (-(mp.dps - 5))
    for _ in range(200):
        f = ev(q, y)
        d = ev(dq, y)
        if d == 0:
            break
        step = f / d
        y2 = y - step
        if not (a <= y2 <= b):
            y2 = (a + b) / 2  # bisect on sign as fallback
            if mp.sign(ev(q, y2)) == mp.sign(ev(q, a)):
                a = y2
            else:
                b = y2
            y = (a + b) / 2
            continue
        y = y2
        if abs(step) < tol * max(1, abs(y)):
            break
    return y


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues theta_0 > ... > theta_D with Biggs multiplicities.

    thetas holds exact ints where the eigenvalue is rational, else mpf values;
    enclosures are certified rational intervals from the exact isolation phase.
    """

    thetas: tuple
    mults_raw: tuple
    mults: tuple[int, ...]
    enclosures: tuple
    v: int | Fraction

    @property
    def theta_min(self):
        return self.thetas[-1]

    @property
    def multiplicities_integral(self) -> bool:
        v_int = self.v if isinstance(self.v, int) else (
            self.v.numerator if self.v.denominator == 1 else None)
        if v_int is None:
            return False
        if sum(self.mults) != v_int:
            return False
        for raw, r in zip(self.mults_raw, self.mults):
            if r < 1:
                return False
            if isinstance(raw, Exact):
                if Fraction(raw) != r:
                    return False
            elif abs(raw - r) >= 1e-6 * max(1, abs(raw)):
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "thetas": [num_str(t) for t in self.thetas],
            "mults": [num_str(m) for m in self.mults_raw],
            "mults_rounded": list(self.mults),
            "v": num_str(self.v),
        }


def _eigen_with_enclosures(arr: IntersectionArray):
    with workdps():
        coeffs = charpoly(arr)
        ints = _integer_roots(coeffs, arr.k)
        q = coeffs
        for r in ints:
            q = _deflate(q, r)
        pairs = [(r, (Fraction(r), Fraction(r))) for r in ints]
        if len(q) > 1:
            for lo, hi in _isolate_irrational(arr, q, ints):
                pairs.append((_newton_polish(q, lo, hi), (lo, hi)))
        pairs.sort(key=lambda p: p[0], reverse=True)
        roots = [p[0] for p in pairs]
        if len(roots) != arr.D + 1:
            raise SpectralError("root count mismatch")
        if roots[0] != arr.k:
            raise SpectralError("theta_0 != k")
        for s, t in zip(roots, roots[1:]):
            if not s > t:
                raise SpectralError("eigenvalues not strictly decreasing")
        return roots, [p[1] for p in pairs]


def eigenvalues(arr: IntersectionArray) -> list:
    """The D+1 simple eigenvalues of L, strictly decreasing.

    Integer eigenvalues come back as ints; irrational ones as mpf at the
    working precision.
    """
    return _eigen_with_enclosures(arr)[0]


def eigenvalues_float(arr: IntersectionArray) -> list[float]:
    """Independent float path: symmetrized tridiagonal solve (LAPACK)."""
    D = arr.D
    diag = np.array(arr.a, dtype=float)
    off = np.sqrt([arr.b[i] * arr.c[i] for i in range(D)])
    w = scipy.linalg.eigvalsh_tridiagonal(diag, off)
    return sorted(w.tolist(), reverse=True)


def theta_min(arr: IntersectionArray):
    return eigenvalues(arr)[-1]


@dataclass(frozen=True)
class StandardSequence:
    theta: object
    u: tuple
    terminal_residual: object


def standard_sequence(arr: IntersectionArray, theta) -> StandardSequence:
    """u_0 = 1, u_1 = theta/k, then the three-term recurrence.

    Exact rationals when theta is exact, else mpf at working precision.  The
    terminal identity c_D u_{D-1} + a_D u_D = theta u_D holds (residual below
    1e-8) precisely when theta is an eigenvalue of L.
    """
    k, D, a = arr.k, arr.D, arr.a
    if isinstance(theta, Exact):
        th = Fraction(theta)
        u = [Fraction(1), th / k]
        for j in range(1, D):
            u.append(((th - a[j]) * u[j] - arr.c[j - 1] * u[j - 1]) / arr.b[j])
        res = abs(arr.c[D - 1] * u[D - 1] + (a[D] - th) * u[D])
        return StandardSequence(th, tuple(u), res)
    with workdps():
        th = as_mpf(theta)
        u = [mp.mpf(1), th / k]
        for j in range(1, D):
            u.append(((th - a[j]) * u[j] - arr.c[j - 1] * u[j - 1]) / arr.b[j])
        res = abs(arr.c[D - 1] * u[D - 1] + (a[D] - th) * u[D])
        return StandardSequence(th, tuple(u), res)


def multiplicity(arr: IntersectionArray, theta):
    """Biggs multiplicity v / sum k_i u_i^2; exact for exact eigenvalues."""
    if isinstance(theta, Exact):
        if _poly_eval_frac(charpoly(arr), Fraction(theta)) != 0:
            raise SpectralError(f"{theta} is not an eigenvalue")
        seq = standard_sequence(arr, theta)
        return arr.v / sum(kk * uu * uu for kk, uu in zip(arr.kseq, seq.u))
    seq = standard_sequence(arr, theta)
    if seq.terminal_residual > mp.mpf("1e-8") * max(1, arr.k):
        raise SpectralError(f"{theta} is not an eigenvalue (residual {seq.terminal_residual})")
    with workdps():
        ks = [as_mpf(kk) for kk in arr.kseq]
        return as_mpf(arr.v) / sum(kk * uu * uu for kk, uu in zip(ks, seq.u))


def spectrum(arr: IntersectionArray) -> Spectrum:
    thetas, encl = _eigen_with_enclosures(arr)
    enclosures = tuple(encl)
    raw = tuple(multiplicity(arr, t) for t in thetas)
    rounded = []
    for m in raw:
        if isinstance(m, Exact):
            fr = Fraction(m)
            rounded.append(fr.numerator // fr.denominator if fr.denominator == 1 else round(float(fr)))
        else:
            rounded.append(int(mp.nint(m)))
    v = arr.v.numerator if arr.v.denominator == 1 else arr.v
    return Spectrum(tuple(thetas), raw, tuple(rounded), enclosures, v)


def multiplicity_upper_bound(arr: IntersectionArray, seq: StandardSequence, j: int):
    """max{1/u_1^2, ..., 1/u_{j-1}^2, (k_j + ... + k_D) / (k_j u_j^2)}.

    An upper bound for the Biggs multiplicity of seq.theta whenever seq is the
    standard sequence of an eigenvalue.
    """
    if not 1 <= j <= arr.D:
        raise ValueError(f"j must be in [1, {arr.D}]")
    u = seq.u
    if u[j] == 0:
        raise ValueError(f"u_{j} = 0")
    terms = [1 / (u[i] * u[i]) for i in range(1, j) if u[i] != 0]
    ks = arr.kseq
    tail_num = sum(ks[j:])
    if isinstance(u[j], Fraction):
        tail = Fraction(tail_num) / (ks[j] * u[j] * u[j])
    else:
        tail = as_mpf(tail_num) / (as_mpf(ks[j]) * u[j] * u[j])
    terms.append(tail)
    return max(terms)


def _worst_quotient(A, B, K, c_lo, c_hi, minimize: bool):
    """Extremum of (A - cB)/(K - c) over c in [c_lo, c_hi] (monotone in c)."""
    vals = [(A - c * B) / (K - c) for c in (c_lo, c_hi)]
    return min(vals) if minimize else max(vals)


def abs_u_lower_bounds(k_min: int, theta_ratio_range, c_upper, a=None,
                       grid: int = 1024, k_factors=(2, 4, 8, 16)):
    """Worst-case lower bounds for |u_0|, ..., |u_m| over an admissible region.

    Parameters: k >= k_min, |theta|/k in theta_ratio_range (inside (1/2, 1]),
    c_i <= c_upper[i-1] (with c_i >= 1), and fixed a_i (defaults to all zero,
    the regime below the odd girth).  |u_1| = |theta|/k enters exactly; each
    subsequent bound chains the recurrence inequality
        |u_{i+1}| >= (|theta - a_i| |u_i| - c_i |u_{i-1}|) / b_i
    propagating lower and upper bounds jointly (both are exact where the c_i
    are pinned, e.g. c_1 = 1).  Minimised over a rational grid of the ratio
    range at k = k_min; monotone growth in k is probed at k_min * k_factors
    and a warning is logged if it fails.  Negative bounds collapse to 0 (no
    information).
    """
    m = len(c_upper) + 1
    if a is None:
        a = [0] * (m - 1)
    r_lo, r_hi = (Fraction(x) for x in theta_ratio_range)
    if not (Fraction(1, 2) < r_lo <= r_hi <= 1):
        raise ValueError("theta ratio range must lie in (1/2, 1]")

    def chain(k: int, r: Fraction):
        lo = [Fraction(1), r]
        hi = [Fraction(1), r]
        for i in range(1, m):
            A_lo, A_hi = r * k * lo[i], r * k * hi[i]
            K = k - a[i - 1]
            c_lo, c_hi = Fraction(1), Fraction(c_upper[i - 1])
            step_lo = _worst_quotient(A_lo, hi[i - 1], K, c_lo, c_hi, minimize=True)
            step_hi = _worst_quotient(A_hi, lo[i - 1], K, c_lo, c_hi, minimize=False)
            lo.append(max(Fraction(0), step_lo))
            hi.append(max(Fraction(0), step_hi))
        return lo

    best = None
    for i in range(grid):
        r = r_lo + (r_hi - r_lo) * i / (grid - 1) if grid > 1 else r_lo
        lo = chain(k_min, r)
        best = lo if best is None else [min(x, y) for x, y in zip(best, lo)]
    for f in k_factors:
        probe = chain(f * k_min, r_lo)
        if any(p < b for p, b in zip(probe, best)):
            log.warning("abs_u_lower_bounds: chain not monotone in k at k=%d", f * k_min)
    return best


def trace_of_l_squared(arr: IntersectionArray) -> int:
    """tr(L^2) = sum a_i^2 + 2 sum b_i c_{i+1}, exact."""
    return sum(x * x for x in arr.a) + 2 * sum(
        arr.b[i] * arr.c[i] for i in range(arr.D))


@dataclass(frozen=True)
class TraceCheck:
    verdict: bool
    lhs: object
    trace: int
    slack: object


def trace_square_check(arr: IntersectionArray, theta) -> TraceCheck:
    """Does k^2 + theta^2 <= tr(L^2) hold?  Always true at the real theta_min."""
    tr = trace_of_l_squared(arr)
    if isinstance(theta, Exact):
        lhs = Fraction(arr.k) ** 2 + Fraction(theta) ** 2
        return TraceCheck(lhs <= tr, lhs, tr, tr - lhs)
    with workdps():
        lhs = mp.mpf(arr.k) ** 2 + as_mpf(theta) ** 2
        return TraceCheck(bool(lhs <= tr), lhs, tr, tr - lhs)


def implied_last_c_lower(D: int, k: int, theta):
    """Lower bound on c_D implied by the trace inequality in the all-a-zero regime.

    Uses the coarse caps tr(L^2) <= k^2 + 6k + c_4(2k - c_4) for D = 4 and
    tr(L^2) <= k^2 + 6k + 4 c_5 k - c_5^2 for D = 5 (valid when c_2 <= 2 and
    the earlier c_i are dominated by the last one), solved for the last c.
    """
    with workdps():
        th = as_mpf(theta)
        if D == 4:
            return mp.mpf(k) - mp.sqrt(k * k - th * th + 6 * k)
        if D == 5:
            return 2 * mp.mpf(k) - mp.sqrt(4 * k * k - th * th + 6 * k)
    raise ValueError("implied_last_c_lower supports D in {4, 5}")
