"""Necessary feasibility conditions for intersection arrays.

Each check is a pure function producing CheckEntry records; full_report runs
the whole battery in a fixed order and aggregates the verdicts.  Verdicts:

* pass / fail      -- the condition is decided;
* not-applicable   -- the check's gate condition does not hold;
* inconclusive     -- the value landed inside the numerical guard band
                      (-1e-6, -1e-9] of an inequality; surfaced, never
                      silently passed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .core import IntersectionArray, format_array
from .precision import workdps
from .spectral import (Exact, Spectrum, as_mpf, num_str, spectrum,
                       standard_sequence, trace_square_check)

PASS = "pass"
FAIL = "fail"
NA = "not-applicable"
INCONCLUSIVE = "inconclusive"

INEQ_PASS_TOL = 1e-9   # >= -1e-9 counts as pass
INEQ_FAIL_TOL = 1e-6   # <= -1e-6 counts as fail; between is inconclusive


@dataclass(frozen=True)
class CheckEntry:
    name: str
    verdict: str
    witness: dict

    def to_json_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "witness": self.witness}


@dataclass(frozen=True)
class FeasibilityReport:
    array: IntersectionArray
    checks: tuple[CheckEntry, ...]

    @property
    def overall(self) -> str:
        return FAIL if any(e.verdict == FAIL for e in self.checks) else PASS

    @property
    def failing(self) -> list[str]:
        return [e.name for e in self.checks if e.verdict == FAIL]

    def to_json_dict(self) -> dict:
        return {
            "array": format_array(self.array),
            "checks": [e.to_json_dict() for e in self.checks],
            "overall": self.overall,
        }


def _entry(name, verdict, **witness) -> CheckEntry:
    clean = {k: (num_str(v) if not isinstance(v, (int, str, bool, type(None))) else v)
             for k, v in witness.items()}
    return CheckEntry(name, verdict, clean)


def check_monotonicity_and_integrality(arr: IntersectionArray,
                                       spec: Spectrum | None = None) -> list[CheckEntry]:
    """The four classical conditions: monotone c, monotone b, integral k_i and m_i."""
    out = []
    c_ok = all(x <= y for x, y in zip(arr.c, arr.c[1:]))
    out.append(_entry("c_nondecreasing", PASS if c_ok else FAIL, c=str(list(arr.c))))
    b_ok = all(x >= y for x, y in zip(arr.b, arr.b[1:]))
    out.append(_entry("b_nonincreasing", PASS if b_ok else FAIL, b=str(list(arr.b))))
    out.append(_entry("k_integrality", PASS if arr.k_integral else FAIL,
                      kseq=str([str(x) for x in arr.kseq])))
    if spec is None:
        spec = spectrum(arr)
    out.append(_entry("multiplicity_integrality",
                      PASS if spec.multiplicities_integral else FAIL,
                      mults=str([num_str(m) for m in spec.mults_raw])))
    return out


def check_a1_zero(arr: IntersectionArray, theta_min) -> CheckEntry:
    """A smallest eigenvalue below -k/2 forces a_1 = 0."""
    half = Fraction(-arr.k, 2)
    applicable = theta_min < half if isinstance(theta_min, Exact) else \
        as_mpf(theta_min) < as_mpf(half)
    if not applicable:
        return _entry("a1_zero", NA, theta_min=theta_min, gate=num_str(half))
    return _entry("a1_zero", PASS if arr.a[1] == 0 else FAIL,
                  a1=arr.a[1], theta_min=theta_min)


def c2_upper_bound(k: int, theta):
    """(2k - 2*theta) / (4 - 3*theta - k), exact when theta is."""
    if isinstance(theta, Exact):
        th = Fraction(theta)
        return (2 * k - 2 * th) / (4 - 3 * th - k)
    with workdps():
        th = as_mpf(theta)
        return (2 * k - 2 * th) / (4 - 3 * th - k)


def check_c2_bound(arr: IntersectionArray, theta_min) -> CheckEntry:
    """Gated bound on c_2: applicable when a_1 = 0 and -k < theta_min < (12-5k)/7.

    The closed form divides by u_1 + u_2, which vanishes at theta_min = -k;
    bipartite-type arrays (theta_min = -k exactly) are out of its reach, as
    K_{m,m} with c_2 = m shows.
    """
    k = arr.k
    gate = Fraction(12 - 5 * k, 7)
    if arr.a[1] != 0:
        return _entry("c2_bound", NA, reason="a1 != 0")
    if isinstance(theta_min, Exact):
        gated = -k < theta_min < gate
    else:
        gated = -k < as_mpf(theta_min) < as_mpf(gate)
    if not gated:
        return _entry("c2_bound", NA, theta_min=theta_min, gate=num_str(gate))
    bound = c2_upper_bound(k, theta_min)
    if isinstance(bound, Fraction):
        cap = bound.numerator // bound.denominator
    else:
        cap = int(mp.floor(bound))
    c2 = arr.c[1] if arr.D >= 2 else 1
    return _entry("c2_bound", PASS if c2 <= cap else FAIL,
                  c2=c2, bound=bound, cap=cap)


def p_polynomials(t: int, x):
    """Values p_0(x)..p_t(x): p_0 = 1, p_1 = x, p_2 = x^2 - 2, then the
    three-term recurrence p_i = x p_{i-1} - p_{i-2}.  Satisfies
    p_i(2 cos phi) = 2 cos(i phi) for i >= 1."""
    if t < 0:
        raise ValueError("t must be >= 0")
    one = x ** 0 if not isinstance(x, (int, float)) else type(x)(1)
    ps = [one]
    if t >= 1:
        ps.append(x)
    if t >= 2:
        ps.append(x * x - 2)
    for _ in range(3, t + 1):
        ps.append(x * ps[-1] - ps[-2])
    return ps


def _ineq_verdict(value) -> str:
    val = float(value) if isinstance(value, Exact) else value
    if val >= -INEQ_PASS_TOL:
        return PASS
    if val <= -INEQ_FAIL_TOL:
        return FAIL
    return INCONCLUSIVE


def check_odd_girth_inequality(arr: IntersectionArray, theta_min) -> list[CheckEntry]:
    """For each eigenvalue eta = 2 cos(2 pi j / g) of the odd-girth cycle,
    sum_{i<=t} p_i(eta) u_i(theta_min) must be nonnegative."""
    t = arr.t
    if t is None:
        return [_entry("odd_girth_inequality", NA, reason="bipartite-type array")]
    g = 2 * t + 1
    seq = standard_sequence(arr, theta_min)
    out = []
    with workdps():
        u = [as_mpf(x) for x in seq.u]
        for j in range(t + 1):
            eta = 2 * mp.cos(2 * mp.pi * j / g)
            ps = p_polynomials(t, eta)
            val = mp.fsum(ps[i] * u[i] for i in range(t + 1))
            out.append(_entry(f"odd_girth_inequality_j{j}", _ineq_verdict(val),
                              j=j, g=g, eta=eta, value=val))
    return out


def check_sum_rules(arr: IntersectionArray, spec: Spectrum,
                    rel_tol: float = 1e-6) -> CheckEntry:
    """Numerical sanity: sum m = v, sum m*theta = 0, sum m*theta^2 = v*k."""
    with workdps():
        th = [as_mpf(t) for t in spec.thetas]
        ms = [as_mpf(m) for m in spec.mults_raw]
        v = as_mpf(arr.v)
        r0 = abs(mp.fsum(ms) - v) / v
        r1 = abs(mp.fsum(m * t for m, t in zip(ms, th))) / (v * arr.k)
        r2 = abs(mp.fsum(m * t * t for m, t in zip(ms, th)) - v * arr.k) / (v * arr.k)
        ok = max(r0, r1, r2) < rel_tol
        return _entry("spectrum_sum_rules", PASS if ok else FAIL,
                      r_sum=r0, r_first=r1, r_second=r2)


def check_trace_square(arr: IntersectionArray, theta_min) -> CheckEntry:
    chk = trace_square_check(arr, theta_min)
    return _entry("trace_square", PASS if chk.verdict else FAIL,
                  lhs=chk.lhs, trace=chk.trace, slack=chk.slack)


def check_theta_ratio(arr: IntersectionArray, spec: Spectrum, ratio: Fraction) -> CheckEntry:
    """theta_min <= ratio * k (exactness matters on the boundary)."""
    from .spectral import sturm_count_leq
    x = Fraction(ratio) * arr.k
    ok = sturm_count_leq(arr, x) >= 1
    return _entry("theta_ratio", PASS if ok else FAIL,
                  ratio=str(Fraction(ratio)), theta_min=spec.theta_min, cutoff=x)


def full_report(arr: IntersectionArray, theta_ratio: Fraction | None = None) -> FeasibilityReport:
    """Run the whole battery in deterministic order.

    Numerical-precision failures inside a check surface as inconclusive
    entries rather than exceptions.
    """
    checks: list[CheckEntry] = []
    try:
        spec = spectrum(arr)
    except Exception as exc:  # pragma: no cover - defensive
        checks.append(_entry("spectrum", INCONCLUSIVE, error=str(exc)))
        checks.extend(check_monotonicity_and_integrality(
            arr, Spectrum((), (), (), (), arr.v)))
        return FeasibilityReport(arr, tuple(checks))
    tmin = spec.theta_min
    checks.extend(check_monotonicity_and_integrality(arr, spec))
    checks.append(check_a1_zero(arr, tmin))
    checks.append(check_c2_bound(arr, tmin))
    checks.extend(check_odd_girth_inequality(arr, tmin))
    checks.append(check_sum_rules(arr, spec))
    checks.append(check_trace_square(arr, tmin))
    if theta_ratio is not None:
        checks.append(check_theta_ratio(arr, spec, theta_ratio))
    return FeasibilityReport(arr, tuple(checks))
