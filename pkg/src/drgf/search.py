"""Pruned exhaustive enumeration of intersection arrays and the diameter-4/5
classification pipeline.

The enumerator walks (c_i, a_i) level by level under the structural
constraints (monotone c, monotone b, b_i >= 1, a-pattern), pruning whole
subtrees as soon as a prefix is doomed:

* a_1 >= 1 cannot meet theta_min <= ratio*k when ratio < -1/2;
* c_2 above the closed-form bound (2k - 2*theta)/(4 - 3*theta - k), evaluated
  at theta = ratio*k where the bound is largest, is impossible;
* k_i = k_{i-1} b_{i-1} / c_i must stay integral.

Pruned subtrees are counted exactly (memoised completion counts), so the
statistics cover the full search space at array granularity.  Complete
candidates then run the spectral checks, cheapest first: the trace identity
lower-bounds tr(L^2) against k^2 + (ratio*k)^2, an exact Sturm count decides
theta_min <= ratio*k on the boundary, and only the handful of survivors pay
for full spectra, multiplicity integrality and the odd-girth inequality.
Work is partitioned by valency k and merged in sorted order, so results and
statistics are independent of execution order and worker count.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .core import IntersectionArray, format_array, parse_array
from .feasibility import (FAIL, INCONCLUSIVE, c2_upper_bound,
                          check_odd_girth_inequality, full_report)
from .precision import workdps
from .spectral import (abs_u_lower_bounds, as_mpf, eigenvalues_float,
                       implied_last_c_lower, spectrum, sturm_count_leq,
                       trace_of_l_squared, trace_square_check)

ZERO, NONZERO, FREE = "0", "+", "*"

DEFAULT_CHECKS = ("a1_zero", "c2_bound", "k_integrality", "trace_vs_ratio",
                  "theta_ratio", "multiplicity_integrality",
                  "odd_girth_inequality", "trace_square")


class SearchSpecError(ValueError):
    pass


class CapDerivationError(RuntimeError):
    """A valency-cap replay failed to close; the message names the step."""


@dataclass(frozen=True)
class SearchSpec:
    """Search space: diameter, valency range, a-pattern for a_1..a_D
    ('0' forced zero, '+' forced nonzero, '*' free), allowed c_2 values,
    spectral ratio cut (theta_min <= theta_ratio * k), and enabled checks."""

    D: int
    k_min: int
    k_max: int
    a_pattern: str
    c2_set: tuple[int, ...] = (1, 2)
    theta_ratio: Fraction | None = None
    checks: tuple[str, ...] = DEFAULT_CHECKS

    def __post_init__(self):
        if self.D < 1:
            raise SearchSpecError("D must be >= 1")
        if self.k_min < 2:
            raise SearchSpecError("k_min must be >= 2")
        if self.k_max < self.k_min:
            raise SearchSpecError("empty k range")
        if len(self.a_pattern) != self.D or set(self.a_pattern) - {ZERO, NONZERO, FREE}:
            raise SearchSpecError(f"a_pattern must be {self.D} chars from 0+*")
        if not self.c2_set or any(c < 1 for c in self.c2_set):
            raise SearchSpecError("c2_set must hold positive integers")
        if self.theta_ratio is not None and not -1 <= self.theta_ratio < 0:
            raise SearchSpecError("theta_ratio must lie in [-1, 0)")

    def to_json_dict(self) -> dict:
        return {
            "D": self.D, "k_range": [self.k_min, self.k_max],
            "a_pattern": self.a_pattern, "c2_set": sorted(self.c2_set),
            "theta_ratio": None if self.theta_ratio is None else str(self.theta_ratio),
            "checks": list(self.checks),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SearchSpec":
        try:
            ratio = obj.get("theta_ratio")
            if ratio is not None:
                ratio = Fraction(str(ratio))
            return cls(
                D=int(obj["D"]),
                k_min=int(obj["k_range"][0]), k_max=int(obj["k_range"][1]),
                a_pattern=str(obj["a_pattern"]),
                c2_set=tuple(sorted(int(c) for c in obj.get("c2_set", (1, 2)))),
                theta_ratio=ratio,
                checks=tuple(obj.get("checks", DEFAULT_CHECKS)),
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise SearchSpecError(f"bad search spec: {exc}") from exc


def default_spec(D: int, checks: tuple[str, ...] = DEFAULT_CHECKS) -> SearchSpec:
    """The main-branch space: all a_i zero below the diameter, a_D nonzero,
    c_2 in {1, 2}, theta_min <= -(D-1)/D k, valency capped by valency_cap."""
    cap = valency_cap(D).k_max
    return SearchSpec(D, 5, cap, ZERO * (D - 1) + NONZERO,
                      (1, 2), Fraction(-(D - 1), D), checks)


@dataclass
class PruningStats:
    generated: int = 0
    killed: dict = field(default_factory=dict)
    survivors: int = 0
    warnings: list = field(default_factory=list)

    def kill(self, name: str, n: int = 1):
        self.killed[name] = self.killed.get(name, 0) + n

    def merged_with(self, other: "PruningStats") -> "PruningStats":
        out = PruningStats(self.generated + other.generated, dict(self.killed),
                           self.survivors + other.survivors,
                           self.warnings + other.warnings)
        for k, v in other.killed.items():
            out.killed[k] = out.killed.get(k, 0) + v
        return out

    def consistent(self) -> bool:
        return self.generated == self.survivors + sum(self.killed.values())

    def to_json_dict(self) -> dict:
        return {"generated": self.generated,
                "killed": dict(sorted(self.killed.items())),
                "survivors": self.survivors,
                "warnings": list(self.warnings)}


@dataclass(frozen=True)
class ClassificationResult:
    spec: SearchSpec
    survivors: tuple[IntersectionArray, ...]
    reports: dict
    stats: PruningStats


class _KSpace:
    """Search tree for one valency; shares the choice logic between the
    generator and the exact completion counter."""

    def __init__(self, k: int, spec: SearchSpec):
        self.k = k
        self.spec = spec
        self.ratio_cut = None if spec.theta_ratio is None else spec.theta_ratio * k
        self._a1_prune = (
            "a1_zero" in spec.checks
            and spec.theta_ratio is not None and spec.theta_ratio < Fraction(-1, 2))
        self._c2_cap = self._closed_form_c2_cap()
        self._count = lru_cache(maxsize=None)(self._count_uncached)

    def _closed_form_c2_cap(self):
        if ("c2_bound" not in self.spec.checks or self.ratio_cut is None
                or self.spec.a_pattern[0] != ZERO):
            return None
        k = self.k
        if not -k < self.ratio_cut < Fraction(12 - 5 * k, 7):
            return None
        bound = c2_upper_bound(k, self.ratio_cut)
        return bound.numerator // bound.denominator

    def choices(self, level: int, c_prev: int, b_prev: int):
        """(c, a, b) options at a level, before pruning checks."""
        k, D = self.k, self.spec.D
        kind = self.spec.a_pattern[level - 1]
        if level == D:
            for c in range(c_prev, k + 1):
                if level == 2 and c not in self.spec.c2_set:
                    continue
                a = k - c
                if kind == ZERO and a != 0:
                    continue
                if kind == NONZERO and a == 0:
                    continue
                yield c, a, 0
            return
        cs = (1,) if level == 1 else range(c_prev, k)
        if level == 2:
            cs = [c for c in cs if c in self.spec.c2_set]
        for c in cs:
            a_lo = 1 if kind == NONZERO else 0
            a_lo = max(a_lo, k - c - b_prev)
            a_hi = 0 if kind == ZERO else k - c - 1
            if kind == ZERO and a_lo > 0:
                continue
            for a in range(a_lo, a_hi + 1):
                yield c, a, k - c - a

    def _count_uncached(self, level: int, c_prev: int, b_prev: int) -> int:
        if level > self.spec.D:
            return 1
        return sum(self._count(level + 1, c, b)
                   for c, _a, b in self.choices(level, c_prev, b_prev))

    def run(self):
        """Survivor list for this valency; pruning stats land on .stats."""
        stats = PruningStats()
        self.stats = stats
        survivors = list(self._walk(1, 1, self.k, [], [], 1))
        stats.generated = self._count(1, 1, self.k)
        stats.survivors = len(survivors)
        return survivors

    def _walk(self, level, c_prev, b_prev, cs, bs, k_here):
        # k_here = k_{level-1}, integral by induction on the pruned prefix
        k, D, spec = self.k, self.spec.D, self.spec
        for c, a, b in self.choices(level, c_prev, b_prev):
            if level == 1 and self._a1_prune and a != 0:
                self.stats.kill("a1_zero", self._count(level + 1, c, b))
                continue
            if level == 2 and self._c2_cap is not None and c > self._c2_cap:
                self.stats.kill("c2_bound", self._count(level + 1, c, b))
                continue
            if level >= 2 and "k_integrality" in spec.checks \
                    and (k_here * b_prev) % c != 0:
                self.stats.kill("k_integrality", self._count(level + 1, c, b))
                continue
            k_next = k_here * b_prev // c if level >= 2 else k
            if level == D:
                arr = IntersectionArray(tuple([k] + bs), tuple(cs + [c]))
                name = self._array_checks(arr)
                if name is None:
                    yield arr
                else:
                    self.stats.kill(name)
            else:
                yield from self._walk(level + 1, c, b, cs + [c], bs + [b], k_next)

    def _array_checks(self, arr: IntersectionArray):
        """First failing array-level check name, or None for a survivor."""
        spec = self.spec
        cut = self.ratio_cut
        if cut is not None and "trace_vs_ratio" in spec.checks:
            if Fraction(arr.k) ** 2 + cut * cut > trace_of_l_squared(arr):
                return "trace_vs_ratio"
        if cut is not None and "theta_ratio" in spec.checks:
            if sturm_count_leq(arr, cut) < 1:
                return "theta_ratio"
        need_spec = {"multiplicity_integrality", "odd_girth_inequality",
                     "trace_square"} & set(spec.checks)
        if not need_spec:
            return None
        if "multiplicity_integrality" in spec.checks and _mults_clearly_non_integral(arr):
            return "multiplicity_integrality"
        sp = spectrum(arr)
        if "multiplicity_integrality" in spec.checks and not sp.multiplicities_integral:
            return "multiplicity_integrality"
        if "odd_girth_inequality" in spec.checks:
            entries = check_odd_girth_inequality(arr, sp.theta_min)
            if any(e.verdict == FAIL for e in entries):
                return "odd_girth_inequality"
            if any(e.verdict == INCONCLUSIVE for e in entries):
                self.stats.warnings.append(
                    f"{format_array(arr)}: odd-girth inequality inconclusive")
        if "trace_square" in spec.checks:
            if not trace_square_check(arr, sp.theta_min).verdict:
                return "trace_square"
        return None


def _mults_clearly_non_integral(arr: IntersectionArray, margin: float = 1e-4) -> bool:
    """Fast float screen: True when some Biggs multiplicity is unambiguously
    fractional.  Real survivors have exactly integral multiplicities, which
    the float path reproduces to ~1e-10, far inside the margin; borderline
    values fall through to the exact spectrum."""
    k, D, a = arr.k, arr.D, arr.a
    ks = [float(x) for x in arr.kseq]
    v = float(arr.v)
    for th in eigenvalues_float(arr):
        u = [1.0, th / k]
        for j in range(1, D):
            u.append(((th - a[j]) * u[j] - arr.c[j - 1] * u[j - 1]) / arr.b[j])
        m = v / sum(kk * uu * uu for kk, uu in zip(ks, u))
        if abs(m - round(m)) > margin * max(1.0, abs(m)):
            return True
    return False


def _run_k(args):
    spec_json, k = args
    spec = SearchSpec.from_json_dict(json.loads(spec_json))
    space = _KSpace(k, spec)
    survivors = space.run()
    return k, [format_array(a) for a in survivors], space.stats


def enumerate_arrays(spec: SearchSpec, jobs: int = 1) -> ClassificationResult:
    """Exhaust the search space; deterministic output order (k, c-sequence)."""
    tasks = [(json.dumps(spec.to_json_dict()), k)
             for k in range(spec.k_min, spec.k_max + 1)]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            parts = pool.map(_run_k, tasks)
    else:
        parts = [_run_k(t) for t in tasks]
    parts.sort(key=lambda p: p[0])
    stats = PruningStats()
    names: list[str] = []
    for _k, found, st in parts:
        names.extend(found)
        stats = stats.merged_with(st)
    survivors = sorted((parse_array(s) for s in names), key=lambda a: (a.k, a.c, a.b))
    stats.survivors = len(survivors)
    reports = {format_array(a): full_report(a, spec.theta_ratio) for a in survivors}
    return ClassificationResult(spec, tuple(survivors), reports, stats)


# ---------------------------------------------------------------------------
# cap derivations


def pentagon_exclusion_cap(theta_ratio: Fraction):
    """Largest k where theta <= ratio*k can coexist with the girth-5 cycle
    inequality theta >= (-2k - sqrt(5) + 1)/(sqrt(5) + 1); None if unbounded."""
    with workdps():
        rho = -as_mpf(theta_ratio)
        s5 = mp.sqrt(5)
        denom = rho * (s5 + 1) - 2
        if denom <= 0:
            return None
        return int(mp.floor((s5 - 1) / denom))


def _u_chain_exact(k: int, th: Fraction, cs, t: int):
    """u_0..u_t with a_i = 0 below t; cs = (c_1, ..., c_{t-1})."""
    u = [Fraction(1), Fraction(th) / k]
    for j in range(1, t):
        u.append((Fraction(th) * u[j] - cs[j - 1] * u[j - 1]) / (k - cs[j - 1]))
    return u


def eta_exclusion_cap(t: int, p_values, theta_ratio: Fraction, c2_values=(1, 2),
                      c3_ratio_cap: Fraction | None = None,
                      k_lo: int = 3, k_hi: int = 300, theta_grid: int = 32):
    """Largest k in [k_lo, k_hi] where sum p_i u_i >= 0 is still satisfiable,
    or None if no k is.

    p_values are the cycle-polynomial values at a rational eigenvalue eta, so
    the boundary theta = ratio*k evaluates exactly; that is where the maximum
    sits (a float grid over (-k, ratio*k) guards against interior
    maximisers).  Integral c_3 makes feasibility non-monotone below the cap
    (the admissible ceiling floor(c3_cap * k) jumps with k); only the absence
    of feasible k above the cap matters, and the scan verifies it up to k_hi.
    """
    p_float = [float(p) for p in p_values]

    def c3_range(k: int, c2: int):
        if t < 4:
            return [None]
        hi = int(Fraction(c3_ratio_cap) * k) if c3_ratio_cap is not None else k - 1
        return range(c2, hi + 1)

    def feasible(k: int) -> bool:
        cut = Fraction(theta_ratio) * k
        for c2 in c2_values:
            if c2 >= k:
                continue
            for c3 in c3_range(k, c2):
                cs = (1, c2, c3)[:t - 1]
                if any(c is not None and c >= k for c in cs):
                    continue
                u = _u_chain_exact(k, cut, cs, t)
                if sum(p * x for p, x in zip(p_values, u)) >= 0:
                    return True
                for i in range(1, theta_grid):  # interior safety net, float
                    th = float(cut) + (float(-k) - float(cut)) * i / theta_grid
                    u = [1.0, th / k]
                    for j in range(1, t):
                        u.append((th * u[j] - cs[j - 1] * u[j - 1]) / (k - cs[j - 1]))
                    if sum(p * x for p, x in zip(p_float, u)) > 1e-9:
                        return True
        return False

    cap = None
    for k in range(k_lo, k_hi + 1):
        if feasible(k):
            cap = k
    return cap


def _floor4(x) -> Fraction:
    """Round a lower bound down to 4 decimals (stays a valid lower bound)."""
    if isinstance(x, Fraction):
        return Fraction((x.numerator * 10**4) // x.denominator, 10**4)
    return Fraction(int(mp.floor(as_mpf(x) * 10**4)), 10**4)


def _ceil4(x) -> Fraction:
    """Round an upper bound up to 4 decimals (stays a valid upper bound)."""
    if isinstance(x, Fraction):
        return Fraction(-((-x.numerator * 10**4) // x.denominator), 10**4)
    return Fraction(int(mp.ceil(as_mpf(x) * 10**4)), 10**4)


@dataclass(frozen=True)
class CapStep:
    name: str
    raw: object
    published: Fraction

    def fmt(self) -> str:
        return f"{self.name} = {float(self.published):.4f}"


@dataclass(frozen=True)
class CapDerivation:
    D: int
    branch: str
    anchor: int
    steps: tuple[CapStep, ...]
    k_max: int

    def step(self, name: str) -> CapStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)


def valency_cap(D: int, theta_ratio: Fraction | None = None, c2_max: int = 2,
                branch: str = "main") -> CapDerivation:
    """Replay the valency-cap pipeline at its anchor valency.

    The |u_i| chain is evaluated exactly at the anchor; each intermediate is
    then published with outward 4-decimal rounding (lower bounds floored,
    upper bounds ceiled) and later stages consume the published values, so
    every constant of the audited derivation is reproducible and every
    rounding step weakens, never strengthens, the chain.
    """
    if theta_ratio is None:
        theta_ratio = Fraction(-(D - 1), D)
    rho = -Fraction(theta_ratio)
    steps: list[CapStep] = []

    def publish(name, raw, upper=False):
        pub = _ceil4(raw) if upper else _floor4(raw)
        steps.append(CapStep(name, raw, pub))
        return pub

    with workdps():
        if D == 4 and branch == "main":
            anchor = 36
            lows = abs_u_lower_bounds(anchor, (rho, Fraction(1)), [1, c2_max])
            u1 = publish("u1_lower", lows[1])
            u2 = publish("u2_lower", lows[2])
            u3 = publish("u3_lower", lows[3])
            theta = theta_ratio * anchor
            c4r = publish("c4_over_k_lower",
                          implied_last_c_lower(4, anchor, as_mpf(theta)) / anchor)
            mbound = max(1 / (u1 * u1), 1 / (u2 * u2),
                         (1 / (u3 * u3)) * (1 + 1 / c4r))
            steps.append(CapStep("multiplicity_bound", mbound, _ceil4(mbound)))
            if not mbound < anchor:
                raise CapDerivationError(
                    f"multiplicity_bound: expected a contradiction below k = {anchor}, "
                    f"got {float(mbound):.4f}")
            return CapDerivation(D, branch, anchor, tuple(steps), anchor - 1)

        if D == 5 and branch == "a4":
            anchor = 24
            split = eta_exclusion_cap(4, (1, -1, -1, 2, -1), theta_ratio,
                                      tuple(range(1, c2_max + 1)),
                                      c3_ratio_cap=Fraction(3750, 10000))
            steps.append(CapStep("low_c3_cap", split, Fraction(split)))
            lows = abs_u_lower_bounds(anchor, (rho, Fraction(1)), [1, c2_max])
            u1 = publish("u1_lower", lows[1])
            u2 = publish("u2_lower", lows[2])
            u3 = publish("u3_lower", lows[3])
            x_hi = (1 - Fraction(3750, 10000)) / Fraction(3750, 10000)
            mbound = max(1 / (u1 * u1), 1 / (u2 * u2),
                         (1 / (u3 * u3)) * (1 + x_hi + x_hi * x_hi))
            steps.append(CapStep("multiplicity_bound", mbound, _ceil4(mbound)))
            high = mbound.numerator // mbound.denominator  # m integral
            if high < anchor:
                high = anchor - 1
            return CapDerivation(D, branch, anchor, tuple(steps), max(split, high))

        if D == 5 and branch == "main":
            anchor = 71
            lows = abs_u_lower_bounds(anchor, (rho, Fraction(1)), [1, c2_max])
            u1 = publish("u1_lower", lows[1])
            u2 = publish("u2_lower", lows[2])
            u3 = publish("u3_lower", lows[3])
            # m >= k >= anchor forces the tail term of the multiplicity bound
            # above anchor: anchor <= (1/u3^2)(1 + x + x^2), x = (k - c3)/c3
            B = anchor * u3 * u3
            x_lo = (-1 + mp.sqrt(as_mpf(4 * B - 3))) / 2
            c3r = publish("c3_over_k_upper", 1 / (1 + x_lo), upper=True)
            lows4 = abs_u_lower_bounds(anchor, (rho, Fraction(1)),
                                       [1, c2_max, c3r * anchor])
            u4 = publish("u4_lower", lows4[4])
            theta = theta_ratio * anchor
            c5r = publish("c5_over_k_lower",
                          implied_last_c_lower(5, anchor, as_mpf(theta)) / anchor)
            mbound = max(1 / (u1 * u1), 1 / (u2 * u2), 1 / (u3 * u3),
                         (1 / (u4 * u4)) * (1 + 1 / c5r))
            steps.append(CapStep("multiplicity_bound", mbound, _ceil4(mbound)))
            cap = mbound.numerator // mbound.denominator
            if cap < anchor:
                cap = anchor - 1
            return CapDerivation(D, branch, anchor, tuple(steps), cap)

    raise CapDerivationError(f"no cap pipeline for D={D} branch={branch!r}")


# ---------------------------------------------------------------------------
# the classification pipeline

_CATALOG_SMALL_K = {
    4: (("{3,2,2,1;1,1,1,2}", "Coxeter graph"),
        ("{2,1,1,1;1,1,1,1}", "9-gon")),
    5: (("{2,1,1,1,1;1,1,1,1,1}", "11-gon"),),
}

_EXPECTED_MAIN = {
    4: (("{5,4,4,3;1,1,2,2}", "Odd graph O_5"),
        ("{9,8,7,6;1,2,3,4}", "folded 9-cube")),
    5: (("{6,5,5,4,4;1,1,2,2,3}", "Odd graph O_6"),
        ("{11,10,9,8,7;1,2,3,4,5}", "folded 11-cube")),
}

# k = 5, c_2 = 2, a_3 != 0, D = 5 admits no graph (classification of known
# small-valency results); recorded as a catalog fact, not re-derived.
_CATALOG_EXCLUSION_D5_K5 = "no graph exists with D=5, k=5, c_2=2, a_3 != 0"

GRAPH_NAMES = {arr: name for D in (4, 5)
               for arr, name in _CATALOG_SMALL_K[D] + _EXPECTED_MAIN[D]}


def small_valency_catalog(D: int) -> list[IntersectionArray]:
    """Known classification results for k <= 4, re-verified before use."""
    if D not in _CATALOG_SMALL_K:
        raise SearchSpecError("catalog covers D in {4, 5}")
    ratio = Fraction(-(D - 1), D)
    out = []
    for text, name in _CATALOG_SMALL_K[D]:
        arr = parse_array(text)
        rep = full_report(arr, theta_ratio=ratio)
        if rep.overall != "pass":
            raise CapDerivationError(f"catalog array {text} ({name}) fails: {rep.failing}")
        out.append(arr)
    return out


@dataclass(frozen=True)
class Stage:
    name: str
    lines: tuple[str, ...]
    arrays: tuple[IntersectionArray, ...] = ()
    stats: PruningStats | None = None


@dataclass(frozen=True)
class DiameterClassification:
    D: int
    stages: tuple[Stage, ...]
    arrays: tuple[IntersectionArray, ...]
    discrepancies: tuple[str, ...]


def classify_diameter(D: int, jobs: int = 1,
                      disable_checks: tuple[str, ...] = ()) -> DiameterClassification:
    """Full case analysis for theta_min <= -(D-1)/D k, D in {4, 5}.

    Every stage's findings are compared against the expected classification;
    anything outside it is reported as a discrepancy, never dropped.
    """
    if D not in (4, 5):
        raise SearchSpecError("classification covers D in {4, 5}")
    ratio = Fraction(-(D - 1), D)
    checks = tuple(c for c in DEFAULT_CHECKS if c not in disable_checks)
    stages: list[Stage] = []
    discrepancies: list[str] = []

    catalog = small_valency_catalog(D)
    stages.append(Stage(
        "small-valency catalog (k <= 4)",
        tuple(f"{format_array(a)}  ({GRAPH_NAMES[format_array(a)]})" for a in catalog),
        tuple(catalog)))

    cap2 = pentagon_exclusion_cap(ratio)
    lines = [f"girth-5 cycle inequality forces k <= {cap2}"]
    if cap2 is not None and cap2 >= 5:
        res = enumerate_arrays(SearchSpec(D, 5, cap2, ZERO + NONZERO + FREE * (D - 2),
                                          (1, 2), ratio, checks), jobs)
        lines.append(f"enumeration k in [5,{cap2}]: {len(res.survivors)} survivors")
        for arr in res.survivors:
            discrepancies.append(f"a2 stage: unexpected survivor {format_array(arr)}")
    else:
        lines.append("below the k >= 5 regime: branch closed")
    stages.append(Stage("a_2 != 0 excluded", tuple(lines)))

    lines = []
    for c2 in (1, 2):
        cap3 = eta_exclusion_cap(3, (1, 2, 2, 2), ratio, (c2,))
        lines.append(f"eta = 2 inequality forces k <= {cap3} when c_2 = {c2}")
        if cap3 is not None and cap3 >= 5:
            res = enumerate_arrays(
                SearchSpec(D, 5, cap3, ZERO * 2 + NONZERO + FREE * (D - 3),
                           (c2,), ratio, checks), jobs)
            lines.append(f"enumeration k in [5,{cap3}], c_2 = {c2}: "
                         f"{len(res.survivors)} survivors")
            for arr in res.survivors:
                if D == 5 and arr.k == 5 and arr.c[1] == 2:
                    lines.append(f"{format_array(arr)} excluded: "
                                 + _CATALOG_EXCLUSION_D5_K5)
                else:
                    discrepancies.append(
                        f"a3 stage: unexpected survivor {format_array(arr)}")
            if D == 5 and c2 == 2:
                lines.append("k = 5 case covered by the catalog exclusion: "
                             + _CATALOG_EXCLUSION_D5_K5)
    stages.append(Stage("a_3 != 0 excluded", tuple(lines)))

    if D == 5:
        cap = valency_cap(5, ratio, branch="a4")
        lines = [s.fmt() for s in cap.steps]
        lines.append(f"k <= {cap.k_max} on this branch")
        res = enumerate_arrays(SearchSpec(5, 5, cap.k_max, "000" + NONZERO + FREE,
                                          (1, 2), ratio, checks), jobs)
        lines.append(f"enumeration k in [5,{cap.k_max}]: {len(res.survivors)} survivors")
        for arr in res.survivors:
            discrepancies.append(f"a4 stage: unexpected survivor {format_array(arr)}")
        stages.append(Stage("a_4 != 0 excluded", tuple(lines), stats=res.stats))

    cap = valency_cap(D, ratio, branch="main")
    lines = [s.fmt() for s in cap.steps]
    lines.append(f"k <= {cap.k_max}")
    res = enumerate_arrays(SearchSpec(D, 5, cap.k_max, ZERO * (D - 1) + NONZERO,
                                      (1, 2), ratio, checks), jobs)
    lines.append(f"enumeration k in [5,{cap.k_max}]: {len(res.survivors)} survivors")
    expected = [parse_array(t) for t, _n in _EXPECTED_MAIN[D]]
    for arr in res.survivors:
        if arr not in expected:
            discrepancies.append(f"main stage: unexpected survivor {format_array(arr)}")
    for arr in expected:
        if arr not in res.survivors:
            discrepancies.append(f"main stage: missing {format_array(arr)}")
    stages.append(Stage(f"main enumeration (a_i = 0 below D, a_{D} != 0)",
                        tuple(lines), tuple(res.survivors), res.stats))

    arrays = tuple(catalog) + tuple(res.survivors)
    return DiameterClassification(D, tuple(stages), arrays, tuple(discrepancies))
