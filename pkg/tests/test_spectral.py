import math
import random
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from drgf import oracle, spectral
from drgf.core import parse_array
from drgf.spectral import (abs_u_lower_bounds, as_mpf, eigenvalues,
                           eigenvalues_float, implied_last_c_lower,
                           intersection_matrix, multiplicity,
                           multiplicity_upper_bound, spectrum,
                           standard_sequence, sturm_count_leq,
                           trace_of_l_squared, trace_square_check)

CORPUS = ["{2;1}", "{2,1;1,1}", "{3,2;1,1}", "{2,1,1,1;1,1,1,1}",
          "{3,2,2,1;1,1,1,2}", "{5,4,4,3;1,1,2,2}", "{9,8,7,6;1,2,3,4}",
          "{2,1,1,1,1;1,1,1,1,1}", "{6,5,5,4,4;1,1,2,2,3}",
          "{11,10,9,8,7;1,2,3,4,5}", "{3,2,1;1,2,3}", "{4,3,2,1;1,2,3,4}",
          "{4,3,3;1,1,3}", "{5,4,4,3;1,1,2,3}"]


def test_intersection_matrix_9_gon():
    L = intersection_matrix(parse_array("{2,1,1,1;1,1,1,1}"))
    assert L.shape == (5, 5)
    assert list(np.diag(L)) == [0, 0, 0, 0, 1]


def test_intersection_matrix_folded_9_cube():
    L = intersection_matrix(parse_array("{9,8,7,6;1,2,3,4}"))
    assert list(np.diag(L)) == [0, 0, 0, 0, 5]
    assert list(np.diag(L, 1)) == [9, 8, 7, 6]
    assert list(np.diag(L, -1)) == [1, 2, 3, 4]


def test_intersection_matrix_triangle():
    L = intersection_matrix(parse_array("{2;1}"))
    assert L.tolist() == [[0, 2], [1, 1]]


def test_eigenvalues_odd_graph_vs_oracle(catalog_graphs):
    assert eigenvalues(parse_array("{5,4,4,3;1,1,2,2}")) == [5, 3, 1, -2, -4]
    vals, _ = oracle.spectrum_bruteforce(catalog_graphs["odd_graph:5"])
    assert np.allclose(vals, [5, 3, 1, -2, -4], atol=1e-7)


def test_eigenvalues_folded_9_cube_vs_oracle(catalog_graphs):
    assert eigenvalues(parse_array("{9,8,7,6;1,2,3,4}")) == [9, 5, 1, -3, -7]
    vals, _ = oracle.spectrum_bruteforce(catalog_graphs["folded_cube:9"])
    assert np.allclose(vals, [9, 5, 1, -3, -7], atol=1e-7)


def test_eigenvalues_9_gon_cosines(catalog_graphs):
    got = eigenvalues(parse_array("{2,1,1,1;1,1,1,1}"))
    expect = sorted((2 * math.cos(2 * math.pi * j / 9) for j in range(5)), reverse=True)
    assert all(abs(float(as_mpf(a)) - b) < 1e-12 for a, b in zip(got, expect))
    vals, _ = oracle.spectrum_bruteforce(catalog_graphs["cycle:9"])
    assert np.allclose([float(as_mpf(t)) for t in got], vals, atol=1e-7)


def test_eigenvalues_two_ways_agree():
    for text in CORPUS:
        arr = parse_array(text)
        exact = [float(as_mpf(t)) for t in eigenvalues(arr)]
        lapack = eigenvalues_float(arr)
        assert max(abs(a - b) for a, b in zip(exact, lapack)) < 1e-9, text


def test_standard_sequence_perron():
    for text in ("{5,4,4,3;1,1,2,2}", "{2;1}", "{11,10,9,8,7;1,2,3,4,5}"):
        arr = parse_array(text)
        seq = standard_sequence(arr, arr.k)
        assert all(u == 1 for u in seq.u)


def test_standard_sequence_o5_exact():
    # by-hand recurrence with exact rationals; the terminal identity is the oracle
    seq = standard_sequence(parse_array("{5,4,4,3;1,1,2,2}"), -4)
    assert seq.u == (1, Fraction(-4, 5), Fraction(11, 20), Fraction(-7, 20),
                     Fraction(1, 10))
    assert seq.terminal_residual == 0


def test_terminal_identity_iff_eigenvalue():
    arr = parse_array("{5,4,4,3;1,1,2,2}")
    for theta in eigenvalues(arr):
        assert standard_sequence(arr, theta).terminal_residual < 1e-8
    for theta in (-3.5, 0.5, 2.0, 4.0):
        assert standard_sequence(arr, mp.mpf(theta)).terminal_residual > 1e-8


def test_sign_alternation_at_theta_min():
    for text in CORPUS:
        arr = parse_array(text)
        seq = standard_sequence(arr, eigenvalues(arr)[-1])
        for x, y in zip(seq.u, seq.u[1:]):
            if x != 0 and y != 0:
                assert (x > 0) != (y > 0), text
        assert max(abs(as_mpf(u)) for u in seq.u) <= 1 + mp.mpf("1e-30"), text


def test_multiplicity_trivial_eigenvalue():
    assert multiplicity(parse_array("{9,8,7,6;1,2,3,4}"), 9) == 1


def test_multiplicity_o5_vs_oracle(catalog_graphs):
    arr = parse_array("{5,4,4,3;1,1,2,2}")
    assert multiplicity(arr, -4) == 8
    spec = spectrum(arr)
    assert spec.mults == (1, 27, 42, 48, 8)
    assert sum(spec.mults) == 126
    _vals, mults = oracle.spectrum_bruteforce(catalog_graphs["odd_graph:5"])
    assert tuple(mults) == spec.mults


def test_multiplicity_9_gon():
    arr = parse_array("{2,1,1,1;1,1,1,1}")
    spec = spectrum(arr)
    assert spec.mults == (1, 2, 2, 2, 2)
    assert sum(spec.mults) == 9


def test_multiplicity_rejects_non_eigenvalue():
    arr = parse_array("{5,4,4,3;1,1,2,2}")
    with pytest.raises(spectral.SpectralError):
        multiplicity(arr, -3)
    with pytest.raises(spectral.SpectralError):
        multiplicity(arr, mp.mpf("-3.3"))


def test_multiplicity_upper_bound_dominates():
    for text in ("{5,4,4,3;1,1,2,2}", "{3,2,2,1;1,1,1,2}", "{9,8,7,6;1,2,3,4}"):
        arr = parse_array(text)
        spec = spectrum(arr)
        for theta, m in zip(spec.thetas[1:], spec.mults_raw[1:]):
            seq = standard_sequence(arr, theta)
            for j in range(1, arr.D + 1):
                if seq.u[j] == 0:
                    continue
                bound = multiplicity_upper_bound(arr, seq, j)
                assert as_mpf(bound) >= as_mpf(m) - mp.mpf("1e-20"), (text, j)


def test_multiplicity_upper_bound_single_term():
    # D = 1: the tail collapses to 1/u_1^2 = k^2/theta^2
    arr = parse_array("{2;1}")
    seq = standard_sequence(arr, -1)
    assert multiplicity_upper_bound(arr, seq, 1) == 4
    assert multiplicity(arr, -1) == 2


def test_multiplicity_upper_bound_rejects_zero_u():
    arr = parse_array("{2,1;1,1}")  # pentagon
    seq = standard_sequence(arr, mp.mpf(0))
    with pytest.raises(ValueError):
        multiplicity_upper_bound(arr, spectral.StandardSequence(0, (1, 0, -1), 0), 1)
    assert seq  # sequence itself is fine


def test_sturm_count_boundary_exact():
    arr = parse_array("{5,4,4,3;1,1,2,2}")  # theta_min = -4 <= -15/4
    assert sturm_count_leq(arr, Fraction(-15, 4)) == 1
    assert sturm_count_leq(arr, Fraction(-4)) == 1     # boundary hit exactly
    assert sturm_count_leq(arr, Fraction(-401, 100)) == 0
    assert sturm_count_leq(arr, Fraction(5)) == 5


def test_abs_u_chain_diameter4_constants():
    lows = abs_u_lower_bounds(36, (Fraction(3, 4), 1), [1, 2])
    assert lows[1] == Fraction(3, 4)
    assert lows[2] == Fraction(11, 20)          # 0.5500 exactly
    assert math.floor(lows[3] * 10**4) == 3926  # 0.3926...


def test_abs_u_chain_diameter5_constants():
    lows = abs_u_lower_bounds(24, (Fraction(4, 5), 1), [1, 2])
    assert math.floor(lows[2] * 10**4) == 6243
    assert math.floor(lows[3] * 10**4) == 4721
    lows = abs_u_lower_bounds(71, (Fraction(4, 5), 1), [1, 2])
    assert math.floor(lows[2] * 10**4) == 6348
    assert math.floor(lows[3] * 10**4) == 4994
    lows = abs_u_lower_bounds(71, (Fraction(4, 5), 1),
                              [1, 2, Fraction(2166, 10**4) * 71])
    assert math.floor(lows[4] * 10**4) == 3344


def test_abs_u_chain_never_exceeds_true_values():
    # random admissible instances: chain bounds stay below the true |u_i|
    rng = random.Random(7)
    tried = 0
    while tried < 40:
        k = rng.randint(8, 40)
        c2 = rng.randint(1, 2)
        c3 = rng.randint(c2, k - 1)
        c4 = rng.randint(c3, k - 1)
        try:
            arr = parse_array("{%d,%d,%d,%d;1,%d,%d,%d}"
                              % (k, k - 1, k - c2, k - c3, c2, c3, c4))
        except Exception:
            continue
        tmin = eigenvalues(arr)[-1]
        ratio = -as_mpf(tmin) / k
        if not 3 * k <= 4 * (-as_mpf(tmin)):  # need |theta| >= 3k/4
            continue
        tried += 1
        lows = abs_u_lower_bounds(k, (Fraction(3, 4), 1), [1, 2, c3])
        seq = standard_sequence(arr, tmin)
        for lo, u in zip(lows, seq.u):
            assert as_mpf(lo) <= abs(as_mpf(u)) + mp.mpf("1e-25")


def test_trace_of_l_squared():
    arr = parse_array("{9,8,7,6;1,2,3,4}")
    # sum a_i^2 + 2 sum b_i c_{i+1} equals sum of eigenvalue squares
    assert trace_of_l_squared(arr) == sum(t * t for t in eigenvalues(arr))


def test_trace_square_check_true_at_theta_min():
    for text in CORPUS:
        arr = parse_array(text)
        assert trace_square_check(arr, eigenvalues(arr)[-1]).verdict, text


def test_implied_last_c_lower_anchor_values():
    c4r = implied_last_c_lower(4, 36, -27) / 36
    assert abs(float(c4r) - 0.2227) < 1e-4
    c5r = implied_last_c_lower(5, 71, Fraction(-4, 5) * 71) / 71
    assert abs(float(c5r) - 0.1440) < 1e-4


def test_sum_rules_on_corpus():
    for text in CORPUS:
        arr = parse_array(text)
        spec = spectrum(arr)
        v = float(arr.v)
        th = [float(as_mpf(t)) for t in spec.thetas]
        ms = [float(as_mpf(m)) for m in spec.mults_raw]
        assert abs(sum(ms) - v) < 1e-6 * v
        assert abs(sum(m * t for m, t in zip(ms, th))) < 1e-6 * v * arr.k
        assert abs(sum(m * t * t for m, t in zip(ms, th)) - v * arr.k) < 1e-6 * v * arr.k


def test_bipartite_spectrum_symmetric():
    for text in ("{3,2,1;1,2,3}", "{4,3,2,1;1,2,3,4}", "{2,1;1,2}"):
        arr = parse_array(text)
        th = [float(as_mpf(t)) for t in eigenvalues(arr)]
        assert all(abs(a + b) < 1e-9 for a, b in zip(th, reversed(th)))


def test_spectrum_json():
    d = spectrum(parse_array("{5,4,4,3;1,1,2,2}")).to_json_dict()
    assert d["thetas"] == ["5", "3", "1", "-2", "-4"]
    assert d["mults_rounded"] == [1, 27, 42, 48, 8]
    assert d["v"] == "126"


def test_spectrum_enclosures_certified():
    spec = spectrum(parse_array("{3,2,2,1;1,1,1,2}"))
    for theta, (lo, hi) in zip(spec.thetas, spec.enclosures):
        assert lo <= Fraction(str(as_mpf(theta))).limit_denominator(10**30) <= hi \
            or (lo <= float(as_mpf(theta)) <= hi)
        assert hi - lo <= Fraction(1, 2**40)


def test_working_precision_env(monkeypatch):
    monkeypatch.setenv("DRGF_PRECISION", "30")
    arr = parse_array("{3,2,2,1;1,1,1,2}")
    th = eigenvalues(arr)
    assert abs(float(as_mpf(th[-1])) - (-1 - math.sqrt(2))) < 1e-12
