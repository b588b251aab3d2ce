import math

import numpy as np
import pytest

from drgf import oracle
from drgf.core import format_array, parse_array
from drgf.spectral import as_mpf, spectrum


def test_build_orders_and_regularity(catalog_graphs):
    expect = {"cycle:9": (9, 2), "cycle:11": (11, 2), "coxeter": (28, 3),
              "odd_graph:5": (126, 5), "odd_graph:6": (462, 6),
              "folded_cube:9": (256, 9), "folded_cube:11": (1024, 11)}
    for name, (n, k) in expect.items():
        g = catalog_graphs[name]
        assert g.n == n
        deg = g.adjacency.sum(axis=1)
        assert deg.min() == deg.max() == k


def test_build_rejects_unknown():
    with pytest.raises(oracle.OracleError):
        oracle.build("petersen")
    with pytest.raises(oracle.OracleError):
        oracle.build("cycle:x")
    with pytest.raises(oracle.OracleError):
        oracle.build("folded_cube:8")  # even cube folds onto a multigraph
    with pytest.raises(oracle.OracleError):
        oracle.build("coxeter:3")


def test_verify_distance_regular_catalog(catalog_graphs):
    for name, text in oracle.CATALOG:
        arr, witness = oracle.verify_distance_regular(catalog_graphs[name])
        assert witness is None
        assert format_array(arr) == text


def test_verify_rejects_path():
    p4 = oracle.Graph("path", 4, ((0, 1), (1, 2), (2, 3)))
    arr, witness = oracle.verify_distance_regular(p4)
    assert arr is None and witness is not None


def test_spectrum_bruteforce_coxeter(catalog_graphs):
    vals, mults = oracle.spectrum_bruteforce(catalog_graphs["coxeter"])
    expect = [3, 2, math.sqrt(2) - 1, -1, -1 - math.sqrt(2)]
    assert np.allclose(vals, expect, atol=1e-7)
    assert mults == [1, 8, 6, 7, 6]
    assert sum(mults) == 28
    assert abs(sum(m * v for m, v in zip(mults, vals))) < 1e-6
    assert abs(sum(m * v * v for m, v in zip(mults, vals)) - 28 * 3) < 1e-6


def test_spectrum_bruteforce_cycle9(catalog_graphs):
    vals, mults = oracle.spectrum_bruteforce(catalog_graphs["cycle:9"])
    assert mults == [1, 2, 2, 2, 2]


def test_odd_girth_bruteforce(catalog_graphs):
    assert oracle.odd_girth_bruteforce(catalog_graphs["odd_graph:6"]) == 11
    assert oracle.odd_girth_bruteforce(catalog_graphs["folded_cube:9"]) == 9
    assert oracle.odd_girth_bruteforce(oracle.build("cycle:10")) == oracle.BIPARTITE


def test_oracle_matches_array_derivations(catalog_graphs):
    """Brute force agrees with everything computed from the array alone."""
    for name, text in oracle.CATALOG:
        g = catalog_graphs[name]
        arr, _ = oracle.verify_distance_regular(g)
        assert format_array(arr) == text
        spec = spectrum(arr)
        vals, mults = oracle.spectrum_bruteforce(g)
        assert len(vals) == len(spec.thetas)
        for got, want in zip(vals, spec.thetas):
            assert abs(got - float(as_mpf(want))) < 1e-7, name
        assert tuple(mults) == spec.mults, name
        og = oracle.odd_girth_bruteforce(g)
        assert og == (arr.g if arr.g is not None else oracle.BIPARTITE), name


def test_theta_min_gate_on_witnesses(catalog_graphs):
    """Every witness meets theta_min <= -(D-1)/D k with slack or equality."""
    for name, text in oracle.CATALOG:
        arr = parse_array(text)
        vals, _ = oracle.spectrum_bruteforce(catalog_graphs[name])
        assert vals[-1] <= -(arr.D - 1) / arr.D * arr.k + 1e-9, name


def test_edge_list_export(tmp_path, catalog_graphs):
    g = catalog_graphs["coxeter"]
    text = g.edge_list_text()
    lines = text.strip().split("\n")
    assert len(lines) == 42
    pairs = [tuple(map(int, ln.split())) for ln in lines]
    assert pairs == sorted(pairs)
    assert all(u < v for u, v in pairs)
    path = tmp_path / "coxeter.txt"
    g.write_edge_list(path)
    assert path.read_text() == text
