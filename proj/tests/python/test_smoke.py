"""Smoke tests for the python bindings."""

import cmath
import random

import pytest

import qell

Q = 0.1
ETA = 0.8


def test_theta_functional_equation():
    coeffs = qell.theta_coeffs(Q, ETA, 1, 0)
    # c z^d f(qz) = f(z): coefficient recursion c q^{e-1} f_{e-1} = f_e
    for e in range(-3, 4):
        lhs = ETA * Q ** (e - 1) * coeffs[e - 1]
        assert abs(lhs - coeffs[e]) < 1e-12 * max(1.0, abs(coeffs[e]))


def test_delta_identity():
    k = 2
    c = ETA**k
    for n in range(k):
        for m in range(k):
            em = [0j] * k
            em[m] = 1.0 + 0j
            v = qell.serre_pair(Q, c, k, -n, em)
            assert abs(v - (1.0 if m == n else 0.0)) < 1e-12
            f = qell.theta_functional(Q, c, k, n, {m: 1.0 + 0j})
            assert abs(f - (1.0 if m == n else 0.0)) < 1e-12


def test_bracket_skew_and_two_paths():
    rng = random.Random(5)
    k = 2
    x = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2 * k)]
    entries, skew, trunc = qell.bracket_matrix(Q, ETA, x)
    assert skew < 1e-9
    assert trunc > 0
    x[0] = 0j
    x[2] = 0j
    a = qell.bracket_entry_series(Q, ETA, x, 0, 2)
    b = qell.bracket_entry(Q, ETA, x, 0, 2)
    assert abs(a - b) < 1e-9 * max(1.0, abs(b))


def test_series_route_requires_admissibility():
    x = [1.0 + 0j, 0j, 0j, 0j]
    with pytest.raises(qell.QellError):
        qell.bracket_entry_series(Q, ETA, x, 0, 1)


def test_compare_brackets_ratio():
    rng = random.Random(11)
    for k in (1, 2):
        x = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2 * k)]
        cmp = qell.compare_brackets(Q, ETA, x)
        assert cmp is not None
        assert abs(cmp["ratio"] - 2.0) < 1e-8
        assert cmp["max_residual"] < 1e-8
    assert qell.compare_brackets(Q, ETA, [0j, 0j]) is None


def test_instability_index():
    k = 2
    rep0 = qell.instability_index(Q, ETA, [0j] * (2 * k))
    assert rep0["index_j"] == 2
    assert rep0["pi_rank"] == 0

    cL = 0.45 * cmath.exp(1.2j)
    planted = qell.plant_unstable(Q, ETA, k, 1, cL, seed=3)
    rep1 = qell.instability_index(Q, ETA, planted)
    assert rep1["index_j"] == 1
    assert rep1["leaf_dim"] == 0
    assert min(abs(rep1["witness"]["cParam"] - cL * Q**m) for m in (-1, 0, 1)) < 1e-6

    rng = random.Random(17)
    x = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2 * k)]
    repg = qell.instability_index(Q, ETA, x)
    assert repg["index_j"] == 0
    assert repg["leaf_dim"] == 2


def test_aut_dim():
    assert qell.parabolic_aut_dim(Q, ETA, [0j, 0j]) == 2
    assert qell.parabolic_aut_dim(Q, ETA, [0.3 + 0.1j, -0.2 + 0.7j]) == 1
