"""Twisted convolution algebras as matrix algebras: representations, norms,
commutants, expectation trials, Wedderburn blocks, isomorphism comparison."""

import cmath

import numpy as np
import pytest

from weylkit.algebra import (
    TwistedAlgebra,
    commutant_check,
    compare_algebras,
    expectation_checks,
    reduced_norm,
    regular_representation,
    total_representation,
    wedderburn_blocks,
)
from weylkit.cocycle import TwoCocycle
from weylkit.errors import ConventionMismatch
from weylkit.phases import HALF
from weylkit.weyl import build_weyl_groupoid, weyl_twist_cocycle

BLOCK_ORACLE = {
    "z2z2": [1, 1, 1, 1],
    "pauli": [2],
    "rotation(3,1)": [3],
    "rotation(4,1)": [4],
    "s3": [1, 1, 2],
    "d4": [1, 1, 1, 1, 2],
    "q8": [1, 1, 1, 1, 2],
    "z2xR2": [2, 2],
    "rotation(6,2)": [3, 3, 3, 3],
}


def test_regular_representation_permutation_for_trivial_cocycle(entry):
    e = entry("s3")
    mats, basis = regular_representation(e.G, TwoCocycle(e.G, {}), e.G.units[0])
    for g in e.G.arrows:
        M = mats[g]
        assert np.all(np.isin(M, [0, 1]))  # 0/1 entries
        assert np.allclose(M @ M.conj().T, np.eye(len(basis)))


def test_pauli_generators_anticommute(entry):
    e = entry("pauli")
    mats, _ = regular_representation(e.G, e.omega, e.G.units[0])
    U, V = mats["1|0"], mats["0|1"]
    assert np.max(np.abs(U @ V + V @ U)) < 1e-12


def test_rotation31_commutation_relation(entry):
    e = entry("rotation(3,1)")
    mats, _ = regular_representation(e.G, e.omega, e.G.units[0])
    U, V = mats["1|0"], mats["0|1"]
    q = cmath.exp(2j * cmath.pi / 3)
    assert np.max(np.abs(V @ U - q * U @ V)) < 1e-12


def test_total_representation_faithful(entry):
    e = entry("z2xR2")
    mats = total_representation(e.G, e.omega)
    n = next(iter(mats.values())).shape[0]
    assert n == len(e.G)
    for g in e.G.arrows:
        assert np.max(np.abs(mats[g])) > 0


def test_star_and_convolution(entry):
    e = entry("pauli")
    alg = TwistedAlgebra(e.G, e.omega)
    g = "1|0"
    gi, ph = alg.star_basis(g)
    assert gi == e.G.inv(g)
    f = {"1|0": 1.0, "0|1": 2.0}
    ff = alg.convolve(alg.star(f), f)
    u = e.G.units[0]
    assert abs(ff[u] - 5.0) < 1e-12  # |1|^2 + |2|^2 on the unit


def test_reduced_norm_examples(entry):
    e = entry("z2z2")
    u = e.G.units[0]
    assert abs(reduced_norm(e.G, e.omega, {u: 1.0}) - 1) < 1e-10
    assert abs(reduced_norm(e.G, e.omega, {"0|1": 1.0}) - 1) < 1e-10
    # unit plus an order-2 bundle element
    assert abs(reduced_norm(e.G, e.omega, {u: 1.0, "1|0": 1.0}) - 2) < 1e-10


@pytest.mark.parametrize("name", ["pauli", "s3", "d4", "q8", "z2xR2"])
def test_commutant_maximal_abelian(entry, name):
    e = entry(name)
    report = commutant_check(e.G, e.omega, e.c, e.S)
    assert report.D_abelian and report.maximal_abelian
    assert report.commutant_dim == report.dim_D == len(e.S)


def test_commutant_pauli_equals_a0(entry):
    e = entry("pauli")
    report = commutant_check(e.G, e.omega, e.c, e.S)
    assert report.dim_A0 == report.dim_D == 2


def test_commutant_detects_non_maximal(entry):
    e = entry("d4")
    center = frozenset(["0|0", "2|0"])
    report = commutant_check(e.G, e.omega, e.c, center)
    assert report.D_abelian and not report.maximal_abelian
    assert report.commutant_dim > len(center)


@pytest.mark.parametrize("name", ["pauli", "q8", "z2xR2", "rotation(4,1)"])
def test_expectation_trials(entry, name):
    e = entry(name)
    report = expectation_checks(e.G, e.omega, e.S, trials=100, seed=0)
    assert report.all_pass()
    assert report.positivity_failures == 0 and report.max_negative >= -1e-10


def test_expectation_deterministic_per_seed(entry):
    e = entry("pauli")
    r1 = expectation_checks(e.G, e.omega, e.S, trials=10, seed=7)
    r2 = expectation_checks(e.G, e.omega, e.S, trials=10, seed=7)
    assert r1.as_dict() == r2.as_dict()


def test_systematic_positivity_failure_raises(entry):
    # corrupt the involution phase: delta_g^* picks up a spurious sign, so
    # f^* . f stops being positive and the checker must refuse to pass
    e = entry("z2z2")
    bad = TwoCocycle(e.G, {})
    bad.values[("1|0", "1|0")] = HALF  # bypasses cocycle validation on purpose
    with pytest.raises(ConventionMismatch):
        expectation_checks(e.G, bad, e.S, trials=20, seed=0)


@pytest.mark.parametrize("name", sorted(BLOCK_ORACLE))
def test_wedderburn_blocks_oracles(entry, name):
    e = entry(name)
    blocks, center_dim = wedderburn_blocks(e.G, e.omega, seed=0)
    assert blocks == BLOCK_ORACLE[name]
    assert center_dim == len(blocks)
    assert sum(b * b for b in blocks) == len(e.G)


@pytest.mark.parametrize("name", ["pauli", "rotation(4,1)", "q8"])
def test_compare_with_weyl_output(entry, name):
    e = entry(name)
    GW, data = build_weyl_groupoid(e.G, e.S, e.omega)
    C = weyl_twist_cocycle(GW, data)
    report = compare_algebras(e.G, e.omega, GW, C, seed=0)
    assert report.passed, report.as_dict()
    assert report.dims[0] == report.dims[1]


def test_compare_detects_mismatch(entry):
    twisted = entry("rotation(4,1)")
    flat = entry("rotation(4,0)")
    GW, data = build_weyl_groupoid(flat.G, flat.S, flat.omega)
    C = weyl_twist_cocycle(GW, data)
    report = compare_algebras(twisted.G, twisted.omega, GW, C, seed=0)
    assert not report.passed
    assert report.blocks[0] != report.blocks[1]
