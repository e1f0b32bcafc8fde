import json
import math
import random
from io import StringIO

import numpy as np
import pytest

from landau_lab.fock import (
    ANTIHOLOMORPHIC,
    FULL,
    FockOperator,
    PolyZZbar,
    coords_from_poly,
    enumerate_basis,
    ladder_matrices,
    mi_degree,
    multi_indices,
    multi_indices_of_degree,
    operator_from_json,
    pi_m,
    poly_from_coords,
    rho_ab,
    rho_tangent,
)
from landau_lab.radicals import CRad


def _random_poly(n, degree, rng, kind=FULL):
    p = PolyZZbar(n)
    for _ in range(5):
        b = tuple(rng.randrange(0, degree + 1) for _ in range(n))
        a = tuple(0 for _ in range(n)) if kind == ANTIHOLOMORPHIC else tuple(
            rng.randrange(0, degree + 1) for _ in range(n))
        if mi_degree(a) + mi_degree(b) > degree:
            continue
        p = p + PolyZZbar.monomial(n, a, b, rng.randrange(-3, 4))
    return p


def test_multi_index_enumeration_counts():
    # number of monomials of degree <= D in n variables is C(D+n, n)
    for n in (1, 2, 3):
        for D in (0, 1, 4):
            got = len(multi_indices(n, D))
            assert got == math.comb(D + n, n)
    assert len(multi_indices_of_degree(2, 3)) == 4


def test_multi_index_order_degree_then_lex():
    idx = multi_indices(2, 3)
    degs = [mi_degree(a) for a in idx]
    assert degs == sorted(degs)
    # within a degree block the order is deterministic and lexicographic
    block = [a for a in idx if mi_degree(a) == 2]
    assert block == sorted(block)


def test_basis_labels_and_lookup():
    anti = enumerate_basis(2, 3)
    assert anti.size == math.comb(5, 2)
    for i, lab in enumerate(anti):
        assert anti.index(lab) == i
    full = enumerate_basis(1, 4, FULL)
    assert full.size == sum(1 for a in range(5) for b in range(5) if a + b <= 4)


def test_poly_evaluate_against_numpy():
    rng = random.Random(5)
    p = _random_poly(2, 4, rng)
    z = np.array([0.3 + 0.2j, -1.1 + 0.7j])
    val = p.evaluate(z)
    direct = 0
    for (a, b), c in p.terms():
        direct += c.value() * np.prod(z ** a) * np.prod(np.conj(z) ** b)
    assert abs(val - direct) < 1e-12


def test_poly_conjugate_involution():
    rng = random.Random(6)
    for _ in range(20):
        p = _random_poly(2, 4, rng)
        assert p.conjugate().conjugate() == p


def test_poly_product_degree_and_commutativity():
    rng = random.Random(8)
    for _ in range(20):
        p = _random_poly(1, 3, rng)
        q = _random_poly(1, 3, rng)
        assert p * q == q * p
        if not (p * q).is_zero():
            assert (p * q).degree() == p.degree() + q.degree()


def test_ladder_commutation_on_safe_columns():
    basis = enumerate_basis(2, 5)
    lowers, raisers = ladder_matrices(basis)
    D = 5
    for i in range(2):
        for j in range(2):
            comm = lowers[i] @ raisers[j] - raisers[j] @ lowers[i]
            expect = FockOperator.identity(basis) if i == j else FockOperator.zero(basis)
            assert comm.agrees_with(expect, D - 1)
    assert (lowers[0] @ lowers[1] - lowers[1] @ lowers[0]).agrees_with(
        FockOperator.zero(basis), D)


def test_rho_shift_rule_spot():
    basis = enumerate_basis(1, 6)
    r01 = rho_ab(basis, (0,), (1,))
    r12 = rho_ab(basis, (1,), (2,))
    prod = r01 @ r12
    assert prod.agrees_with(rho_ab(basis, (0,), (2,)), 6)
    # mismatched middle index annihilates
    r23 = rho_ab(basis, (2,), (3,))
    assert (r01 @ r23).agrees_with(FockOperator.zero(basis), 6)


def test_rho_adjoint_swaps_indices():
    basis = enumerate_basis(2, 4)
    a, b = (1, 0), (0, 2)
    lhs = rho_ab(basis, a, b).adjoint()
    rhs = rho_ab(basis, b, a)
    assert lhs.agrees_with(rhs, 4 - abs(mi_degree(a) - mi_degree(b)))


def test_pi_m_idempotent_and_orthogonal():
    basis = enumerate_basis(2, 4)
    projs = [pi_m(basis, m) for m in range(3)]
    for m, p in enumerate(projs):
        assert (p @ p).agrees_with(p, 4)
        for l in range(m):
            assert (p @ projs[l]).agrees_with(FockOperator.zero(basis), 4)


def test_rho_tangent_antisymmetry():
    from fractions import Fraction

    basis = enumerate_basis(2, 4)
    u = [Fraction(1), Fraction(2)]
    zero = [Fraction(0), Fraction(0)]
    lhs = rho_tangent(basis, u, zero).adjoint()
    rhs = rho_tangent(basis, zero, u).scale(-1)
    assert lhs.agrees_with(rhs, 3)


def test_exactness_degree_drops_under_composition():
    basis = enumerate_basis(1, 5)
    _, raisers = ladder_matrices(basis)
    r = raisers[0]
    assert r.exactness_degree == 4
    assert (r @ r).exactness_degree == 3


def test_parity_split_reassembles():
    rng = random.Random(9)
    basis = enumerate_basis(1, 4)
    entries = {}
    for _ in range(8):
        i, j = rng.randrange(basis.size), rng.randrange(basis.size)
        entries[(i, j)] = CRad(rng.randrange(-2, 3), rng.randrange(-2, 3))
    A = FockOperator(basis, entries)
    even, odd = A.parity_split()
    assert (even + odd).agrees_with(A, 4)
    assert even.parity == 0 and odd.parity == 1


def test_poly_coordinate_round_trip():
    basis = enumerate_basis(2, 4)
    rng = random.Random(10)
    p = _random_poly(2, 4, rng, kind=ANTIHOLOMORPHIC)
    back = poly_from_coords(basis, coords_from_poly(basis, p))
    assert back == p


def test_apply_poly_matches_matrix():
    basis = enumerate_basis(1, 5)
    lowers, raisers = ladder_matrices(basis)
    A = raisers[0] @ lowers[0]
    rng = random.Random(12)
    p = _random_poly(1, 4, rng, kind=ANTIHOLOMORPHIC)
    image = A.apply_poly(p)
    coords = coords_from_poly(basis, p)
    vec = np.zeros(basis.size, dtype=complex)
    for i, c in coords.items():
        vec[i] = c.value()
    expect = A.as_array() @ vec
    got = np.zeros_like(expect)
    for i, c in coords_from_poly(basis, image).items():
        got[i] = c.value()
    assert np.max(np.abs(got - expect)) < 1e-12


def test_json_round_trip():
    basis = enumerate_basis(2, 3)
    op = rho_ab(basis, (1, 0), (0, 1))
    buf = StringIO()
    op.dump_json(buf)
    data = json.loads(buf.getvalue())
    assert data["n"] == 2 and data["D"] == 3
    basis2, arr = operator_from_json(data)
    assert basis2.size == basis.size
    assert np.max(np.abs(arr - op.as_array())) < 1e-15
