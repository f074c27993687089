import pytest

from ltwist.exactnum import q_eq, rat, zeta
from ltwist.qseries import (
    BiSeries,
    PuiseuxSeries,
    ap_set,
    central_charge,
    eta_series,
    eta_theta_check,
    euler_check,
    euler_product,
    highest_weight,
    jacobi_check,
    minimal_char,
    modular_s_check,
    pentagonal_sum,
    product_expand,
    reduced_theta,
    specialize_314,
    verify_316,
)


def test_series_arithmetic():
    one = PuiseuxSeries.one(10)
    x = PuiseuxSeries.monomial(1, 1, order=10)
    f = one - x
    g = f.inverse()
    assert all(g.coefficient(n) == 1 for n in range(0, 9))
    assert (f * g).coefficient(0) == 1
    assert (f * g).coefficient(3) == 0
    h = PuiseuxSeries.monomial(rat(1, 3), 2, order=5)
    prod = h * h
    assert prod.coefficient(rat(2, 3)) == 4
    assert prod.offset == rat(2, 3)


def test_series_order_tracking():
    x = PuiseuxSeries.monomial(1, 1, order=6)
    f = PuiseuxSeries.one(6) - x
    inv = f.inverse()
    assert inv.order == 6
    shifted = PuiseuxSeries.monomial(2, 1, order=9) * inv
    assert shifted.order == 8  # order 6 body shifted up by valuation 2
    with pytest.raises(ValueError):
        shifted.coefficient(8)


def test_first_difference():
    a = PuiseuxSeries(1, {0: 1, 2: 3}, 10)
    b = PuiseuxSeries(1, {0: 1, 2: 4}, 10)
    assert a.first_difference(b) == 2
    assert a.first_difference(a) is None
    c = PuiseuxSeries(1, {0: 1, 2: 3, 7: 9}, 5)
    assert a.first_difference(c) is None  # difference beyond the common order


def test_product_expand_examples():
    e = euler_product(13)
    assert sorted(e.coeffs.items()) == [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)]
    p = product_expand(ap_set(5, residues={2, 3}), -1, 9)
    assert sorted(p.coeffs.items()) == [
        (0, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 2), (7, 2), (8, 3)
    ]
    empty = product_expand(ap_set(3, residues=set()), 1, 10)
    assert sorted(empty.coeffs.items()) == [(0, 1)]


def test_euler_identity():
    assert euler_check(1)
    assert euler_check(50)
    assert euler_check(200)
    # increasing the order never breaks a previously verified prefix
    long = euler_product(80)
    short = pentagonal_sum(40)
    assert long.truncate(40) == short


def test_jacobi_identity():
    assert jacobi_check(30, 5)
    assert jacobi_check(60, 6)


def test_jacobi_coefficients():
    # z^0 at x^0 is 1; the z^1 column starts at x^1
    buffer = 10
    prod = BiSeries({(0, 0): 1}, 16, buffer)
    n = 1
    while 2 * n - 1 < 16:
        if 2 * n < 16:
            prod = prod.mul_factor(2 * n, 0, -1)
        prod = prod.mul_factor(2 * n - 1, 1, 1)
        prod = prod.mul_factor(2 * n - 1, -1, 1)
        n += 1
    assert prod.coeffs[(0, 0)] == 1
    z1 = {a for (a, b) in prod.coeffs if b == 1}
    assert min(z1) == 1


def test_triple_product_specializations():
    for k in (1, 2, 3):
        for j in range(1, k + 1):
            lhs, rhs = specialize_314(k, j, 40)
            assert lhs == rhs
    lhs, rhs = specialize_314(1, 1, 30)
    assert lhs == euler_product(30)  # k=1 degenerates to the full product
    with pytest.raises(ValueError):
        specialize_314(2, 3, 10)


def test_reduced_theta():
    th, phase = reduced_theta(rat(3, 5), 5, 6)
    assert th.offset == rat(9, 40)
    assert phase == zeta(20) ** 3
    empty, _ = reduced_theta(rat(3, 5), 5, rat(1, 5))
    assert not empty.coeffs
    # eps = 1 collapses by cancellation
    odd, _ = reduced_theta(rat(1), 1, 20)
    assert not odd.coeffs
    with pytest.raises(ValueError):
        reduced_theta(rat(5, 2), 3, 5)


def test_eta_theta_relation():
    assert eta_theta_check(40)
    th, phase = reduced_theta(rat(1, 3), 3, 20)
    assert th == eta_series(20)
    assert phase * zeta(12).inverse() == 1


def test_restricted_product_theta_identity():
    for k in (2, 3):
        for j in range(1, k + 1):
            assert verify_316(k, j, 50)
    assert verify_316(3, 1, 40)


def test_minimal_characters():
    mc = minimal_char(2, 1, 30)
    assert mc.offset == rat(11, 60)
    assert central_charge(2) == rat(-22, 5)
    assert minimal_char(2, 2, 30).offset == rat(-1, 60)
    assert highest_weight(2, 2) == rat(-1, 5)
    k3 = minimal_char(3, 1, 20)
    assert k3.offset == highest_weight(3, 1) - central_charge(3) / 24
    with pytest.raises(ValueError):
        minimal_char(1, 1, 10)


def test_minimal_char_counts():
    # coefficients count partitions with parts != 0, +-i mod 2k+1
    mc = minimal_char(2, 1, 12)
    want = [1, 0, 1, 1, 1, 1, 2, 2, 3, 3, 4, 4]
    for n, c in enumerate(want):
        assert mc.coefficient(rat(11, 60) + n) == c


def test_modular_s_transform():
    residual, S = modular_s_check(2, order=400, precision_bits=256)
    assert residual < 1e-6
    # the change of basis is the classic one: columns mix with weights
    # 2/sqrt(5) sin(pi/5), 2/sqrt(5) sin(2 pi/5)
    import math

    s5 = math.sqrt(5)
    want = [
        [-2 / s5 * math.sin(2 * math.pi / 5), 2 / s5 * math.sin(math.pi / 5)],
        [2 / s5 * math.sin(math.pi / 5), 2 / s5 * math.sin(2 * math.pi / 5)],
    ]
    for i in range(2):
        for j in range(2):
            assert abs(float(S[i, j]) - want[i][j]) < 1e-9
    with pytest.raises(ValueError):
        modular_s_check(2, order=10, precision_bits=256)


def test_modular_fixed_point_consistency():
    import mpmath

    residual, S = modular_s_check(2, order=400, precision_bits=128)
    with mpmath.workprec(160):
        q_i = mpmath.e ** (-2 * mpmath.pi)
        chars = [minimal_char(2, i, 400) for i in (1, 2)]
        v = [c.evaluate(q_i, 128) for c in chars]
        for i in range(2):
            pred = mpmath.fsum(S[i, j] * v[j] for j in range(2))
            assert abs(pred - v[i]) < mpmath.mpf(10) ** -20


def test_cross_module_character_match():
    from ltwist.characters import even_twist_group
    from ltwist.fock import qtrace, vacuum_energies

    for k in (2, 3):
        N = 2 * k + 1
        G = even_twist_group(N)
        for i in range(1, k + 1):
            energy = vacuum_energies(G, i)
            tr = qtrace(G, i, "char", 30)
            mc = minimal_char(k, energy.residue, 29)
            bound = min(tr.order, mc.order)
            assert tr.truncate(bound) == mc.truncate(bound)
            assert q_eq(tr.offset, energy.d)
