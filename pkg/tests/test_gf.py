import pytest

from xtower.errors import (
    BadRoot,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InvalidSubfield,
    NoSuchRoot,
    ZeroArgument,
)
from xtower.gf import (
    GF,
    FieldAuto,
    ScalarRestriction,
    conway_polynomial,
    embed_integer,
    frobenius,
    gauss_sum,
    inverting_automorphism,
    legendre,
    primitive_root_of_unity,
    quadratic_character,
    skew_element,
    trace,
)


# -- independent polynomial oracle -------------------------------------------


def poly_mulmod(a, b, mod, p):
    """Naive polynomial multiply-and-reduce, the oracle for field products."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by the monic modulus
    deg = len(mod) - 1
    while len(prod) > deg:
        c = prod[-1]
        if c:
            for k in range(len(mod)):
                prod[len(prod) - len(mod) + k] = (prod[len(prod) - len(mod) + k] - c * mod[k]) % p
        prod.pop()
    while prod and prod[-1] == 0:
        prod.pop()
    return tuple(prod)


def test_f4_product_matches_polynomial_oracle():
    F4 = GF(2, 2)
    t = F4.from_code(2)
    expected = poly_mulmod((0, 1), (0, 1), F4.modulus, 2)  # t * t
    assert (t * t).coeffs[: len(expected)] == expected
    assert (t * t).coeffs == (1, 1)  # t^2 = t + 1


def test_multiplication_against_oracle_everywhere_small():
    for (p, r) in [(2, 2), (3, 2), (2, 3)]:
        spec = GF(p, r)
        for a in range(spec.q):
            for b in range(spec.q):
                got = spec.decode(spec.mul(a, b))
                want = poly_mulmod(spec.decode(a), spec.decode(b), spec.modulus, p)
                assert got[: len(want)] == want
                assert all(v == 0 for v in got[len(want):])


def test_identity_and_prime_field_arithmetic():
    F3 = GF(3)
    a = F3.element(2)
    assert (a * F3.one()) == a
    assert (a + a).code == 1  # 2 + 2 = 1 mod 3
    assert (a - a).is_zero()
    assert (a / a) == F3.one()


def test_division_errors():
    F5 = GF(5)
    with pytest.raises(DivisionByZero):
        F5.element(3) / F5.zero()
    with pytest.raises(DivisionByZero):
        F5.zero().inverse()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        GF(3).element(1) + GF(5).element(1)


def test_multiplicative_group_order_exhaustive_small_fields():
    for (p, r) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 4)]:
        spec = GF(p, r)
        assert spec.q <= 81 or spec.q == 16
        gen = spec.generator_code()
        powers = set()
        v = 1
        for _ in range(spec.q - 1):
            powers.add(v)
            v = spec.mul(v, gen)
        assert len(powers) == spec.q - 1
        assert v == 1


# -- trace ------------------------------------------------------------------


def test_trace_examples():
    F4 = GF(2, 2)
    t = F4.from_code(2)
    assert trace(t).code == 1  # t + t^2 = t + t + 1 = 1
    assert trace(F4.zero()).is_zero()
    F9 = GF(3, 2)
    for c in range(3):  # prime-subfield elements: r copies
        assert trace(F9.from_code(c)).code == (2 * c) % 3


def test_trace_surjective_and_automorphism_invariant():
    for (p, r) in [(2, 2), (3, 2), (2, 4)]:
        spec = GF(p, r)
        images = {trace(spec.from_code(c)).code for c in range(spec.q)}
        assert images == set(range(p))
        eta = FieldAuto(spec, 1)
        for c in range(spec.q):
            assert trace(eta(spec.from_code(c))).code == trace(spec.from_code(c)).code


def test_trace_to_intermediate_subfield():
    spec = GF(2, 4)
    for c in range(spec.q):
        v = trace(spec.from_code(c), sub_degree=2)
        # the result is fixed by Frobenius^2, so lies in F_4
        assert spec.frob(v.code, 2) == v.code
    with pytest.raises(InvalidSubfield):
        trace(spec.one(), sub_degree=3)


# -- Frobenius -----------------------------------------------------------------


def test_frobenius_examples():
    F4 = GF(2, 2)
    sigma = frobenius(F4, 1)
    t = F4.from_code(2)
    assert sigma(t).coeffs == (1, 1)  # t^2 = t + 1
    assert sigma(F4.one()) == F4.one()
    # in F_9 the Frobenius x -> x^3 inverts every fourth root of unity
    F9 = GF(3, 2)
    eps = primitive_root_of_unity(F9, 4)
    eta = frobenius(F9, 1)
    assert eta(eps) == eps.inverse()
    assert eta(eps) == eps**3


def test_frobenius_is_field_automorphism():
    spec = GF(3, 2)
    sigma = frobenius(spec, 1)
    for a in range(spec.q):
        for b in range(spec.q):
            x, y = spec.from_code(a), spec.from_code(b)
            assert sigma(x * y) == sigma(x) * sigma(y)
            assert sigma(x + y) == sigma(x) + sigma(y)
    assert all(sigma(sigma(spec.from_code(a))) == spec.from_code(a) for a in range(spec.q))


# -- roots of unity ------------------------------------------------------------


def test_primitive_root_examples():
    F4 = GF(2, 2)
    assert primitive_root_of_unity(F4, 3).code == 2  # t itself
    assert primitive_root_of_unity(F4, 1) == F4.one()
    F7 = GF(7)
    w = primitive_root_of_unity(F7, 3)
    assert w.code == 2  # canonical: generator 3, 3^2 = 2
    assert w.mult_order() == 3


def test_primitive_root_exact_order():
    for (p, r, m) in [(2, 2, 3), (3, 1, 2), (7, 1, 6), (2, 4, 5), (3, 2, 8), (3, 2, 4)]:
        spec = GF(p, r)
        w = primitive_root_of_unity(spec, m)
        assert w.mult_order() == m
    with pytest.raises(NoSuchRoot):
        primitive_root_of_unity(GF(7), 4)


# -- quadratic character ----------------------------------------------------------


def test_quadratic_character_examples():
    F3 = GF(3)
    assert quadratic_character(F3.element(1)) == 1
    assert quadratic_character(F3.element(2)) == -1
    F7 = GF(7)
    assert quadratic_character(F7.element(2)) == 1  # 3^2 = 2 mod 7
    with pytest.raises(ZeroArgument):
        quadratic_character(F3.zero())
    with pytest.raises(EvenCharacteristic):
        quadratic_character(GF(2, 2).one())


def test_quadratic_character_multiplicative():
    F9 = GF(3, 2)
    for a in range(1, 9):
        for b in range(1, 9):
            x, y = F9.from_code(a), F9.from_code(b)
            assert quadratic_character(x * y) == quadratic_character(x) * quadratic_character(y)


# -- Gauss sums -------------------------------------------------------------------


def test_gauss_sum_frozen_values():
    F7 = GF(7)
    eps = primitive_root_of_unity(F7, 3)
    theta = gauss_sum(3, eps)
    assert theta.code == 5  # 1 + 2 + 2 mod 7
    assert (theta * theta).code == 4  # chi(-1) * 3 = -3 = 4 mod 7
    # square arguments leave theta unchanged
    assert gauss_sum(3, eps, 4) == theta


def test_gauss_sum_identities_all_small():
    for p in (3, 5, 7):
        for (pp, r) in [(2, 2), (2, 4), (3, 2), (7, 1), (11, 1), (31, 1)]:
            spec = GF(pp, r)
            if pp == p or (spec.q - 1) % p != 0:
                continue
            eps = primitive_root_of_unity(spec, p)
            theta = gauss_sum(p, eps)
            for z in range(1, p):
                expect = theta if legendre(z, p) == 1 else -theta
                assert gauss_sum(p, eps, z) == expect
            assert theta * theta == embed_integer(legendre(-1, p) * p, spec)
            eta = inverting_automorphism(spec, eps)
            if eta is not None:
                expect = theta if legendre(-1, p) == 1 else -theta
                assert eta(theta) == expect


def test_gauss_sum_errors():
    F7 = GF(7)
    with pytest.raises(EvenCharacteristic):
        gauss_sum(2, F7.element(6))
    with pytest.raises(BadRoot):
        gauss_sum(3, F7.element(6))  # order 2, not 3
    with pytest.raises(ZeroArgument):
        gauss_sum(3, primitive_root_of_unity(F7, 3), 3)


# -- integer embedding ------------------------------------------------------------


def test_embed_integer():
    assert embed_integer(9, GF(2, 2)).code == 1
    assert embed_integer(3, GF(7)).code == 3
    assert embed_integer(-3, GF(7)).code == 4


# -- Conway polynomials ------------------------------------------------------------


def test_conway_known_values():
    assert conway_polynomial(2, 1) == (1, 1)
    assert conway_polynomial(2, 2) == (1, 1, 1)
    assert conway_polynomial(2, 3) == (1, 1, 0, 1)
    assert conway_polynomial(2, 4) == (1, 1, 0, 0, 1)
    assert conway_polynomial(3, 1) == (1, 1)
    assert conway_polynomial(3, 2) == (2, 2, 1)
    assert conway_polynomial(5, 1) == (3, 1)
    assert conway_polynomial(7, 1) == (4, 1)
    assert conway_polynomial(11, 1) == (9, 1)


def test_conway_x_is_primitive():
    for (p, r) in [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (5, 2), (7, 2), (11, 2)]:
        spec = GF(p, r)
        x = spec.encode([0, 1])
        assert spec.mult_order(x) == spec.q - 1


def test_conway_norm_compatibility():
    # x^((p^r-1)/(p^m-1)) must be a root of the subfield's Conway polynomial
    for (p, r, m) in [(2, 4, 2), (2, 6, 2), (2, 6, 3), (3, 4, 2)]:
        spec = GF(p, r)
        sub_mod = conway_polynomial(p, m)
        y = spec.pow(spec.encode([0, 1]), (spec.q - 1) // (p**m - 1))
        acc = 0
        for coef in reversed(sub_mod):
            acc = spec.add(spec.mul(acc, y), coef % p)
        assert acc == 0


# -- skew elements and inverting automorphisms --------------------------------------


def test_skew_element():
    F9 = GF(3, 2)
    eta = FieldAuto(F9, 1)
    t0 = skew_element(F9, eta)
    assert eta(t0) == -t0
    assert not t0.is_zero()


def test_inverting_automorphism_cases():
    F4 = GF(2, 2)
    eps = primitive_root_of_unity(F4, 3)
    eta = inverting_automorphism(F4, eps)
    assert eta is not None and eta.power == 1
    F7 = GF(7)
    assert inverting_automorphism(F7, primitive_root_of_unity(F7, 3)) is None
    # -1 is inverted by the identity automorphism
    F3 = GF(3)
    eta = inverting_automorphism(F3, F3.element(-1))
    assert eta is not None and eta.is_identity()


# -- restriction of scalars ----------------------------------------------------------


def test_scalar_restriction_to_prime_field():
    spec = GF(2, 2)
    sr = ScalarRestriction(spec, 1)
    for y in range(spec.q):
        assert sr.coords(y) == spec.decode(y)
    # coords(y * a) == coords(y) @ mult_block(a) over F_2
    for y in range(spec.q):
        for a in range(spec.q):
            block = sr.mult_block(a)
            cy = sr.coords(y)
            got = tuple(
                sum(cy[i] * block[i][j] for i in range(sr.m)) % 2 for j in range(sr.m)
            )
            assert got == sr.coords(spec.mul(y, a))


def test_scalar_restriction_intermediate():
    spec = GF(3, 4)
    sr = ScalarRestriction(spec, 2)
    assert sr.sub.q == 9 and sr.m == 2
    sub = sr.sub
    for y in (0, 1, 5, 17, 40, 80):
        for a in (1, 2, 7, 33):
            cy = sr.coords(y)
            block = sr.mult_block(a)
            got = tuple(
                _sub_dot(sub, cy, tuple(block[i][j] for i in range(sr.m)))
                for j in range(sr.m)
            )
            assert got == sr.coords(spec.mul(y, a))
    # embedding is a ring homomorphism
    for a in range(9):
        for b in range(9):
            assert sr.embed_code(sub.mul(a, b)) == spec.mul(sr.embed_code(a), sr.embed_code(b))
            assert sr.embed_code(sub.add(a, b)) == spec.add(sr.embed_code(a), sr.embed_code(b))


def _sub_dot(sub, u, v):
    acc = 0
    for a, b in zip(u, v):
        acc = sub.add(acc, sub.mul(a, b))
    return acc
