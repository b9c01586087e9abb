import json
import random

import pytest

from xtower.errors import WrongCase
from xtower.gf import GF, legendre
from xtower.linalg import Mat
from xtower.weil import (
    SplitCase,
    WeilExtension,
    hyperbolic_setting,
    symplectic_setting,
    unitary_setting,
)

F2, F3, F4, F7 = GF(2), GF(3), GF(2, 2), GF(7)


@pytest.fixture(scope="module")
def sympl():
    s = symplectic_setting(1, 3, F4)
    return s, s.enumerate()


@pytest.fixture(scope="module")
def sympl7():
    s = symplectic_setting(1, 3, F7)
    return s, s.enumerate()


@pytest.fixture(scope="module")
def hyper():
    s = hyperbolic_setting(2, F2, F3)
    return s, s.enumerate()


@pytest.fixture(scope="module")
def unit():
    s = unitary_setting(3, F4, F3)
    return s, s.enumerate()


def test_s_identity(sympl):
    s, els = sympl
    ident = Mat.identity(F3, 2)
    assert s.s_matrix(ident) == Mat.identity(F4, 3)
    # s'(1) rho(x, z) = rho(x, z)
    e = s.rep.group.element((1, 2), 1)
    assert s.s_prime(ident) * s.rep.matrix(e) == s.rep.matrix(e)


def test_s_minus_one_is_involution(sympl):
    s, _ = sympl
    minus = Mat.from_ints(F3, [[-1, 0], [0, -1]])
    sm = s.s_matrix(minus)
    # sigma(-1,-1) = |I(-1)|^-1 = 9^-1 = 1 in F_4
    assert s.factor_set(minus, minus) == 1
    assert sm * sm == Mat.identity(F4, 3)


def test_rewritten_sum_matches_definition(sympl, unit):
    for s, els in (sympl, unit):
        sample = els[:: max(1, len(els) // 12)]
        for g in sample:
            assert s.s_matrix(g) == s.s_matrix_definition(g)


def test_conjugation_property(sympl):
    s, els = sympl
    group = s.rep.group
    for g in els:
        sg = s.s_matrix(g)
        sgi = sg.inv()
        for i in range(2):
            x = tuple(1 if j == i else 0 for j in range(2))
            lhs = sgi * s.rep.image_x(x) * sg
            xg = tuple(
                sum(x[k] * g.rows[k][j] for k in range(2)) % 3 for j in range(2)
            )
            assert lhs == s.rep.image_x(xg)


def test_sigma_special_values(sympl):
    s, els = sympl
    ident = Mat.identity(F3, 2)
    for g in els:
        assert s.factor_set(g, ident) == 1
        inv = s.geometry(g).inv_k
        assert s.factor_set(g, inv) == s._embed_pow(3, -s.geometry(g).i_p)


def test_dual_path_sigma_all_pairs(sympl):
    s, els = sympl
    for g in els:
        for h in els:
            s.factor_set(g, h, check=True)  # raises NotProportional on mismatch


def test_wall_sign(sympl, hyper):
    s, els = sympl
    ident = Mat.identity(F3, 2)
    assert s.wall_sign(ident) == 1
    minus = Mat.from_ints(F3, [[-1, 0], [0, -1]])
    # f_g = 2 f_E, det = 4 det(J) = 1, chi(1) = +1
    assert s.wall_sign(minus) == 1
    h, _ = hyper
    with pytest.raises(WrongCase):
        h.wall_sign(Mat.identity(F2, 4))


def test_wall_sign_basis_independent(sympl):
    s, els = sympl
    rng = random.Random(0)
    for g in els:
        geo = s.geometry(g)
        if geo.i_p == 0:
            continue
        gram = s._wall_gram(geo)
        for _ in range(5):
            while True:
                c = Mat(F3, [[rng.randrange(3) for _ in range(geo.i_p)] for _ in range(geo.i_p)])
                if c.det() != 0:
                    break
            changed = c * gram * c.t()
            assert legendre(changed.det(), 3) == legendre(gram.det(), 3)


def test_mu_frozen_values(sympl7, unit):
    s7, els7 = sympl7
    minus = Mat.from_ints(F3, [[-1, 0], [0, -1]])
    # mu(-1) = 9^-1 theta^2 delta = 4 * 4 * 1 = 2 in F_7
    assert s7.mu(minus) == 2
    assert s7.mu(Mat.identity(F3, 2)) == 1
    u, els = unit
    g = next(g for g in els if u.i_dim(g) == 1)
    assert u.mu(g) == 1  # (-2)^1 = 1 in F_3
    assert u.mu(Mat.identity(F4, 3)) == 1


def test_mu_splits_sigma_symplectic_f7(sympl7):
    s, els = sympl7
    for g in els:
        for h in els:
            sigma = s.factor_set(g, h)
            split = s.kprime.mul(
                s.mu(g), s.kprime.mul(s.mu(h), s.kprime.inv(s.mu(g * h)))
            )
            assert sigma == split


def test_mu_symmetry(sympl, sympl7, hyper, unit):
    for s, els in (sympl, sympl7, hyper, unit):
        for g in els:
            assert s.mu_symmetry_holds(g)


def test_extension_symplectic(sympl):
    s, els = sympl
    ext = s.extend(els, verify="all")
    assert ext.verified_pairs == 576
    # form preservation happened inside extend; spot check one element
    jm = s.rep_form.gram
    g = els[5]
    sp = s.s_prime(g)
    assert sp * jm * sp.conj_t(s.rep_form.eta) == jm


def test_extension_hyperbolic(hyper):
    s, els = hyper
    ext = s.extend(els, verify="all")
    assert ext.verified_pairs == 36
    assert s.q == 2 and s.case is SplitCase.HYPERBOLIC


def test_extension_unitary_sampled(unit):
    s, els = unit
    ext = s.extend(els, verify="sample:500", seed=0)
    assert ext.verified_pairs == 500


def test_semidirect_homomorphism_sampled(sympl):
    s, els = sympl
    ext = WeilExtension(s, els, 0, 0)
    assert ext.verify_semidirect_homomorphism(exhaustive=False, samples=400, seed=1) == 400


def test_gauss_identity_inside_splitting(sympl):
    s, _ = sympl
    # theta^eta' = chi(-1) theta over F_4
    eta = s.eta_prime
    theta = s.theta
    expect = theta if legendre(-1, 3) == 1 else s.kprime.neg(theta)
    assert eta.apply_code(theta) == expect


def test_dimension_identity_and_radical(sympl, unit):
    rng = random.Random(2)
    for s, els in (sympl, unit):
        for _ in range(60):
            g = els[rng.randrange(len(els))]
            h = els[rng.randrange(len(els))]
            assert s.dimension_identity_holds(g, h)


def test_json_dump_deterministic(sympl):
    s, els = sympl
    ext = WeilExtension(s, els, 576, 0)
    d1 = json.dumps(ext.to_json_dict(), sort_keys=True)
    d2 = json.dumps(ext.to_json_dict(), sort_keys=True)
    assert d1 == d2
    data = ext.to_json_dict()
    assert data["case"] == "symplectic"
    assert len(data["mu"]) == 24


def test_hyperbolic_j_dims(hyper):
    s, els = hyper
    for g in els:
        assert 0 <= s.j_dim(g) <= 2
        assert s.geometry(g).i_p == 2 * s.j_dim(g)
