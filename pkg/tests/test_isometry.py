import itertools
import random

import pytest

from xtower.errors import CapExceeded, NotAnIsometry, NotHermitian
from xtower.forms import builtin_sum, restrict_vector, standard_form
from xtower.gf import GF, FieldAuto
from xtower.isometry import (
    Isometry,
    OneMinusG,
    enumerate_group,
    gamma_form,
    hyperbolic_generators,
    is_isometry,
    pair_intersection,
    quadratic_radical_bruteforce,
    radical,
    skew_hermitian_form,
    symplectic_generators,
    symplectic_group_order,
    unitary_generators,
    unitary_group_order,
    wall_form,
)
from xtower.linalg import Mat, span_points, vec_mat

F2, F3, F4 = GF(2), GF(3), GF(2, 2)


def sp2f3():
    f = standard_form("fE", F3)
    return f, enumerate_group(f, symplectic_generators(1, 3))


def test_is_isometry_examples():
    f = standard_form("fE", F3)
    assert is_isometry(Mat.identity(F3, 2), f)
    assert is_isometry(Mat.from_ints(F3, [[0, 1], [-1, 0]]), f)
    assert not is_isometry(Mat.from_ints(F3, [[1, 0], [0, -1]]), f)


def test_enumerate_sp2_f3():
    f, group = sp2f3()
    assert len(group) == 24
    # brute-force oracle: all invertible 2x2 over F_3 preserving f
    oracle = 0
    for entries in itertools.product(range(3), repeat=4):
        m = Mat(F3, [entries[:2], entries[2:]])
        if m.det() != 0 and is_isometry(m, f):
            oracle += 1
    assert oracle == 24 == symplectic_group_order(1, 3)


def test_enumerate_is_deterministic_and_closed():
    f, group = sp2f3()
    mats = [g.mat for g in group]
    assert mats[0] == Mat.identity(F3, 2)
    _, group2 = sp2f3()
    assert mats == [g.mat for g in group2]
    mset = set(mats)
    for a in mats[:8]:
        for b in mats[:8]:
            assert a * b in mset


def test_enumerate_identity_only():
    f = standard_form("fE", F3)
    group = enumerate_group(f, [Mat.identity(F3, 2)])
    assert len(group) == 1


def test_enumerate_cap():
    f = standard_form("fE", F3)
    with pytest.raises(CapExceeded):
        enumerate_group(f, symplectic_generators(1, 3), cap=5)


def test_hyperbolic_block_group():
    k_form = standard_form("hyperbolic", F2, 2)
    group = enumerate_group(k_form, hyperbolic_generators(2, F2))
    assert len(group) == 6  # GL_2(F_2)


def test_unitary_group_gu3():
    herm = standard_form("hermitian_identity", F4, 3)
    gens = unitary_generators(3, F4)
    group = enumerate_group(herm, gens, cap=10**4)
    assert len(group) == unitary_group_order(3, 2) == 648


def test_unitary_group_order_formula_vs_bruteforce():
    herm = standard_form("hermitian_identity", F4, 2)
    count = 0
    for entries in itertools.product(range(4), repeat=4):
        m = Mat(F4, [entries[:2], entries[2:]])
        if m.det() != 0 and is_isometry(m, herm):
            count += 1
    assert count == unitary_group_order(2, 2) == 18


def test_image_kernel():
    f, group = sp2f3()
    ident = group[0]
    om = ident.ominus
    assert om.i_dim == 0
    assert om.kernel_basis.nrows == 2
    minus = Isometry(Mat.from_ints(F3, [[-1, 0], [0, -1]]), f)
    assert minus.ominus.i_dim == 2
    assert minus.ominus.kernel_basis.nrows == 0
    for g in group:
        assert g.ominus.i_dim + g.ominus.kernel_basis.nrows == 2


def test_wall_form_minus_one():
    f, _ = sp2f3()
    minus = Isometry(Mat.from_ints(F3, [[-1, 0], [0, -1]]), f)
    w = wall_form(minus)
    # u = 2x, so f_g = 2 f on V; image basis is the identity basis
    assert w.gram == f.gram.scale(2)


def test_wall_form_identity_is_empty():
    f, group = sp2f3()
    w = wall_form(group[0])
    assert w.dim == 0


def test_wall_form_dagger_identity():
    """(double dagger): f_g(x, y) = f(x, y - v) whenever y = v(1 - g)."""
    f, group = sp2f3()
    rng = random.Random(0)
    for _ in range(60):
        g = group[rng.randrange(len(group))]
        om = g.ominus
        basis = om.image_basis
        if basis.nrows == 0:
            continue
        pts = list(span_points(F3, basis))
        x = rng.choice(pts)
        v = tuple(rng.randrange(3) for _ in range(2))
        y = vec_mat(F3, v, om.m)
        # evaluate f_g via the Gram in basis coordinates
        w = wall_form(g)
        cx = [x[c] for c in om.solver.pivots]
        cy = [y[c] for c in om.solver.pivots]
        lhs = w.evaluate_codes(tuple(cx), tuple(cy))
        rhs = f.evaluate_codes(x, tuple((a - b) % 3 for a, b in zip(y, v)))
        assert lhs == rhs


def test_wall_form_preimage_independence():
    f, group = sp2f3()
    for g in group:
        om = g.ominus
        if om.i_dim == 0 or om.kernel_basis.nrows == 0:
            continue
        basis = om.image_basis
        for x in basis.rows:
            u = om.preimage(x)
            for kv in span_points(F3, om.kernel_basis):
                u2 = tuple((a + b) % 3 for a, b in zip(u, kv))
                for y in basis.rows:
                    assert f.evaluate_codes(u, y) == f.evaluate_codes(u2, y)


def test_lemma_5_2():
    """K(g) = I(g)^F = ^F I(g) for the nondegenerate invariant F."""
    f, group = sp2f3()
    F = f  # f_E is already the alternating form; any g-invariant nondeg form works
    pts = list(itertools.product(range(3), repeat=2))
    for g in group:
        om = g.ominus
        image = set(span_points(F3, om.image_basis))
        kernel = set(span_points(F3, om.kernel_basis))
        right = {y for y in pts if all(F.evaluate_codes(x, y) == 0 for x in image)}
        left = {x for x in pts if all(F.evaluate_codes(x, y) == 0 for y in image)}
        assert right == kernel
        assert left == kernel


def test_image_of_inverse_equals_image():
    f, group = sp2f3()
    for g in group:
        gi = Isometry(g.inverse_mat, f, check=False)
        assert g.ominus.image_basis == gi.ominus.image_basis


def test_wall_form_of_inverse_is_minus_transpose():
    f, group = sp2f3()
    for g in group:
        gi = Isometry(g.inverse_mat, f, check=False)
        wg = wall_form(g)
        wi = wall_form(gi)
        assert wi.gram == -wg.gram.t()


def test_gamma_examples():
    f, group = sp2f3()
    for g in group:
        gi = Isometry(g.inverse_mat, f, check=False)
        basis, gram = gamma_form(g, gi)
        assert gram.gram.is_zero()
    ident = group[0]
    basis, gram = gamma_form(ident, ident)
    assert basis.nrows == 0


def test_gamma_symmetric_in_symplectic_case():
    f, group = sp2f3()
    rng = random.Random(1)
    for _ in range(50):
        g = group[rng.randrange(24)]
        h = group[rng.randrange(24)]
        _, gram = gamma_form(g, h)
        assert gram.gram == gram.gram.t()


def test_radical_examples():
    f, group = sp2f3()
    ident = group[0]
    assert radical(ident, ident).nrows == 0
    for g in group:
        gi = Isometry(g.inverse_mat, f, check=False)
        assert radical(g, gi) == g.ominus.image_basis
        # 1 - gh invertible forces trivial radical
        for h in group:
            gh = g.mat * h.mat
            if (Mat.identity(F3, 2) - gh).det() != 0:
                assert radical(g, h).nrows == 0


def test_dimension_identity_all_sp2_pairs():
    f, group = sp2f3()
    for g in group:
        for h in group:
            inter = pair_intersection(g, h)
            rad = radical(g, h)
            gh = Isometry(g.mat * h.mat, f, check=False)
            hi = Isometry(h.inverse_mat, f, check=False)
            lhs = inter.nrows + rad.nrows
            rhs = g.ominus.i_dim + h.ominus.i_dim - gh.ominus.i_dim
            assert lhs == rhs


def test_radical_matches_quadratic_bruteforce():
    f, group = sp2f3()
    rng = random.Random(2)
    for _ in range(60):
        g = group[rng.randrange(24)]
        h = group[rng.randrange(24)]
        basis, gram = gamma_form(g, h)
        brute = quadratic_radical_bruteforce(basis, gram)
        rad = set(span_points(F3, radical(g, h)))
        assert brute == rad


def test_skew_hermitian_form():
    herm = standard_form("hermitian_identity", F4, 3)
    group = enumerate_group(herm, unitary_generators(3, F4), cap=10**4)
    eta = herm.eta
    rng = random.Random(3)
    for _ in range(40):
        g = group[rng.randrange(len(group))]
        h = group[rng.randrange(len(group))]
        basis, fgh = skew_hermitian_form(g, h, herm)
        gram = fgh.gram
        for i in range(gram.nrows):
            for j in range(gram.ncols):
                assert gram.rows[j][i] == F4.neg(eta.apply_code(gram.rows[i][j]))
    with pytest.raises(NotHermitian):
        skew_hermitian_form(group[0], group[1], standard_form("fE", F3))


def test_skew_hermitian_radical_matches_pair_radical():
    herm = standard_form("hermitian_identity", F4, 3)
    group = enumerate_group(herm, unitary_generators(3, F4), cap=10**4)
    rng = random.Random(4)
    for _ in range(25):
        g = group[rng.randrange(len(group))]
        h = group[rng.randrange(len(group))]
        basis, fgh = skew_hermitian_form(g, h, herm)
        # radical of F_{g,h} inside the intersection, as vectors over F_4
        dimb = basis.nrows
        rad_vectors = set()
        for c in span_points(F4, Mat.identity(F4, dimb)):
            if any(
                fgh.evaluate_codes(c, y) != 0
                for y in Mat.identity(F4, dimb).rows
            ):
                continue
            v = (0,) * 3
            for ci, row in zip(c, basis.rows):
                v = tuple(F4.add(a, F4.mul(ci, b)) for a, b in zip(v, row))
            rad_vectors.add(v)
        pair_rad = set(span_points(F4, radical(g, h)))
        assert rad_vectors == pair_rad


def test_dimension_identity_unitary_over_k():
    herm = standard_form("hermitian_identity", F4, 3)
    group = enumerate_group(herm, unitary_generators(3, F4), cap=10**4)
    f = herm
    rng = random.Random(5)
    for _ in range(50):
        g = group[rng.randrange(len(group))]
        h = group[rng.randrange(len(group))]
        inter = pair_intersection(g, h)
        rad = radical(g, h)
        gh = Isometry(g.mat * h.mat, f, check=False)
        lhs = inter.nrows + rad.nrows
        rhs = g.ominus.i_dim + h.ominus.i_dim - gh.ominus.i_dim
        assert lhs == rhs
