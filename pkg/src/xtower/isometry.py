"""Isometry groups of forms and the geometry of 1 - g.

For g preserving a form f the module computes the image I(g) and kernel
K(g) of 1 - g, the Wall form f_g(x, y) = f(u, y) for any preimage u of x,
the difference form gamma_{g,h} on I(g) and I(h^-1), its radical, and the
skew-Hermitian refinement for unitary pairs.  Groups are enumerated by
breadth-first closure from standard generator sets (transvections plus
torus or Singer-type elements), each generator verified against the form
at construction.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import (
    BadCharacteristic,
    CapExceeded,
    DegenerateForm,
    DimensionMismatch,
    NoInvolution,
    NotAnIsometry,
    NotHermitian,
)
from .forms import SesquiForm
from .gf import GF, FieldAuto, FieldSpec, skew_element
from .linalg import (
    Mat,
    RowSolver,
    Vec,
    intersect_row_spaces,
    span_points,
    vec_mat,
    vec_sub,
)


def is_isometry(m: Mat, f: SesquiForm) -> bool:
    """True iff m is invertible and m @ gram @ m^(t,eta) == gram."""
    if m.nrows != f.dim or m.ncols != f.dim:
        raise DimensionMismatch(f"{m.nrows}x{m.ncols} matrix on a dim-{f.dim} form")
    if m * f.gram * m.conj_t(f.eta) != f.gram:
        return False
    return f.dim == 0 or m.det() != 0


class OneMinusG:
    """Image/kernel data of 1 - g, with a solver for preimages."""

    __slots__ = ("m", "solver", "image_basis", "kernel_basis")

    def __init__(self, g: Mat):
        spec = g.spec
        self.m = Mat.identity(spec, g.nrows) - g
        self.solver = RowSolver(self.m)
        self.image_basis = self.solver.image_basis()
        self.kernel_basis = self.m.left_nullspace()

    @property
    def i_dim(self) -> int:
        return self.image_basis.nrows

    def preimage(self, x: Vec) -> Vec:
        u = self.solver.solve(x)
        if u is None:
            raise DegenerateForm("vector outside the image of 1 - g")
        return u


class Isometry:
    """An invertible matrix preserving a form, acting on row vectors."""

    __slots__ = ("mat", "form", "_inv", "_ominus")

    def __init__(self, mat: Mat, form: SesquiForm, check: bool = True):
        if check and not is_isometry(mat, form):
            raise NotAnIsometry(f"matrix does not preserve the form")
        self.mat = mat
        self.form = form
        self._inv: Mat | None = None
        self._ominus: OneMinusG | None = None

    @property
    def inverse_mat(self) -> Mat:
        if self._inv is None:
            self._inv = self.mat.inv()
        return self._inv

    @property
    def ominus(self) -> OneMinusG:
        if self._ominus is None:
            self._ominus = OneMinusG(self.mat)
        return self._ominus

    def __mul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.mat * other.mat, self.form, check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Isometry) and self.mat == other.mat

    def __hash__(self) -> int:
        return hash(self.mat)

    def __repr__(self) -> str:
        return f"Isometry({[list(r) for r in self.mat.rows]})"


def image_kernel(g: Mat) -> OneMinusG:
    return OneMinusG(g)


def enumerate_group(
    f: SesquiForm, generators: Sequence[Mat], cap: int = 1_000_000
) -> list[Isometry]:
    """Breadth-first multiplication closure; deterministic order (word
    length, then row-code order within each layer)."""
    for m in generators:
        if not is_isometry(m, f):
            raise NotAnIsometry("generator does not preserve the form")
    ident = Mat.identity(f.field, f.dim)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        layer = []
        for m in frontier:
            for gen in generators:
                nxt = m * gen
                if nxt not in seen:
                    seen.add(nxt)
                    layer.append(nxt)
                    if len(seen) > cap:
                        raise CapExceeded(f"group exceeds cap {cap}")
        layer.sort(key=lambda m: m.rows)
        order.extend(layer)
        frontier = layer
    return [Isometry(m, f, check=False) for m in order]


# ---------------------------------------------------------------------------
# Standard generator sets.


def symplectic_generators(n: int, p: int) -> list[Mat]:
    """Generators of Sp_2n(F_p) for the form f_E + ... + f_E (basis pairs
    (e_1, e_2), (e_3, e_4), ...): for n = 1 the pair [[1,1],[0,1]],
    [[0,1],[-1,0]]; in higher rank, symplectic transvections along the
    basis vectors and their pairwise sums and differences."""
    spec = GF(p)
    if p == 2:
        raise BadCharacteristic("the alternating case needs odd p")
    if n == 1:
        return [
            Mat.from_ints(spec, [[1, 1], [0, 1]]),
            Mat.from_ints(spec, [[0, 1], [-1, 0]]),
        ]
    from .forms import builtin_sum

    form = builtin_sum(("fE",) * n, spec).antisymmetrize()
    dim = 2 * n
    vectors = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            plus = tuple((a + b) % p for a, b in zip(vectors[i], vectors[j]))
            minus = tuple((a - b) % p for a, b in zip(vectors[i], vectors[j]))
            vectors.append(plus)
            vectors.append(minus)
    gens = []
    for v in vectors:
        rows = []
        for e in (tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)):
            c = form.evaluate_codes(e, v)
            rows.append(tuple((a + c * b) % p for a, b in zip(e, v)))
        gens.append(Mat(spec, rows))
    return gens


def hyperbolic_generators(w_dim: int, k: FieldSpec) -> list[Mat]:
    """Generators of {diag(A^-t, A)} inside G(hyperbolic form) on W* + W:
    images of GL(W) generators, a transvection plus a Singer-type
    companion matrix (for w_dim = 1, the multiplicative generator)."""
    gl_gens: list[Mat] = []
    if w_dim == 1:
        gl_gens.append(Mat(k, [[k.generator_code()]]))
    else:
        trans = [[1 if i == j else 0 for j in range(w_dim)] for i in range(w_dim)]
        trans[0][1] = 1
        gl_gens.append(Mat(k, trans))
        gl_gens.append(_singer_companion(w_dim, k))
    out = []
    for a in gl_gens:
        out.append(a.inv().t().block_diag(a))
    return out


def _singer_companion(n: int, k: FieldSpec) -> Mat:
    """Companion matrix of a primitive degree-n polynomial over k (an
    element of order |k|^n - 1 in GL_n(k))."""
    target = k.q**n - 1
    from .gf import factorize

    primes = list(factorize(target))
    for low_codes in itertools.product(range(k.q), repeat=n):
        rows = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = 1
        comp_last = [k.neg(c) for c in low_codes]
        rows[n - 1] = list(comp_last)
        # order check on the companion matrix directly
        m = Mat(k, rows)
        if m.det() == 0:
            continue
        if _mat_order_is(m, target, primes):
            return m
    raise DegenerateForm("no primitive polynomial found")  # pragma: no cover


def _mat_order_is(m: Mat, n: int, primes: Iterable[int]) -> bool:
    ident = Mat.identity(m.spec, m.nrows)
    if m**n != ident:
        return False
    return all(m ** (n // ell) != ident for ell in primes)


def unitary_generators(d: int, k: FieldSpec) -> list[Mat]:
    """Generators of GU_d(q) for the Hermitian identity form over k = F_{q^2}.

    Starts from a norm-one torus element, coordinate permutations and
    unitary transvections along the first isotropic vectors in code order.
    Since transvections need not generate (GU_3(2) is the classical
    exception), the closure is compared against the group-order formula
    and, while short, extended by the first orthonormal-row matrix outside
    it; the result is deterministic and verified by construction.
    """
    if k.r % 2 != 0:
        raise NoInvolution("unitary groups need an order-2 automorphism")
    eta = FieldAuto(k, k.r // 2)
    q = k.p ** (k.r // 2)
    norm_one = k.pow(k.generator_code(), q - 1)
    gens = []
    rows = [[norm_one if i == j == 0 else (1 if i == j else 0) for j in range(d)] for i in range(d)]
    gens.append(Mat(k, rows))
    if d > 1:
        cyc = Mat(k, ((1 if j == (i + 1) % d else 0 for j in range(d)) for i in range(d)))
        gens.append(cyc)
        swap = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        swap[0][0] = swap[1][1] = 0
        swap[0][1] = swap[1][0] = 1
        gens.append(Mat(k, swap))
        gens.extend(_unitary_transvections(d, k, eta, limit=4))
    target = unitary_group_order(d, q)
    herm = SesquiForm(k, Mat.identity(k, d), eta)
    while True:
        seen = {g.mat for g in enumerate_group(herm, gens, cap=target)}
        if len(seen) == target:
            return gens
        extra = next(
            m for m in _orthonormal_row_matrices(d, k, eta) if m not in seen
        )
        gens.append(extra)


def _orthonormal_row_matrices(d: int, k: FieldSpec, eta: FieldAuto):
    """All matrices with Hermitian-orthonormal rows, in row-code order."""
    herm = SesquiForm(k, Mat.identity(k, d), eta)
    vectors = list(itertools.product(range(k.q), repeat=d))

    def extend(rows: list[tuple[int, ...]]):
        if len(rows) == d:
            yield Mat(k, rows)
            return
        for v in vectors:
            if herm.evaluate_codes(v, v) != 1:
                continue
            if any(herm.evaluate_codes(r, v) != 0 for r in rows):
                continue
            yield from extend(rows + [v])

    yield from extend([])


def _unitary_transvections(d: int, k: FieldSpec, eta: FieldAuto, limit: int) -> list[Mat]:
    herm = SesquiForm(k, Mat.identity(k, d), eta)
    if k.p == 2:
        cs = [1]
    else:
        t0 = skew_element(k, eta).code
        cs = [t0]
    out: list[Mat] = []
    for v in itertools.product(range(k.q), repeat=d):
        if len(out) >= limit:
            break
        if not any(v):
            continue
        if herm.evaluate_codes(v, v) != 0:
            continue
        for c in cs:
            rows = []
            for i in range(d):
                e = tuple(1 if j == i else 0 for j in range(d))
                coef = k.mul(c, herm.evaluate_codes(e, v))
                rows.append(tuple(k.add(a, k.mul(coef, b)) for a, b in zip(e, v)))
            out.append(Mat(k, rows))
    return out


def unitary_group_order(d: int, q: int) -> int:
    order = q ** (d * (d - 1) // 2)
    for i in range(1, d + 1):
        order *= q**i - (-1) ** i
    return order


def symplectic_group_order(n: int, p: int) -> int:
    order = p ** (n * n)
    for i in range(1, n + 1):
        order *= p ** (2 * i) - 1
    return order


def general_linear_order(n: int, q: int) -> int:
    order = 1
    for i in range(n):
        order *= q**n - q**i
    return order


# ---------------------------------------------------------------------------
# Wall-form geometry.


def wall_form(g: Isometry, f: SesquiForm | None = None) -> SesquiForm:
    """f_g(x, y) = f(u, y) for x = u(1 - g), as a Gram matrix in the
    coordinates of g.ominus.image_basis."""
    if f is None:
        f = g.form
    om = g.ominus
    basis = om.image_basis
    spec = f.field
    pre = [om.preimage(x) for x in basis.rows]
    rows = []
    for u in pre:
        rows.append(tuple(f.evaluate_codes(u, y) for y in basis.rows))
    return SesquiForm(spec, Mat(spec, rows, basis.nrows), f.eta)


def pair_intersection(g: Isometry, h: Isometry) -> Mat:
    """Canonical basis of I(g) intersect I(h^-1)."""
    gi = g.ominus.image_basis
    hi = OneMinusG(h.inverse_mat).image_basis
    return intersect_row_spaces(gi, hi)


def gamma_form(g: Isometry, h: Isometry, f: SesquiForm | None = None) -> tuple[Mat, SesquiForm]:
    """gamma_{g,h} = f_g - f_{h^-1} on I(g) intersect I(h^-1); returns the
    intersection basis and the Gram matrix in its coordinates."""
    if f is None:
        f = g.form
    spec = f.field
    basis = pair_intersection(g, h)
    om_g = g.ominus
    om_h = OneMinusG(h.inverse_mat)
    us = [om_g.preimage(x) for x in basis.rows]
    vs = [om_h.preimage(x) for x in basis.rows]
    rows = []
    for u, v in zip(us, vs):
        w = vec_sub(spec, u, v)
        rows.append(tuple(f.evaluate_codes(w, y) for y in basis.rows))
    return basis, SesquiForm(spec, Mat(spec, rows, basis.nrows), f.eta)


def radical(g: Isometry, h: Isometry) -> Mat:
    """R_{g,h} = {x : x = u(1-g) = u(1-h^-1)} = ker(h^-1 - g)(1 - g)."""
    spec = g.mat.spec
    diff = h.inverse_mat - g.mat
    kern = diff.left_nullspace()
    if kern.nrows == 0:
        return Mat.empty(spec, g.mat.nrows)
    return Mat(spec, (vec_mat(spec, u, g.ominus.m) for u in kern.rows), g.mat.nrows).row_space()


def quadratic_radical_bruteforce(
    basis: Mat, gram: SesquiForm
) -> set[Vec]:
    """Radical of the quadratic form x -> gamma(x, x) on the span, by
    enumeration: points x with gamma(x+y, x+y) = gamma(y, y) for all y."""
    spec = gram.field
    k = basis.nrows
    pts = list(span_points(spec, Mat.identity(spec, k))) if k else [()]
    rad_coords = []
    for c in pts:
        ok = True
        for y in pts:
            s = tuple(spec.add(a, b) for a, b in zip(c, y))
            if gram.evaluate_codes(s, s) != gram.evaluate_codes(y, y):
                ok = False
                break
        if ok:
            rad_coords.append(c)
    out = set()
    for c in rad_coords:
        v = (0,) * basis.ncols
        for ci, row in zip(c, basis.rows):
            if ci:
                v = tuple(spec.add(a, spec.mul(ci, b)) for a, b in zip(v, row))
        out.add(v)
    return out


def skew_hermitian_form(
    g: Isometry, h: Isometry, herm: SesquiForm
) -> tuple[Mat, SesquiForm]:
    """F_{g,h}(x, y) = F(u - v, y) on I(g) intersect I(h^-1) for a
    Hermitian F; the result is skew-Hermitian with radical R_{g,h}."""
    if herm.kind() != "hermitian":
        raise NotHermitian("F must be Hermitian")
    basis, grm = gamma_form(g, h, herm)
    return basis, SesquiForm(herm.field, grm.gram, herm.eta)
