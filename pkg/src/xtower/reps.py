"""Faithful irreducible matrix representations of the groups E(f).

The building blocks are the classical 2 x 2 representations of the
dihedral and quaternion groups of order 8 and the p x p representation of
the exponent-p group of order p^3; central products take Kronecker
products of these.  A representation is stored by its generator images
R_1 ... R_{2n} (images of the basis elements (e_i, 0)) together with the
scalar eps acting as the centre.  The value on a general element is
forced by the group law:

    rho(x, z) = eps^(z - c(x)) * R_1^(x_1) * ... * R_{2n}^(x_{2n})

where the correction c(x) is the centre coordinate of the product
(e_1, 0)^(x_1) ... (e_{2n}, 0)^(x_{2n}), computed from the group law, not
hard-coded.  Matrices act on row vectors from the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadCharacteristic,
    EpsilonMismatch,
    GroupMismatch,
    NoAlphaBeta,
    NoRootOfUnity,
    UnsupportedConstruction,
)
from .extraspecial import (
    ExtraspecialElement,
    ExtraspecialGroup,
    shear_value,
    standard_isomorphism,
)
from .forms import SesquiForm, direct_sum, standard_form
from .gf import (
    GF,
    FieldAuto,
    FieldElement,
    FieldSpec,
    ScalarRestriction,
    primitive_root_of_unity,
    same_spec,
)
from .linalg import Mat, Vec, vec_mat


class MatrixRep:
    """Representation of an E(f) over K', determined by generator images
    and the central scalar; rho(0, 1) = epsilon * I."""

    def __init__(
        self,
        group: ExtraspecialGroup,
        field: FieldSpec,
        epsilon: FieldElement,
        generators: Sequence[Mat],
    ):
        if len(generators) != group.dim:
            raise GroupMismatch("need one generator image per basis vector")
        if not same_spec(epsilon.spec, field):
            raise EpsilonMismatch("epsilon must live in the representation field")
        if field.pow(epsilon.code, group.p) != 1 or epsilon.code in (0, 1):
            raise NoRootOfUnity(f"epsilon must have exact order {group.p}")
        self.group = group
        self.field = field
        self.epsilon = epsilon
        self.generators = tuple(generators)
        self.degree = generators[0].nrows
        self._eps_pows = [field.pow(epsilon.code, k) for k in range(group.p)]
        self._gen_pows: list[list[Mat] | None] = [None] * group.dim
        self._xcache: dict[Vec, Mat] = {}
        self._basis = [
            group.element(tuple(1 if j == i else 0 for j in range(group.dim)), 0)
            for i in range(group.dim)
        ]

    def __repr__(self) -> str:
        return f"MatrixRep(deg {self.degree} of {self.group!r} over {self.field!r})"

    def eps_power(self, k: int) -> int:
        return self._eps_pows[k % self.group.p]

    def cocycle(self, x: Vec) -> int:
        """c(x): centre coordinate of prod_i (e_i, 0)^(x_i)."""
        acc = self.group.identity()
        for xi, b in zip(x, self._basis):
            if xi:
                acc = acc * b**xi
        return acc.z

    def _powers(self, i: int) -> list[Mat]:
        pows = self._gen_pows[i]
        if pows is None:
            pows = [Mat.identity(self.field, self.degree)]
            for _ in range(self.group.p - 1):
                pows.append(pows[-1] * self.generators[i])
            self._gen_pows[i] = pows
        return pows

    def image_x(self, x: Vec) -> Mat:
        """rho(x, 0), cached."""
        m = self._xcache.get(x)
        if m is None:
            prod: Mat | None = None
            for i, xi in enumerate(x):
                if xi:
                    pw = self._powers(i)[xi]
                    prod = pw if prod is None else prod * pw
            if prod is None:
                prod = Mat.identity(self.field, self.degree)
            c = self.cocycle(x)
            if c:
                prod = prod.scale(self.eps_power(-c))
            self._xcache[x] = prod
            m = prod
        return m

    def matrix(self, e: ExtraspecialElement) -> Mat:
        """rho(x, z) = eps^z rho(x, 0)."""
        if e.group is not self.group:
            raise GroupMismatch("element of a different group")
        m = self.image_x(e.x)
        if e.z:
            m = m.scale(self.eps_power(e.z))
        return m

    def matrix_xz(self, x: Vec, z: int) -> Mat:
        m = self.image_x(tuple(v % self.group.p for v in x))
        z %= self.group.p
        return m.scale(self.eps_power(z)) if z else m

    # -- constructions -----------------------------------------------------

    def contragredient(self) -> "MatrixRep":
        """g -> rho(g^-1)^t; generator images become inverse transposes and
        the centre acts by eps^-1."""
        gens = [m.inv().t() for m in self.generators]
        eps = self.field.from_code(self.field.inv(self.epsilon.code))
        return MatrixRep(self.group, self.field, eps, gens)

    def restrict_scalars(self, sub_degree: int = 1) -> "RestrictedRep":
        return RestrictedRep(self, sub_degree)

    # -- checks ------------------------------------------------------------

    def projective_relation_holds(self, x: Vec, y: Vec) -> bool:
        """rho(x,0) rho(y,0) == eps^f(x,y) rho(x+y, 0)."""
        g = self.group
        lhs = self.image_x(x) * self.image_x(y)
        s = tuple((a + b) % g.p for a, b in zip(x, y))
        rhs = self.image_x(s).scale(self.eps_power(g.form_value(x, y)))
        return lhs == rhs

    def verify_homomorphism(self, exhaustive_limit: int = 4096, samples: int = 200, seed: int = 0) -> bool:
        import random

        g = self.group
        vecs = list(g.vectors())
        if len(vecs) ** 2 <= exhaustive_limit:
            pairs = [(x, y) for x in vecs for y in vecs]
        else:
            rng = random.Random(seed)
            pairs = [(rng.choice(vecs), rng.choice(vecs)) for _ in range(samples)]
        return all(self.projective_relation_holds(x, y) for x, y in pairs)

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.to_json_dict(),
            "epsilon": self.epsilon.to_json(),
            "degree": self.degree,
            "generators": [m.to_json() for m in self.generators],
        }


@dataclass(frozen=True)
class RepForm:
    """An invariant form of a representation: X J X^(t, eta) = J on the image."""

    gram: Mat
    eta: FieldAuto

    def form(self) -> SesquiForm:
        return SesquiForm(self.gram.spec, self.gram, self.eta)

    def kind(self) -> str:
        return self.form().kind()

    def preserved_by(self, m: Mat) -> bool:
        return m * self.gram * m.conj_t(self.eta) == self.gram


# ---------------------------------------------------------------------------
# Base representations.


def base_rep(kind: str, field: FieldSpec, p: int = 3) -> MatrixRep:
    """The classical representations of the order-8 and order-p^3 groups.

    kind "D": (x,y,z) -> [[0,1],[1,0]]^x [[1,0],[0,-1]]^y (-1)^z over any
    odd-characteristic field.  kind "Q": first generator [[a,b],[b,-a]]
    with a^2 + b^2 = -1, (a, b) the first solution in code order.  kind
    "E": the p x p cycle and diag(1, eps, ...)^2 with centre eps, for eps
    the canonical primitive p-th root in ``field``.
    """
    if kind in ("D", "Q"):
        if field.p == 2:
            raise BadCharacteristic("2-group representations need odd characteristic")
        group = ExtraspecialGroup(standard_form("fD" if kind == "D" else "fQ", GF(2)))
        minus = field.neg(1)
        eps = field.from_code(minus)
        if kind == "D":
            gens = [
                Mat(field, [[0, 1], [1, 0]]),
                Mat(field, [[1, 0], [0, minus]]),
            ]
        else:
            ab = next(
                (
                    (a, b)
                    for a in range(field.q)
                    for b in range(field.q)
                    if field.add(field.mul(a, a), field.mul(b, b)) == minus
                ),
                None,
            )
            if ab is None:  # pragma: no cover - always solvable over finite fields
                raise NoAlphaBeta("no solution of a^2 + b^2 = -1")
            a, b = ab
            gens = [
                Mat(field, [[a, b], [b, field.neg(a)]]),
                Mat(field, [[0, 1], [minus, 0]]),
            ]
        return MatrixRep(group, field, eps, gens)
    if kind == "E":
        if p == 2 or p == field.p:
            raise BadCharacteristic("E-type needs odd p different from char K'")
        if (field.q - 1) % p != 0:
            raise NoRootOfUnity(f"{field!r} has no primitive {p}-th root of unity")
        group = ExtraspecialGroup(standard_form("fE", GF(p)))
        eps = primitive_root_of_unity(field, p)
        cycle = Mat(field, ((1 if j == (i + 1) % p else 0 for j in range(p)) for i in range(p)))
        diag2 = Mat(
            field,
            (
                (field.pow(eps.code, 2 * i) if i == j else 0 for j in range(p))
                for i in range(p)
            ),
        )
        return MatrixRep(group, field, eps, [cycle, diag2])
    raise ValueError(f"unknown base representation kind {kind!r}")


def tensor_rep(reps: Sequence[MatrixRep]) -> MatrixRep:
    """Central-product representation on E(f_1 + ... + f_k): Kronecker
    products of generator images, padded with identities."""
    if len(reps) == 1:
        return reps[0]
    field = reps[0].field
    eps = reps[0].epsilon
    for r in reps[1:]:
        if not same_spec(r.field, field) or r.epsilon.code != eps.code:
            raise EpsilonMismatch("tensor factors must share field and epsilon")
    form = direct_sum(*(r.group.form for r in reps))
    group = ExtraspecialGroup(form)
    gens: list[Mat] = []
    degrees = [r.degree for r in reps]
    for j, r in enumerate(reps):
        left = 1
        for d in degrees[:j]:
            left *= d
        right = 1
        for d in degrees[j + 1 :]:
            right *= d
        for gen in r.generators:
            m = gen
            if left > 1:
                m = Mat.identity(field, left).kron(m)
            if right > 1:
                m = m.kron(Mat.identity(field, right))
            gens.append(m)
    return MatrixRep(group, field, eps, gens)


def sum_with_contragredient(rep: MatrixRep) -> tuple[MatrixRep, RepForm]:
    """rho* + rho in (W*, W) block order, with the invariant pairing
    [[0,0],[I,0]]; the centre stays scalar only for 2-groups."""
    if rep.group.p != 2:
        raise UnsupportedConstruction(
            "contragredient sums are materialised for 2-groups only; for odd p "
            "the centre no longer acts by a scalar"
        )
    field = rep.field
    gens = [m.inv().t().block_diag(m) for m in rep.generators]
    summed = MatrixRep(rep.group, field, rep.epsilon, gens)
    d = rep.degree
    rows = [[0] * (2 * d) for _ in range(2 * d)]
    for i in range(d):
        rows[d + i][i] = 1
    j = RepForm(Mat(field, rows), FieldAuto(field, 0))
    return summed, j


def invariant_form(rep: MatrixRep, eta: FieldAuto) -> RepForm | None:
    """A nonzero J with X J X^(t, eta) = J on the image, or None.

    The condition is K'-linear in J; the solution space is computed by
    elimination and must have dimension <= 1 (Schur).  Returns None when
    eps * eps^eta != 1 or when the system has only the zero solution.
    """
    field = rep.field
    if field.mul(rep.epsilon.code, eta.apply_code(rep.epsilon.code)) != 1:
        return None
    d = rep.degree
    stacked_rows: list[tuple[int, ...]] = []
    ident = Mat.identity(field, d * d)
    for gen in rep.generators:
        mg = gen.kron(gen.conj(eta)) - ident
        stacked_rows.extend(mg.rows)
    big = Mat(field, stacked_rows, d * d)
    sols = big.t().left_nullspace()
    if sols.nrows == 0:
        return None
    assert sols.nrows == 1, "invariant form is not unique up to scalar"
    flat = sols.rows[0]
    j = Mat(field, (flat[i * d : (i + 1) * d] for i in range(d)))
    out = RepForm(j, eta)
    for gen in rep.generators:
        assert out.preserved_by(gen)
    return out


def spans_endomorphisms(rep: MatrixRep) -> bool:
    """Linear independence of the p^(2n) matrices rho(x, 0)."""
    rows = []
    for x in rep.group.vectors():
        m = rep.image_x(x)
        rows.append(tuple(v for row in m.rows for v in row))
    return Mat(rep.field, rows).rank() == len(rows)


# ---------------------------------------------------------------------------
# Restriction of scalars.


class RestrictedRep:
    """A representation over a subfield: each K'-entry becomes its
    multiplication block.  Degree multiplies by [K' : subfield]."""

    def __init__(self, rep: MatrixRep, sub_degree: int = 1):
        self.rep = rep
        self.sr = ScalarRestriction(rep.field, sub_degree)
        self.field = self.sr.sub
        self.degree = rep.degree * self.sr.m
        self.group = rep.group

    def restrict(self, m: Mat) -> Mat:
        return restricted_matrix(self.sr, m)

    def matrix(self, e: ExtraspecialElement) -> Mat:
        return self.restrict(self.rep.matrix(e))

    def __repr__(self) -> str:
        return f"RestrictedRep(deg {self.degree} over {self.field!r})"


def restricted_matrix(sr: ScalarRestriction, m: Mat) -> Mat:
    """Blockwise multiplication-matrix expansion of a K'-matrix."""
    mm = sr.m
    rows: list[list[int]] = [[0] * (m.ncols * mm) for _ in range(m.nrows * mm)]
    for i, row in enumerate(m.rows):
        for j, c in enumerate(row):
            if c == 0:
                continue
            block = sr.mult_block(c)
            for a in range(mm):
                target = rows[i * mm + a]
                brow = block[a]
                for b in range(mm):
                    target[j * mm + b] = brow[b]
    return Mat(sr.sub, rows)


def restrict_scalars(rep: MatrixRep, sub_degree: int = 1) -> RestrictedRep:
    return RestrictedRep(rep, sub_degree)


# ---------------------------------------------------------------------------
# Representations of arbitrary E(f): standardize, then transport.


def rep_of_group(group: ExtraspecialGroup, field: FieldSpec) -> MatrixRep:
    """An absolutely irreducible representation of E(f) over ``field``,
    built by classifying f, taking the tensor representation of the
    builtin form of that type, and pulling back along the standardization
    isomorphism (x, z) -> (x P, z + phi(x))."""
    std_group, p_mat, u_mat = standard_isomorphism(group)
    iso = group.classify()
    if iso.tag == "En":
        factors = [base_rep("E", field, group.p) for _ in range(iso.n)]
    elif iso.tag == "Dn":
        factors = [base_rep("D", field) for _ in range(iso.n)]
    else:
        factors = [base_rep("D", field) for _ in range(iso.n - 1)] + [
            base_rep("Q", field)
        ]
    std_rep = tensor_rep(factors)
    gens = []
    for i in range(group.dim):
        x = tuple(1 if j == i else 0 for j in range(group.dim))
        xp = vec_mat(group.spec, x, p_mat)
        gens.append(std_rep.matrix_xz(xp, shear_value(u_mat, x)))
    return MatrixRep(group, field, std_rep.epsilon, gens)
