"""The group E(f) = V x F_p with multiplication twisted by a bilinear form.

(x1, z1)(x2, z2) = (x1 + x2, z1 + z2 + f(x1, x2)) for an F_p-bilinear f
with f - f^t nondegenerate.  The module classifies E(f) among the central
products D^n, D^(n-1)Q, E^n, turns isometries and similitudes of f into
automorphisms, and computes an explicit isomorphism onto the group of the
builtin block-diagonal form (a change of basis plus a quadratic shear of
the centre coordinate), which is how representations are transported to
arbitrary forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import (
    BadCharacteristic,
    DegenerateForm,
    GroupMismatch,
    InconsistentCount,
    NotAnIsometry,
    NotASimilitude,
)
from .forms import SesquiForm, builtin_sum, symplectic_basis
from .gf import FieldSpec
from .linalg import Mat, Vec, span_points, vec_add, vec_mat, vec_scale


@dataclass(frozen=True)
class IsoType:
    """Isomorphism type of an extraspecial group of order p^(2n+1)."""

    tag: str  # "En", "Dn" or "Dn1Q"
    n: int

    def label(self) -> str:
        if self.tag == "En":
            return f"E^{self.n}"
        if self.tag == "Dn":
            return f"D^{self.n}"
        if self.n == 1:
            return "Q"
        return f"D^{self.n - 1}Q"

    def display(self) -> str:
        """Pretty name; minus-type 2-groups of odd width are central
        products of quaternion groups."""
        if self.tag == "Dn1Q" and self.n % 2 == 1:
            return "Q" if self.n == 1 else f"Q^{self.n}"
        if self.tag == "En" and self.n == 1:
            return "E"
        return self.label()

    def order_exponent(self) -> int:
        return 2 * self.n + 1


class ExtraspecialElement:
    __slots__ = ("group", "x", "z")

    def __init__(self, group: "ExtraspecialGroup", x: Vec, z: int):
        self.group = group
        self.x = x
        self.z = z

    def __mul__(self, other: "ExtraspecialElement") -> "ExtraspecialElement":
        g = self.group
        if other.group is not g:
            raise GroupMismatch("elements of different groups")
        p = g.p
        x = tuple((a + b) % p for a, b in zip(self.x, other.x))
        z = (self.z + other.z + g.form_value(self.x, other.x)) % p
        return ExtraspecialElement(g, x, z)

    def __pow__(self, j: int) -> "ExtraspecialElement":
        g = self.group
        p = g.p
        binom = (j * (j - 1)) // 2
        x = tuple((j * a) % p for a in self.x)
        z = (j * self.z + binom * g.form_value(self.x, self.x)) % p
        return ExtraspecialElement(g, x, z)

    def inverse(self) -> "ExtraspecialElement":
        return self**-1

    def commutator(self, other: "ExtraspecialElement") -> "ExtraspecialElement":
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return self.z == 0 and not any(self.x)

    def order(self) -> int:
        k = 1
        cur = self
        while not cur.is_identity():
            cur = cur * self
            k += 1
        return k

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtraspecialElement)
            and self.group is other.group
            and self.x == other.x
            and self.z == other.z
        )

    def __hash__(self) -> int:
        return hash((self.x, self.z))

    def __repr__(self) -> str:
        return f"({list(self.x)}, {self.z})"

    def to_json_dict(self) -> dict:
        return {"x": list(self.x), "z": self.z}


class ExtraspecialGroup:
    """E(f) for an F_p-bilinear form f with f - f^t nondegenerate."""

    def __init__(self, form: SesquiForm):
        if form.field.r != 1 or not form.eta.is_identity():
            raise BadCharacteristic("the group form must be prime-field bilinear")
        if form.dim % 2 != 0:
            raise DegenerateForm("dim must be even")
        if not form.antisymmetrize().is_nondegenerate():
            raise DegenerateForm("f - f^t must be nondegenerate")
        self.form = form
        self.p = form.field.p
        self.dim = form.dim
        self.n = form.dim // 2
        self._gram = form.gram.rows
        self._iso: IsoType | None = None

    def __repr__(self) -> str:
        return f"E(f) over F_{self.p}, dim {self.dim}"

    def form_value(self, x: Vec, y: Vec) -> int:
        p = self.p
        acc = 0
        for a, row in zip(x, self._gram):
            if a:
                acc += a * sum(map(int.__mul__, row, y))
        return acc % p

    @property
    def spec(self) -> FieldSpec:
        return self.form.field

    def element(self, x, z: int = 0) -> ExtraspecialElement:
        p = self.p
        xv = tuple(int(v) % p for v in x)
        if len(xv) != self.dim:
            raise GroupMismatch(f"vector length {len(xv)} != {self.dim}")
        return ExtraspecialElement(self, xv, z % p)

    def identity(self) -> ExtraspecialElement:
        return ExtraspecialElement(self, (0,) * self.dim, 0)

    def order(self) -> int:
        return self.p ** (2 * self.n + 1)

    def vectors(self) -> Iterator[Vec]:
        return itertools.product(range(self.p), repeat=self.dim)

    def elements(self) -> Iterator[ExtraspecialElement]:
        for x in self.vectors():
            for z in range(self.p):
                yield ExtraspecialElement(self, x, z)

    def isotropic_count(self) -> int:
        return sum(1 for x in self.vectors() if self.form_value(x, x) == 0)

    def classify(self) -> IsoType:
        if self._iso is None:
            n = self.n
            if self.p != 2:
                self._iso = IsoType("En", n)
            else:
                count = self.isotropic_count()
                if count == 2 ** (n - 1) * (2**n + 1):
                    self._iso = IsoType("Dn", n)
                elif count == 2 ** (n - 1) * (2**n - 1):
                    self._iso = IsoType("Dn1Q", n)
                else:
                    raise InconsistentCount(
                        f"isotropic count {count} matches no type at n={n}"
                    )
        return self._iso

    # -- automorphisms ------------------------------------------------------

    def automorphism_from_isometry(
        self, m: Mat
    ) -> Callable[[ExtraspecialElement], ExtraspecialElement]:
        """(x, z) -> (x m, z) for m preserving f; checked on all basis pairs."""
        self._check_similitude(m, 1, NotAnIsometry)

        def auto(e: ExtraspecialElement) -> ExtraspecialElement:
            return ExtraspecialElement(self, vec_mat(self.spec, e.x, m), e.z)

        return auto

    def automorphism_from_similitude(
        self, m: Mat, alpha: int
    ) -> Callable[[ExtraspecialElement], ExtraspecialElement]:
        """(x, z) -> (x m, alpha z) for m scaling f by alpha != 0."""
        alpha %= self.p
        if alpha == 0:
            raise NotASimilitude("similitude factor must be nonzero")
        self._check_similitude(m, alpha, NotASimilitude)

        def auto(e: ExtraspecialElement) -> ExtraspecialElement:
            return ExtraspecialElement(
                self, vec_mat(self.spec, e.x, m), (alpha * e.z) % self.p
            )

        return auto

    def _check_similitude(self, m: Mat, alpha: int, err) -> None:
        spec = self.spec
        rows = [vec_mat(spec, row, m) for row in Mat.identity(spec, self.dim).rows]
        for i, ri in enumerate(rows):
            for j, rj in enumerate(rows):
                want = (alpha * self._gram[i][j]) % self.p
                if self.form_value(ri, rj) != want:
                    raise err(f"form not scaled by {alpha} at basis pair ({i}, {j})")


# ---------------------------------------------------------------------------
# Standardization: an isomorphism E(f) -> E(f_std) where f_std is the
# builtin block-diagonal form of the same type.  The isomorphism is
# (x, z) -> (x P, z + phi(x)) where P is a change of basis matching the
# relevant invariant (the alternating polar form for odd p, the diagonal
# quadratic form for p = 2) and phi(x) = x U x^t repairs the remaining
# symmetric discrepancy.


def standard_form_for(iso: IsoType, spec: FieldSpec) -> SesquiForm:
    if iso.tag == "En":
        return builtin_sum(("fE",) * iso.n, spec)
    if iso.tag == "Dn":
        return builtin_sum(("fD",) * iso.n, spec)
    return builtin_sum(("fD",) * (iso.n - 1) + ("fQ",), spec)


def _char2_quadratic_basis(form: SesquiForm, iso: IsoType) -> Mat:
    """Basis pairs for Q(x) = f(x, x) over F_2: hyperbolic pairs first,
    one anisotropic pair last for minus type."""
    spec = form.field
    polar = form.antisymmetrize()
    basis = Mat.identity(spec, form.dim)
    out: list[Vec] = []

    def q(v: Vec) -> int:
        return form.evaluate_codes(v, v)

    while basis.nrows:
        u = None
        for v in span_points(spec, basis):
            if any(v) and q(v) == 0:
                u = v
                break
        if u is None:
            if basis.nrows != 2:
                raise InconsistentCount("anisotropic block of dimension != 2")
            u, w = basis.rows
            if polar.evaluate_codes(u, w) != 1:
                raise DegenerateForm("degenerate anisotropic block")
            out.extend((u, w))
            break
        w0 = next(
            (row for row in basis.rows if polar.evaluate_codes(u, row) == 1), None
        )
        if w0 is None:
            raise DegenerateForm("isotropic vector with no polar partner")
        w = vec_add(spec, w0, u) if q(w0) else w0
        out.extend((u, w))
        reduced = []
        for row in basis.rows:
            new = row
            if polar.evaluate_codes(new, w):
                new = vec_add(spec, new, u)
            if polar.evaluate_codes(u, new):
                new = vec_add(spec, new, w)
            reduced.append(new)
        basis = Mat(spec, reduced, basis.ncols).row_space()
    rows = out
    if iso.tag == "Dn1Q":
        # anisotropic pair is extracted last by construction
        assert q(rows[-1]) == 1 and q(rows[-2]) == 1
    return Mat(spec, rows)


def standard_isomorphism(
    group: ExtraspecialGroup,
) -> tuple["ExtraspecialGroup", Mat, Mat]:
    """Returns (std_group, P, U) with (x, z) -> (x P, z + x U x^t) an
    isomorphism of ``group`` onto the builtin-form group std_group."""
    f = group.form
    spec = group.spec
    iso = group.classify()
    std = standard_form_for(iso, spec)
    if group.p == 2:
        basis = _char2_quadratic_basis(f, iso)
    else:
        polar = f.antisymmetrize()
        std_polar_value = (2) % group.p  # f_E - f_E^t pairs at 2
        basis = symplectic_basis(polar, pair_value=std_polar_value)
    # the rows of ``basis`` realise the standard pattern inside (V, f), so
    # the coordinate map V -> V_std is the inverse matrix
    p_mat = basis.inv()
    b = p_mat * std.gram * p_mat.t() - f.gram
    # phi(x) = x U x^t with U + U^t = B; B is symmetric with, over F_2,
    # zero diagonal, so the strict upper triangle works; in odd
    # characteristic the diagonal splits in half.
    n = b.nrows
    half = (group.p + 1) // 2  # inverse of 2 mod p for odd p
    rows = []
    for i in range(n):
        row = [0] * n
        for j in range(i + 1, n):
            row[j] = b.rows[i][j]
        if group.p != 2:
            row[i] = (half * b.rows[i][i]) % group.p
        elif b.rows[i][i]:
            raise InconsistentCount("quadratic mismatch after basis change")
        rows.append(tuple(row))
    u_mat = Mat(spec, rows)
    return ExtraspecialGroup(std), p_mat, u_mat


def shear_value(u_mat: Mat, x: Vec) -> int:
    """phi(x) = x U x^t."""
    spec = u_mat.spec
    w = vec_mat(spec, x, u_mat)
    return sum(map(int.__mul__, w, x)) % spec.p


def transport_element(
    target: ExtraspecialGroup, p_mat: Mat, u_mat: Mat, e: ExtraspecialElement
) -> ExtraspecialElement:
    """Image of e under (x, z) -> (x P, z + phi(x))."""
    x = vec_mat(target.spec, e.x, p_mat)
    return target.element(x, e.z + shear_value(u_mat, e.x))
