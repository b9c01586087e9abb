"""Bilinear and eta-sesquilinear forms as explicit Gram matrices.

A form evaluates as f(u, v) = u @ gram @ conj_eta(v)^T on row vectors.
Forms are stored as Gram matrices rather than closures so that equality,
serialization and rank are canonical.  The module provides the builtin
Gram matrices the extraspecial machinery is built from, direct sums and
tensor products, the trace form down to the prime field, diagonalization
of reflexive forms, and symplectic bases for alternating forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadCharacteristic,
    BadLambda,
    DegenerateForm,
    DimensionMismatch,
    FieldMismatch,
    NoInvolution,
    UnsupportedKind,
)
from .gf import (
    GF,
    FieldAuto,
    FieldElement,
    FieldSpec,
    ScalarRestriction,
    same_spec,
    trace_code,
)
from .linalg import Mat, Vec, span_points, vec_mat

KINDS = ("general", "alternating", "symmetric", "hermitian", "skew_hermitian")


class SesquiForm:
    """Gram matrix plus field automorphism; evaluation is
    f(u, v) = u @ gram @ (v conjugated entrywise by eta)^T."""

    __slots__ = ("field", "eta", "gram", "kind_hint")

    def __init__(
        self,
        field: FieldSpec,
        gram: Mat,
        eta: FieldAuto | None = None,
        kind_hint: str | None = None,
    ):
        if not gram.is_square():
            raise DimensionMismatch("Gram matrix must be square")
        self.field = field
        self.gram = gram
        self.eta = eta if eta is not None else FieldAuto(field, 0)
        if kind_hint is not None:
            if kind_hint not in KINDS:
                raise UnsupportedKind(kind_hint)
            if kind_hint != "general" and self.kind() != kind_hint:
                raise UnsupportedKind(
                    f"Gram matrix is not {kind_hint} (classified {self.kind()})"
                )
        self.kind_hint = kind_hint

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SesquiForm)
            and same_spec(self.field, other.field)
            and self.eta == other.eta
            and self.gram == other.gram
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.r, self.eta.power, self.gram))

    def __repr__(self) -> str:
        return f"SesquiForm({self.field!r}, dim={self.dim}, kind={self.kind()})"

    # -- evaluation -------------------------------------------------------

    def evaluate(self, u: Sequence, v: Sequence) -> FieldElement:
        return self.field.from_code(self.evaluate_codes(self._codes(u), self._codes(v)))

    def evaluate_codes(self, u: Vec, v: Vec) -> int:
        spec = self.field
        w = vec_mat(spec, u, self.gram)
        eta = self.eta
        acc = 0
        if eta.is_identity():
            for a, b in zip(w, v):
                if a and b:
                    acc = spec.add(acc, spec.mul(a, b))
        else:
            for a, b in zip(w, v):
                if a and b:
                    acc = spec.add(acc, spec.mul(a, eta.apply_code(b)))
        return acc

    def _codes(self, u: Sequence) -> Vec:
        # plain integers in vectors are element codes, as everywhere else
        out = []
        for val in u:
            if isinstance(val, FieldElement):
                out.append(val.code)
            else:
                out.append(val % self.field.q)
        return tuple(out)

    # -- structure ----------------------------------------------------------

    def conj_transpose(self) -> "SesquiForm":
        """The form (x, y) -> f(y, x)^eta, Gram (gram^T)^eta."""
        return SesquiForm(self.field, self.gram.conj_t(self.eta), self.eta)

    def antisymmetrize(self) -> "SesquiForm":
        return SesquiForm(self.field, self.gram - self.gram.conj_t(self.eta), self.eta)

    def is_nondegenerate(self) -> bool:
        return self.dim == 0 or self.gram.det() != 0

    def kind(self) -> str:
        g = self.gram
        gt = g.conj_t(self.eta)
        if self.eta.is_identity():
            if g == gt:
                if self.field.p != 2 or all(g.rows[i][i] == 0 for i in range(self.dim)):
                    if g == -gt and all(g.rows[i][i] == 0 for i in range(self.dim)):
                        return "alternating"
                return "symmetric"
            if g == -gt and all(g.rows[i][i] == 0 for i in range(self.dim)):
                return "alternating"
            return "general"
        if g == gt:
            return "hermitian"
        if g == -gt:
            return "skew_hermitian"
        return "general"

    def direct_sum(self, other: "SesquiForm") -> "SesquiForm":
        if not same_spec(self.field, other.field) or self.eta != other.eta:
            raise FieldMismatch("direct sum needs matching field and eta")
        return SesquiForm(self.field, self.gram.block_diag(other.gram), self.eta)

    def tensor(self, other: "SesquiForm") -> "SesquiForm":
        if not same_spec(self.field, other.field) or self.eta != other.eta:
            raise FieldMismatch("tensor product needs matching field and eta")
        return SesquiForm(self.field, self.gram.kron(other.gram), self.eta)

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.to_json_dict(),
            "eta_power": self.eta.power,
            "gram": self.gram.to_json(),
            "kind": self.kind(),
        }

    @staticmethod
    def from_json_dict(d: dict) -> "SesquiForm":
        spec = FieldSpec.from_json_dict(d["field"])
        return SesquiForm(
            spec, Mat.from_json(spec, d["gram"]), FieldAuto(spec, d.get("eta_power", 0))
        )


def direct_sum(*forms: SesquiForm) -> SesquiForm:
    out = forms[0]
    for f in forms[1:]:
        out = out.direct_sum(f)
    return out


def tensor_product(*forms: SesquiForm) -> SesquiForm:
    out = forms[0]
    for f in forms[1:]:
        out = out.tensor(f)
    return out


# ---------------------------------------------------------------------------
# Builtin forms.


def standard_form(name: str, field: FieldSpec, dim: int = 1) -> SesquiForm:
    """The builtin Gram matrices.

    fD = [[0,0],[1,0]] and fQ = [[1,0],[1,1]] over F_2, fE = [[0,1],[-1,0]]
    in odd characteristic, ``hyperbolic`` = [[0,0],[I,0]] in (W*, W) block
    order with dim(W) = dim, and ``hermitian_identity`` = I with the
    order-2 automorphism.
    """
    p = field.p
    if name == "fD":
        if p != 2:
            raise BadCharacteristic("fD lives over F_2")
        return SesquiForm(field, Mat(field, [[0, 0], [1, 0]]))
    if name == "fQ":
        if p != 2:
            raise BadCharacteristic("fQ lives over F_2")
        return SesquiForm(field, Mat(field, [[1, 0], [1, 1]]))
    if name == "fE":
        if p == 2:
            raise BadCharacteristic("fE needs odd characteristic")
        return SesquiForm(field, Mat.from_ints(field, [[0, 1], [-1, 0]]))
    if name == "hyperbolic":
        w = dim
        rows = [[0] * (2 * w) for _ in range(2 * w)]
        for i in range(w):
            rows[w + i][i] = 1
        return SesquiForm(field, Mat(field, rows))
    if name == "hermitian_identity":
        if field.r % 2 != 0:
            raise NoInvolution(f"{field!r} has no order-2 automorphism")
        eta = FieldAuto(field, field.r // 2)
        return SesquiForm(field, Mat.identity(field, dim), eta, kind_hint="hermitian")
    raise UnsupportedKind(f"unknown builtin form {name!r}")


def builtin_sum(names: Sequence[str], field: FieldSpec) -> SesquiForm:
    return direct_sum(*(standard_form(n, field) for n in names))


# ---------------------------------------------------------------------------
# Trace form down to the prime field.


@dataclass(frozen=True)
class TraceFormSpec:
    """Recipe for the prime-field form T(lambda * f(x, y)).

    When eta is nontrivial (Hermitian inner form), lambda must move under
    eta; otherwise lambda must be 1.
    """

    inner: SesquiForm
    lam: FieldElement

    def __post_init__(self):
        inner, lam = self.inner, self.lam
        if not same_spec(lam.spec, inner.field):
            raise FieldMismatch("lambda must live in the form's field")
        if inner.eta.is_identity():
            if lam.code != 1:
                raise BadLambda("lambda must be 1 for a bilinear inner form")
        else:
            if inner.eta.apply_code(lam.code) == lam.code:
                raise BadLambda("lambda must satisfy lambda^eta != lambda")


def default_lambda(form: SesquiForm) -> FieldElement:
    """Canonical lambda: 1 for bilinear inner forms, else the smallest code
    moved by eta."""
    if form.eta.is_identity():
        return form.field.one()
    for c in range(1, form.field.q):
        if form.eta.apply_code(c) != c:
            return form.field.from_code(c)
    raise BadLambda("eta fixes the whole field")  # pragma: no cover


def trace_form(spec: TraceFormSpec) -> SesquiForm:
    """Restrict scalars to the prime field: the F_p-bilinear form
    T(lambda f(x, y)) on the 2n*r-dimensional F_p-space.

    Basis order is coordinate-major: K-coordinate j contributes the block
    of F_p-coordinates j*r .. j*r + r - 1 via the polynomial basis of K.
    """
    inner, lam = spec.inner, spec.lam
    K = inner.field
    prime = GF(K.p)
    r = K.r
    d = inner.dim
    x = K.encode([0, 1]) if r > 1 else 1
    xpow = [K.pow(x, i) if i else 1 for i in range(r)]
    n = d * r
    rows = [[0] * n for _ in range(n)]
    eta = inner.eta
    for j in range(d):
        for k in range(d):
            gjk = inner.gram.rows[j][k]
            if gjk == 0:
                continue
            for i in range(r):
                left = K.mul(lam.code, K.mul(xpow[i], gjk))
                for l in range(r):
                    val = K.mul(left, eta.apply_code(xpow[l]))
                    rows[j * r + i][k * r + l] = trace_code(K, val)
    return SesquiForm(prime, Mat(prime, rows))


def restrict_vector(K: FieldSpec, v: Vec) -> Vec:
    """Flatten a K-vector to prime-field coordinates, coordinate-major,
    matching the basis order used by trace_form."""
    out: list[int] = []
    for c in v:
        out.extend(K.decode(c))
    return tuple(out)


def lift_vector(K: FieldSpec, v: Vec, d: int) -> Vec:
    """Inverse of restrict_vector."""
    r = K.r
    return tuple(K.encode(v[j * r : (j + 1) * r]) for j in range(d))


def restrict_matrix(K: FieldSpec, m: Mat) -> Mat:
    """The F_p-matrix of the K-linear map m under restrict_vector.

    Row convention: restrict_vector(v @ m) == restrict_vector(v) @ restrict_matrix(m).
    """
    prime = GF(K.p)
    sr = _prime_restriction(K)
    r = K.r
    d1, d2 = m.nrows, m.ncols
    rows = [[0] * (d2 * r) for _ in range(d1 * r)]
    for j in range(d1):
        for k in range(d2):
            c = m.rows[j][k]
            if c == 0:
                continue
            block = sr.mult_block(c)
            for a in range(r):
                row = rows[j * r + a]
                brow = block[a]
                for b in range(r):
                    row[k * r + b] = brow[b]
    return Mat(prime, rows)


_restriction_cache: dict[tuple[int, int, tuple[int, ...]], ScalarRestriction] = {}


def _prime_restriction(K: FieldSpec) -> ScalarRestriction:
    key = (K.p, K.r, K.modulus)
    sr = _restriction_cache.get(key)
    if sr is None:
        sr = ScalarRestriction(K, 1)
        _restriction_cache[key] = sr
    return sr


# ---------------------------------------------------------------------------
# Diagonalization and symplectic bases.


def _anisotropic_vector(f: SesquiForm, basis: Mat) -> Vec | None:
    """Deterministic search for v in the row span with f(v, v) != 0:
    basis vectors, then two-term combinations, then the whole span."""
    spec = f.field
    rows = basis.rows
    for v in rows:
        if f.evaluate_codes(v, v):
            return v
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            for c in range(1, spec.q):
                v = tuple(spec.add(a, spec.mul(c, b)) for a, b in zip(rows[i], rows[j]))
                if f.evaluate_codes(v, v):
                    return v
    for v in span_points(spec, basis):
        if f.evaluate_codes(v, v):
            return v
    return None


def diagonalize(f: SesquiForm) -> tuple[Mat, list[int]]:
    """Orthogonal basis for a symmetric (odd characteristic), Hermitian or
    skew-Hermitian form: returns (B, diag) with B @ gram @ B^(T,eta)
    diagonal.  In the skew-Hermitian case every diagonal entry z satisfies
    z^eta = -z != 0."""
    kind = f.kind()
    if kind == "symmetric" and f.field.p == 2:
        kind = "unsupported"
    if kind not in ("symmetric", "hermitian", "skew_hermitian"):
        raise UnsupportedKind(
            f"cannot diagonalize a {f.kind()} form; alternating forms take a "
            "symplectic basis instead"
        )
    if not f.is_nondegenerate():
        raise DegenerateForm("diagonalize needs a nondegenerate form")
    spec = f.field
    eta = f.eta
    basis = Mat.identity(spec, f.dim)
    out_rows: list[Vec] = []
    diag: list[int] = []
    while basis.nrows:
        v = _anisotropic_vector(f, basis)
        if v is None:
            raise DegenerateForm("no anisotropic vector in a nondegenerate form")
        z = f.evaluate_codes(v, v)
        out_rows.append(v)
        diag.append(z)
        zinv = spec.inv(z)
        reduced = []
        for w in basis.rows:
            c = spec.mul(f.evaluate_codes(w, v), zinv)
            reduced.append(tuple(spec.sub(a, spec.mul(c, b)) for a, b in zip(w, v)))
        basis = Mat(spec, reduced, basis.ncols).row_space()
    b = Mat(spec, out_rows)
    if kind == "skew_hermitian":
        for z in diag:
            assert eta.apply_code(z) == spec.neg(z) != 0
    return b, diag


def symplectic_basis(f: SesquiForm, pair_value: int = 1) -> Mat:
    """Basis u1, v1, u2, v2, ... for a nondegenerate alternating form with
    f(u_i, v_i) = pair_value and all other pairs orthogonal."""
    spec = f.field
    if f.kind() != "alternating":
        raise UnsupportedKind("symplectic basis needs an alternating form")
    if not f.is_nondegenerate():
        raise DegenerateForm("symplectic basis needs a nondegenerate form")
    basis = Mat.identity(spec, f.dim)
    out: list[Vec] = []
    while basis.nrows:
        u = basis.rows[0]
        w = next((row for row in basis.rows[1:] if f.evaluate_codes(u, row)), None)
        if w is None:  # pragma: no cover - nondegeneracy guarantees a partner
            raise DegenerateForm("isolated vector in a nondegenerate alternating form")
        c = spec.div(pair_value % spec.q, f.evaluate_codes(u, w))
        v = tuple(spec.mul(c, a) for a in w)
        out.extend((u, v))
        reduced = []
        for row in basis.rows:
            cu = spec.div(f.evaluate_codes(row, v), pair_value % spec.q)
            cv = spec.div(f.evaluate_codes(u, row), pair_value % spec.q)
            new = tuple(
                spec.sub(a, spec.add(spec.mul(cu, bu), spec.mul(cv, bv)))
                for a, bu, bv in zip(row, u, v)
            )
            reduced.append(new)
        basis = Mat(spec, reduced, basis.ncols).row_space()
    return Mat(spec, out)
