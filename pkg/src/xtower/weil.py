"""Extending representations of E(f) to its isometry group.

For g preserving f, the averaged intertwiner

    s(g) = |I(g)|^-1 * sum over x in I(g) of eps^(f_g(x,x)) rho(x, 0)

conjugates rho(x, z) to rho(xg, z), and s(g)s(h) = sigma(g,h) s(gh) for a
scalar factor set with the closed form

    sigma(g,h) = |I(g)|^-1 |I(h)|^-1 |I(gh)| *
                 sum over x in I(g) ^ I(h^-1) of eps^(gamma_{g,h}(x,x)).

Three configurations admit an explicit splitting mu with
sigma(g,h) = mu(g) mu(h) mu(gh)^-1, turning g -> mu(g)^-1 s(g) into a
linear representation of G(f) acting on E(f):

  * symplectic (K = F_p, f alternating):  mu(g) = |I(g)|^-1 theta^i(g) delta_g
    with theta the Gauss sum and delta_g the square class of the Wall form;
  * hyperbolic (V = W* + W over K, |K| = q):  mu(g) = q^-j(g),
    j(g) = dim_K(I(g) ^ W);
  * unitary (K = F_{q^2}, f from a Hermitian form):  mu(g) = (-q)^i(g),
    i(g) = dim_K I(g).

The group G lives as matrices over K; all E(f)-side geometry happens over
the prime field via restriction of scalars.  Every per-element quantity
is cached, so sweeps over many pairs stay cheap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum

from .errors import (
    NotProportional,
    SplitFailure,
    WrongCase,
)
from .extraspecial import ExtraspecialElement, ExtraspecialGroup
from .forms import (
    SesquiForm,
    TraceFormSpec,
    default_lambda,
    restrict_matrix,
    standard_form,
    trace_form,
)
from .gf import (
    GF,
    FieldElement,
    FieldSpec,
    gauss_sum,
    inverting_automorphism,
    legendre,
)
from .isometry import (
    Isometry,
    OneMinusG,
    enumerate_group,
    hyperbolic_generators,
    is_isometry,
    symplectic_generators,
    unitary_generators,
)
from .linalg import Mat, Vec, intersect_row_spaces, vec_mat, vec_sub
from .reps import MatrixRep, RepForm, invariant_form, rep_of_group


class SplitCase(Enum):
    SYMPLECTIC = "symplectic"
    HYPERBOLIC = "hyperbolic"
    UNITARY = "unitary"


class _Geometry:
    """Per-element cache: restriction, inverse, 1 - g data, Wall Gram."""

    __slots__ = ("g_k", "g_p", "inv_k", "om", "i_p", "wall", "_j_p")

    def __init__(self, g_k: Mat, g_p: Mat):
        self.g_k = g_k
        self.g_p = g_p
        self.inv_k = g_k.inv()
        self.om = OneMinusG(g_p)
        self.i_p = self.om.i_dim
        self.wall: Mat | None = None
        self._j_p: int | None = None


class WeilSetting:
    """One Section 5/6 configuration: the prime-side form and representation
    together with the K-side form, group generators and splitting data."""

    def __init__(
        self,
        case: SplitCase,
        k_form: SesquiForm,
        f_hat: SesquiForm,
        rep: MatrixRep,
        generators: list[Mat],
        w_dim: int | None = None,
    ):
        self.case = case
        self.k_form = k_form
        self.k_spec = k_form.field
        self.f_hat = f_hat
        self.rep = rep
        self.kprime = rep.field
        self.generators = generators
        self.rk = self.k_spec.r
        self.p = f_hat.field.p
        self.eta_prime = inverting_automorphism(self.kprime, rep.epsilon)
        self.rep_form: RepForm | None = (
            invariant_form(rep, self.eta_prime) if self.eta_prime is not None else None
        )
        if case is SplitCase.SYMPLECTIC:
            self.q = self.p
            self.theta = gauss_sum(self.p, rep.epsilon).code
        elif case is SplitCase.HYPERBOLIC:
            self.q = self.k_spec.q
            self.theta = None
        else:
            if self.k_spec.r % 2 != 0:
                raise WrongCase("unitary case needs |K| to be a square")
            self.q = self.k_spec.p ** (self.k_spec.r // 2)
            self.theta = None
        if w_dim is not None:
            rows = []
            n = f_hat.dim
            for i in range(w_dim * self.rk, 2 * w_dim * self.rk):
                rows.append(tuple(1 if j == i else 0 for j in range(n)))
            self.w_basis: Mat | None = Mat(f_hat.field, rows)
        else:
            self.w_basis = None
        self._geo: dict[Mat, _Geometry] = {}
        self._s: dict[Mat, Mat] = {}
        self._s_prime: dict[Mat, Mat] = {}
        self._mu: dict[Mat, int] = {}
        for m in generators:
            geo = self.geometry(m)
            if not is_isometry(geo.g_p, f_hat):
                raise WrongCase("generator does not preserve the prime-side form")

    # -- bookkeeping ---------------------------------------------------------

    def restrict(self, m: Mat) -> Mat:
        if self.rk == 1:
            return m
        return restrict_matrix(self.k_spec, m)

    def geometry(self, g: Mat) -> _Geometry:
        geo = self._geo.get(g)
        if geo is None:
            geo = _Geometry(g, self.restrict(g))
            self._geo[g] = geo
        return geo

    def i_dim(self, g: Mat) -> int:
        """dim_K I(g)."""
        i_p = self.geometry(g).i_p
        assert i_p % self.rk == 0
        return i_p // self.rk

    def j_dim(self, g: Mat) -> int:
        """dim_K (I(g) ^ W), hyperbolic case."""
        if self.w_basis is None:
            raise WrongCase("no distinguished W in this case")
        geo = self.geometry(g)
        if geo._j_p is None:
            geo._j_p = intersect_row_spaces(geo.om.image_basis, self.w_basis).nrows
        assert geo._j_p % self.rk == 0
        return geo._j_p // self.rk

    def enumerate(self, cap: int = 1_000_000) -> list[Mat]:
        return [g.mat for g in enumerate_group(self.k_form, self.generators, cap)]

    def _embed_pow(self, base: int, e: int) -> int:
        """base^e in K' for an integer base (e may be negative)."""
        spec = self.kprime
        b = base % spec.p
        if e >= 0:
            return spec.pow(b, e)
        return spec.inv(spec.pow(b, -e))

    def _wall_gram(self, geo: _Geometry) -> Mat:
        """Gram of f_g on the image basis of 1 - g, prime side."""
        if geo.wall is None:
            basis = geo.om.image_basis
            pre = [geo.om.preimage(x) for x in basis.rows]
            spec = self.f_hat.field
            rows = [
                tuple(self.f_hat.evaluate_codes(u, y) for y in basis.rows) for u in pre
            ]
            geo.wall = Mat(spec, rows, basis.nrows)
        return geo.wall

    def _quad_sum(self, gram: Mat) -> int:
        """sum of eps^(c gram c^t) over all coefficient vectors c, in K'."""
        p = self.p
        k = gram.nrows
        eps_pow = self.rep.eps_power
        spec = self.kprime
        acc = 0
        rows = gram.rows
        for c in itertools.product(range(p), repeat=k):
            val = 0
            for i, ci in enumerate(c):
                if ci:
                    row = rows[i]
                    val += ci * sum(map(int.__mul__, row, c))
            acc = spec.add(acc, eps_pow(val % p))
        return acc

    # -- the intertwiner ------------------------------------------------------

    def s_matrix(self, g: Mat) -> Mat:
        """s(g) by the image-indexed sum."""
        m = self._s.get(g)
        if m is not None:
            return m
        geo = self.geometry(g)
        wall = self._wall_gram(geo)
        spec = self.kprime
        p = self.p
        rep = self.rep
        d = rep.degree
        basis = geo.om.image_basis
        k = basis.nrows
        eps_pow = rep.eps_power
        prime = self.f_hat.field
        acc = [0] * (d * d)
        if spec.r == 1:
            pp = spec.p
            for c in itertools.product(range(p), repeat=k):
                x = (0,) * self.f_hat.dim
                val = 0
                for i, ci in enumerate(c):
                    if ci:
                        row = basis.rows[i]
                        x = tuple((a + ci * b) % p for a, b in zip(x, row))
                        val += ci * sum(map(int.__mul__, wall.rows[i], c))
                w = eps_pow(val % p)
                mx = rep.image_x(x)
                idx = 0
                for mrow in mx.rows:
                    for v in mrow:
                        if v:
                            acc[idx] += w * v
                        idx += 1
            acc = [v % pp for v in acc]
        else:
            add, mul = spec.add, spec.mul
            for c in itertools.product(range(p), repeat=k):
                x = (0,) * self.f_hat.dim
                val = 0
                for i, ci in enumerate(c):
                    if ci:
                        row = basis.rows[i]
                        x = tuple((a + ci * b) % p for a, b in zip(x, row))
                        val += ci * sum(map(int.__mul__, wall.rows[i], c))
                w = eps_pow(val % p)
                mx = rep.image_x(x)
                idx = 0
                for mrow in mx.rows:
                    for v in mrow:
                        if v:
                            acc[idx] = add(acc[idx], mul(w, v))
                        idx += 1
        scale = self._embed_pow(p, -geo.i_p)
        mul = spec.mul
        rows = [
            tuple(mul(scale, acc[i * d + j]) for j in range(d)) for i in range(d)
        ]
        m = Mat(spec, rows)
        self._s[g] = m
        return m

    def s_matrix_definition(self, g: Mat) -> Mat:
        """s(g) by the defining |V|-indexed average (audit path)."""
        geo = self.geometry(g)
        rep = self.rep
        spec = self.kprime
        d = rep.degree
        prime = self.f_hat.field
        p = self.p
        total = Mat.zeros(spec, d, d)
        for y in self.rep.group.vectors():
            yg = vec_mat(prime, y, geo.g_p)
            neg = tuple((-v) % p for v in yg)
            inv = rep.image_x(neg).scale(rep.eps_power(self.f_hat.evaluate_codes(yg, yg)))
            total = total + rep.image_x(y) * inv
        return total.scale(self._embed_pow(p, -self.f_hat.dim))

    # -- factor set ------------------------------------------------------------

    def pair_gamma(self, g: Mat, h: Mat) -> tuple[Mat, Mat]:
        """Intersection basis of I(g) ^ I(h^-1) and the Gram of gamma_{g,h}."""
        geo_g = self.geometry(g)
        geo_hi = self.geometry(self.geometry(h).inv_k)
        basis = intersect_row_spaces(geo_g.om.image_basis, geo_hi.om.image_basis)
        prime = self.f_hat.field
        rows = []
        for x in basis.rows:
            u = geo_g.om.preimage(x)
            v = geo_hi.om.preimage(x)
            w = vec_sub(prime, u, v)
            rows.append(tuple(self.f_hat.evaluate_codes(w, y) for y in basis.rows))
        return basis, Mat(prime, rows, basis.nrows)

    def factor_set(self, g: Mat, h: Mat, check: bool = True) -> int:
        """Closed-form sigma(g, h) as a K'-code; with ``check`` the value is
        compared against the empirical scalar s(g)s(h)s(gh)^-1."""
        basis, gram = self.pair_gamma(g, h)
        total = self._quad_sum(gram)
        gh = g * h
        e = (
            self.geometry(g).i_p
            + self.geometry(h).i_p
            - self.geometry(gh).i_p
        )
        sigma = self.kprime.mul(self._embed_pow(self.p, -e), total)
        if check:
            emp = self.empirical_factor_set(g, h)
            if emp != sigma:
                raise NotProportional(
                    f"closed form {sigma} != empirical scalar {emp}"
                )
        return sigma

    def empirical_factor_set(self, g: Mat, h: Mat) -> int:
        """The scalar c with s(g)s(h) = c s(gh), checked entrywise."""
        spec = self.kprime
        lhs = self.s_matrix(g) * self.s_matrix(h)
        base = self.s_matrix(g * h)
        c = None
        for lrow, brow in zip(lhs.rows, base.rows):
            for lv, bv in zip(lrow, brow):
                if bv:
                    c = spec.div(lv, bv)
                    break
            if c is not None:
                break
        if c is None:
            raise NotProportional("s(gh) is zero")
        if base.scale(c) != lhs:
            raise NotProportional("s(g)s(h) is not proportional to s(gh)")
        return c

    # -- splitting ---------------------------------------------------------------

    def wall_sign(self, g: Mat) -> int:
        """delta_g = chi(det of the Wall form), symplectic case."""
        if self.case is not SplitCase.SYMPLECTIC:
            raise WrongCase("delta is defined in the symplectic case")
        geo = self.geometry(g)
        if geo.i_p == 0:
            return 1
        det = self._wall_gram(geo).det()
        return legendre(det, self.p)

    def mu(self, g: Mat) -> int:
        """The splitting value, as a K'-code."""
        v = self._mu.get(g)
        if v is not None:
            return v
        spec = self.kprime
        if self.case is SplitCase.SYMPLECTIC:
            geo = self.geometry(g)
            i = geo.i_p
            v = spec.mul(self._embed_pow(self.p, -i), spec.pow(self.theta, i) if i else 1)
            if self.wall_sign(g) < 0:
                v = spec.neg(v)
        elif self.case is SplitCase.HYPERBOLIC:
            v = self._embed_pow(self.q, -self.j_dim(g))
        else:
            i = self.i_dim(g)
            v = self._embed_pow(-self.q, i)
        self._mu[g] = v
        return v

    def s_prime(self, g: Mat) -> Mat:
        """s'(g) = mu(g)^-1 s(g), the linearised extension."""
        m = self._s_prime.get(g)
        if m is None:
            m = self.s_matrix(g).scale(self.kprime.inv(self.mu(g)))
            self._s_prime[g] = m
        return m

    def mu_symmetry_holds(self, g: Mat) -> bool:
        """mu(g) = mu(g^-1)^eta' (only meaningful when eta' exists)."""
        if self.eta_prime is None:
            return True
        return self.mu(g) == self.eta_prime.apply_code(self.mu(self.geometry(g).inv_k))

    def dimension_identity_holds(self, g: Mat, h: Mat) -> bool:
        """Thm-5.7-style identity over K:
        dim(I(g)^I(h^-1)) + dim R_{g,h} = i(g) + i(h) - i(gh)."""
        basis, _ = self.pair_gamma(g, h)
        rad = self.pair_radical(g, h)
        rk = self.rk
        lhs = basis.nrows + rad.nrows
        rhs = (
            self.geometry(g).i_p
            + self.geometry(h).i_p
            - self.geometry(g * h).i_p
        )
        return lhs == rhs and lhs % rk == 0

    def pair_radical(self, g: Mat, h: Mat) -> Mat:
        """R_{g,h} = ker(h^-1 - g)(1 - g), prime side."""
        geo_g = self.geometry(g)
        geo_hi = self.geometry(self.geometry(h).inv_k)
        prime = self.f_hat.field
        diff = geo_hi.g_p - geo_g.g_p
        kern = diff.left_nullspace()
        n = geo_g.g_p.nrows
        if kern.nrows == 0:
            return Mat.empty(prime, n)
        rows = (vec_mat(prime, u, geo_g.om.m) for u in kern.rows)
        return Mat(prime, rows, n).row_space()

    # -- the extension -------------------------------------------------------

    def extend(
        self,
        elements: list[Mat] | None = None,
        cap: int = 1_000_000,
        verify: str = "all",
        seed: int = 0,
        max_exhaustive_pairs: int = 1_000_000,
    ) -> "WeilExtension":
        if elements is None:
            elements = self.enumerate(cap)
        n = len(elements)
        if verify == "all":
            if n * n > max_exhaustive_pairs:
                raise SplitFailure(
                    f"{n * n} pairs exceed the exhaustive bound; use sample:N"
                )
            pairs = ((g, h) for g in elements for h in elements)
            total = n * n
        elif verify.startswith("sample:"):
            count = int(verify.split(":", 1)[1])
            rng = random.Random(seed)
            pairs = (
                (elements[rng.randrange(n)], elements[rng.randrange(n)])
                for _ in range(count)
            )
            total = count
        else:
            raise ValueError(f"unknown verify mode {verify!r}")
        failures = 0
        for g, h in pairs:
            lhs = self.s_prime(g) * self.s_prime(h)
            if lhs != self.s_prime(g * h):
                failures += 1
        if failures:
            raise SplitFailure(f"{failures} of {total} pairs violate the splitting")
        for g in elements:
            if not self.mu_symmetry_holds(g):
                raise SplitFailure("mu(g) != mu(g^-1)^eta'")
        if self.rep_form is not None:
            jm = self.rep_form.gram
            eta = self.rep_form.eta
            for g in elements:
                sp = self.s_prime(g)
                if sp * jm * sp.conj_t(eta) != jm:
                    raise SplitFailure("extension does not preserve the invariant form")
        return WeilExtension(self, elements, total, seed)


@dataclass
class WeilExtension:
    """The verified linear extension: tables of mu and s', plus the
    homomorphism of the semidirect product."""

    setting: WeilSetting
    elements: list[Mat]
    verified_pairs: int
    seed: int

    def mu_table(self) -> list[tuple[Mat, int]]:
        return [(g, self.setting.mu(g)) for g in self.elements]

    def full_matrix(self, g: Mat, e: ExtraspecialElement) -> Mat:
        """The image of the semidirect-product element (g, e)."""
        return self.setting.s_prime(g) * self.setting.rep.matrix(e)

    def act_on_vector(self, g: Mat, x: Vec) -> Vec:
        return vec_mat(self.setting.f_hat.field, x, self.setting.geometry(g).g_p)

    def semidirect_product(
        self, a: tuple[Mat, ExtraspecialElement], b: tuple[Mat, ExtraspecialElement]
    ) -> tuple[Mat, ExtraspecialElement]:
        """(g1, e1)(g2, e2) = (g1 g2, e1^(g2) e2)."""
        g1, e1 = a
        g2, e2 = b
        group = self.setting.rep.group
        e1g = group.element(self.act_on_vector(g2, e1.x), e1.z)
        return (g1 * g2, e1g * e2)

    def verify_semidirect_homomorphism(self, exhaustive: bool = True, samples: int = 10000, seed: int = 0) -> int:
        """Checks the map (g, e) -> s'(g) rho(e) on products; returns the
        number of verified pairs, raising on any failure."""
        group = self.setting.rep.group
        members = [(g, e) for g in self.elements for e in group.elements()]
        table = {}
        for g, e in members:
            table[(g, e.x, e.z)] = self.full_matrix(g, e)
        if exhaustive:
            pairs = itertools.product(members, repeat=2)
            total = len(members) ** 2
        else:
            rng = random.Random(seed)
            pairs = (
                (members[rng.randrange(len(members))], members[rng.randrange(len(members))])
                for _ in range(samples)
            )
            total = samples
        for a, b in pairs:
            gp, ep = self.semidirect_product(a, b)
            lhs = table[(a[0], a[1].x, a[1].z)] * table[(b[0], b[1].x, b[1].z)]
            if lhs != table[(gp, ep.x, ep.z)]:
                raise SplitFailure("semidirect product law fails")
        return total

    def to_json_dict(self, include_s_prime: bool = False) -> dict:
        out = {
            "case": self.setting.case.value,
            "mu": [
                {"g": g.to_json(), "value": list(self.setting.kprime.decode(v))}
                for g, v in self.mu_table()
            ],
            "verified_pairs": self.verified_pairs,
            "seed": self.seed,
        }
        if include_s_prime:
            out["s_prime"] = [self.setting.s_prime(g).to_json() for g in self.elements]
        return out


# ---------------------------------------------------------------------------
# Settings factories.


def symplectic_setting(n: int, p: int, rep_field: FieldSpec) -> WeilSetting:
    from .forms import builtin_sum

    f_hat = builtin_sum(("fE",) * n, GF(p))
    rep = rep_of_group(ExtraspecialGroup(f_hat), rep_field)
    return WeilSetting(
        SplitCase.SYMPLECTIC, f_hat, f_hat, rep, symplectic_generators(n, p)
    )


def hyperbolic_setting(w_dim: int, k: FieldSpec, rep_field: FieldSpec) -> WeilSetting:
    k_form = standard_form("hyperbolic", k, w_dim)
    f_hat = trace_form(TraceFormSpec(k_form, k.one()))
    rep = rep_of_group(ExtraspecialGroup(f_hat), rep_field)
    return WeilSetting(
        SplitCase.HYPERBOLIC,
        k_form,
        f_hat,
        rep,
        hyperbolic_generators(w_dim, k),
        w_dim=w_dim,
    )


def unitary_setting(
    d: int, k: FieldSpec, rep_field: FieldSpec, lam: FieldElement | None = None
) -> WeilSetting:
    k_form = standard_form("hermitian_identity", k, d)
    if lam is None:
        lam = default_lambda(k_form)
    f_hat = trace_form(TraceFormSpec(k_form, lam))
    rep = rep_of_group(ExtraspecialGroup(f_hat), rep_field)
    return WeilSetting(
        SplitCase.UNITARY, k_form, f_hat, rep, unitary_generators(d, k)
    )
