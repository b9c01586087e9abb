"""Iterated split extensions G(f_1) x E(f_1) x E(f_2) x ...

Each level's faithful representation preserves a form; the trace of that
form down to the prime field defines the next extraspecial group, whose
type follows from the isotropic-count classification.  The case table
(symplectic / hyperbolic / unitary) is re-derived per level from the
order of the representation characteristic modulo the group prime, never
hard-coded.  Orders are kept as exact factored integers since widths like
2^80 overflow nothing here but would overflow everything else.

Small prefixes can be materialised: multiplication of tuples
(top, e_1, ..., e_d) uses the Weil-extension images of each prefix as
automorphisms of the next layer.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import (
    CapExceeded,
    DepthTooDeep,
    UnsupportedChain,
)
from .extraspecial import ExtraspecialElement, ExtraspecialGroup, IsoType
from .forms import (
    SesquiForm,
    TraceFormSpec,
    default_lambda,
    restrict_matrix,
    standard_form,
    trace_form,
)
from .gf import GF, FieldSpec, is_prime
from .isometry import unitary_group_order
from .linalg import Mat, vec_mat
from .reps import invariant_form
from .weil import (
    SplitCase,
    WeilSetting,
    symplectic_setting,
    unitary_setting,
)

MATERIALIZE_DEGREE_CAP = 81


def _ord_mod(a: int, p: int) -> int:
    """Multiplicative order of a modulo p."""
    a %= p
    if a == 0:
        raise UnsupportedChain(f"{a} not invertible mod {p}")
    k, v = 1, a
    while v != 1:
        v = (v * a) % p
        k += 1
    return k


@dataclass
class TowerLevel:
    """One rung: the extraspecial group E(f_i) plus the data of the
    representation used to climb to the next rung.  index 0 is the base
    isometry group."""

    index: int
    prime: int
    iso: IsoType | None
    label: str
    split_case: SplitCase | None
    rep_degree: int | None
    rep_field: tuple[int, int] | None  # (characteristic, degree)
    order_factors: dict[int, int] = field(default_factory=dict)

    def order_exponent(self) -> int | None:
        if self.iso is None:
            return None
        return 2 * self.iso.n + 1

    def concrete(self) -> bool:
        return self.rep_degree is not None and self.rep_degree <= MATERIALIZE_DEGREE_CAP

    def to_json_dict(self) -> dict:
        if self.iso is None:
            return {
                "index": self.index,
                "group": self.label,
                "order_factors": {str(p): e for p, e in sorted(self.order_factors.items())},
            }
        return {
            "index": self.index,
            "prime": self.prime,
            "iso_type": self.iso.label(),
            "order": {"p": self.prime, "exponent": str(self.order_exponent())},
            "split_case": self.split_case.value if self.split_case else None,
            "concrete": self.concrete(),
        }


# widths beyond this stay symbolic: the representation degree p^n is
# recorded as (p, n) instead of being evaluated
_WIDTH_EVAL_BOUND = 512


def _rep_data(group_prime: int, n: int, rep_char: int) -> tuple[int | None, tuple[int, int]]:
    """Degree and field of the faithful irreducible representation of an
    extraspecial group of width n over ``group_prime``, realised over a
    field of characteristic ``rep_char``.  Degree is None when p^n is too
    large to evaluate (it is always group_prime ** n)."""
    if not is_prime(rep_char) or rep_char == group_prime:
        raise UnsupportedChain(
            f"representation characteristic {rep_char} invalid for a "
            f"{group_prime}-group"
        )
    if group_prime == 2:
        deg_field = 1  # -1 lives in every odd-characteristic prime field
    else:
        deg_field = _ord_mod(rep_char, group_prime)
    degree = group_prime**n if n <= _WIDTH_EVAL_BOUND else None
    return degree, (rep_char, deg_field)


def next_level(level: TowerLevel, rep_char: int | None = None) -> TowerLevel:
    """The classification of E(f_{i+1}) from level i's representation:
    Hermitian invariant form when ord_p(p') is even (unitary case),
    alternating over the prime field for minus-type 2-groups (symplectic
    case), and the contragredient-sum hyperbolic case otherwise."""
    if level.iso is None:
        raise UnsupportedChain("base level has no representation data")
    iso = level.iso
    p = level.prime
    pp, rr = level.rep_field
    d = level.rep_degree
    if d is None:
        raise UnsupportedChain(
            f"level {level.index} width {level.iso.n} exceeds the symbolic "
            "evaluation bound; the next width cannot be represented"
        )
    if iso.tag == "En":
        if rr % 2 == 0:
            s = rr // 2
            n_next = s * d
            if pp == 2:
                tag = "Dn" if d % 2 == 0 else "Dn1Q"
            else:
                tag = "En"
            case = SplitCase.UNITARY
        else:
            n_next = rr * d
            tag = "Dn" if pp == 2 else "En"
            case = SplitCase.HYPERBOLIC
    elif iso.tag == "Dn1Q":
        # the unique irreducible preserves an alternating form over F_pp
        n_next = d // 2
        tag = "En"
        case = SplitCase.SYMPLECTIC
    else:  # Dn: symmetric form only, take the contragredient sum
        n_next = rr * d
        tag = "Dn" if pp == 2 else "En"
        case = SplitCase.HYPERBOLIC
    new_prime = pp
    new_iso = IsoType(tag, n_next)
    if rep_char is None:
        rep_char = level.prime
    new_degree, new_field = _rep_data(new_prime, n_next, rep_char)
    return TowerLevel(
        index=level.index + 1,
        prime=new_prime,
        iso=new_iso,
        label=new_iso.display(),
        split_case=case,
        rep_degree=new_degree,
        rep_field=new_field,
        order_factors={new_prime: 2 * n_next + 1},
    )


def build_tower(start: str, levels: int, dim: int = 1) -> list[TowerLevel]:
    """Level descriptors for a named chain.

    start: "sp2f3" (Sp_2(F_3) on the alternating plane), "gl2f3" (same
    chain under GL_2(F_3); structural bookkeeping only), or
    "hermitian:p1,p2,..." (Hermitian forms over F_{p_i^2}, needing
    ord_{p_i}(p_{i+1}) even, e.g. p_i | p_{i+1} + 1).
    """
    out: list[TowerLevel] = []
    if start in ("sp2f3", "gl2f3"):
        if start == "sp2f3":
            base = TowerLevel(0, 3, None, "Sp2(F3)", SplitCase.SYMPLECTIC, None, None, {2: 3, 3: 1})
        else:
            base = TowerLevel(0, 3, None, "GL2(F3)", SplitCase.SYMPLECTIC, None, None, {2: 4, 3: 1})
        out.append(base)
        if levels >= 1:
            deg, fld = _rep_data(3, 1, 2)
            out.append(
                TowerLevel(1, 3, IsoType("En", 1), "E", SplitCase.SYMPLECTIC, deg, fld, {3: 3})
            )
    elif start.startswith("hermitian:"):
        primes = [int(v) for v in start.split(":", 1)[1].split(",")]
        if len(primes) < 2:
            raise UnsupportedChain("hermitian chains need at least two primes")
        # the declared list repeats cyclically; every consecutive pair
        # (including the wrap-around) must satisfy the even-order condition
        for a, b in zip(primes, primes[1:] + primes[:1]):
            if not (is_prime(a) and is_prime(b)) or a == 2 or b == 2:
                raise UnsupportedChain("hermitian chains use odd primes")
            if _ord_mod(b, a) % 2 != 0:
                raise UnsupportedChain(
                    f"ord_{a}({b}) must be even (e.g. {a} | {b}+1 fails)"
                )
        p1 = primes[0]
        order = unitary_group_order(dim, p1)
        base = TowerLevel(
            0, p1, None, f"GU{dim}({p1})", SplitCase.UNITARY, None, None, _factorize_dict(order)
        )
        out.append(base)
        if levels >= 1:
            deg, fld = _rep_data(p1, dim, primes[1 % len(primes)])
            out.append(
                TowerLevel(
                    1, p1, IsoType("En", dim), IsoType("En", dim).display(),
                    SplitCase.UNITARY, deg, fld, {p1: 2 * dim + 1},
                )
            )
        for i in range(2, levels + 1):
            out.append(next_level(out[-1], rep_char=primes[i % len(primes)]))
        return out
    else:
        raise UnsupportedChain(f"unknown tower start {start!r}")
    for i in range(2, levels + 1):
        out.append(next_level(out[-1]))
    return out


def _factorize_dict(n: int) -> dict[int, int]:
    from .gf import factorize

    return factorize(n)


def total_order_factors(levels: list[TowerLevel]) -> dict[int, int]:
    out: dict[int, int] = {}
    for lv in levels:
        for p, e in lv.order_factors.items():
            out[p] = out.get(p, 0) + e
    return out


# ---------------------------------------------------------------------------
# Materialization of the Sp_2(F_3) chain.


def _sp2f3_setting(level_index: int) -> WeilSetting:
    f4 = GF(2, 2)
    f3 = GF(3)
    if level_index == 1:
        return symplectic_setting(1, 3, f4)
    if level_index == 2:
        return unitary_setting(3, f4, f3)
    if level_index == 3:
        return symplectic_setting(4, 3, f4)
    raise DepthTooDeep(
        f"level {level_index} representation exceeds the degree cap "
        f"{MATERIALIZE_DEGREE_CAP}"
    )


@dataclass(frozen=True)
class TowerElement:
    top: Mat
    layers: tuple[ExtraspecialElement, ...]

    def __repr__(self) -> str:
        return f"TowerElement(top={[list(r) for r in self.top.rows]}, layers={list(self.layers)})"


class TowerGroup:
    """Concrete multiplication for depth-d prefixes of the Sp_2(F_3) tower
    (or the GL_2(F_3) variant at depth 1, acting by similitudes)."""

    def __init__(self, start: str, depth: int):
        if depth < 1:
            raise DepthTooDeep("depth must be >= 1")
        self.start = start
        self.depth = depth
        self.similitude_top = start == "gl2f3"
        if self.similitude_top and depth > 1:
            raise DepthTooDeep(
                "GL2(F3) towers materialise at depth 1 only; deeper levels "
                "need the crossed-representation machinery"
            )
        if depth > 4:
            raise DepthTooDeep("representation degree exceeds the cap past depth 4")
        self.settings: list[WeilSetting] = [
            _sp2f3_setting(i) for i in range(1, depth)
        ]
        self.layer_groups: list[ExtraspecialGroup] = []
        for i in range(depth):
            if i < len(self.settings):
                self.layer_groups.append(self.settings[i].rep.group)
            elif i == 0:
                self.layer_groups.append(
                    ExtraspecialGroup(standard_form("fE", GF(3)))
                )
            else:
                prev = self.settings[i - 1]
                jform = prev.rep_form
                assert jform is not None
                sform = SesquiForm(jform.gram.spec, jform.gram, jform.eta)
                lam = default_lambda(sform)
                self.layer_groups.append(
                    ExtraspecialGroup(trace_form(TraceFormSpec(sform, lam)))
                )
        self.top_elements = self._enumerate_top()
        self._dets = {m: m.det() for m in self.top_elements} if self.similitude_top else None
        self._prefix_cache: list[dict] = [dict() for _ in range(depth)]
        self._action_cache: list[dict] = [dict() for _ in range(depth)]

    def _enumerate_top(self) -> list[Mat]:
        spec = GF(3)
        out = []
        for entries in itertools.product(range(3), repeat=4):
            m = Mat(spec, [entries[:2], entries[2:]])
            if m.det() == 0:
                continue
            if self.similitude_top or is_symplectic_2x2(m):
                out.append(m)
        return out

    def order(self) -> int:
        n = len(self.top_elements)
        for g in self.layer_groups:
            n *= g.order()
        return n

    def identity(self) -> TowerElement:
        return TowerElement(
            Mat.identity(GF(3), 2),
            tuple(g.identity() for g in self.layer_groups),
        )

    def random_element(self, rng: random.Random) -> TowerElement:
        top = self.top_elements[rng.randrange(len(self.top_elements))]
        layers = []
        for g in self.layer_groups:
            x = tuple(rng.randrange(g.p) for _ in range(g.dim))
            layers.append(g.element(x, rng.randrange(g.p)))
        return TowerElement(top, tuple(layers))

    def _prefix_image(self, k: int, top: Mat, layers: tuple) -> Mat:
        """K-side matrix in G(f_{k+1}) of the prefix (top, layers[:k])."""
        if k == 0:
            return top
        key = (top, tuple((e.x, e.z) for e in layers[:k]))
        cache = self._prefix_cache[k]
        m = cache.get(key)
        if m is None:
            setting = self.settings[k - 1]
            prev = self._prefix_image(k - 1, top, layers)
            m = setting.s_prime(prev) * setting.rep.matrix(layers[k - 1])
            cache[key] = m
        return m

    def _action_matrix(self, k: int, top: Mat, layers: tuple) -> Mat:
        """Prime-side matrix by which the prefix acts on layer k + 1: the
        prefix image lives over the representation field of level k, which
        is the form field of level k + 1."""
        u = self._prefix_image(k, top, layers)
        cache = self._action_cache[k]
        m = cache.get(u)
        if m is None:
            if k == 0:
                m = u
            else:
                kprime = self.settings[k - 1].kprime
                m = restrict_matrix(kprime, u) if kprime.r > 1 else u
            cache[u] = m
        return m

    def multiply(self, a: TowerElement, b: TowerElement) -> TowerElement:
        top = a.top * b.top
        layers = []
        for i in range(self.depth):
            group = self.layer_groups[i]
            act = self._action_matrix(i, b.top, b.layers)
            moved_x = vec_mat(group.spec, a.layers[i].x, act)
            z = a.layers[i].z
            if i == 0 and self.similitude_top:
                z = (z * self._dets[b.top]) % group.p
            moved = ExtraspecialElement(group, moved_x, z)
            layers.append(moved * b.layers[i])
        return TowerElement(top, tuple(layers))

    def inverse(self, a: TowerElement) -> TowerElement:
        top = a.top.inv()
        layers: list[ExtraspecialElement] = []
        for i in range(self.depth):
            group = self.layer_groups[i]
            partial = TowerElement(top, tuple(layers) + tuple(
                group.identity() for _ in range(self.depth - len(layers))
            ))
            act = self._action_matrix(i, partial.top, partial.layers)
            moved_x = vec_mat(group.spec, a.layers[i].x, act)
            z = a.layers[i].z
            if i == 0 and self.similitude_top:
                z = (z * self._dets[top]) % group.p
            moved = ExtraspecialElement(group, moved_x, z)
            layers.append(moved.inverse())
        return TowerElement(top, tuple(layers))


def is_symplectic_2x2(m: Mat) -> bool:
    return m.det() == 1


def materialize(start: str, depth: int) -> TowerGroup:
    return TowerGroup(start, depth)


# ---------------------------------------------------------------------------
# Derived series of small enumerated groups.


def derived_series(
    elements: list, mul, identity, cap: int = 2_000_000
) -> list[frozenset]:
    """Successive commutator subgroups by enumeration; stops at the
    trivial group (or at a perfect term)."""
    if len(elements) > cap:
        raise CapExceeded(f"group of order {len(elements)} exceeds cap {cap}")
    current = frozenset(elements)
    series = [current]
    while len(current) > 1:
        inv = {}
        for a in current:
            x = a
            while mul(x, a) != identity:
                x = mul(x, a)
            inv[a] = x
        comms = set()
        cur_list = list(current)
        for a in cur_list:
            ia = inv[a]
            for b in cur_list:
                comms.add(mul(mul(ia, inv[b]), mul(a, b)))
        nxt_group = _closure(comms, mul, identity, cap)
        if nxt_group == current:
            break
        series.append(nxt_group)
        current = nxt_group
    return series


def _closure(gens: set, mul, identity, cap: int) -> frozenset:
    seen = set(gens)
    seen.add(identity)
    frontier = list(seen)
    gen_list = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for g in gen_list:
                c = mul(a, g)
                if c not in seen:
                    seen.add(c)
                    new.append(c)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds cap {cap}")
        frontier = new
    return frozenset(seen)


# ---------------------------------------------------------------------------
# The GL_2(F_3) examples of the derived-length computation.


def gl2f3_elements() -> list[Mat]:
    spec = GF(3)
    out = []
    for entries in itertools.product(range(3), repeat=4):
        m = Mat(spec, [entries[:2], entries[2:]])
        if m.det() != 0:
            out.append(m)
    return out


def gl2f3_semidirect():
    """GL_2(F_3) acting on the order-27 group by similitudes:
    returns (elements, mul, identity, layer subgroup sets).

    Elements are integer triples (matrix index, vector code, z); all
    products reduce to table lookups so the derived series of the
    1296-element group enumerates quickly.
    """
    spec = GF(3)
    f = standard_form("fE", spec)
    group = ExtraspecialGroup(f)
    gl = gl2f3_elements()
    index = {m: i for i, m in enumerate(gl)}
    n = len(gl)
    mul_mat = [[index[a * b] for b in gl] for a in gl]
    dets = [m.det() for m in gl]
    vecs = [(a, b) for a in range(3) for b in range(3)]
    vcode = {v: i for i, v in enumerate(vecs)}
    act = [
        [vcode[vec_mat(spec, v, m)] for m in gl]
        for v in vecs
    ]
    addv = [[vcode[((u[0] + v[0]) % 3, (u[1] + v[1]) % 3)] for v in vecs] for u in vecs]
    fval = [[group.form_value(u, v) for v in vecs] for u in vecs]

    def mul(a, b):
        m1, x1, z1 = a
        m2, x2, z2 = b
        x1g = act[x1][m2]
        return (
            mul_mat[m1][m2],
            addv[x1g][x2],
            (z1 * dets[m2] + z2 + fval[x1g][x2]) % 3,
        )

    ident = (index[Mat.identity(spec, 2)], 0, 0)
    elements = [(mi, xi, z) for mi in range(n) for xi in range(9) for z in range(3)]
    # layer subgroups: H x E for H in the derived series of GL_2(F_3),
    # then Z(E) and 1
    gl_series = derived_series(gl, lambda a, b: a * b, Mat.identity(spec, 2))
    layers = []
    for h in gl_series:
        hs = {index[m] for m in h}
        layers.append(frozenset((mi, xi, z) for mi in hs for xi in range(9) for z in range(3)))
    layers.append(frozenset((ident[0], 0, z) for z in range(3)))
    layers.append(frozenset({ident}))
    return elements, mul, ident, layers
