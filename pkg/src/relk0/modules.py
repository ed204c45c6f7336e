"""Finite modules over Z_l[G]: presentations, annihilators, Fitting ideals,
Pontryagin duals and minimal generator counts.

A :class:`ConcreteModule` is a direct sum of cyclic groups Z/l^e_j with one
action matrix per invariant-factor generator of G. Action matrices act on
coordinate columns: ``g * y_j = sum_i A[i][j] y_i`` and row i is reduced
mod l^e_i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import NotFinite, NotIntegral, NotLPower, PrecisionMismatch, PrecisionTooLow, TooLarge
from .finitefield import GF, splitting_degree
from .grouprings import INT, FiniteAbelianGroup, FractionalGroupRingElement, GroupRingElement
from .linalg import (
    GroupRingMatrix,
    HowellBasis,
    all_minors,
    howell_form,
    kernel_mod,
    residue_membership,
    smith_normal_form,
)

DEFAULT_GUARD = 8


def _val(x: int, l: int) -> int:
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


def _split_l(s: int, l: int) -> tuple[int, int]:
    """s = l^e * u with l not dividing u."""
    e = 0
    while s % l == 0:
        s //= l
        e += 1
    return e, s


# ---------------------------------------------------------------------------
# concrete modules


@dataclass(frozen=True, eq=False)
class ConcreteModule:
    group: FiniteAbelianGroup
    l: int
    factors: tuple
    actions: tuple

    def __post_init__(self):
        factors = tuple(int(e) for e in self.factors)
        if any(e < 1 for e in factors):
            raise ValueError("cyclic factor exponents must be >= 1")
        k = len(factors)
        if len(self.actions) != self.group.rank:
            raise ValueError("one action matrix per group generator required")
        acts = []
        for A in self.actions:
            if len(A) != k or any(len(r) != k for r in A):
                raise ValueError("action matrix has the wrong shape")
            acts.append(self._reduce([list(r) for r in A], factors))
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "actions", tuple(acts))

    def _reduce(self, A, factors=None):
        factors = self.factors if factors is None else factors
        l = self.l
        return tuple(tuple(x % l**e for x in row) for row, e in zip(A, factors))

    @classmethod
    def zero(cls, group, l):
        return cls(group, l, (), tuple(() for _ in range(group.rank)))

    @classmethod
    def trivial_cyclic(cls, group, l, e):
        """Z/l^e with trivial G-action."""
        return cls(group, l, (e,), tuple(((1,),) for _ in range(group.rank)))

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return self.l ** sum(self.factors)

    @property
    def e_max(self) -> int:
        return max(self.factors, default=0)

    @property
    def moduli(self):
        return [self.l**e for e in self.factors]

    def is_zero(self) -> bool:
        return self.k == 0

    def matmul(self, A, B):
        k = self.k
        return self._reduce([[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(k)] for i in range(k)])

    def identity(self):
        return self._reduce([[int(i == j) for j in range(self.k)] for i in range(self.k)])

    def mat_pow(self, A, n):
        R, B = self.identity(), A
        while n:
            if n & 1:
                R = self.matmul(R, B)
            B = self.matmul(B, B)
            n >>= 1
        return R

    @cached_property
    def element_matrices(self) -> tuple:
        """Action matrix of every group element, in canonical element order."""
        G = self.group
        out = []
        for idx in range(G.order):
            M = self.identity()
            for A, a in zip(self.actions, G.exponents(idx)):
                if a:
                    M = self.matmul(M, self.mat_pow(A, a))
            out.append(M)
        return tuple(out)

    def check(self):
        """Verify commutation, group relations and factor compatibility."""
        for A, d in zip(self.actions, self.group.invariant_factors):
            if self.mat_pow(A, d) != self.identity():
                raise ValueError("action violates the group relation g^d = 1")
            for i in range(self.k):
                for j in range(self.k):
                    if A[i][j] * self.l ** self.factors[j] % self.l ** self.factors[i]:
                        raise ValueError("action incompatible with factor orders")
        for A, B in itertools.combinations(self.actions, 2):
            if self.matmul(A, B) != self.matmul(B, A):
                raise ValueError("action matrices do not commute")
        return True

    def act_matrix(self, r: GroupRingElement):
        """Matrix of multiplication by r (integer or residue scalars)."""
        k = self.k
        out = [[0] * k for _ in range(k)]
        for idx, c in enumerate(r.coeffs):
            c = int(c) if not hasattr(c, "denominator") or c.denominator == 1 else None
            if c is None:
                raise NotIntegral("act_matrix needs integral coefficients")
            if c:
                M = self.element_matrices[idx]
                for i in range(k):
                    for j in range(k):
                        out[i][j] += c * M[i][j]
        return self._reduce(out)

    def act(self, r: GroupRingElement, vec):
        A = self.act_matrix(r)
        return tuple(sum(A[i][j] * vec[j] for j in range(self.k)) % m for i, m in enumerate(self.moduli))

    def kills(self, r: GroupRingElement) -> bool:
        return not any(x for row in self.act_matrix(r) for x in row)

    def direct_sum(self, other: "ConcreteModule") -> "ConcreteModule":
        k1, k2 = self.k, other.k
        acts = []
        for A, B in zip(self.actions, other.actions):
            M = [list(r) + [0] * k2 for r in A] + [[0] * k1 + list(r) for r in B]
            acts.append(M)
        return ConcreteModule(self.group, self.l, self.factors + other.factors, tuple(acts))

    def elements(self):
        return itertools.product(*(range(m) for m in self.moduli))

    def to_dict(self):
        return {"factors": list(self.factors), "actions": [[list(r) for r in A] for A in self.actions]}


def quotient_module(relations, n, row_actions, group, l, strict=True) -> ConcreteModule:
    """l-primary part of Z^n / (row span of ``relations``) as a ConcreteModule.

    ``row_actions`` holds, per group generator, an n x n integer matrix P with
    the action v -> v P on row vectors. With ``strict`` a quotient whose order
    is not a power of l raises NotLPower.
    """
    rels = [list(r) for r in relations if any(r)]
    if n == 0:
        return ConcreteModule.zero(group, l)
    if not rels:
        raise NotFinite("quotient of a nonzero lattice by nothing is infinite")
    snf = smith_normal_form(rels)
    diag = snf.diagonal + [0] * (n - len(snf.diagonal))
    if any(s == 0 for s in diag):
        raise NotFinite("cokernel has a free part")
    keep, units = [], []
    for j, s in enumerate(diag):
        e, u = _split_l(s, l)
        if strict and u != 1:
            raise NotLPower(f"invariant factor {s} is not a power of {l}")
        if e:
            keep.append((j, e))
            units.append(u)
    V, Vi = snf.V, snf.V_inv
    factors = tuple(e for _, e in keep)
    acts = []
    for P in row_actions:
        A = [[0] * len(keep) for _ in keep]
        for c, (j, _) in enumerate(keep):
            y = Vi[j]
            yP = [sum(y[t] * P[t][s] for t in range(n)) for s in range(n)]
            w = [sum(yP[t] * V[t][s] for t in range(n)) for s in range(n)]
            for r, (i, ei) in enumerate(keep):
                q = l**ei
                A[r][c] = units[c] * w[i] * pow(units[r], -1, q) % q
        acts.append(A)
    return ConcreteModule(group, l, factors, tuple(acts))


def regular_row_actions(group, b):
    """Row-vector matrices of each generator acting on R^b, R = Z[G]."""
    n = group.order
    table = group.mul_table
    out = []
    for i in range(group.rank):
        g = group.generator(i)
        P = [[0] * (b * n) for _ in range(b * n)]
        for j in range(b):
            for h in range(n):
                P[j * n + h][j * n + table[g][h]] = 1
        out.append(P)
    return out


def _translates(group, vec_of_elements):
    """All h * (x_1, ..., x_b) as integer row vectors of length b|G|."""
    out = []
    for h in range(group.order):
        hb = GroupRingElement.basis(group, h, vec_of_elements[0].domain)
        row = []
        for x in vec_of_elements:
            row.extend(int(c) for c in (hb * x).coeffs)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True, eq=False)
class PresentedModule:
    """Cokernel of R^a -> R^b; rows of ``matrix`` are relations among b generators."""

    group: FiniteAbelianGroup
    l: int
    matrix: GroupRingMatrix

    def __post_init__(self):
        if self.matrix.domain != INT:
            raise ValueError("presentation matrices have integer scalars")

    @property
    def num_generators(self) -> int:
        return self.matrix.cols

    def padded(self) -> GroupRingMatrix:
        """Pad with zero relation rows up to a >= b."""
        a, b = self.matrix.rows, self.matrix.cols
        if a >= b:
            return self.matrix
        z = GroupRingMatrix.zeros(self.group, b - a, b, INT)
        return GroupRingMatrix.block([[self.matrix], [z]])

    def relation_lattice(self):
        rows = []
        for r in self.matrix.entries:
            rows.extend(_translates(self.group, list(r)))
        return rows


def realize(pm: PresentedModule) -> ConcreteModule:
    b = pm.num_generators
    return quotient_module(
        pm.relation_lattice(), b * pm.group.order, regular_row_actions(pm.group, b), pm.group, pm.l
    )


def _embedded_images(M: ConcreteModule):
    """Injective embedding of M into (Z/l^E)^k, E = e_max, as a function."""
    E = M.e_max
    scales = [M.l ** (E - e) for e in M.factors]
    return lambda vec: [v * s for v, s in zip(vec, scales)]


def presentation_of(M: ConcreteModule) -> PresentedModule:
    """A presentation of M with few generators and relations.

    Generators are lifts of a generating set of M/(l M + I_{G_1} M); relations
    are R-generators of the kernel of R^b -> M taken mod l^E together with
    the l^E multiples of the basis vectors (E = e_max).
    """
    G, l = M.group, M.l
    if M.is_zero():
        return PresentedModule(G, l, GroupRingMatrix.zeros(G, 0, 0, INT))
    gens = _nakayama_generators(M)
    E = M.e_max
    n = G.order
    embed = _embedded_images(M)
    b = len(gens)
    # column (j, g): image of g * y_{gens[j]} in (Z/l^E)^k
    cols = []
    for j in gens:
        for g in range(n):
            col = [M.element_matrices[g][i][j] for i in range(M.k)]
            cols.append(embed(col))
    T = [[cols[c][i] for c in range(b * n)] for i in range(M.k)]
    kernel = kernel_mod(T, l, E, b * n)
    # greedy R-generators of the kernel mod l^E
    chosen, span = [], howell_form([], l, E, b * n)
    base_rows = []
    for v in kernel:
        if residue_membership(span, v):
            continue
        chosen.append(v)
        elems = _vector_to_elements(G, v, b)
        base_rows.extend(_translates(G, elems))
        span = howell_form(base_rows, l, E, b * n)
    rels = [_vector_to_elements(G, v, b) for v in chosen]
    for j in range(b):
        rels.append(
            [GroupRingElement.scalar(G, l**E if t == j else 0) for t in range(b)]
        )
    return PresentedModule(G, l, GroupRingMatrix(G, INT, rels, len(rels), b))


def _vector_to_elements(G, v, b):
    n = G.order
    return [GroupRingElement(G, INT, tuple(v[j * n:(j + 1) * n])) for j in range(b)]


# ---------------------------------------------------------------------------
# Nakayama reduction and minimal generators


def _rref_mod_p(rows, p, ncols):
    R = [[x % p for x in r] for r in rows]
    out, piv = [], []
    for c in range(ncols):
        q = next((i for i, r in enumerate(R) if r[c]), None)
        if q is None:
            continue
        r = R.pop(q)
        inv = pow(r[c], -1, p)
        r = [x * inv % p for x in r]
        R = [[(a - row[c] * b) % p for a, b in zip(row, r)] if row[c] else row for row in R]
        out = [[(a - o[c] * b) % p for a, b in zip(o, r)] if o[c] else o for o in out]
        out.append(r)
        piv.append(c)
    return out, piv


@dataclass
class _TopQuotient:
    """V = M / (l M + I_{G_1} M) with the induced action of H."""

    dim: int
    basis: list  # indices of cyclic generators lifting a basis of V
    h_actions: list  # (matrix over F_l on V, order of h)
    reduce: object


def _top_quotient(M: ConcreteModule) -> _TopQuotient:
    l, k, G = M.l, M.k, M.group
    split = G.sylow_l_part(l)
    wrows = []
    for g, _ in split.sylow_generators:
        A = M.element_matrices[g]
        for j in range(k):
            wrows.append([(A[i][j] - int(i == j)) % l for i in range(k)])
    W, piv = _rref_mod_p(wrows, l, k)
    free = [j for j in range(k) if j not in set(piv)]

    def reduce(v):
        v = [x % l for x in v]
        for row, c in zip(W, piv):
            if v[c]:
                f = v[c]
                v = [(a - f * b) % l for a, b in zip(v, row)]
        return [v[j] for j in free]

    hs = []
    for h, m in split.complement_generators:
        A = M.element_matrices[h]
        B = [reduce([A[i][j] for i in range(k)]) for j in free]  # columns
        hs.append(([[B[c][r] for c in range(len(free))] for r in range(len(free))], m))
    return _TopQuotient(len(free), free, hs, reduce)


def min_generators(M: ConcreteModule) -> int:
    """Minimal number of Z_l[G]-module generators of M.

    By Nakayama this is the number for V = M/(lM + I_{G_1}M) over the
    semisimple algebra F_l[H], H the prime-to-l part of G. Over a splitting
    field F_{l^s} of H, V splits into character eigenspaces V_chi, and the
    answer is the largest dim V_chi (every simple component of F_l[H] has
    all its Galois-conjugate characters with equal multiplicity).
    """
    if M.is_zero():
        return 0
    top = _top_quotient(M)
    if top.dim == 0:
        return 0
    if not top.h_actions:
        return top.dim
    orders = [m for _, m in top.h_actions]
    m = math.lcm(*orders)
    F = GF(M.l, splitting_degree(M.l, m))
    zeta = F.root_of_unity(m)
    d = top.dim
    mats = [[[F.from_int(x) for x in row] for row in B] for B, _ in top.h_actions]
    best = 0
    for js in itertools.product(*(range(o) for o in orders)):
        stacked = []
        for B, j, o in zip(mats, js, orders):
            lam = F.pow(zeta, j * (m // o))
            for r in range(d):
                stacked.append([F.sub(B[r][c], lam if r == c else F.zero) for c in range(d)])
        best = max(best, d - F.rank(stacked))
    return best


def _nakayama_generators(M: ConcreteModule) -> list[int]:
    """Cyclic-generator indices whose images generate V over F_l[H]."""
    top = _top_quotient(M)
    l = M.l
    k = M.k
    split = M.group.sylow_l_part(l)
    H_elements = _subgroup_elements(M.group, [h for h, _ in split.complement_generators])
    chosen, span = [], []
    for j in top.basis:
        vec = [int(i == j) for i in range(k)]
        orbit = []
        for h in H_elements:
            A = M.element_matrices[h]
            orbit.append(top.reduce([sum(A[i][t] * vec[t] for t in range(k)) for i in range(k)]))
        trial = span + orbit
        if _rank_p(trial, l) > _rank_p(span, l):
            chosen.append(j)
            span = trial
            if _rank_p(span, l) == top.dim:
                break
    return chosen


def _rank_p(rows, p):
    if not rows or not rows[0]:
        return 0
    return len(_rref_mod_p(rows, p, len(rows[0]))[1])


def _subgroup_elements(G, gens):
    elems = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return sorted(elems)


# ---------------------------------------------------------------------------
# duality and quotients


def pontryagin_dual(M: ConcreteModule) -> ConcreteModule:
    """Hom(M, Q_l/Z_l) with (g f)(m) = f(g^-1 m), in the dual cyclic basis."""
    G, l, e = M.group, M.l, M.factors
    acts = []
    for i in range(G.rank):
        g = G.generator(i)
        B = M.element_matrices[G.inverses[g]]
        C = [[0] * M.k for _ in range(M.k)]
        for a in range(M.k):
            for j in range(M.k):
                x = B[j][a]
                if e[a] >= e[j]:
                    C[a][j] = x * l ** (e[a] - e[j])
                else:
                    C[a][j] = x // l ** (e[j] - e[a])
        acts.append(C)
    return ConcreteModule(G, l, e, tuple(acts))


def quotient(M: ConcreteModule, vectors) -> ConcreteModule:
    """M / (R-submodule generated by ``vectors``)."""
    k, G = M.k, M.group
    rels = [[M.l**e if i == j else 0 for i in range(k)] for j, e in enumerate(M.factors)]
    for v in vectors:
        for g in range(G.order):
            A = M.element_matrices[g]
            rels.append([sum(A[i][t] * v[t] for t in range(k)) for i in range(k)])
    row_actions = [[[A[j][i] for j in range(k)] for i in range(k)] for A in M.actions]
    return quotient_module(rels, k, row_actions, G, M.l)


def restrict_scalars_order(M: ConcreteModule):
    return M.order


# ---------------------------------------------------------------------------
# ideals


class IdealHandle:
    """Finitely generated ideal of Z_l[G], held through its images mod l^N.

    Bases are computed at the working precision N and at N + guard. When
    ``exact_power`` is given the ideal is known to contain l^exact_power, and
    membership at any N >= exact_power is exact.
    """

    def __init__(self, group, l, N, generators, guard=DEFAULT_GUARD, exact_power=None):
        if exact_power is not None and N < exact_power:
            raise PrecisionTooLow(f"precision {N} below the exact bound {exact_power}")
        self.group = group
        self.l = l
        self.N = N
        self.guard = guard
        self.exact_power = exact_power
        self.generators = tuple(g.lift() if g.domain.kind == "mod" else g for g in generators)
        self.basis = self._basis(N)
        self.guard_basis = self._basis(N + guard)

    def _basis(self, N) -> HowellBasis:
        rows = []
        for s in self.generators:
            rows.extend(_translates(self.group, [s]))
        return howell_form(rows, self.l, N, self.group.order)

    def __repr__(self):
        return f"IdealHandle(l={self.l}, N={self.N}, basis={list(self.basis.rows)})"

    def elements(self) -> list[GroupRingElement]:
        """Howell basis rows lifted to integer group ring elements."""
        return [GroupRingElement(self.group, INT, r) for r in self.basis.rows]

    def generators_with_power(self) -> list[GroupRingElement]:
        out = self.elements()
        if self.exact_power is not None:
            out.append(GroupRingElement.scalar(self.group, self.l**self.exact_power))
        return out

    def contains(self, x) -> bool:
        return ideal_contains(self, x)

    def same_as(self, other: "IdealHandle") -> bool:
        return self.N == other.N and self.basis == other.basis

    def tau(self) -> "IdealHandle":
        return IdealHandle(
            self.group, self.l, self.N, [g.tau() for g in self.generators], self.guard, self.exact_power
        )

    def is_unit_ideal(self) -> bool:
        return residue_membership(self.basis, [1] + [0] * (self.group.order - 1))

    def augmentation_valuation(self):
        """v with augmentation(I) = l^v Z_l (capped at N)."""
        v = self.N
        for r in self.basis.rows:
            a = sum(r) % self.l**self.N
            if a:
                v = min(v, _val(a, self.l))
        return v

    def to_dict(self):
        return {
            "group": list(self.group.invariant_factors),
            "l": self.l,
            "N": self.N,
            "generators": [[int(c) for c in g.coeffs] for g in self.generators],
        }


def _residues(x, l, N):
    if isinstance(x, FractionalGroupRingElement):
        if not x.is_integral():
            raise NotIntegral(f"element has l-denominator l^{x.denom_exponent}")
        x = x.numerator
    if x.domain.kind == "rat" and not x.is_l_integral(l):
        raise NotIntegral(f"{x} is not {l}-integral")
    return list(x.reduce(l, N).coeffs)


def ideal_contains(I: IdealHandle, x) -> bool:
    hi = I.N + I.guard
    if isinstance(x, GroupRingElement) and x.domain.kind == "mod":
        if x.domain.l != I.l or x.domain.N < I.N:
            raise PrecisionTooLow(f"residue known mod {x.domain.l}^{x.domain.N}, ideal held at {I.l}^{I.N}")
        if x.domain.N < hi:
            # no extra digits to cross-check against
            return residue_membership(I.basis, _residues(x, I.l, I.N))
    a = residue_membership(I.basis, _residues(x, I.l, I.N))
    b = residue_membership(I.guard_basis, _residues(x, I.l, hi))
    if a != b:
        raise PrecisionMismatch(
            f"membership differs at precision {I.N} and {I.N + I.guard}; raise the precision"
        )
    return a


def _default_precision(N, exact_power, guard):
    if N is None:
        return exact_power + guard
    if N < exact_power:
        raise PrecisionTooLow(f"precision {N} below the required {exact_power}")
    return N


def annihilator(M: ConcreteModule, N=None, guard=DEFAULT_GUARD) -> IdealHandle:
    """All r in Z_l[G] with r M = 0."""
    G, l = M.group, M.l
    if M.is_zero():
        N = _default_precision(N, 0, guard)
        return IdealHandle(G, l, N, [GroupRingElement.one(G)], guard, exact_power=0)
    E = M.e_max
    N = _default_precision(N, E, guard)
    embed = _embedded_images(M)
    # row (j, i): component i of r * y_j, scaled into Z/l^E
    T = []
    for j in range(M.k):
        cols = [embed([M.element_matrices[g][i][j] for i in range(M.k)]) for g in range(G.order)]
        for i in range(M.k):
            T.append([cols[g][i] for g in range(G.order)])
    kernel = kernel_mod(T, l, E, G.order)
    gens = [GroupRingElement(G, INT, tuple(v)) for v in kernel]
    gens.append(GroupRingElement.scalar(G, l**E))
    return IdealHandle(G, l, N, gens, guard, exact_power=E)


def fitting_ideal(module, N=None, guard=DEFAULT_GUARD) -> IdealHandle:
    """Ideal of b x b minors of a presentation (padded to a >= b)."""
    if isinstance(module, ConcreteModule):
        M = module
        pm = presentation_of(M)
    else:
        pm = module
        M = realize(pm)
    G, l = pm.group, pm.l
    b = pm.num_generators
    if M.is_zero() or b == 0:
        N = _default_precision(N, 0, guard)
        return IdealHandle(G, l, N, [GroupRingElement.one(G)], guard, exact_power=0)
    exact_power = M.e_max * b
    N = _default_precision(N, exact_power, guard)
    minors = [m for m in all_minors(pm.padded(), b) if not m.is_zero()]
    minors.append(GroupRingElement.scalar(G, l**exact_power))
    return IdealHandle(G, l, N, minors, guard, exact_power=exact_power)


def oracle_annihilator(M: ConcreteModule, e: int) -> set:
    """Every r mod l^e (coefficient tuple) with r M = 0, by enumeration."""
    G, l = M.group, M.l
    if e < M.e_max:
        raise ValueError("exponent cap must be at least e_max")
    if l ** (G.order * e) > 2**20:
        raise TooLarge(f"{l}^{G.order * e} elements to enumerate")
    out = set()
    for coeffs in itertools.product(range(l**e), repeat=G.order):
        if M.kills(GroupRingElement(G, INT, coeffs)):
            out.add(coeffs)
    return out


def oracle_span(group, l, e, generators) -> set:
    """Z-span of {g s} mod l^e by closure, as coefficient tuples."""
    q = l**e
    vecs = set()
    for s in generators:
        for row in _translates(group, [s]):
            vecs.add(tuple(x % q for x in row))
    span = {tuple([0] * group.order)}
    for v in vecs:
        new = set()
        for w in span:
            for c in range(q):
                new.add(tuple((a + c * b) % q for a, b in zip(w, v)))
        span = new
    return span


# ---------------------------------------------------------------------------
# random instances and property checks


MODULE_GROUPS = ("1", "C2", "C3", "C4", "C6", "C2xC2", "C2xC4", "C12", "C2xC6", "C3xC3")


def random_presented_module(rng, l, group=None, max_log_order=6, max_generators=2):
    """Random PresentedModule with finite l-power cokernel of order <= l^max_log_order."""
    while True:
        G = group or FiniteAbelianGroup.parse(rng.choice(MODULE_GROUPS))
        if G.order > 12:
            continue
        b = rng.randint(1, max_generators)
        rows = []
        for j in range(b):
            e = rng.randint(1, 3)
            rows.append([GroupRingElement.scalar(G, l**e if t == j else 0) for t in range(b)])
        for _ in range(rng.randint(0, 3)):
            row = []
            for _ in range(b):
                c = tuple(rng.choice((0, 0, 1, -1, l, rng.randint(-3, 3))) for _ in range(G.order))
                row.append(GroupRingElement(G, INT, c))
            rows.append(row)
        rng.shuffle(rows)
        pm = PresentedModule(G, l, GroupRingMatrix(G, INT, rows, len(rows), b))
        try:
            M = realize(pm)
        except (NotFinite, NotLPower):
            continue
        if M.order <= l**max_log_order:
            return pm, M


def _products(elements, n):
    for combo in itertools.combinations_with_replacement(elements, n):
        p = combo[0]
        for x in combo[1:]:
            p = p * x
        yield p


def fitting_in_annihilator(M: ConcreteModule, F=None, A=None) -> list:
    """Fitting generators that fail to lie in ann(M) (empty when the inclusion holds)."""
    F = F or fitting_ideal(M)
    A = A or annihilator(M, F.N)
    return [x for x in F.generators_with_power() if not ideal_contains(A, x)]


def annihilator_power_in_fitting(M: ConcreteModule, n=None, F=None, A=None) -> list:
    """Products of n annihilator generators outside F(M); n defaults to mu(M)."""
    n = min_generators(M) if n is None else n
    if n == 0:
        return []
    F = F or fitting_ideal(M)
    A = A or annihilator(M, F.N)
    return [p for p in _products(A.generators_with_power(), n) if not ideal_contains(F, p)]


def duality_checks(M: ConcreteModule) -> dict:
    """ann(M^#) = tau ann(M), and F(M^#) = tau F(M) when the Sylow l-subgroup is cyclic."""
    D = pontryagin_dual(M)
    F, FD = fitting_ideal(M), fitting_ideal(D)
    N = max(F.N, FD.N)
    A, AD = annihilator(M, N), annihilator(D, N)
    out = {"ann": A.tau().basis == AD.basis}
    if M.group.sylow_l_part(M.l).is_cyclic:
        F, FD = fitting_ideal(M, N), fitting_ideal(D, N)
        out["fitting"] = F.tau().basis == FD.basis
    return out
