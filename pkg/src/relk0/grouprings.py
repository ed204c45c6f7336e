"""Finite abelian groups and their group rings over Z, Z/l^N and Q.

Group elements are indexed in mixed-radix order over the exponent tuples of
the invariant-factor generators: ``index(e) = e_0 + d_0*e_1 + d_0*d_1*e_2 + ...``.
Every coefficient sequence in the package uses this order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import exact
from .errors import NotInvertible, ParseError

INFINITY = math.inf


def l_valuation(q, l: int):
    """Exponent of ``l`` in the rational ``q``; ``math.inf`` for zero."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    v = 0
    num, den = q.numerator, q.denominator
    while num % l == 0:
        num //= l
        v += 1
    while den % l == 0:
        den //= l
        v -= 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    n = abs(n)
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors_of(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p in prime_factors(n):
            k, m = 0, n
            while m % p == 0:
                m //= p
                k += 1
            by_prime.setdefault(p, []).append(p**k)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
        powers.sort()
        for i, q in enumerate(reversed(powers)):
            factors[length - 1 - i] *= q
    return tuple(factors)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_k with d_1 | ... | d_k, each d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        for x in d:
            if x < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(d, d[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {d}")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FiniteAbelianGroup":
        return cls(invariant_factors_of(orders))

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse ``"C3"``, ``"C2xC6"``, ``"1"`` or ``"trivial"``."""
        s = text.strip().replace(" ", "")
        if s in ("1", "C1", "trivial", ""):
            return cls(())
        parts = re.split(r"[x×*]", s)
        orders = []
        for part in parts:
            m = re.fullmatch(r"[CcZz](\d+)", part)
            if not m:
                raise ParseError(f"cannot parse cyclic factor {part!r}", "group")
            orders.append(int(m.group(1)))
        if any(o < 1 for o in orders):
            raise ParseError("cyclic orders must be positive", "group")
        return cls.from_cyclic_orders(orders)

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return "x".join(f"C{d}" for d in self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def exponents(self, index: int) -> tuple[int, ...]:
        out = []
        for d in self.invariant_factors:
            out.append(index % d)
            index //= d
        return tuple(out)

    def index(self, exps: Sequence[int]) -> int:
        idx, scale = 0, 1
        for e, d in zip(exps, self.invariant_factors):
            idx += (e % d) * scale
            scale *= d
        return idx

    def generator(self, i: int) -> int:
        e = [0] * self.rank
        e[i] = 1
        return self.index(e)

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        n = self.order
        exps = [self.exponents(i) for i in range(n)]
        return tuple(
            tuple(self.index([a + b for a, b in zip(exps[i], exps[j])]) for j in range(n))
            for i in range(n)
        )

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(self.index([-e for e in self.exponents(i)]) for i in range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def power(self, a: int, k: int) -> int:
        return self.index([k * e for e in self.exponents(a)])

    def element_order(self, a: int) -> int:
        o = 1
        for e, d in zip(self.exponents(a), self.invariant_factors):
            o = math.lcm(o, d // math.gcd(e, d))
        return o

    def sylow_l_part(self, l: int) -> "SylowSplit":
        return SylowSplit(self, l)


@dataclass(frozen=True)
class SylowSplit:
    """G = H x G_1 with G_1 the Sylow l-subgroup; generators given as indices."""

    group: FiniteAbelianGroup
    l: int

    def _split(self, d):
        lp = 1
        while d % self.l == 0:
            d //= self.l
            lp *= self.l
        return lp, d

    @property
    def sylow_generators(self) -> list[tuple[int, int]]:
        """(element index, order) of generators of G_1, trivial ones dropped."""
        G, out = self.group, []
        for i, d in enumerate(G.invariant_factors):
            lp, m = self._split(d)
            if lp > 1:
                out.append((G.power(G.generator(i), m), lp))
        return out

    @property
    def complement_generators(self) -> list[tuple[int, int]]:
        """(element index, order) of generators of the prime-to-l part H."""
        G, out = self.group, []
        for i, d in enumerate(G.invariant_factors):
            lp, m = self._split(d)
            if m > 1:
                out.append((G.power(G.generator(i), lp), m))
        return out

    @property
    def is_cyclic(self) -> bool:
        return len(self.sylow_generators) <= 1

    @property
    def order(self) -> int:
        return math.prod(o for _, o in self.sylow_generators)


@dataclass(frozen=True)
class Domain:
    """Scalar domain tag: ``int``, ``rat`` or ``mod`` with modulus l^N."""

    kind: str
    l: int | None = None
    N: int | None = None

    def __post_init__(self):
        if self.kind not in ("int", "rat", "mod"):
            raise ValueError(f"unknown scalar domain {self.kind!r}")
        if self.kind == "mod" and (self.l is None or self.N is None or self.N < 0):
            raise ValueError("mod domain needs l and N >= 0")

    @property
    def modulus(self) -> int | None:
        return self.l**self.N if self.kind == "mod" else None

    def normalize(self, x):
        if self.kind == "int":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integer coefficient {x} in integer domain")
                return x.numerator
            return int(x)
        if self.kind == "rat":
            return Fraction(x)
        return reduce_mod(x, self.modulus)

    def tag(self) -> str:
        return f"mod:{self.l}^{self.N}" if self.kind == "mod" else self.kind

    @classmethod
    def from_tag(cls, tag: str) -> "Domain":
        if tag in ("int", "rat"):
            return cls(tag)
        m = re.fullmatch(r"mod:(\d+)\^(\d+)", tag)
        if not m:
            raise ParseError(f"unknown scalar domain tag {tag!r}", "domain")
        return cls("mod", int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return self.tag()


INT = Domain("int")
RAT = Domain("rat")


def mod_domain(l: int, N: int) -> Domain:
    return Domain("mod", l, N)


def reduce_mod(x, modulus: int) -> int:
    """Reduce an integer, or a rational with unit denominator, mod ``modulus``."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return x.numerator % modulus
        return x.numerator * pow(x.denominator, -1, modulus) % modulus
    return int(x) % modulus


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    """Element sum_g c_g g of a group ring; coefficients in canonical order."""

    group: FiniteAbelianGroup
    domain: Domain
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.group.order:
            raise ValueError(
                f"expected {self.group.order} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(self.domain.normalize(c) for c in self.coeffs))

    # constructors

    @classmethod
    def zero(cls, group, domain=INT):
        return cls(group, domain, (0,) * group.order)

    @classmethod
    def scalar(cls, group, c, domain=INT):
        return cls(group, domain, (c,) + (0,) * (group.order - 1))

    @classmethod
    def one(cls, group, domain=INT):
        return cls.scalar(group, 1, domain)

    @classmethod
    def basis(cls, group, index, domain=INT, c=1):
        coeffs = [0] * group.order
        coeffs[index] = c
        return cls(group, domain, tuple(coeffs))

    @classmethod
    def from_terms(cls, group, terms, domain=INT):
        """Build from ``{exponent tuple or index: coefficient}``."""
        coeffs = [0] * group.order
        for key, c in terms.items():
            idx = key if isinstance(key, int) else group.index(key)
            coeffs[idx] += c
        return cls(group, domain, tuple(coeffs))

    @classmethod
    def norm_element(cls, group, domain=INT):
        return cls(group, domain, (1,) * group.order)

    # arithmetic

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            return self.scalar(self.group, other, self.domain)
        if other.group != self.group:
            raise ValueError("group ring elements over different groups")
        if other.domain != self.domain:
            raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return GroupRingElement(
            self.group, self.domain, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, self.domain, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement(self.group, self.domain, tuple(a * other for a in self.coeffs))
        other = self._check(other)
        table = self.group.mul_table
        out = [0] * self.group.order
        for i, a in enumerate(self.coeffs):
            if a:
                row = table[i]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[row[j]] += a * b
        return GroupRingElement(self.group, self.domain, tuple(out))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.one(self.group, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, GroupRingElement):
            return self * other.inverse()
        return self * (Fraction(1) / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return (
                self.group == other.group
                and self.domain == other.domain
                and self.coeffs == other.coeffs
            )
        if isinstance(other, (int, Fraction)):
            return self == self.scalar(self.group, other, self.domain)
        return NotImplemented

    def __hash__(self):
        return hash((self.group, self.domain, self.coeffs))

    def __repr__(self):
        return f"GroupRingElement({self.group}, {self.domain}, {self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            g = "" if i == 0 else "g" + "".join(str(e) for e in self.group.exponents(i))
            if g and c == 1:
                terms.append(g)
            elif g and c == -1:
                terms.append("-" + g)
            else:
                terms.append(f"{c}{'*' if g else ''}{g}")
        return " + ".join(terms) if terms else "0"

    # structure

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def tau(self) -> "GroupRingElement":
        inv = self.group.inverses
        out = [0] * self.group.order
        for i, c in enumerate(self.coeffs):
            out[inv[i]] = c
        return GroupRingElement(self.group, self.domain, tuple(out))

    def augmentation(self):
        s = sum(self.coeffs)
        return self.domain.normalize(s)

    def to_domain(self, domain: Domain) -> "GroupRingElement":
        return GroupRingElement(self.group, domain, self.coeffs)

    def to_rational(self) -> "GroupRingElement":
        return self.to_domain(RAT)

    def mult_matrix(self) -> list[list]:
        """Matrix of y -> self*y on coefficient column vectors."""
        n = self.group.order
        table = self.group.mul_table
        M = [[0] * n for _ in range(n)]
        for j in range(n):
            for i, c in enumerate(self.coeffs):
                if c:
                    M[table[i][j]][j] += c
        return M

    def inverse(self) -> "GroupRingElement":
        """Inverse in Q[G] (or in Z/l^N[G] for residue scalars)."""
        n = self.group.order
        e = [1] + [0] * (n - 1)
        if self.domain.kind == "mod":
            x = _solve_mod(self.mult_matrix(), e, self.domain.l, self.domain.N)
            if x is None:
                raise NotInvertible(f"{self} is not a unit mod {self.domain.modulus}")
            return GroupRingElement(self.group, self.domain, tuple(x))
        inv = exact.inverse(self.mult_matrix())
        if inv is None:
            raise NotInvertible(f"{self} is not invertible in Q[G]")
        return GroupRingElement(self.group, RAT, tuple(row[0] for row in inv))

    def is_invertible_rational(self) -> bool:
        return exact.det(self.mult_matrix()) != 0

    def min_valuation(self, l: int):
        return min((l_valuation(c, l) for c in self.coeffs), default=INFINITY)

    def is_l_integral(self, l: int) -> bool:
        return all(Fraction(c).denominator % l != 0 for c in self.coeffs)

    def reduce(self, l: int, N: int) -> "GroupRingElement":
        """Image in Z/l^N[G]; rational coefficients must be l-integral."""
        from .errors import NotIntegral

        if self.domain.kind == "rat" and not self.is_l_integral(l):
            raise NotIntegral(f"{self} has negative {l}-valuation")
        return GroupRingElement(self.group, mod_domain(l, N), self.coeffs)

    def lift(self) -> "GroupRingElement":
        """Residue element as the integer element with coefficients in [0, l^N)."""
        return GroupRingElement(self.group, INT, self.coeffs)


def _solve_mod(A, b, l, N):
    """Solve A x = b over Z/l^N for square A invertible mod l."""
    q = l**N
    n = len(A)
    M = [[x % q for x in row] + [bi % q] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] % l), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        inv = pow(M[c][c], -1, q)
        M[c] = [x * inv % q for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * bb) % q for a, bb in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def tau_involution(x: GroupRingElement) -> GroupRingElement:
    return x.tau()


def augmentation(x: GroupRingElement):
    return x.augmentation()


@dataclass(frozen=True, eq=False)
class FractionalGroupRingElement:
    """l^(-e) * numerator with integer numerator, normalized."""

    numerator: GroupRingElement
    denom_exponent: int
    l: int

    def __post_init__(self):
        num, e = self.numerator, self.denom_exponent
        if num.domain != INT:
            raise ValueError("numerator must have integer scalars")
        if e < 0:
            num = num * self.l ** (-e)
            e = 0
        while e > 0 and all(c % self.l == 0 for c in num.coeffs):
            num = GroupRingElement(num.group, INT, tuple(c // self.l for c in num.coeffs))
            e -= 1
        if num.is_zero():
            e = 0
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denom_exponent", e)

    @classmethod
    def from_rational(cls, x: GroupRingElement, l: int) -> "FractionalGroupRingElement":
        """Requires every denominator to be a power of l."""
        den = math.lcm(*(Fraction(c).denominator for c in x.coeffs))
        e, d = 0, den
        while d % l == 0:
            d //= l
            e += 1
        if d != 1:
            raise ValueError(f"denominator {den} is not a power of {l}")
        scale = l**e
        num = tuple(int(Fraction(c) * scale) for c in x.coeffs)
        return cls(GroupRingElement(x.group, INT, num), e, l)

    def to_rational(self) -> GroupRingElement:
        return self.numerator.to_rational() * Fraction(1, self.l**self.denom_exponent)

    def is_integral(self) -> bool:
        return self.denom_exponent == 0


@dataclass(frozen=True)
class CyclotomicValue:
    """Element of Q[x]/(x^e - 1), coefficients c_0..c_{e-1}."""

    e: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.e:
            c = [Fraction(0)] * self.e
            for i, a in enumerate(self.coeffs):
                c[i % self.e] += Fraction(a)
            object.__setattr__(self, "coeffs", tuple(c))
        else:
            object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))

    @classmethod
    def constant(cls, e, c):
        return cls(e, (c,) + (0,) * (e - 1))

    @classmethod
    def monomial(cls, e, k, c=1):
        coeffs = [0] * e
        coeffs[k % e] = c
        return cls(e, tuple(coeffs))

    def __add__(self, other):
        return CyclotomicValue(self.e, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return CyclotomicValue(self.e, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if not isinstance(other, CyclotomicValue):
            return CyclotomicValue(self.e, tuple(a * other for a in self.coeffs))
        out = [Fraction(0)] * self.e
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % self.e] += a * b
        return CyclotomicValue(self.e, tuple(out))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coeffs)

    def vanishes_at_primitive_root(self, d: int | None = None) -> bool:
        """True iff the value is 0 at every primitive d-th root of unity (d | e)."""
        d = self.e if d is None else d
        if self.e % d:
            raise ValueError("d must divide e")
        rem = _poly_rem(list(self.coeffs), cyclotomic_polynomial(d))
        return not any(rem)


def _poly_rem(num, den):
    """Remainder of num by monic den; coefficient lists lowest degree first."""
    num = [Fraction(c) for c in num]
    dd = len(den) - 1
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    return num[:dd]


def cyclotomic_polynomial(d: int) -> list[int]:
    """Integer coefficients of Phi_d, lowest degree first, by exact division."""
    poly = [-1] + [0] * (d - 1) + [1]
    for k in range(1, d):
        if d % k == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(k))
    return poly


def _poly_div_exact(num, den):
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] // den[-1]
        q[k - dd] = c
        for j in range(dd + 1):
            num[k - dd + j] -= c * den[j]
    return q


@dataclass(frozen=True)
class CharacterSpec:
    """chi(g_i) = zeta_e^(k_i) on the invariant-factor generators."""

    group: FiniteAbelianGroup
    images: tuple[int, ...]

    def __post_init__(self):
        e = self.group.exponent
        k = tuple(int(x) % e for x in self.images)
        if len(k) != self.group.rank:
            raise ValueError("one image exponent per generator required")
        for ki, d in zip(k, self.group.invariant_factors):
            if ki * d % e:
                raise ValueError(f"chi(g)^{d} != 1 for exponent {ki}")
        object.__setattr__(self, "images", k)

    @classmethod
    def all(cls, group: FiniteAbelianGroup) -> list["CharacterSpec"]:
        e = group.exponent
        out = [()]
        for d in group.invariant_factors:
            step = e // d
            out = [t + (j * step,) for t in out for j in range(d)]
        return [cls(group, t) for t in out]

    def exponent_of(self, index: int) -> int:
        e = self.group.exponent
        return sum(a * k for a, k in zip(self.group.exponents(index), self.images)) % e

    def inverse(self) -> "CharacterSpec":
        return CharacterSpec(self.group, tuple(-k for k in self.images))

    @property
    def order(self) -> int:
        e = self.group.exponent
        o = 1
        for k in self.images:
            o = math.lcm(o, e // math.gcd(k, e))
        return o


def evaluate_character(x: GroupRingElement, chi: CharacterSpec) -> CyclotomicValue:
    """Image of x under the ring map g -> x^k(g) into Q[x]/(x^e - 1)."""
    e = chi.group.exponent
    out = [Fraction(0)] * e
    for i, c in enumerate(x.coeffs):
        if c:
            out[chi.exponent_of(i)] += Fraction(c)
    return CyclotomicValue(e, tuple(out))


def is_integral_unit(x: GroupRingElement, l: int) -> bool:
    """True iff x and its Q[G]-inverse both have l-integral coefficients."""
    inv = x.to_rational().inverse()
    return x.to_rational().is_l_integral(l) and inv.is_l_integral(l)


@dataclass(frozen=True)
class DetClass:
    """Coset rep * Z_l[G]^* in Q_l[G]^*/Z_l[G]^*."""

    rep: GroupRingElement
    l: int

    def __post_init__(self):
        rep = self.rep.to_rational()
        if not rep.is_invertible_rational():
            raise NotInvertible(f"{rep} is not a unit of Q[G]")
        object.__setattr__(self, "rep", rep)

    def __mul__(self, other: "DetClass") -> "DetClass":
        return DetClass(self.rep * other.rep, self.l)

    def inverse(self) -> "DetClass":
        return DetClass(self.rep.inverse(), self.l)

    def tau(self) -> "DetClass":
        return DetClass(self.rep.tau(), self.l)


def det_class_equals(u: DetClass, v: DetClass) -> bool:
    if u.l != v.l or u.rep.group != v.rep.group:
        raise ValueError("det classes over different (G, l)")
    return is_integral_unit(u.rep * v.rep.inverse(), u.l)
