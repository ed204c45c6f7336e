"""Higher Stickelberger elements of abelian fields from Bernoulli polynomials.

An abelian field L is the fixed field of a subgroup H of (Z/f)^* inside the
f-th cyclotomic field. Its Galois group (Z/f)^*/H is turned into a
FiniteAbelianGroup once, and sigma_a is addressed by any residue a prime to f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property

from .errors import BadB, BadResidue, IncompatibleFields, Ramified
from .grouprings import (
    INT,
    RAT,
    FiniteAbelianGroup,
    GroupRingElement,
    is_prime,
    prime_factors,
)
from .linalg import smith_normal_form
from .modules import ConcreteModule, annihilator, ideal_contains

# ---------------------------------------------------------------------------
# fields


class AbelianFieldSpec:
    """Fixed field of H <= (Z/f)^* in Q(xi_f)."""

    def __init__(self, f: int, H=()):
        if f < 1:
            raise ValueError("conductor must be >= 1")
        self.f = f
        gens = [h % f for h in H]
        for h in gens:
            if math.gcd(h, f) != 1:
                raise BadResidue(f"{h} is not a unit mod {f}")
        self.H = frozenset(_closure(gens, f))

    def __repr__(self):
        return f"AbelianFieldSpec(f={self.f}, H={sorted(self.H)})"

    def __eq__(self, other):
        return isinstance(other, AbelianFieldSpec) and (self.f, self.H) == (other.f, other.H)

    def __hash__(self):
        return hash((self.f, self.H))

    @classmethod
    def rationals(cls):
        return cls(1)

    @classmethod
    def plus_field(cls, f: int):
        return cls(f, (-1,))

    @property
    def is_real(self) -> bool:
        return (-1) % self.f in self.H

    @cached_property
    def units(self) -> list[int]:
        return [a % self.f for a in range(1, self.f + 1) if math.gcd(a, self.f) == 1]

    @cached_property
    def _structure(self):
        """(group, residue -> element index, coset representatives by index)."""
        f, H = self.f, self.H
        coset_of = {}
        reps = []
        for a in sorted(self.units, key=lambda x: x or f):
            if a in coset_of:
                continue
            c = len(reps)
            reps.append(a)
            for h in H:
                coset_of[a * h % f] = c
        m = len(reps)
        # exponent vectors over the generating set reps[1:], found by BFS
        gens = reps[1:]
        vec = {0: (0,) * len(gens)}
        frontier = [(reps[0], 0)]
        rels = []
        while frontier:
            x, c = frontier.pop()
            for i, g in enumerate(gens):
                y = x * g % f
                cy = coset_of[y]
                v = list(vec[c])
                v[i] += 1
                if cy in vec:
                    diff = [a - b for a, b in zip(v, vec[cy])]
                    if any(diff):
                        rels.append(diff)
                else:
                    vec[cy] = tuple(v)
                    frontier.append((y, cy))
        if not gens:
            G = FiniteAbelianGroup(())
            return G, {a: 0 for a in coset_of}, [reps[0]]
        snf = smith_normal_form(rels)
        diag = snf.diagonal + [0] * (len(gens) - len(snf.diagonal))
        keep = [j for j, s in enumerate(diag) if abs(s) > 1]
        G = FiniteAbelianGroup(tuple(abs(diag[j]) for j in keep))
        V = snf.V
        index_of_coset = {}
        for c, v in vec.items():
            w = [sum(v[t] * V[t][j] for t in range(len(v))) for j in range(len(v))]
            index_of_coset[c] = G.index([w[j] % abs(diag[j]) for j in keep])
        if len(set(index_of_coset.values())) != m or G.order != m:
            raise AssertionError("quotient group structure computed inconsistently")
        residue_index = {a: index_of_coset[c] for a, c in coset_of.items()}
        labels = [0] * m
        for c, a in enumerate(reps):
            labels[index_of_coset[c]] = a
        return G, residue_index, labels

    @property
    def group(self) -> FiniteAbelianGroup:
        return self._structure[0]

    def sigma(self, a: int) -> int:
        """Element index of sigma_a."""
        a %= self.f
        if math.gcd(a, self.f) != 1 and self.f > 1:
            raise BadResidue(f"{a} is not prime to {self.f}")
        return self._structure[1][a]

    def sigma_element(self, a: int, domain=INT) -> GroupRingElement:
        return GroupRingElement.basis(self.group, self.sigma(a), domain)

    def label(self, index: int) -> int:
        """Smallest positive residue a with sigma_a = the given element."""
        return self._structure[2][index] or self.f

    def coset_order(self) -> list[int]:
        """Element indices sorted by smallest residue label."""
        return sorted(range(self.group.order), key=self.label)

    def format(self, x: GroupRingElement) -> str:
        terms = []
        for idx in self.coset_order():
            c = x.coeffs[idx]
            if c == 0:
                continue
            a = self.label(idx)
            if a == 1:
                terms.append(str(c))
            elif c == 1:
                terms.append(f"σ_{a}")
            else:
                terms.append(f"{c}σ_{a}")
        return " + ".join(terms) if terms else "0"


def _closure(gens, f):
    out = {1 % f}
    frontier = [1 % f]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % f
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


# ---------------------------------------------------------------------------
# Bernoulli numbers and partial zeta values


@cache
def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)
    if k > 1 and k % 2:
        return Fraction(0)
    s = sum(math.comb(k + 1, j) * bernoulli_number(j) for j in range(k))
    return -s / (k + 1)


def bernoulli_polynomial_eval(n: int, q) -> Fraction:
    q = Fraction(q)
    return sum(math.comb(n, j) * bernoulli_number(j) * q ** (n - j) for j in range(n + 1))


def _bracket(a: int, f: int) -> Fraction:
    """Representative of a/f in (0, 1]."""
    r = a % f
    return Fraction(r, f) if r else Fraction(1)


def partial_zeta(f: int, a: int, n: int) -> Fraction:
    """zeta(a mod f, 1 - n) = -f^(n-1) B_n(<a/f>) / n."""
    if math.gcd(a, f) != 1:
        raise BadResidue(f"{a} is not prime to {f}")
    if n < 2:
        raise ValueError("partial zeta values are taken at 1 - n with n >= 2")
    return -Fraction(f ** (n - 1)) * bernoulli_polynomial_eval(n, _bracket(a, f)) / n


@dataclass(frozen=True)
class ThetaElement:
    field: AbelianFieldSpec
    n: int
    element: GroupRingElement

    def coefficients(self) -> list[Fraction]:
        """Coefficients in canonical coset order (smallest residue first)."""
        return [self.element.coeffs[i] for i in self.field.coset_order()]

    def __str__(self):
        return self.field.format(self.element)


def theta_element(field: AbelianFieldSpec, n: int) -> ThetaElement:
    """sum over a in (Z/f)^* of zeta(a, 1 - n) sigma_a^{-1}."""
    if n < 2:
        raise ValueError("theta_element needs n >= 2")
    G = field.group
    coeffs = [Fraction(0)] * G.order
    for a in field.units:
        idx = G.inverses[field.sigma(a)]
        coeffs[idx] += partial_zeta(field.f, a or field.f, n)
    return ThetaElement(field, n, GroupRingElement(G, RAT, tuple(coeffs)))


def restriction_map(source: AbelianFieldSpec, target: AbelianFieldSpec) -> list[int]:
    """Index map G(source) -> G(target) for target contained in source."""
    if source.f % target.f:
        raise IncompatibleFields(f"conductor {target.f} does not divide {source.f}")
    for h in source.H:
        if h % target.f not in target.H:
            raise IncompatibleFields("target field is not contained in the source field")
    image = [0] * source.group.order
    for a in source.units:
        image[source.sigma(a)] = target.sigma(a % target.f)
    return image


def pushforward(x: GroupRingElement, source: AbelianFieldSpec, target: AbelianFieldSpec) -> GroupRingElement:
    image = restriction_map(source, target)
    coeffs = [Fraction(0)] * target.group.order
    for i, c in enumerate(x.coeffs):
        coeffs[image[i]] += c
    return GroupRingElement(target.group, x.domain, tuple(coeffs))


def pushforward_theta(theta: ThetaElement, target: AbelianFieldSpec) -> ThetaElement:
    return ThetaElement(target, theta.n, pushforward(theta.element, theta.field, target))


def euler_factor(p: int, field: AbelianFieldSpec, n: int) -> GroupRingElement:
    """1 - p^(n-1) sigma_p^{-1}."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if field.f % p == 0:
        raise Ramified(f"{p} divides the conductor {field.f}")
    G = field.group
    inv = G.inverses[field.sigma(p)]
    return GroupRingElement.one(G, RAT) - GroupRingElement.basis(G, inv, RAT, Fraction(p ** (n - 1)))


# ---------------------------------------------------------------------------
# w_n and the H^0 model


def _exponent_divides(values, n, modulus) -> bool:
    return all(pow(x, n, modulus) == 1 for x in values)


def _local_image(field: AbelianFieldSpec, p: int, k: int):
    """Image in (Z/p^k)^* of {a mod lcm(f, p^k) : a mod f in H}."""
    f, q = field.f, p**k
    m = math.lcm(f, q)
    return {a % q for a in range(1, m + 1) if math.gcd(a, m) == 1 and a % f in field.H}


def w_local_exponent(field: AbelianFieldSpec, n: int, p: int) -> int:
    """Largest k with the local image in (Z/p^k)^* of exponent dividing n."""
    k = 0
    while _exponent_divides(_local_image(field, p, k + 1), n, p ** (k + 1)):
        k += 1
    return k


def w_candidate_primes(field: AbelianFieldSpec, n: int, l: int | None = None) -> list[int]:
    ps = {p for p in range(2, n + 2) if n % (p - 1) == 0 and is_prime(p)}
    ps |= set(prime_factors(field.f)) if field.f > 1 else set()
    if l is not None:
        ps.add(l)
    return sorted(ps)


def w_invariant(field: AbelianFieldSpec, n: int, l: int | None = None) -> int:
    """w_n(L), or its l-part when ``l`` is given."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if l is not None:
        return l ** w_local_exponent(field, n, l)
    w = 1
    for p in w_candidate_primes(field, n):
        w *= p ** w_local_exponent(field, n, p)
    return w


def _lift_coprime(a: int, f: int, l: int, start: int = 0):
    """Lifts a + f t (t >= start) prime to l f."""
    t = start
    while True:
        b = a + f * t
        if b > 0 and math.gcd(b, l * f) == 1:
            yield b
        t += 1


def h0_model(field: AbelianFieldSpec, n: int, l: int) -> ConcreteModule:
    """Z/l^a, a = v_l(w_{n+1}(L)), with sigma_b acting by b'^(n+1)."""
    G = field.group
    a = w_local_exponent(field, n + 1, l)
    if a == 0:
        return ConcreteModule.zero(G, l)
    q = l**a
    acts = []
    for i in range(G.rank):
        rep = field.label(G.generator(i))
        values = set()
        lifts = _lift_coprime(rep, field.f, l)
        for _ in range(4):
            values.add(pow(next(lifts), n + 1, q))
        if len(values) != 1:
            raise AssertionError("action on the H^0 model depends on the lift")
        acts.append(((values.pop(),),))
    return ConcreteModule(G, l, (a,), tuple(acts))


def h0_generators(field: AbelianFieldSpec, n: int, l: int, b_max: int = 20) -> list[tuple[str, GroupRingElement]]:
    """Unramified-prime generators sigma_P - P^(n+1) and b-elements b^(n+1) - sigma_b.

    P runs over primes dividing w_{n+1}(L) that are prime to l f; b over
    1 < b <= b_max prime to l f.
    """
    G = field.group
    out = []
    w = w_invariant(field, n + 1)
    for p in prime_factors(w) if w > 1 else []:
        if field.f % p and p != l:
            x = field.sigma_element(p) - GroupRingElement.scalar(G, p ** (n + 1))
            out.append((f"P={p}", x))
    for b in range(2, b_max + 1):
        if math.gcd(b, l * field.f) == 1:
            x = GroupRingElement.scalar(G, b ** (n + 1)) - field.sigma_element(b)
            out.append((f"b={b}", x))
    return out


@dataclass
class CoatesSinnottReport:
    field: AbelianFieldSpec
    n: int
    l: int
    b: int
    product: GroupRingElement
    integral: bool
    generator_products: list  # (label, element, l-integral)
    h0_annihilated: bool
    h0_in_annihilator: bool

    @property
    def passed(self) -> bool:
        return self.integral and self.h0_annihilated and self.h0_in_annihilator

    def to_dict(self):
        fmt = self.field.format
        return {
            "f": self.field.f,
            "H": sorted(self.field.H),
            "n": self.n,
            "l": self.l,
            "b": self.b,
            "product": fmt(self.product),
            "coefficients": [str(self.product.coeffs[i]) for i in self.field.coset_order()],
            "integral": self.integral,
            "generator_products": [
                {"generator": lab, "product": fmt(x), "integral": ok} for lab, x, ok in self.generator_products
            ],
            "h0_annihilated": self.h0_annihilated,
            "h0_in_annihilator": self.h0_in_annihilator,
            "pass": self.passed,
        }


def coates_sinnott_element(field: AbelianFieldSpec, n: int, b: int) -> GroupRingElement:
    """w_{n+1}(Q) (b^(n+1) - sigma_b) Theta_L(n+1)."""
    G = field.group
    w = w_invariant(AbelianFieldSpec.rationals(), n + 1)
    theta = theta_element(field, n + 1).element
    t = GroupRingElement.scalar(G, b ** (n + 1), RAT) - field.sigma_element(b, RAT)
    return GroupRingElement.scalar(G, w, RAT) * t * theta


def coates_sinnott_check(field: AbelianFieldSpec, n: int, l: int, b: int) -> CoatesSinnottReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    if b < 1 or math.gcd(b, field.f) != 1:
        raise BadB(f"b = {b} must be a positive integer prime to f = {field.f}")
    prod = coates_sinnott_element(field, n, b)
    integral = prod.is_l_integral(l)
    theta = theta_element(field, n + 1).element
    gens = [(lab, x) for lab, x in h0_generators(field, n, l) if lab.startswith("P=")]
    gen_products = []
    for lab, x in gens:
        y = x.to_rational() * theta
        gen_products.append((lab, y, y.is_l_integral(l)))
    annihilated, contained = h0_check(field, n, l)
    return CoatesSinnottReport(field, n, l, b, prod, integral, gen_products, annihilated, contained)


def h0_check(field: AbelianFieldSpec, n: int, l: int) -> tuple[bool, bool]:
    """(every generator kills h0_model, generators plus l^a lie in its annihilator)."""
    M = h0_model(field, n, l)
    gens = [x for _, x in h0_generators(field, n, l)]
    killed = all(M.kills(x) for x in gens)
    ann = annihilator(M)
    contained = all(ideal_contains(ann, x) for x in gens)
    a = M.factors[0] if M.factors else 0
    contained &= ideal_contains(ann, GroupRingElement.scalar(field.group, l**a))
    return killed, contained
