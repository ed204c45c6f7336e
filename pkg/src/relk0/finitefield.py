"""Arithmetic in F_{l^s} = F_l[x]/(f), elements as coefficient tuples."""

from __future__ import annotations

import itertools
import math

from sympy import Poly, symbols

from .grouprings import prime_factors

_x = symbols("x")


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    k, y = 1, a % m
    while y != 1:
        y = y * a % m
        k += 1
    return k


def irreducible_polynomial(l: int, s: int) -> tuple[int, ...]:
    """First monic irreducible of degree s over F_l, lowest degree first."""
    if s == 1:
        return (0, 1)
    for tail in itertools.product(range(l), repeat=s):
        if tail[0] == 0:
            continue
        coeffs = list(tail) + [1]
        if Poly(list(reversed(coeffs)), _x, modulus=l).is_irreducible:
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {s} over F_{l}")


class GF:
    def __init__(self, l: int, s: int):
        self.l, self.s = l, s
        self.modulus = irreducible_polynomial(l, s)
        self.zero = (0,) * s
        self.one = (1,) + (0,) * (s - 1)
        self.size = l**s

    def from_int(self, a: int):
        return ((a % self.l),) + (0,) * (self.s - 1)

    def from_index(self, n: int):
        out = []
        for _ in range(self.s):
            out.append(n % self.l)
            n //= self.l
        return tuple(out)

    def add(self, a, b):
        return tuple((x + y) % self.l for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.l for x, y in zip(a, b))

    def mul(self, a, b):
        l, s, f = self.l, self.s, self.modulus
        prod = [0] * (2 * s - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for k in range(2 * s - 2, s - 1, -1):
            c = prod[k] % l
            if c:
                for j in range(s + 1):
                    prod[k - s + j] -= c * f[j]
        return tuple(c % l for c in prod[:s])

    def pow(self, a, n: int):
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.size - 2)

    def root_of_unity(self, m: int):
        """A primitive m-th root of unity; requires m | l^s - 1."""
        if (self.size - 1) % m:
            raise ValueError(f"F_{self.l}^{self.s} has no primitive {m}-th root")
        if m == 1:
            return self.one
        e = (self.size - 1) // m
        for n in range(1, self.size):
            z = self.pow(self.from_index(n), e)
            if all(self.pow(z, m // q) != self.one for q in prime_factors(m)):
                return z
        raise AssertionError("unreachable")

    def rank(self, rows) -> int:
        R = [list(r) for r in rows]
        if not R:
            return 0
        ncols = len(R[0])
        r = 0
        for c in range(ncols):
            p = next((i for i in range(r, len(R)) if R[i][c] != self.zero), None)
            if p is None:
                continue
            R[r], R[p] = R[p], R[r]
            inv = self.inv(R[r][c])
            R[r] = [self.mul(x, inv) for x in R[r]]
            for i in range(len(R)):
                if i != r and R[i][c] != self.zero:
                    f = R[i][c]
                    R[i] = [self.sub(a, self.mul(f, b)) for a, b in zip(R[i], R[r])]
            r += 1
        return r


def splitting_degree(l: int, m: int) -> int:
    """Degree s with F_{l^s} containing the m-th roots of unity (gcd(l, m) = 1)."""
    if math.gcd(l, m) != 1:
        raise ValueError("m must be prime to l")
    return multiplicative_order(l, m)
