import math
from fractions import Fraction

import pytest
import sympy

from relk0.errors import BadB, BadResidue, IncompatibleFields, Ramified
from relk0.grouprings import RAT, CharacterSpec, CyclotomicValue, GroupRingElement, evaluate_character, is_prime
from relk0.modules import annihilator
from relk0.stickelberger import (
    AbelianFieldSpec,
    bernoulli_number,
    bernoulli_polynomial_eval,
    coates_sinnott_check,
    coates_sinnott_element,
    euler_factor,
    h0_check,
    h0_generators,
    h0_model,
    partial_zeta,
    pushforward_theta,
    theta_element,
    w_invariant,
)

Q = AbelianFieldSpec.rationals()


def sym_bernoulli_poly(n, q):
    x = sympy.Symbol("x")
    return Fraction(str(sympy.bernoulli(n, x).subs(x, sympy.Rational(q.numerator, q.denominator))))


def rat(G, cs):
    return GroupRingElement(G, RAT, tuple(Fraction(c) for c in cs))


# Bernoulli numbers and partial zetas


@pytest.mark.parametrize("k,v", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0), (12, Fraction(-691, 2730))])
def test_bernoulli_examples(k, v):
    assert bernoulli_number(k) == v


def test_bernoulli_against_sympy():
    for k in range(2, 40):
        assert bernoulli_number(k) == Fraction(str(sympy.bernoulli(k)))
    for n in range(1, 8):
        for q in (Fraction(1), Fraction(1, 4), Fraction(2, 3), Fraction(5, 7)):
            assert bernoulli_polynomial_eval(n, q) == sym_bernoulli_poly(n, q)


def test_bernoulli_polynomial_examples():
    assert bernoulli_polynomial_eval(2, 1) == Fraction(1, 6)
    assert bernoulli_polynomial_eval(2, Fraction(1, 4)) == Fraction(-1, 48)
    assert bernoulli_polynomial_eval(1, Fraction(1, 2)) == 0


def test_partial_zeta_examples():
    assert partial_zeta(1, 1, 2) == Fraction(-1, 12)
    assert partial_zeta(4, 1, 2) == Fraction(1, 24)
    assert partial_zeta(3, 2, 2) == Fraction(1, 12)
    with pytest.raises(BadResidue):
        partial_zeta(4, 2, 2)
    # the partial zetas mod f sum to the Riemann zeta value with p | f removed
    for f in (3, 4, 5, 8, 12):
        for n in (2, 4):
            total = sum(partial_zeta(f, a, n) for a in range(1, f + 1) if math.gcd(a, f) == 1)
            euler = math.prod(1 - Fraction(p) ** (n - 1) for p in sympy.primefactors(f))
            assert total == euler * partial_zeta(1, 1, n)


# Theta


def test_theta_examples():
    assert theta_element(Q, 2).element.coeffs == (Fraction(-1, 12),)
    t4 = theta_element(AbelianFieldSpec(4), 2)
    assert t4.coefficients() == [Fraction(1, 24), Fraction(1, 24)]
    assert str(t4) == "1/24 + 1/24σ_3"
    t3 = theta_element(AbelianFieldSpec(3), 2)
    assert t3.coefficients() == [Fraction(1, 12), Fraction(1, 12)]
    with pytest.raises(ValueError):
        theta_element(Q, 1)


def test_field_structure():
    K = AbelianFieldSpec(12)
    assert K.group.invariant_factors == (2, 2)
    assert [K.label(i) for i in K.coset_order()] == [1, 5, 7, 11]
    P = AbelianFieldSpec.plus_field(7)
    assert P.is_real and P.group.order == 3
    K = AbelianFieldSpec(16, (9,))
    assert K.group.order == 4
    with pytest.raises(BadResidue):
        AbelianFieldSpec(8, (2,))


def sigma_character_value(K, chi, a, inverse=False):
    """chi(sigma_a) or chi(sigma_a)^{-1} as a cyclotomic value."""
    idx = K.sigma(a)
    if inverse:
        idx = K.group.inverses[idx]
    return evaluate_character(GroupRingElement.basis(K.group, idx, RAT), chi)


def fields_up_to(fmax):
    for f in range(1, fmax + 1):
        if f % 4 == 2:
            continue
        yield AbelianFieldSpec(f)
        if f > 2:
            yield AbelianFieldSpec.plus_field(f)


def test_character_identity_small():
    for K in fields_up_to(12):
        for n in (2, 3):
            th = theta_element(K, n).element
            for chi in CharacterSpec.all(K.group):
                lhs = evaluate_character(th, chi)
                rhs = CyclotomicValue.constant(lhs.e, 0)
                for a in K.units:
                    b = sym_bernoulli_poly(n, Fraction(a or K.f, K.f))
                    c = -Fraction(K.f) ** (n - 1) * b / n
                    v = sigma_character_value(K, chi, a, inverse=True)
                    rhs = rhs + CyclotomicValue.constant(v.e, c) * v
                assert (lhs - rhs).vanishes_at_primitive_root()


def test_parity_vanishing_small():
    for K in fields_up_to(12):
        for n in (2, 3, 4):
            th = theta_element(K, n).element
            for chi in CharacterSpec.all(K.group):
                sign = sigma_character_value(K, chi, -1)
                expected = CyclotomicValue.constant(sign.e, (-1) ** n)
                if not (sign - expected).vanishes_at_primitive_root():
                    assert evaluate_character(th, chi).vanishes_at_primitive_root()
    # real fields at odd n: every character is even, so the whole element vanishes
    for f in (5, 7, 8, 12):
        assert theta_element(AbelianFieldSpec.plus_field(f), 3).element.is_zero()


# level change and Euler factors


def test_pushforward_examples():
    t4 = theta_element(AbelianFieldSpec(4), 2)
    assert pushforward_theta(t4, Q).element.coeffs == (Fraction(1, 12),)
    t12 = theta_element(AbelianFieldSpec(12), 2)
    K3 = AbelianFieldSpec(3)
    pushed = pushforward_theta(t12, K3)
    assert pushed.coefficients() == [Fraction(-1, 12), Fraction(-1, 12)]
    assert pushed.element == theta_element(K3, 2).element * euler_factor(2, K3, 2)
    assert pushforward_theta(t12, AbelianFieldSpec(12)).element == t12.element
    with pytest.raises(IncompatibleFields):
        pushforward_theta(t4, AbelianFieldSpec(3))


def test_euler_factor_examples():
    assert euler_factor(3, Q, 2) == rat(Q.group, [-2])
    K3 = AbelianFieldSpec(3)
    g2 = K3.sigma(2)
    E = euler_factor(2, K3, 2)
    assert E.coeffs[0] == 1 and E.coeffs[g2] == -2
    with pytest.raises(Ramified):
        euler_factor(3, K3, 2)


def test_euler_factor_characters():
    for f in range(3, 13):
        if f % 4 == 2:
            continue
        K = AbelianFieldSpec(f)
        for p in (2, 3, 5, 7, 11):
            if f % p == 0:
                continue
            for n in (2, 3):
                E = euler_factor(p, K, n)
                for chi in CharacterSpec.all(K.group):
                    lhs = evaluate_character(E, chi)
                    v = sigma_character_value(K, chi, p, inverse=True)
                    rhs = CyclotomicValue.constant(v.e, 1) - CyclotomicValue.constant(v.e, Fraction(p) ** (n - 1)) * v
                    assert (lhs - rhs).vanishes_at_primitive_root()


def test_level_compatibility():
    for f in range(1, 19):
        if f % 4 == 2:
            continue
        K = AbelianFieldSpec(f)
        for p in (2, 3, 5, 7):
            if f * p > 36 or (f * p) % 4 == 2:
                continue
            big = AbelianFieldSpec(f * p)
            for n in (2, 3):
                pushed = pushforward_theta(theta_element(big, n), K).element
                th = theta_element(K, n).element
                expected = th if f % p == 0 else th * euler_factor(p, K, n)
                assert pushed == expected


# w and the H^0 model


def w_by_definition(K, n, mmax=600):
    """Largest m <= mmax with a^n = 1 mod m for every a = h mod f, h in H, a prime to m."""
    best = 1
    for m in range(2, mmax + 1):
        L = math.lcm(K.f, m)
        if all(pow(a, n, m) == 1 for a in range(1, L + 1) if math.gcd(a, L) == 1 and a % K.f in K.H):
            best = m
    return best


def test_w_examples():
    assert w_invariant(Q, 1) == 2
    assert w_invariant(Q, 2) == 24
    assert w_invariant(Q, 4) == 240
    assert w_invariant(Q, 2, 3) == 3
    assert w_invariant(Q, 2, 5) == 1


def test_w_against_definition():
    for K in (Q, AbelianFieldSpec(3), AbelianFieldSpec(4), AbelianFieldSpec(5), AbelianFieldSpec.plus_field(5), AbelianFieldSpec(8)):
        for n in (1, 2, 3):
            assert w_invariant(K, n) == w_by_definition(K, n)


def test_h0_model_examples():
    M = h0_model(AbelianFieldSpec(4), 1, 3)
    assert M.factors == (1,) and M.actions == (((1,),),)
    assert h0_model(Q, 1, 3).factors == (1,)
    assert h0_model(Q, 1, 5).is_zero()


def test_h0_checks_small():
    for K in fields_up_to(12):
        for n in (1, 2):
            for l in (3, 5):
                killed, contained = h0_check(K, n, l)
                assert killed and contained
                M = h0_model(K, n, l)
                A = annihilator(M)
                for _, x in h0_generators(K, n, l):
                    assert A.contains(x)


# integrality


def test_coates_sinnott_examples():
    K4, K3 = AbelianFieldSpec(4), AbelianFieldSpec(3)
    assert K4.format(coates_sinnott_element(K4, 1, 3)) == "8 + 8σ_3"
    assert K3.format(coates_sinnott_element(K3, 1, 2)) == "6 + 6σ_2"
    assert coates_sinnott_element(K4, 1, 1).is_zero()
    rep = coates_sinnott_check(K4, 1, 3, 3)
    assert rep.passed and rep.to_dict()["product"] == "8 + 8σ_3"
    with pytest.raises(BadB):
        coates_sinnott_check(K4, 1, 3, 2)


def test_coates_sinnott_integrality_small_grid():
    primes = [p for p in range(2, 14) if is_prime(p)]
    for f in range(1, 13):
        if f % 4 == 2:
            continue
        K = AbelianFieldSpec(f)
        for n in (1, 2):
            for b in range(1, 21):
                if math.gcd(b, f) != 1:
                    continue
                x = coates_sinnott_element(K, n, b)
                assert all(x.is_l_integral(l) for l in primes)
