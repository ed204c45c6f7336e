"""
Stickelberger elements at negative integers
===========================================

Tables of Theta coefficients for small conductors, the w_n invariants of Q,
and the integrality of w (b^(n+1) - sigma_b) Theta.
"""

# %%
# Theta for small conductors
# --------------------------
from relk0.stickelberger import (
    AbelianFieldSpec,
    coates_sinnott_element,
    theta_element,
    w_invariant,
)

for f in (1, 3, 4, 5, 7, 8):
    K = AbelianFieldSpec(f)
    for n in (2, 3):
        print(f"f={f:2d} n={n}  Theta = {theta_element(K, n)}")

# %%
# Real subfields
# --------------
# Odd n kills every even character, so Theta vanishes on real fields.
for f in (5, 7, 12):
    K = AbelianFieldSpec.plus_field(f)
    print(f"f={f:2d}+  n=2 {theta_element(K, 2)}   n=3 {theta_element(K, 3)}")

# %%
# w_n(Q)
# ------
print("w_n(Q):", [w_invariant(AbelianFieldSpec.rationals(), n) for n in range(1, 9)])

# %%
# Integral multiples
# ------------------
for f, n, b in [(4, 1, 3), (3, 1, 2), (5, 1, 2), (7, 2, 3), (12, 1, 5)]:
    K = AbelianFieldSpec(f)
    x = coates_sinnott_element(K, n, b)
    print(f"f={f:2d} n={n} b={b}: {K.format(x)}")
