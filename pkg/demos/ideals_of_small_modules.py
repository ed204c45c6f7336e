"""
Annihilators and Fitting ideals of small modules
================================================

Builds a few finite modules over Z_l[G], prints their annihilator and
Fitting ideals, and shows a module over C_3 x C_3 whose Fitting ideal is
not carried to the Fitting ideal of the dual by the involution.
"""

# %%
# A twisted Z/4
# -------------
# Z/4 with the generator of C_2 acting as 3, written as a cokernel
# of two relations on one generator.
from relk0 import FiniteAbelianGroup, GroupRingElement, GroupRingMatrix
from relk0.grouprings import INT
from relk0.modules import (
    PresentedModule,
    annihilator,
    fitting_ideal,
    ideal_contains,
    min_generators,
    pontryagin_dual,
    realize,
)

C2 = FiniteAbelianGroup.parse("C2")
rels = GroupRingMatrix(C2, INT, [[GroupRingElement(C2, INT, (4, 0))], [GroupRingElement(C2, INT, (-3, 1))]])
M = realize(PresentedModule(C2, 2, rels))
print("factors", M.factors, "action of g", M.actions[0])

A = annihilator(M)
F = fitting_ideal(M, N=A.N)
print("ann basis    ", [r for r in A.basis.rows])
print("fitting basis", [r for r in F.basis.rows])
for x in [(1, 1), (2, 0), (4, 0), (1, -1)]:
    print(x, "in ann:", ideal_contains(A, GroupRingElement(C2, INT, x)))

# %%
# The augmentation kernel over C_l x C_l
# --------------------------------------
# For a non-cyclic l-group the Fitting ideal of the dual differs from the
# tau-image of the Fitting ideal; the augmentation valuations tell them apart.
from relk0.complexes import augmentation_kernel_mod_l

for l in (3, 5):
    W = augmentation_kernel_mod_l(l)
    D = pontryagin_dual(W)
    print(
        f"l={l}: |M| = {l}^{len(W.factors)}, generators {min_generators(W)},",
        f"v(aug F(M)) = {fitting_ideal(W).augmentation_valuation()},",
        f"v(aug F(M^#)) = {fitting_ideal(D).augmentation_valuation()}",
    )
