"""
Determinant classes of mapping cones
====================================

Generates cones of 1 - u on a two-term complex, computes their homology and
det(X) class, and runs the annihilator verifier on a batch of them.
"""

# %%
# One cone by hand
# ----------------
import random

from relk0 import FiniteAbelianGroup, GroupRingElement, GroupRingMatrix
from relk0.complexes import ConeSpec, det_class, generate_cone, homology, truncate, dualize, verify_theorem_2_4
from relk0.grouprings import INT, det_class_equals

G = FiniteAbelianGroup.parse("C2")
spec = ConeSpec(G, 2, GroupRingMatrix.zeros(G, 1, 1), GroupRingElement(G, INT, (3, 0)), GroupRingElement(G, INT, (3, 0)))
C = generate_cone(spec)
H = homology(C)
print("ranks", C.ranks, "homology orders", [M.order for M in H.modules], "m0, m1 =", H.m0, H.m1)
print("det class", det_class(C).rep, "expected", spec.expected_class().rep)

# %%
# Truncation and duality keep the class
# -------------------------------------
T = truncate(C)
D = dualize(T)
print("truncated ranks", T.ranks, "dual ranks", D.ranks)
print("dual class", det_class(D).rep, "tau-inverse of class", det_class(T).rep.tau().inverse())

# %%
# A batch through the verifier
# ----------------------------
from relk0.complexes import random_cone

rng = random.Random(0)
passed = 0
for i in range(20):
    spec, C = random_cone(rng, 3, FiniteAbelianGroup.parse("C3"))
    rep = verify_theorem_2_4(C)
    agrees = det_class_equals(rep.det, spec.expected_class())
    passed += rep.passed and agrees
    print(i, C.ranks, [M.order for M in rep.homology.modules[:2]], "checks", len(rep.checks), "pass", rep.passed and agrees)
print(f"{passed}/20 passed")
