"""Group rings, finite modules and det classes of perfect complexes over Z_l[G]."""

from .errors import Relk0Error
from .grouprings import (
    DetClass,
    FiniteAbelianGroup,
    GroupRingElement,
    det_class_equals,
)
from .linalg import GroupRingMatrix
from .modules import ConcreteModule, PresentedModule, annihilator, fitting_ideal, realize
from .complexes import PerfectComplex, det_class, homology, verify_theorem_2_4
from .stickelberger import AbelianFieldSpec, theta_element

__all__ = [
    "AbelianFieldSpec",
    "ConcreteModule",
    "DetClass",
    "FiniteAbelianGroup",
    "GroupRingElement",
    "GroupRingMatrix",
    "PerfectComplex",
    "PresentedModule",
    "Relk0Error",
    "annihilator",
    "det_class",
    "det_class_equals",
    "fitting_ideal",
    "homology",
    "realize",
    "theta_element",
    "verify_theorem_2_4",
]

__version__ = "0.1.0"
