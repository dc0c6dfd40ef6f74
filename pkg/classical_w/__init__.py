"""
Symbolic construction and verification of principal classical W-algebras
for gl_n, o_{2n+1}, sp_{2n}, o_{2n} and g_2.
"""
from .lie_core import LieAlgebraSpec, LieElement, build_spec
from .diffpoly import DiffPoly, DVar
from .pva import LambdaPoly
from .opalg import OpMatrix, OpSeries
from .wgen import GeneratorSet, generators, verify_membership
from .miura import miura_product, phi_agreement

__all__ = [
    "DVar",
    "DiffPoly",
    "GeneratorSet",
    "LambdaPoly",
    "LieAlgebraSpec",
    "LieElement",
    "OpMatrix",
    "OpSeries",
    "build_spec",
    "generators",
    "miura_product",
    "phi_agreement",
    "verify_membership",
]
