"""toprec: exact symplectic invariants of genus-0 spectral curves.

Residue-recursion correlators, free energies, loop-equation and Virasoro
constraint checks, and local decomposition data (pole/branch moduli, blow-up
curves, intertwining kernel coefficients), all in exact rational arithmetic
with an optional float backend.
"""

__version__ = "0.1.0"

from toprec._kernels import IMPLEMENTATION as kernel_implementation  # noqa: F401
