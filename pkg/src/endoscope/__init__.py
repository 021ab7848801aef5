"""Exact character computations for simple supercuspidal representations.

Subpackages, roughly bottom-up:

* :mod:`endoscope.cyclo`   -- exact arithmetic in Z[zeta_m], the value ring.
* :mod:`endoscope.ffield`  -- finite fields F_q with additive/multiplicative characters.
* :mod:`endoscope.expsum`  -- Gauss and Kloosterman sums plus their identity suite.
* :mod:`endoscope.padic`   -- fixed-precision p-adic scalars and matrices.
* :mod:`endoscope.iwahori` -- Iwahori filtrations, affine components, special elements.
* :mod:`endoscope.sschar`  -- simple supercuspidal character values (closed form and brute force).
* :mod:`endoscope.endoscopy` -- explicit norm pairs and the endoscopic character relation checks.
* :mod:`endoscope.cli`     -- the `endoscope` command line verification harness.
"""

from endoscope.errors import PrecisionError, VerificationError

__all__ = ["PrecisionError", "VerificationError"]
__version__ = "0.1.0"
