"""Recursive subproduct subcodes of second-order Reed-Muller codes.

Construction and exact weight analysis of the code family, a
projection-based belief propagation decoder with local graph search
refinement, and an AWGN Monte-Carlo simulation harness.
"""

from .gf2 import BitMatrix, BitVector
from .codebook import CodeSpec, CodeInstance, build_code

__all__ = [
    "BitMatrix",
    "BitVector",
    "CodeSpec",
    "CodeInstance",
    "build_code",
]
