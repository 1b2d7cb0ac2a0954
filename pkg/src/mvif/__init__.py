"""Multivariate interpolation over finite fields and one-step decoding of
arbitrary cyclic codes."""

from .code import CyclicCode, ErrorPattern, build_code, parse_code_spec
from .decoder import CyclicCodeDecoder, decode_gelp, decode_one_step
from .field import GaloisField, make_field
from .interpolation import MVIFInterpolator, delta_poly, mvif_naive, mvif_orbit
from .poly import SparseMultiPoly
from .representations import (
    RepresentationArtifact,
    build_gelp_coefficients,
    build_unknown_syndrome_rep,
)

__all__ = [
    "CyclicCode",
    "CyclicCodeDecoder",
    "ErrorPattern",
    "GaloisField",
    "MVIFInterpolator",
    "RepresentationArtifact",
    "SparseMultiPoly",
    "build_code",
    "build_gelp_coefficients",
    "build_unknown_syndrome_rep",
    "decode_gelp",
    "decode_one_step",
    "delta_poly",
    "make_field",
    "mvif_naive",
    "mvif_orbit",
    "parse_code_spec",
]
