"""Topological drawings of multigraphs, their planarizations, and exact
discharging certificates of the 4-planar bound ``|E| <= 6(n - 2)``."""

from .discharge import CertificateReport, certify
from .drawing import CrossingRec, DrawingSpec, EdgeRec, Planarization, planarize
from .errors import FourPlanarError
from .extremal import generate_optimal, hex1
from .faces import classify, detect_hstar
from .fileio import parse_drawing, read_drawing, serialize_drawing, write_drawing
from .rewrite import normalize

__all__ = [
    "CertificateReport",
    "CrossingRec",
    "DrawingSpec",
    "EdgeRec",
    "FourPlanarError",
    "Planarization",
    "certify",
    "classify",
    "detect_hstar",
    "generate_optimal",
    "hex1",
    "normalize",
    "parse_drawing",
    "planarize",
    "read_drawing",
    "serialize_drawing",
    "write_drawing",
]

__version__ = "0.1.0"
