"""annkh: Khovanov, reduced and annular Khovanov homology over F2 for annular links.

Links are given as annular closures of slice-word tangles.  Besides the
homology the package computes the annular Jones polynomial SJ, the
Reshetikhin-Turaev weight-block matrices of the underlying tangle, the
spectral sequence of the k-filtration, and the combinatorial Alexander_S
grading of the matching sutured Floer generators.
"""

__version__ = "0.1.0"

from .tangle import TangleDiagram, parse_diagram, serialize, mirror, braid_closure  # noqa: E402
from .khcomplex import build_complex  # noqa: E402
from .invariants import sj_statesum, jones  # noqa: E402

__all__ = ["TangleDiagram", "parse_diagram", "serialize", "mirror", "braid_closure",
           "build_complex", "sj_statesum", "jones", "__version__"]
