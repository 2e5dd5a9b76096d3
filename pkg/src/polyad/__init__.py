"""polyad: exact iterated-commutator expansions over polyindices,
with numerical certification of the bound chains that control them."""

from .polyindex import MultiIndex, Polyindex1, PolyindexD, gamma_of
from .enumeration import IndexQuadruple
from .engine import FormalExpansion, adjoint_step, closed_expansion, verify_induction

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Polyindex1",
    "PolyindexD",
    "MultiIndex",
    "gamma_of",
    "IndexQuadruple",
    "FormalExpansion",
    "closed_expansion",
    "adjoint_step",
    "verify_induction",
]
