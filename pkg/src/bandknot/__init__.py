"""Exact linking-form computations and band-unknotting bounds for knots."""

__version__ = "0.1.0"

from .errors import BandKnotError, CapExceeded, InconsistentBounds, InputError
from .config import cap_limit
from .groups import FiniteAbelianGroup
from .forms import LinkingForm, are_isometric, direct_sum, from_cyclic, negate
from .witt import mu_an, witt_decompose
from .knots import double_cover_form, load_records, parse_expression
from .obstructions import bounds, family_section5_check, lickorish_test, pm_square_solvable
from .kernels import BACKEND

__all__ = [
    "BACKEND", "BandKnotError", "CapExceeded", "FiniteAbelianGroup", "InconsistentBounds",
    "InputError", "LinkingForm", "are_isometric", "bounds", "cap_limit", "direct_sum",
    "double_cover_form", "family_section5_check", "from_cyclic", "lickorish_test",
    "load_records", "mu_an", "negate", "parse_expression", "pm_square_solvable",
    "witt_decompose",
]
