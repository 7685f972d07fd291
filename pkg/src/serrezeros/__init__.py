"""Zeros of Serre derivatives of Fricke-modular forms on the boundary arcs."""
from .qseries import EXACT, CoefficientDomain, QSeries, big_float
from .generators import (ModularForm, delta, e2p, eisenstein, fricke_eisenstein,
                         j_invariant)
from .serre import ord_infinity, serre_derivative, serre_iterate
from .geometry import domain_spec, forced_elliptic_order, rh_check, valence_budget
from .arcs import (ScanSettings, derivative_identity_check, interlacing_check, realness_check,
                   scan_zeros, valence_audit)
from .jpoly import certify_zeros_on_arc, decompose, serre_poly, sturm_count
from .formspec import parse_form_spec
from .config import RunConfig

__version__ = "0.1.0"
