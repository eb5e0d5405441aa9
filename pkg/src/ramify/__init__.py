"""Key polynomials of plane valuations, quadratic transforms and monomial extensions.

Everything is exact: rational or finite-field coefficients, algebraic
extensions given by explicit minimal polynomials, rational values.
"""
from .keyseq import (Budget, Exactness, KeySequence, LocalRingModel, PrecisionError,
                     SequenceError, StepSpec, build_sequence, expand, graded_piece,
                     initial_form, nu_eval)
from .transform import iterate_quadratic, iterate_transforms, quadratic_transform
from .extension import (check_stability, make_pair, transfer_sequence, verify_corollary,
                        verify_theorem2)
from .abhyankar import MonomialExtension, MonomialValuation, monomial_nu, verify_prop1
from .specfile import load_spec

__version__ = "0.1.0"

__all__ = [
    "Budget", "Exactness", "KeySequence", "LocalRingModel", "PrecisionError", "SequenceError",
    "StepSpec", "build_sequence", "expand", "graded_piece", "initial_form", "nu_eval",
    "iterate_quadratic", "iterate_transforms", "quadratic_transform",
    "check_stability", "make_pair", "transfer_sequence", "verify_corollary", "verify_theorem2",
    "MonomialExtension", "MonomialValuation", "monomial_nu", "verify_prop1",
    "load_spec",
]
