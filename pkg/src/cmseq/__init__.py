"""Completely monotone sequences, Fuss-Catalan numbers and Hausdorff moments."""
from .seqcore import (DiscreteMeasure, MonotonicityReport, Sequence, check_completely_alternating,
                      check_completely_monotone, check_dilated_hausdorff)
from .fusscatalan import FcParams, fc_number, fc_sequence

__all__ = ["Sequence", "DiscreteMeasure", "MonotonicityReport", "check_completely_monotone",
           "check_completely_alternating", "check_dilated_hausdorff", "FcParams", "fc_number",
           "fc_sequence"]
__version__ = "0.1.0"
