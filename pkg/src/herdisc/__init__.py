"""Exact and certified computation of discrepancy, hereditary discrepancy,
the determinant lower bound and vector discrepancy, at desk scale."""

__version__ = "0.1.0"

from .core import (BudgetExceeded, InvalidInput, SetSystem, coloring_discrepancy, restrict,
                   union_tagged)
from .detlb import DetlbWitness, NoWitness, detlb_exact, detlb_greedy, union_bound_check
from .disc import disc_exact, herdisc_exact, herdisc_sampled
from .instances import parse_instance, serialize
from .pipeline import almost_constant_subset, extract_witness, gap_report, verify_chain
from .vecdisc import DualCertificate, hervecdisc, solve_vecdisc, verify_certificate

__all__ = [
    "BudgetExceeded", "InvalidInput", "SetSystem", "coloring_discrepancy", "restrict",
    "union_tagged", "DetlbWitness", "NoWitness", "detlb_exact", "detlb_greedy",
    "union_bound_check", "disc_exact", "herdisc_exact", "herdisc_sampled", "parse_instance",
    "serialize", "almost_constant_subset", "extract_witness", "gap_report", "verify_chain",
    "DualCertificate", "hervecdisc", "solve_vecdisc", "verify_certificate",
]
