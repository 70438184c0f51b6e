"""Heat kernels, Green functions and killed Monte Carlo for the relativistic stable process
outside a ball."""

from .bounds_catalog import EnvelopeReport, verify_envelope
from .free_kernel import eval_free, eval_free_green
from .green_integrals import GreenDecomposition, assemble_J
from .killed_mc import (
    McEstimate,
    hitting_prob_ball,
    killed_density_huntformula,
    killed_density_smallball,
    killed_green_occupation,
    survival_prob,
)
from .model import ExteriorBallDomain, ProcessParams, SpaceTimePoint
from .subordinator_sampler import SeedSpec, StepPolicy
from .suites import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "EnvelopeReport", "ExteriorBallDomain", "GreenDecomposition", "McEstimate", "ProcessParams",
    "SUITES", "SeedSpec", "SpaceTimePoint", "StepPolicy", "assemble_J", "eval_free",
    "eval_free_green", "hitting_prob_ball", "killed_density_huntformula",
    "killed_density_smallball", "killed_green_occupation", "run_suite", "survival_prob",
    "verify_envelope",
]
