"""Shared helpers for the test suite."""

import math

import numpy as np

from rivkit import JointSample, Schedule, SystemSpec, emi, nominal_model, riv
from rivkit.systems import sample_system

SCHEDULE = Schedule()  # the reported defaults: lambda=2.3e-5, w=0.05, l=0.167, a0=0.1


def pipeline_report(family: str, delta, n: int, seed: int, schedule: Schedule = SCHEDULE):
    """Full pipeline on one seeded system: sample, residuals, EMI report."""
    spec = SystemSpec(family, tuple(delta), seed=seed)
    sample = sample_system(spec, n)
    return riv(sample, nominal_model(spec), schedule)


def gaussian_pair(seed: int, n: int, rho: float) -> JointSample:
    """n draws of a correlated standard bivariate Gaussian."""
    rng = np.random.default_rng(seed)
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    return JointSample(
        np.column_stack([z1, rho * z1 + math.sqrt(1.0 - rho * rho) * z2]), p=1, q=1
    )


def gaussian_emi(seed: int, n: int, rho: float, schedule: Schedule = SCHEDULE):
    return emi(gaussian_pair(seed, n, rho), schedule)
