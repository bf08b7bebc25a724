"""Estimating mutual information with a tree-structured adaptive partition.

Draws correlated Gaussian pairs, estimates their mutual information, and
compares against the closed form -0.5*ln(1 - rho^2). Under independence the
regularized partition collapses to a single cell and the estimate is
exactly zero.
"""

import numpy as np

from rivkit import JointSample, Schedule, emi, gaussian_mi_oracle

schedule = Schedule()  # lambda=2.3e-5, w=0.05, l=0.167, a0=0.1
rng = np.random.default_rng(0)


def gaussian_pair(n, rho):
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    return JointSample(np.column_stack([z1, rho * z1 + np.sqrt(1 - rho**2) * z2]), 1, 1)


print("correlation   closed form   estimate   leaves")
for rho in (0.0, 0.3, 0.5, 0.7, 0.9):
    report = emi(gaussian_pair(4096, rho), schedule)
    oracle = gaussian_mi_oracle(rho)
    print(f"  rho={rho:3.1f}      {oracle:8.4f}    {report.emi:8.4f}   {report.leaf_count:4d}")

print()
print("the estimate approaches the closed form from below (rho=0.9); the")
print("regularization trades some resolution for exact zeros under independence:")
for n in (1024, 4096, 16384):
    report = emi(gaussian_pair(n, 0.9), schedule)
    print(f"  n={n:6d}   estimate {report.emi:.4f}   (closed form 0.8304)")

print()
print("independent pairs collapse the partition:")
report = emi(gaussian_pair(4096, 0.0), schedule)
print(f"  collapsed={report.collapsed}, leaf_count={report.leaf_count}, emi={report.emi}")
