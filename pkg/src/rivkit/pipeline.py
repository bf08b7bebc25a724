"""Residual pipeline: nominal-model evaluation, bias correction, RIV and RIF.

The monitored quantity is the estimated mutual information between a
system's input and its regression residual against a nominal model (the
residual information value, RIV). Per-input-coordinate estimations give the
residual information feature vector (RIF). Bias in the nominal model is
estimated by residual column means and corrected by shifting the model;
the correction changes reported residuals but never the information value,
because a constant shift moves every cell boundary identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .estimator import EmiReport, Schedule, emi
from .samples import JointSample, join


class DegenerateDataError(ValueError):
    """Input data cannot support the requested fit or statistic."""


@dataclass(frozen=True)
class NominalModel:
    """A deterministic input-to-output map standing in for the healthy system.

    ``evaluator`` takes an (m, p) input matrix and returns an (m, q) output
    matrix. ``params`` carries fit metadata when the model was built here.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    kind: str
    params: Optional[dict] = None

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.asarray(self.evaluator(x), dtype=np.float64)
        if out.ndim == 1:
            out = out[:, None]
        if out.shape[0] != x.shape[0]:
            raise ValueError("model returned a row count different from its input")
        if not np.isfinite(out).all():
            raise ValueError("model produced non-finite predictions")
        return out


@dataclass(frozen=True)
class ResidualSample:
    """Inputs paired with residuals against a nominal model."""

    x: np.ndarray
    r: np.ndarray
    bias_estimate: np.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[0]


def residuals(samples: JointSample, model: NominalModel) -> ResidualSample:
    """Exact residuals y - model(x) with their column-mean bias estimate."""
    predicted = model.predict(samples.x)
    if predicted.shape[1] != samples.q:
        raise ValueError(
            f"model outputs {predicted.shape[1]} coordinates, sample declares q={samples.q}"
        )
    r = samples.response - predicted
    return ResidualSample(x=samples.x, r=r, bias_estimate=r.mean(axis=0))


def estimate_bias(residual: ResidualSample) -> np.ndarray:
    """Mean residual per output coordinate."""
    if residual.n < 1:
        raise ValueError("cannot estimate bias from an empty residual sample")
    return residual.r.mean(axis=0)


def debias(model: NominalModel, bias: np.ndarray) -> NominalModel:
    """Shift the model by the estimated bias so residual means vanish."""
    bias = np.atleast_1d(np.asarray(bias, dtype=np.float64))

    def evaluate(x: np.ndarray) -> np.ndarray:
        return model.predict(x) + bias

    return NominalModel(evaluator=evaluate, kind=model.kind, params=model.params)


def _debiased_residuals(samples: JointSample, model: NominalModel,
                        correct_bias: bool) -> ResidualSample:
    raw = residuals(samples, model)
    if not correct_bias:
        return raw
    return residuals(samples, debias(model, raw.bias_estimate))


def riv(samples: JointSample, model: NominalModel, schedule: Schedule,
        correct_bias: bool = True) -> EmiReport:
    """Residual information value: EMI of the joined (input, residual) sample."""
    res = _debiased_residuals(samples, model, correct_bias)
    return emi(join(res.x, res.r), schedule)


def rif(samples: JointSample, model: NominalModel, schedule: Schedule,
        correct_bias: bool = True) -> np.ndarray:
    """Residual information feature: per-input-coordinate EMI with the residual.

    Entry j is the EMI of the bivariate pair (input coordinate j, residual);
    entries are independent of the processing order of other columns.
    """
    res = _debiased_residuals(samples, model, correct_bias)
    return np.array([
        emi(join(res.x[:, j], res.r), schedule).emi for j in range(res.x.shape[1])
    ])


def rif_signature(rifs: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate RIF vectors, in order, into one flat signature."""
    rifs = list(rifs)
    if not rifs:
        raise ValueError("signature needs at least one RIF vector")
    return np.concatenate([np.atleast_1d(np.asarray(v, dtype=np.float64)) for v in rifs])


def fit_linear(samples: JointSample) -> NominalModel:
    """Affine least-squares nominal model, one fit per output coordinate."""
    n, p = samples.x.shape
    if n <= p + 1:
        raise DegenerateDataError(
            f"affine fit needs more than p+1={p + 1} rows, got {n}"
        )
    design = np.hstack([np.ones((n, 1)), samples.x])
    rank = np.linalg.matrix_rank(design)
    if rank < p + 1:
        offending = _dependent_columns(design)
        raise DegenerateDataError(
            "design matrix is rank deficient; offending input columns: "
            + ", ".join(f"x{k}" for k in offending)
        )
    coef, *_ = np.linalg.lstsq(design, samples.response, rcond=None)
    intercept = coef[0].copy()
    slopes = coef[1:].copy()

    def evaluate(x: np.ndarray) -> np.ndarray:
        return x @ slopes + intercept

    return NominalModel(
        evaluator=evaluate,
        kind="linear_affine",
        params={"intercept": intercept, "coef": slopes.T},
    )


def _dependent_columns(design: np.ndarray) -> List[int]:
    """1-indexed input columns that do not add rank to the design."""
    offending = []
    rank = np.linalg.matrix_rank(design)
    for k in range(1, design.shape[1]):
        reduced = np.delete(design, k, axis=1)
        if np.linalg.matrix_rank(reduced) == rank:
            offending.append(k)
    return offending


def table_model(x: np.ndarray, predictions: np.ndarray,
                atol: float = 1e-9) -> NominalModel:
    """Nominal model backed by a row-aligned prediction table.

    The evaluator only serves the exact inputs it was built from; querying
    anything else is a misalignment error.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim == 1:
        predictions = predictions[:, None]
    if x.shape[0] != predictions.shape[0]:
        raise ValueError(
            f"prediction table has {predictions.shape[0]} rows, inputs have {x.shape[0]}"
        )

    def evaluate(query: np.ndarray) -> np.ndarray:
        if query.shape != x.shape or not np.allclose(query, x, rtol=0.0, atol=atol):
            raise ValueError("queried inputs are not aligned with the prediction table")
        return predictions

    return NominalModel(evaluator=evaluate, kind="external_table")
