"""JSON documents read and written by the command-line tool.

A :class:`DistributionDocument` describes one distribution. The fields that
must be present depend on ``type`` (and, for univariate distributions, on
``parametrization``); any other field is rejected.

=====================  ==========================================
type                   required fields
=====================  ==========================================
univariate/classic     ``mu``, ``sigma``
univariate/source      ``lambda1``, ``lambda2``
univariate/natural     ``theta1``, ``theta2``
univariate/expectation ``eta1``, ``eta2``
round                  ``mu`` (list), ``sigma``
diagonal               ``mu`` (list), ``sigma`` (list)
fixed-mean             ``mu`` (list), ``covariance`` (list of rows)
bivariate-angular      ``sigma1``, ``sigma2``, ``mu1``, ``mu2``, ``u``
=====================  ==========================================

Shape checks live here; value checks such as ``sigma > 0`` happen when the
document is turned into a library object, so they surface as domain errors.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, model_validator

from . import multivariate as mv
from . import univariate as uni

ModelType = Literal["univariate", "round", "diagonal", "fixed-mean", "bivariate-angular"]
Parametrization = Literal["classic", "source", "natural", "expectation"]

_STRICT = ConfigDict(extra="forbid", allow_inf_nan=False)

_UNIVARIATE_FIELDS = {
    "classic": ("mu", "sigma"),
    "source": ("lambda1", "lambda2"),
    "natural": ("theta1", "theta2"),
    "expectation": ("eta1", "eta2"),
}
_FIELDS = {
    "round": ("mu", "sigma"),
    "diagonal": ("mu", "sigma"),
    "fixed-mean": ("mu", "covariance"),
    "bivariate-angular": ("sigma1", "sigma2", "mu1", "mu2", "u"),
}
_PAYLOAD = (
    "mu", "sigma", "lambda1", "lambda2", "theta1", "theta2", "eta1", "eta2",
    "covariance", "sigma1", "sigma2", "mu1", "mu2", "u",
)


class DistributionDocument(BaseModel):
    model_config = _STRICT

    type: ModelType
    parametrization: Optional[Parametrization] = None
    mu: Optional[Union[float, List[float]]] = None
    sigma: Optional[Union[float, List[float]]] = None
    lambda1: Optional[float] = None
    lambda2: Optional[float] = None
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    eta1: Optional[float] = None
    eta2: Optional[float] = None
    covariance: Optional[List[List[float]]] = None
    sigma1: Optional[float] = None
    sigma2: Optional[float] = None
    mu1: Optional[float] = None
    mu2: Optional[float] = None
    u: Optional[float] = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.type == "univariate":
            required = _UNIVARIATE_FIELDS[self.parametrization or "classic"]
        else:
            if self.parametrization is not None:
                raise ValueError("parametrization applies to univariate distributions only")
            required = _FIELDS[self.type]
        present = {name for name in _PAYLOAD if getattr(self, name) is not None}
        missing = [name for name in required if name not in present]
        extra = sorted(present - set(required))
        if missing:
            raise ValueError(f"{self.type} distribution is missing {', '.join(missing)}")
        if extra:
            raise ValueError(f"fields not allowed for {self.type}: {', '.join(extra)}")
        scalar = {"univariate": ("mu", "sigma"), "round": ("sigma",)}.get(self.type, ())
        vector = {"round": ("mu",), "diagonal": ("mu", "sigma"), "fixed-mean": ("mu",)}.get(self.type, ())
        for name in scalar:
            if name in required and isinstance(getattr(self, name), list):
                raise ValueError(f"{name} must be a number for {self.type}")
        for name in vector:
            if not isinstance(getattr(self, name), list):
                raise ValueError(f"{name} must be a list for {self.type}")
        return self

    def to_model(self):
        """Build the library object; raises a domain error on invalid values."""
        if self.type == "univariate":
            param = self.parametrization or "classic"
            a, b = (getattr(self, n) for n in _UNIVARIATE_FIELDS[param])
            return uni.to_classic((a, b), param)
        if self.type == "round":
            return mv.RoundGaussian(self.mu, self.sigma)
        if self.type == "diagonal":
            return mv.DiagonalGaussian(self.mu, self.sigma)
        if self.type == "fixed-mean":
            return mv.FixedMeanGaussian(self.mu, self.covariance)
        return mv.BivariateAngular(self.sigma1, self.sigma2, self.mu1, self.mu2, self.u)

    def echo(self) -> dict:
        return self.model_dump(exclude_none=True)


class InputDocument(BaseModel):
    """Contents of ``--in`` files: one or two distributions, or a weighted set."""

    model_config = _STRICT

    p: Optional[DistributionDocument] = None
    q: Optional[DistributionDocument] = None
    points: Optional[List[DistributionDocument]] = None
    weights: Optional[List[float]] = None


class PointRow(BaseModel):
    model_config = _STRICT

    t: float
    mu: float
    sigma: float


Scalar = Union[bool, int, float, str]


class ResultDocument(BaseModel):
    model_config = _STRICT

    operation: str
    inputs: Dict[str, Union[DistributionDocument, List[DistributionDocument], List[float], Scalar]]
    results: Dict[str, float]
    points: Optional[List[PointRow]] = None
    matrices: Optional[Dict[str, List[List[float]]]] = None
    assignments: Optional[List[int]] = None
    diagnostics: Dict[str, Scalar] = {}
