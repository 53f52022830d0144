import math
from itertools import product
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ucp import config


def first_invalid_stage(alpha, beta, G):
    """Smallest g in 1..G with alpha + beta*g <= 0, or None when every stage is well formed."""
    if G < 1:
        return None
    if alpha + beta > 0 and alpha + beta * G > 0:
        return None
    if alpha + beta <= 0:
        return 1
    # alpha + beta*g is linear in g: it crosses zero once, somewhere after g=1
    g = max(1, math.floor(-alpha / beta))
    while g > 1 and alpha + beta * (g - 1) <= 0:
        g -= 1
    while alpha + beta * g > 0:
        g += 1
    return g


# Potential definition: five shape parameters plus the stage
class UcpSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: float
    V: float
    rho: float
    alpha: float
    beta: float
    G: int = Field(ge=0)

    @model_validator(mode="after")
    def check_well_formed(self):
        if not math.isfinite(self.L) or self.L <= 0:
            raise ValueError(f"L > 0 violated: L={self.L}")
        if not math.isfinite(self.V):
            raise ValueError(f"V must be finite: V={self.V}")
        if not math.isfinite(self.rho) or self.rho <= 1:
            raise ValueError(f"rho > 1 violated: rho={self.rho}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError(f"alpha and beta must be finite: alpha={self.alpha}, beta={self.beta}")
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("(alpha, beta) != (0, 0) violated: alpha and beta cannot both be zero")
        g = first_invalid_stage(self.alpha, self.beta, self.G)
        if g is not None:
            raise ValueError(
                f"alpha + beta*G > 0 violated: alpha + beta*g <= 0 at g={g} "
                f"(alpha={self.alpha}, beta={self.beta}, G={self.G})"
            )
        return self

    def with_stage(self, G):
        return UcpSpec(**{**self.model_dump(), "G": G})

    def with_height(self, V):
        return UcpSpec(**{**self.model_dump(), "V": V})


class ScatterResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    transmission: float = Field(ge=0.0, le=1.0)
    reflection: float = Field(ge=0.0, le=1.0)
    log10_transmission: float = Field(le=0.0)
    log10_reflection: float = Field(le=0.0)


class ScalingFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_window: Tuple[float, float]
    slope: float
    intercept: float
    r_squared: float
    n_used: int
    method: Literal["envelope", "filtered", "normalized"] = "envelope"

    @field_validator("k_window")
    @classmethod
    def check_window(cls, value):
        if not value[0] < value[1]:
            raise ValueError(f"k_min < k_max violated: {value}")
        return value


class SaturationEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage: int
    next_stage: int
    metric: float = Field(ge=0.0)


class SaturationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: float
    V: float
    rho: float
    alpha: float
    beta: float
    k_min: float
    k_max: float
    n_k: int
    quantity: Literal["log10_transmission", "log10_reflection"] = "log10_transmission"
    V0: Optional[float] = None
    entries: List[SaturationEntry]

    @property
    def metrics(self):
        return [entry.metric for entry in self.entries]

    def is_strictly_decreasing(self, from_stage=0):
        values = [entry.metric for entry in self.entries if entry.stage >= from_stage]
        return all(later < earlier for earlier, later in zip(values, values[1:]))


# Schema for a transmission sweep, as read from flags or a config file
class SweepConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: UcpSpec
    k_min: float = Field(gt=0.0)
    k_max: float
    n_k: int = Field(ge=2)
    scale: Literal["linear", "log"] = "log"
    engine: Literal["closed_form", "oracle", "both"] = "closed_form"
    out: Optional[Path] = None
    workers: int = Field(default=config.WORKERS, ge=1)

    @model_validator(mode="after")
    def check_window(self):
        if not self.k_max > self.k_min:
            raise ValueError(f"k_max > k_min violated: k_min={self.k_min}, k_max={self.k_max}")
        return self

    def k_grid(self):
        if self.scale == "log":
            return np.geomspace(self.k_min, self.k_max, self.n_k)
        return np.linspace(self.k_min, self.k_max, self.n_k)

    @classmethod
    def from_flat(cls, values):
        spec = UcpSpec(**{key: values[key] for key in ("L", "V", "rho", "alpha", "beta", "G")})
        options = {
            "k_min": values["kmin"],
            "k_max": values["kmax"],
            "n_k": values["nk"],
            "scale": values.get("scale") or "log",
            "engine": values.get("engine") or "closed_form",
            "out": values.get("out"),
        }
        if values.get("workers") is not None:
            options["workers"] = values["workers"]
        return cls(spec=spec, **options)

    def to_flat(self):
        return {
            **self.spec.model_dump(),
            "kmin": self.k_min,
            "kmax": self.k_max,
            "nk": self.n_k,
            "scale": self.scale,
            "engine": self.engine,
            "workers": self.workers,
            "out": str(self.out) if self.out is not None else None,
        }


class GridAxis(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: Literal["alpha", "beta", "rho"]
    start: float
    stop: float
    count: int = Field(ge=1)

    @model_validator(mode="after")
    def check_range(self):
        if self.stop < self.start:
            raise ValueError(f"{self.name} axis needs start <= stop, got [{self.start}, {self.stop}]")
        return self

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


# Parameter-space scan over up to three of (alpha, beta, rho) at a fixed stage
class GridConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: float
    V: float
    G: int = Field(ge=0)
    alpha: float = 1.0
    beta: float = 0.0
    rho: float = 3.0
    axes: List[GridAxis] = Field(default_factory=list, max_length=3)
    ks: List[float] = Field(min_length=1)
    workers: int = Field(default=config.WORKERS, ge=1)

    @model_validator(mode="after")
    def check_axes(self):
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"Grid axes must be distinct, got {names}")
        if any(not k > 0 for k in self.ks):
            raise ValueError("k > 0 violated in grid k list")
        return self

    def axis_values(self, name):
        for axis in self.axes:
            if axis.name == name:
                return [float(value) for value in axis.values()]
        return [getattr(self, name)]

    def points(self):
        """Grid points in row order: alpha outermost, then beta, then rho."""
        return list(product(self.axis_values("alpha"), self.axis_values("beta"), self.axis_values("rho")))


class SweepRow(BaseModel):
    k: float
    transmission: float
    reflection: float
    log10_transmission: float
    oracle_transmission: Optional[float] = None
    abs_diff: Optional[float] = None


class GridRow(BaseModel):
    alpha: float
    beta: float
    rho: float
    k: float
    valid: bool
    transmission: Optional[float] = None
