import cmath
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np


@dataclass(frozen=True, slots=True)
class TransferMatrix:
    """Complex 2x2 transfer matrix [[m11, m12], [m21, m22]]."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def identity(cls):
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @classmethod
    def diagonal(cls, first, second):
        return cls(complex(first), 0j, 0j, complex(second))

    def __matmul__(self, other):
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def adjugate(self):
        """Inverse of a unimodular matrix."""
        return TransferMatrix(self.m22, -self.m12, -self.m21, self.m11)

    def det_drift(self):
        """|det - 1| relative to the size of the products that det() cancels."""
        scale = max(1.0, abs(self.m11 * self.m22), abs(self.m12 * self.m21))
        return abs(self.det() - 1.0) / scale

    def half_trace(self):
        return 0.5 * (self.m11 + self.m22)

    def is_finite(self):
        return all(cmath.isfinite(entry) for entry in (self.m11, self.m12, self.m21, self.m22))


@dataclass(frozen=True, eq=False)
class SegmentGeometry:
    """Explicit barrier intervals of a stage-G system; all widths are equal."""

    span: float
    offsets: np.ndarray
    widths: np.ndarray

    def __post_init__(self):
        for array in (self.offsets, self.widths):
            array.flags.writeable = False

    def __len__(self):
        return len(self.offsets)

    @property
    def barriers(self):
        return list(zip(self.offsets.tolist(), self.widths.tolist()))

    @property
    def ends(self):
        return self.offsets + self.widths

    def gaps(self):
        """Widths of the empty intervals between consecutive barriers."""
        return self.offsets[1:] - self.ends[:-1]

    def total_width(self):
        return float(np.sum(self.widths))


@dataclass(frozen=True)
class BlochSequence:
    omegas: Tuple[float, ...]
    prefix_products: Tuple[float, ...]

    def __len__(self):
        return len(self.omegas)

    @property
    def product(self):
        return self.prefix_products[-1] if self.prefix_products else 1.0


class RegionKind(str, Enum):
    BARRIER = "barrier"
    GAP = "gap"


class Region(NamedTuple):
    kind: RegionKind
    width: float


@dataclass(frozen=True)
class RegionSequence:
    regions: Tuple[Region, ...]

    def __iter__(self):
        return iter(self.regions)

    def __len__(self):
        return len(self.regions)

    def total_width(self):
        return sum(region.width for region in self.regions)

    def mirrored(self):
        return RegionSequence(tuple(reversed(self.regions)))
