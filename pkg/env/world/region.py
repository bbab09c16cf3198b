"""
Region - Continuous rectangular deployment area.

The Region handles:
- Bounds checks and reflection at the borders
- Distances and pairwise distance matrices
- Uniform sampling of positions

Coordinate System:
- X increases to the RIGHT
- Y increases UPWARD
- Origin (0, 0) is at BOTTOM-LEFT; the region is [0, width] × [0, height]
"""

from __future__ import annotations

import math

import numpy as np

from ..core.types import Position


class Region:
    """
    A rectangle in model units, with no state of its own.

    Attributes:
        width: extent along X
        height: extent along Y
    """

    def __init__(self, width: float, height: float):
        """
        Raises:
            ValueError: a dimension is not positive (zero-measure region)
        """
        if width <= 0 or height <= 0:
            raise ValueError(f"Region must have positive measure: {width}x{height}")
        self.width = float(width)
        self.height = float(height)

    @property
    def area(self) -> float:
        return self.width * self.height

    def in_bounds(self, pos: Position) -> bool:
        x, y = pos
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    def distance(self, a: Position, b: Position) -> float:
        return math.hypot(a[0] - b[0], a[1] - b[1])

    @staticmethod
    def distance_matrix(points: np.ndarray) -> np.ndarray:
        """Euclidean distances between all rows of an (n, 2) array."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        diff = points[:, None, :] - points[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    def uniform(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """`n` positions drawn uniformly from the region, as an (n, 2) array."""
        return rng.uniform((0.0, 0.0), (self.width, self.height), size=(n, 2))

    def reflect(self, points: np.ndarray) -> np.ndarray:
        """Fold positions that left the region back in, mirror-style."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        sizes = np.array([self.width, self.height])
        period = 2.0 * sizes
        folded = np.mod(points, period)
        return np.where(folded > sizes, period - folded, folded)

    def edge_positions(self, n: int, side: str, inset: float = 0.5) -> list[Position]:
        """
        `n` points evenly spaced along the left or right edge.

        Args:
            n: number of points
            side: "left" or "right"
            inset: distance from the edge
        """
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        x = min(inset, self.width / 2) if side == "left" else max(self.width - inset, self.width / 2)
        return [(x, self.height * (k + 1) / (n + 1)) for k in range(n)]

    def __str__(self) -> str:
        return f"Region({self.width:g}x{self.height:g})"

    def __repr__(self) -> str:
        return f"Region(width={self.width}, height={self.height})"
