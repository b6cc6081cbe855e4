"""Signature-aware 3-vector algebra for R^3 and Minkowski R^{2,1}.

Vectors are plain numpy arrays of shape (3,).  The Lorentzian inner
product uses signature (+,+,-) on the third coordinate.  The Lorentzian
cross product is pinned by the determinant identity

    <cross(a, b), c> = det(a, b, c)   for all c,

which makes it the unique bilinear product for which the magnetic
geodesic system reads identically in both signatures.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

__all__ = ["Signature", "vec", "dot", "cross", "norm"]


class Signature(Enum):
    EUCLIDEAN = "euclidean"
    LORENTZIAN = "lorentzian"

    @property
    def metric_diag(self) -> np.ndarray:
        if self is Signature.EUCLIDEAN:
            return np.array([1.0, 1.0, 1.0])
        return np.array([1.0, 1.0, -1.0])


def vec(x: float, y: float, z: float) -> np.ndarray:
    """Build a finite ambient vector; rejects NaN/Inf components."""
    a = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"ambient vector has non-finite components: {a}")
    return a


def dot(sig: Signature, a: np.ndarray, b: np.ndarray) -> float:
    """Signature inner product <a, b>."""
    if sig is Signature.EUCLIDEAN:
        return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


def cross(sig: Signature, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Signature cross product, pinned by <a x b, c> = det(a, b, c).

    Euclidean: the standard cross product.  Lorentzian: third component
    flips sign relative to the Euclidean one.
    """
    wx = a[1] * b[2] - a[2] * b[1]
    wy = a[2] * b[0] - a[0] * b[2]
    wz = a[0] * b[1] - a[1] * b[0]
    if sig is Signature.LORENTZIAN:
        wz = -wz
    return np.array([wx, wy, wz])


def norm(sig: Signature, a: np.ndarray) -> float:
    """sqrt(|<a, a>|); for Lorentzian vectors this is the causal magnitude."""
    return float(np.sqrt(abs(dot(sig, a, a))))
