"""Finite-dimensional Hardy and Bergman kernel models.

A model of dimension ``N`` is the span of the first ``N`` orthonormal basis
functions on the unit disk, with the truncated kernel sum as its reproducing
kernel.  Functions are stored as coefficient vectors in that basis, so the
model inner product is the plain Hermitian pairing of coefficient vectors.

Basis conventions::

    Hardy    e_n(z) = z**n
    Bergman  e_n(z) = sqrt(n + 1) * z**n
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, UsageError

DEFAULT_R_MAX = 0.995
# |r e^{i theta}| can round a few ulps above r
_RADIUS_SLACK = 1e-12


class Kind(str, enum.Enum):
    HARDY = "hardy"
    BERGMAN = "bergman"


@dataclass(frozen=True)
class SpaceSpec:
    """Kernel model on the unit disk: which space and how many basis functions."""

    kind: Kind
    dim: int
    # evaluation cap, not part of the model's identity
    r_max: float = field(default=DEFAULT_R_MAX, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if int(self.dim) != self.dim or self.dim < 2:
            raise ConfigurationError(f"dim must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        if not 0.0 < self.r_max < 1.0:
            raise ConfigurationError(f"r_max must lie in (0, 1), got {self.r_max!r}")

    def basis_weights(self) -> np.ndarray:
        """Coefficient of ``z**n`` in ``e_n``."""
        n = np.arange(self.dim, dtype=float)
        if self.kind is Kind.HARDY:
            return np.ones(self.dim)
        return np.sqrt(n + 1.0)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "dim": self.dim}


def make_space(kind, dim: int, r_max: float = DEFAULT_R_MAX) -> SpaceSpec:
    try:
        kind = Kind(str(kind).lower())
    except ValueError:
        raise ConfigurationError(f"unknown space kind {kind!r}; expected 'hardy' or 'bergman'") from None
    return SpaceSpec(kind, dim, r_max)


@dataclass(frozen=True)
class KernelVector:
    lam: complex
    coeffs: np.ndarray
    normalized: bool
    norm_sq: float


def _check_point(space: SpaceSpec, lam: complex) -> complex:
    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise DomainError(f"|lambda| = {abs(lam):.6g} is not inside the unit disk")
    if abs(lam) > space.r_max + _RADIUS_SLACK:
        raise DomainError(f"|lambda| = {abs(lam):.6g} exceeds r_max = {space.r_max}")
    return lam


def kernel_vector(space: SpaceSpec, lam: complex) -> KernelVector:
    """Unnormalized reproducing kernel at ``lam``: ``c_n = conj(e_n(lam))``."""
    lam = _check_point(space, lam)
    coeffs = space.basis_weights() * np.conj(lam) ** np.arange(space.dim)
    coeffs = coeffs.astype(complex)
    coeffs.setflags(write=False)
    norm_sq = float(np.sum(np.abs(coeffs) ** 2))
    return KernelVector(lam, coeffs, False, norm_sq)


def normalize(k: KernelVector) -> KernelVector:
    if k.normalized:
        return k
    coeffs = k.coeffs / np.sqrt(k.norm_sq)
    coeffs.setflags(write=False)
    return KernelVector(k.lam, coeffs, True, k.norm_sq)


def normalized_kernel(space: SpaceSpec, lam: complex) -> KernelVector:
    return normalize(kernel_vector(space, lam))


def inner_product(u, v) -> complex:
    """Hermitian pairing, linear in ``u`` and conjugate-linear in ``v``."""
    u = np.asarray(getattr(u, "coeffs", u))
    v = np.asarray(getattr(v, "coeffs", v))
    if u.shape != v.shape:
        raise UsageError(f"length mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(v, u))


def kernel_matrix(space: SpaceSpec, lams) -> np.ndarray:
    """Normalized kernels at many points, one row per point.

    Rows are computed directly in normalized form, so this is the vectorized
    counterpart of ``normalized_kernel`` used by grid evaluations.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    radii = np.abs(lams)
    if np.any(radii >= 1.0):
        raise DomainError(f"point with |lambda| = {radii.max():.6g} is not inside the unit disk")
    if np.any(radii > space.r_max + _RADIUS_SLACK):
        raise DomainError(f"point with |lambda| = {radii.max():.6g} exceeds r_max = {space.r_max}")
    rows = space.basis_weights() * np.conj(lams)[:, None] ** np.arange(space.dim)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return rows


def evaluate(space: SpaceSpec, coeffs, lam: complex) -> complex:
    """Value at ``lam`` of the model function with the given coefficients."""
    coeffs = np.asarray(coeffs)
    return complex(np.sum(coeffs * space.basis_weights() * complex(lam) ** np.arange(space.dim)))
