"""Operators on a kernel model as dense complex matrices.

Entries follow ``A[i, j] = <A e_j, e_i>`` in the model's orthonormal basis.
Besides construction and algebra this module holds the classical norm
machinery: operator norm, numerical radius, modulus and inverse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularityError, UsageError
from .rkhs import Kind, SpaceSpec, make_space

NORMAL = "normal_by_construction"
INVERTIBLE = "invertible_by_construction"
SHIFT = "shift_compression"
RANK_ONE = "rank_one_model"
KNOWN_TAGS = frozenset({NORMAL, INVERTIBLE, SHIFT, RANK_ONE})

SINGULAR_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    space: SpaceSpec
    entries: np.ndarray
    tags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        n = self.space.dim
        if m.shape != (n, n):
            raise UsageError(f"expected a {n}x{n} matrix for {self.space.kind.value} dim {n}, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        tags = frozenset(self.tags)
        unknown = tags - KNOWN_TAGS
        if unknown:
            raise UsageError(f"unknown tags {sorted(unknown)}")
        object.__setattr__(self, "tags", tags)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def H(self) -> "OperatorMatrix":
        return adjoint(self)

    def __matmul__(self, other):
        return multiply(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, c):
        return scale(c, self)

    __rmul__ = __mul__

    def __repr__(self):
        tags = ",".join(sorted(self.tags))
        return f"OperatorMatrix({self.space.kind.value}, dim={self.dim}, tags=[{tags}])"


def _same_space(a: OperatorMatrix, b: OperatorMatrix) -> SpaceSpec:
    if a.space != b.space:
        raise UsageError(f"space mismatch: {a.space} vs {b.space}")
    return a.space


# construction ---------------------------------------------------------------

def from_array(space: SpaceSpec, entries, tags=()) -> OperatorMatrix:
    return OperatorMatrix(space, entries, frozenset(tags))


def identity(space: SpaceSpec) -> OperatorMatrix:
    return OperatorMatrix(space, np.eye(space.dim), frozenset({NORMAL, INVERTIBLE}))


def zero(space: SpaceSpec) -> OperatorMatrix:
    return OperatorMatrix(space, np.zeros((space.dim, space.dim)), frozenset({NORMAL}))


def shift(space: SpaceSpec) -> OperatorMatrix:
    """Multiplication by ``z`` compressed to the model."""
    n = np.arange(space.dim - 1, dtype=float)
    if space.kind is Kind.HARDY:
        sub = np.ones(space.dim - 1)
    else:
        sub = np.sqrt((n + 1.0) / (n + 2.0))
    return OperatorMatrix(space, np.diag(sub, k=-1), frozenset({SHIFT}))


def example36_operator(space: SpaceSpec) -> OperatorMatrix:
    """``S (I - S S*) S*`` built from the compressed Hardy shift."""
    if space.kind is not Kind.HARDY:
        raise UsageError("the S(I - SS*)S* example is defined on the Hardy model only")
    s = shift(space).entries
    eye = np.eye(space.dim)
    a = s @ (eye - s @ s.conj().T) @ s.conj().T
    return OperatorMatrix(space, a, frozenset({RANK_ONE}))


def toeplitz_analytic(space: SpaceSpec, poly) -> OperatorMatrix:
    """Toeplitz operator of an analytic polynomial symbol, ``sum_j poly[j] S**j``."""
    poly = np.atleast_1d(np.asarray(poly, dtype=complex))
    if len(poly) > space.dim:
        raise UsageError(f"polynomial of length {len(poly)} exceeds model dimension {space.dim}")
    s = shift(space).entries
    out = np.zeros((space.dim, space.dim), dtype=complex)
    power = np.eye(space.dim, dtype=complex)
    for c in poly:
        out += c * power
        power = s @ power
    return OperatorMatrix(space, out)


def diagonal(space: SpaceSpec, d) -> OperatorMatrix:
    d = np.asarray(d, dtype=complex)
    if d.shape != (space.dim,):
        raise UsageError(f"expected {space.dim} diagonal entries, got {d.shape}")
    tags = {NORMAL}
    if np.all(d != 0):
        tags.add(INVERTIBLE)
    return OperatorMatrix(space, np.diag(d), frozenset(tags))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def random_unitary(space: SpaceSpec, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(_complex_gaussian(rng, (space.dim, space.dim)))
    # Haar measure needs the phase of diag(r) folded back in
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_operator(space: SpaceSpec, seed, scale: float = 1.0) -> OperatorMatrix:
    """I.i.d. complex Gaussian matrix rescaled to operator norm ``scale``."""
    if not scale > 0:
        raise UsageError(f"scale must be positive, got {scale}")
    g = _complex_gaussian(_rng(seed), (space.dim, space.dim))
    return OperatorMatrix(space, g * (scale / np.linalg.norm(g, 2)))


def random_normal(space: SpaceSpec, seed, spectrum=None) -> OperatorMatrix:
    """``U diag(d) U*`` with Haar-random ``U``.

    Without an explicit spectrum, eigenvalues are drawn uniformly from the
    closed unit disk.
    """
    rng = _rng(seed)
    u = random_unitary(space, rng)
    if spectrum is None:
        spectrum = np.sqrt(rng.uniform(0, 1, space.dim)) * np.exp(2j * np.pi * rng.uniform(0, 1, space.dim))
    d = np.asarray(spectrum, dtype=complex)
    if d.shape != (space.dim,):
        raise UsageError(f"expected {space.dim} eigenvalues, got {d.shape}")
    return OperatorMatrix(space, (u * d) @ u.conj().T, frozenset({NORMAL}))


def random_invertible(space: SpaceSpec, seed, mu: complex = 1.0) -> OperatorMatrix:
    """``mu I + E`` with ``||E|| <= |mu|/2``, so every singular value is at least ``|mu|/2``."""
    mu = complex(mu)
    if abs(mu) == 0:
        raise UsageError("mu must be nonzero")
    rng = _rng(seed)
    size = rng.uniform(0.0, 0.5) * abs(mu)
    e = random_operator(space, rng, 1.0).entries * size
    return OperatorMatrix(space, mu * np.eye(space.dim) + e, frozenset({INVERTIBLE}))


# algebra --------------------------------------------------------------------

def adjoint(a: OperatorMatrix) -> OperatorMatrix:
    keep = a.tags & {NORMAL, INVERTIBLE, RANK_ONE}
    return OperatorMatrix(a.space, a.entries.conj().T, keep)


def multiply(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    space = _same_space(a, b)
    tags = {INVERTIBLE} if INVERTIBLE in a.tags and INVERTIBLE in b.tags else set()
    return OperatorMatrix(space, a.entries @ b.entries, frozenset(tags))


def add(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    space = _same_space(a, b)
    return OperatorMatrix(space, a.entries + b.entries)


def scale(c: complex, a: OperatorMatrix) -> OperatorMatrix:
    c = complex(c)
    keep = a.tags & {NORMAL, RANK_ONE}
    if c != 0 and INVERTIBLE in a.tags:
        keep = keep | {INVERTIBLE}
    return OperatorMatrix(a.space, c * a.entries, keep)


def power(a: OperatorMatrix, n: int) -> OperatorMatrix:
    if n < 0:
        raise UsageError("negative powers are not supported; use inverse()")
    return OperatorMatrix(a.space, np.linalg.matrix_power(a.entries, n), a.tags & {NORMAL})


# norms and spectral quantities ---------------------------------------------

def _mat(a) -> np.ndarray:
    return a.entries if isinstance(a, OperatorMatrix) else np.asarray(a, dtype=complex)


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(_mat(a), compute_uv=False)


def operator_norm(a) -> float:
    return float(singular_values(a)[0])


def min_singular(a) -> float:
    return float(singular_values(a)[-1])


@dataclass(frozen=True)
class SpectralBounds:
    op_norm: float
    num_radius: float
    min_singular: float


def spectral_bounds(a) -> SpectralBounds:
    s = singular_values(a)
    return SpectralBounds(float(s[0]), numerical_radius(a), float(s[-1]))


def _rotated_top(m: np.ndarray, thetas) -> np.ndarray:
    """Largest eigenvalue of the Hermitian part of ``exp(i theta) m`` for each theta."""
    rot = np.exp(1j * np.asarray(thetas))[:, None, None] * m
    herm = 0.5 * (rot + rot.conj().transpose(0, 2, 1))
    return np.linalg.eigvalsh(herm)[:, -1]


def _golden_max(f, a: float, b: float, tol: float):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def numerical_radius(a, sweep: int = 720, theta_tol: float = 1e-10) -> float:
    """``w(A) = max_theta lambda_max(Re(exp(i theta) A))``.

    A uniform sweep in theta is followed by golden-section refinement of
    every sweep local maximum that can still beat the best sample.  The
    top eigenvalue is ``||A||``-Lipschitz in theta, which bounds how far a
    bracket's maximum can sit above its sampled endpoints.
    """
    m = _mat(a)
    if not np.any(m):
        return 0.0
    sweep = max(int(sweep), 720)
    h = 2.0 * math.pi / sweep
    thetas = np.arange(sweep) * h
    vals = _rotated_top(m, thetas)
    lip = np.linalg.norm(m, 2)
    best = float(vals.max())
    f = lambda t: float(_rotated_top(m, [t])[0])
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    candidates = np.flatnonzero((vals >= left) & (vals >= right) & (vals >= best - lip * h))
    for i in candidates:
        _, v = _golden_max(f, thetas[i] - h, thetas[i] + h, theta_tol)
        best = max(best, v)
    return max(best, 0.0)


def modulus(b: OperatorMatrix) -> OperatorMatrix:
    """``|B| = (B* B)**(1/2)`` with eigenvalues clamped at exactly zero."""
    m = _mat(b)
    gram = m.conj().T @ m
    gram = 0.5 * (gram + gram.conj().T)
    w, v = np.linalg.eigh(gram)
    w = np.where(w > 0.0, w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    root = 0.5 * (root + root.conj().T)
    return OperatorMatrix(b.space, root, frozenset({NORMAL}))


def _check_invertible(b) -> np.ndarray:
    s = singular_values(b)
    ratio = s[-1] / s[0] if s[0] > 0 else 0.0
    if ratio <= SINGULAR_RATIO:
        raise SingularityError(
            f"operator is numerically singular: min/max singular value ratio {ratio:.3e} "
            f"<= threshold {SINGULAR_RATIO:.0e}"
        )
    return s


def inverse(b: OperatorMatrix) -> OperatorMatrix:
    _check_invertible(b)
    return OperatorMatrix(b.space, np.linalg.inv(b.entries), frozenset({INVERTIBLE}) | (b.tags & {NORMAL}))


def inverse_norm(b) -> float:
    """``||B^{-1}|| = 1 / sigma_min(B)``."""
    s = _check_invertible(b)
    return float(1.0 / s[-1])


def self_commutator(t: OperatorMatrix) -> OperatorMatrix:
    """``T* T - T T*``, symmetrized so rounding cannot break Hermitian symmetry."""
    m = t.entries
    c = m.conj().T @ m - m @ m.conj().T
    return OperatorMatrix(t.space, 0.5 * (c + c.conj().T))


def min_eigenvalue_hermitian(h) -> float:
    m = _mat(h)
    scale_ = np.linalg.norm(m, 2)
    if np.linalg.norm(m - m.conj().T, 2) > 1e-9 * max(scale_, np.finfo(float).tiny):
        raise UsageError("matrix is not Hermitian to 1e-9 relative")
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def is_normal(a, rtol: float = 1e-9) -> bool:
    m = _mat(a)
    comm = m.conj().T @ m - m @ m.conj().T
    return np.linalg.norm(comm) <= rtol * max(np.linalg.norm(m, 2) ** 2, np.finfo(float).tiny)


# serialization --------------------------------------------------------------

def to_json_dict(a: OperatorMatrix) -> dict:
    flat = a.entries.ravel()
    return {
        "space": a.space.to_dict(),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
        "tags": sorted(a.tags),
    }


def from_json_dict(doc: dict) -> OperatorMatrix:
    space = make_space(doc["space"]["kind"], doc["space"]["dim"])
    pairs = np.asarray(doc["entries"], dtype=float)
    if pairs.shape != (space.dim * space.dim, 2):
        raise UsageError(f"entries must hold {space.dim ** 2} [re, im] pairs")
    m = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(space.dim, space.dim)
    return OperatorMatrix(space, m, frozenset(doc.get("tags", ())))


def dumps(a: OperatorMatrix) -> str:
    return json.dumps(to_json_dict(a))


def loads(text: str) -> OperatorMatrix:
    return from_json_dict(json.loads(text))
