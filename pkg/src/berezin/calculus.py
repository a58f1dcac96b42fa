"""Berezin symbols and the quantities built from them.

Suprema and infima over the disk are taken over a finite polar sample set
(``DiskGrid``).  Two flavours are offered:

* plain grid values (``sample``), where every quantity is a max/min over the
  same node set; inequalities proved pointwise stay exact theorems there;
* refined estimates (``berezin_estimates``, ``inf_defect``), which continue
  with a shrinking pattern search in (r, theta) around the best node.

Reductions scan nodes in a fixed order (radial-major, then angular) and
ties go to the first node, so results do not depend on evaluation order.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalConsistencyError, UsageError
from .operators import OperatorMatrix, adjoint, numerical_radius, operator_norm
from .rkhs import DEFAULT_R_MAX, SpaceSpec, kernel_matrix

IDENTITY_RTOL = 1e-10
NEGATIVE_DEFECT_FLOOR = -1e-12


@dataclass(frozen=True)
class DiskGrid:
    """Polar sample set: Chebyshev-spaced radii in [0, r_max] times ``angular`` angles.

    The origin appears once, as the first node.
    """

    radial: int = 64
    angular: int = 128
    r_max: float = DEFAULT_R_MAX
    rounds: int = 3
    shrink: float = 0.25

    def __post_init__(self):
        if self.radial < 2 or self.angular < 1:
            raise ConfigurationError(f"grid needs radial >= 2 and angular >= 1, got {self.radial}x{self.angular}")
        if not 0.0 < self.r_max < 1.0:
            raise ConfigurationError(f"grid r_max must lie in (0, 1), got {self.r_max}")
        if self.rounds < 0:
            raise ConfigurationError("refinement rounds must be >= 0")
        if not 0.0 < self.shrink < 1.0:
            raise ConfigurationError(f"shrink factor must lie in (0, 1), got {self.shrink}")

    def radii(self) -> np.ndarray:
        i = np.arange(self.radial)
        r = 0.5 * self.r_max * (1.0 - np.cos(np.pi * i / (self.radial - 1)))
        r[0], r[-1] = 0.0, self.r_max
        return r

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angular) / self.angular

    def polar(self):
        """(r, theta) of every node in scan order."""
        r = self.radii()[1:]
        th = self.angles()
        rr = np.concatenate([[0.0], np.repeat(r, self.angular)])
        tt = np.concatenate([[0.0], np.tile(th, len(r))])
        return rr, tt

    def points(self) -> np.ndarray:
        rr, tt = self.polar()
        return rr * np.exp(1j * tt)

    def __len__(self):
        return 1 + (self.radial - 1) * self.angular

    def unrefined(self) -> "DiskGrid":
        return DiskGrid(self.radial, self.angular, self.r_max, 0, self.shrink)


def parse_grid(text: str, **kw) -> DiskGrid:
    """``"64x128"`` -> ``DiskGrid(64, 128)``."""
    try:
        r, m = str(text).lower().split("x")
        return DiskGrid(int(r), int(m), **kw)
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"grid must look like RxM (e.g. 64x128), got {text!r}") from None


@functools.lru_cache(maxsize=16)
def _grid_kernels(kind, dim, grid: DiskGrid) -> np.ndarray:
    space = SpaceSpec(kind, dim, min(grid.r_max, 1.0 - 1e-15))
    k = kernel_matrix(space, grid.points())
    k.setflags(write=False)
    return k


def grid_kernels(space: SpaceSpec, grid: DiskGrid) -> np.ndarray:
    if grid.r_max > space.r_max:
        raise DomainError(f"grid r_max {grid.r_max} exceeds the space's r_max {space.r_max}")
    return _grid_kernels(space.kind, space.dim, grid.unrefined())


def _mat(a):
    return a.entries if isinstance(a, OperatorMatrix) else np.asarray(a, dtype=complex)


class PointValues(NamedTuple):
    symbol: np.ndarray
    action_sq: np.ndarray
    defect: np.ndarray


def _values(m: np.ndarray, kernels: np.ndarray, check: bool = True, with_defect: bool = True) -> PointValues:
    """Symbol, ``||A k||^2`` and defect for each normalized kernel row."""
    ak = kernels @ m.T
    symbol = np.einsum("kj,kj->k", kernels.conj(), ak)
    action_sq = np.einsum("kj,kj->k", ak.conj(), ak).real
    if not check and not with_defect:
        return PointValues(symbol, action_sq, None)
    direct = ak - symbol[:, None] * kernels
    defect = np.einsum("kj,kj->k", direct.conj(), direct).real
    if check:
        formula = action_sq - np.abs(symbol) ** 2
        scale = np.maximum(action_sq, np.finfo(float).tiny)
        bad = np.abs(formula - defect) > IDENTITY_RTOL * scale
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise NumericalConsistencyError(
                f"defect paths disagree at node {i}: {formula[i]!r} vs {defect[i]!r}"
            )
        low = formula < NEGATIVE_DEFECT_FLOOR * np.maximum(scale, 1.0)
        if np.any(low):
            i = int(np.flatnonzero(low)[0])
            raise NumericalConsistencyError(f"defect {formula[i]!r} is negative beyond rounding at node {i}")
    return PointValues(symbol, action_sq, defect)


def point_values(a: OperatorMatrix, lams, check: bool = True) -> PointValues:
    return _values(a.entries, kernel_matrix(a.space, lams), check)


@dataclass(frozen=True)
class GridSample:
    """Per-node symbol, kernel-action norm and defect of one operator."""

    points: np.ndarray
    symbol: np.ndarray
    action_norm: np.ndarray
    defect: np.ndarray | None

    @property
    def ber(self) -> float:
        return float(np.abs(self.symbol).max())

    @property
    def bernorm(self) -> float:
        return float(self.action_norm.max())

    @property
    def inf_defect(self) -> float:
        return float(self.defect.min())

    def argmax_ber(self) -> int:
        return int(np.argmax(np.abs(self.symbol)))

    def argmax_bernorm(self) -> int:
        return int(np.argmax(self.action_norm))


def sample(a: OperatorMatrix, grid: DiskGrid, check: bool = True) -> GridSample:
    """Evaluate ``a`` on every grid node.

    With ``check=False`` the defect column is skipped (``defect`` is None)
    and only symbol and kernel-action norms are produced.
    """
    v = _values(a.entries, grid_kernels(a.space, grid), check, with_defect=check)
    return GridSample(grid.points(), v.symbol, np.sqrt(v.action_sq), v.defect)


def defect_paths(a: OperatorMatrix, grid: DiskGrid):
    """Both evaluations of the defect at every node, without the built-in assertion.

    Returns ``(||A k||^2 - |A~|^2, ||(A - A~) k||^2)``.
    """
    v = _values(a.entries, grid_kernels(a.space, grid), check=False, with_defect=True)
    return v.action_sq - np.abs(v.symbol) ** 2, v.defect


def ber_grid(a: OperatorMatrix, grid: DiskGrid) -> float:
    return sample(a, grid, check=False).ber


def bernorm_grid(a: OperatorMatrix, grid: DiskGrid) -> float:
    return sample(a, grid, check=False).bernorm


# single-point operations ----------------------------------------------------

def berezin_symbol(a: OperatorMatrix, lam: complex) -> complex:
    """``<A k_lam, k_lam>`` for the normalized kernel at ``lam``."""
    return complex(point_values(a, [lam], check=False).symbol[0])


def kernel_action_norm(a: OperatorMatrix, lam: complex) -> float:
    return float(math.sqrt(point_values(a, [lam], check=False).action_sq[0]))


def berezin_defect(a: OperatorMatrix, lam: complex) -> float:
    """``||A k||^2 - |A~(lam)|^2``, equal to ``||(A - A~(lam)) k||^2``.

    Both forms are evaluated; a disagreement beyond 1e-10 relative raises
    ``NumericalConsistencyError``.  The directly computed square norm is
    returned, so the value is never negative.
    """
    return float(point_values(a, [lam], check=True).defect[0])


# refined estimates ----------------------------------------------------------

@dataclass
class SearchResult:
    value: float
    point: complex
    history: list = field(default_factory=list)


def _pattern_search(f, grid: DiskGrid, rr, tt, start: int, values, maximize: bool) -> SearchResult:
    """Shrinking (r, theta) stencil search around node ``start``.

    ``f`` maps an array of points to an array of objective values.  Each
    round uses steps ``shrink**k`` times the local grid spacing with a
    stencil wide enough to cover the previous round's step.  The incumbent
    only moves on strict improvement, so the history is monotone.
    """
    sign = 1.0 if maximize else -1.0
    best_r, best_t, best_v = float(rr[start]), float(tt[start]), float(values[start])
    history = [best_v]
    radii = grid.radii()
    j = int(np.searchsorted(radii, best_r))
    gaps = np.diff(radii)
    dr0 = float(max(gaps[max(j - 1, 0)], gaps[min(j, len(gaps) - 1)]))
    dt0 = 2.0 * np.pi / grid.angular
    reach = int(math.ceil(1.0 / grid.shrink))
    offs = np.arange(-reach, reach + 1)
    for k in range(1, grid.rounds + 1):
        hr, ht = dr0 * grid.shrink ** k, dt0 * grid.shrink ** k
        r = np.clip(best_r + hr * offs, 0.0, grid.r_max)
        t = best_t + ht * offs
        cand_r = np.repeat(r, len(t))
        cand_t = np.tile(t, len(r))
        vals = np.asarray(f(cand_r * np.exp(1j * cand_t)), dtype=float)
        i = int(np.argmax(sign * vals))
        if sign * vals[i] > sign * best_v:
            best_r, best_t, best_v = float(cand_r[i]), float(cand_t[i]), float(vals[i])
        history.append(best_v)
    return SearchResult(best_v, best_r * np.exp(1j * best_t), history)


@dataclass(frozen=True)
class BerezinEstimates:
    ber: float
    bernorm: float
    ber_argmax: complex
    bernorm_argmax: complex
    upper_anchor_w: float
    upper_anchor_norm: float
    ber_history: tuple = ()
    bernorm_history: tuple = ()

    @property
    def ber_grid(self):
        return self.ber

    @property
    def bernorm_grid(self):
        return self.bernorm


def berezin_estimates(a: OperatorMatrix, grid: DiskGrid, anchors: bool = True) -> BerezinEstimates:
    """Grid maxima of ``|A~|`` and ``||A k||`` refined by pattern search.

    The numerical radius and the operator norm are attached as upper
    anchors: ``ber <= w(A)`` and ``bernorm <= ||A||`` hold for the exact
    suprema, hence for any estimate from below.
    """
    s = sample(a, grid, check=False)
    rr, tt = grid.polar()
    m = a.entries

    def sym(lams):
        return np.abs(_values(m, kernel_matrix(a.space, lams), False, False).symbol)

    def act(lams):
        return np.sqrt(_values(m, kernel_matrix(a.space, lams), False, False).action_sq)

    b = _pattern_search(sym, grid, rr, tt, s.argmax_ber(), np.abs(s.symbol), True)
    n = _pattern_search(act, grid, rr, tt, s.argmax_bernorm(), s.action_norm, True)
    w = numerical_radius(a) if anchors else math.nan
    nrm = operator_norm(a) if anchors else math.nan
    return BerezinEstimates(b.value, n.value, b.point, n.point, w, nrm, tuple(b.history), tuple(n.history))


berezin_number = berezin_estimates
berezin_norm = berezin_estimates


def defect_search(a: OperatorMatrix, grid: DiskGrid) -> SearchResult:
    s = sample(a, grid, check=True)
    rr, tt = grid.polar()

    def dfun(lams):
        return _values(a.entries, kernel_matrix(a.space, lams), check=True).defect

    return _pattern_search(dfun, grid, rr, tt, int(np.argmin(s.defect)), s.defect, False)


def inf_defect(a: OperatorMatrix, grid: DiskGrid, refine: bool = True) -> float:
    """Smallest ``||(A - A~(mu)) k_mu||^2`` over the grid, optionally refined."""
    if not refine:
        return sample(a, grid, check=True).inf_defect
    return defect_search(a, grid).value


# diagnostics ----------------------------------------------------------------

class ProfileRow(NamedTuple):
    r: float
    defect: float
    adjoint_defect: float


def radial_defect_profile(a: OperatorMatrix, theta: float, r_list) -> list:
    """Defect of ``A`` and of ``A*`` along the ray ``r exp(i theta)``.

    Purely descriptive: the decay of both columns towards the boundary is
    what membership in the defect-vanishing algebra would require, but no
    verdict is attempted on a finite model.
    """
    r = np.asarray(list(r_list), dtype=float)
    if np.any(r < 0) or np.any(r > a.space.r_max):
        raise DomainError(f"radii must lie in [0, {a.space.r_max}]")
    lams = r * np.exp(1j * theta)
    d = point_values(a, lams).defect
    d_adj = point_values(adjoint(a), lams).defect
    return [ProfileRow(float(x), float(y), float(z)) for x, y, z in zip(r, d, d_adj)]


def symbol_injectivity_rank(space: SpaceSpec, points, rtol: float = 1e-8) -> int:
    """Numerical rank of ``A -> (A~(lam_i))_i`` on ``N x N`` matrices.

    The column for the matrix unit ``E_ij`` is ``conj(k_i(lam)) k_j(lam)``.
    Full rank ``N**2`` means the sampled symbol determines the operator.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    n = space.dim
    if len(points) < n * n:
        raise UsageError(f"need at least {n * n} sample points for dim {n}, got {len(points)}")
    k = kernel_matrix(space, points)
    design = (k.conj()[:, :, None] * k[:, None, :]).reshape(len(points), n * n)
    s = np.linalg.svd(design, compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


class FieldRow(NamedTuple):
    lam: complex
    symbol: complex
    kernel_action_norm: float
    defect: float


CSV_HEADER = ("lambda_re", "lambda_im", "symbol_re", "symbol_im", "kernel_action_norm", "defect")


def symbol_field(a: OperatorMatrix, grid: DiskGrid) -> list:
    """One row per grid node, in scan order."""
    s = sample(a, grid)
    return [
        FieldRow(complex(p), complex(v), float(n), float(d))
        for p, v, n, d in zip(s.points, s.symbol, s.action_norm, s.defect)
    ]


def write_field_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([
            repr(row.lam.real), repr(row.lam.imag),
            repr(row.symbol.real), repr(row.symbol.imag),
            repr(row.kernel_action_norm), repr(row.defect),
        ])


def field_csv(rows) -> str:
    buf = io.StringIO()
    write_field_csv(rows, buf)
    return buf.getvalue()
