"""One checker per reverse inequality between ber, the Berezin norm and ||.||.

Every checker evaluates suprema and infima over the plain nodes of a shared
``DiskGrid``.  The inequalities are all proved pointwise in the kernel
point before a supremum is taken, so each one remains a theorem when the
disk is replaced by the node set: a non-vacuous failure is a software bug,
not a discretization artefact.

Hypothesis radii are certified with the operator norm, ``r = ||A - B||``.
Since ``||X||_ber <= ||X||`` this certifies both the Berezin-norm and the
operator-norm form of the hypothesis.

Naming: ``ber`` is the grid maximum of ``|A~|``, ``bernorm`` the grid
maximum of ``||A k||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import operators as op
from .calculus import DiskGrid, grid_kernels, sample
from .errors import UsageError
from .operators import OperatorMatrix

DEFAULT_TOL = 1e-8
IDENTITY_TOL = 1e-10
DEGENERATE_C = 1e-6

EXACT = "exact"
OPNORM = "operator-norm-bound"
GRID = "grid-estimate"


@dataclass
class Hypothesis:
    name: str
    value: float
    satisfied: bool
    certification: str

    def to_dict(self):
        return {"name": self.name, "value": _num(self.value), "satisfied": bool(self.satisfied),
                "certification": self.certification}


@dataclass
class Link:
    """One ``lhs <= rhs`` statement.  ``strict`` links need ``rhs - lhs > 0``."""

    name: str
    lhs: float
    rhs: float
    tol: float = DEFAULT_TOL
    strict: bool = False

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def margin(self) -> float:
        return self.slack if self.strict else self.slack + self.tol

    @property
    def passed(self) -> bool:
        return self.slack > 0 if self.strict else self.slack >= -self.tol

    def to_dict(self):
        return {"name": self.name, "lhs": _num(self.lhs), "rhs": _num(self.rhs), "slack": _num(self.slack),
                "tol": self.tol, "strict": self.strict, "pass": self.passed}


@dataclass
class InequalityReport:
    """Outcome of one check.  The headline ``lhs``/``rhs`` is the tightest link."""

    check_id: str
    hypotheses: list
    links: list
    notes: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int | None = None
    trial: int | None = None
    instance: dict | None = None

    @property
    def headline(self) -> Link:
        # NaN margins (undefined sides under violated hypotheses) sort last
        return min(self.links, key=lambda l: l.margin if not math.isnan(l.margin) else math.inf)

    @property
    def lhs(self):
        return self.headline.lhs

    @property
    def rhs(self):
        return self.headline.rhs

    @property
    def slack(self):
        return self.headline.slack

    @property
    def tol(self):
        return self.headline.tol

    @property
    def vacuous(self) -> bool:
        return not all(h.satisfied for h in self.hypotheses)

    @property
    def passed(self) -> bool:
        return all(l.passed for l in self.links)

    @property
    def failed(self) -> bool:
        return not self.vacuous and not self.passed

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "seed": self.seed,
            "trial": self.trial,
            "params": {k: _num(v) for k, v in self.params.items()},
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "tol": self.tol,
            "pass": self.passed,
            "vacuous": self.vacuous,
            "links": [l.to_dict() for l in self.links],
            "notes": list(self.notes),
            "instance": self.instance,
        }


def _num(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def _sqrt(x: float) -> float:
    return math.sqrt(x) if x >= 0 else math.nan


def _ber(a: OperatorMatrix, grid: DiskGrid) -> float:
    return sample(a, grid, check=False).ber


def _bernorm(a: OperatorMatrix, grid: DiskGrid) -> float:
    return sample(a, grid, check=False).bernorm


def _radius(a: OperatorMatrix, b: OperatorMatrix, grid: DiskGrid, label: str):
    """Certified ``r = ||A - B||`` plus the per-trial dominance assertion."""
    d = a - b
    r = op.operator_norm(d)
    bn = _bernorm(d, grid)
    hyps = [
        Hypothesis(f"r = ||{label}||", r, True, OPNORM),
        Hypothesis(f"bernorm({label}) <= r", bn, bn <= r * (1 + 1e-12) + 1e-15, GRID),
    ]
    return r, hyps


def _nonzero_mu(mu) -> Hypothesis:
    return Hypothesis("mu != 0", abs(complex(mu)), complex(mu) != 0, EXACT)


def _inverse_norm(a: OperatorMatrix) -> float:
    return op.inverse_norm(a)


# invertible-operator family -------------------------------------------------

def check_prop_2_1(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(A) <= ||B^-1|| (ber(B* A) + r^2 / 2)`` for ``||A - B|| <= r``."""
    r, hyps = _radius(A, B, grid, "A-B")
    binv = _inverse_norm(B)
    hyps.append(Hypothesis("||B^-1||", binv, True, EXACT))
    rhs = binv * (_ber(B.H @ A, grid) + 0.5 * r * r)
    return InequalityReport("prop_2_1", hyps, [Link("bernorm(A) <= ||B^-1||(ber(B*A) + r^2/2)", _bernorm(A, grid), rhs, tol)],
                            params={"r": r})


def check_cor_2_1(A: OperatorMatrix, mu: complex, grid: DiskGrid, variant: str = "i",
                  tol: float = DEFAULT_TOL) -> InequalityReport:
    """Scalar specializations of the previous bound.

    ``i``:  ``0 <= bernorm(A) - ber(A) <= r^2 / (2|mu|)`` when ``||A - mu|| <= r``.
    ``ii``: ``bernorm(A) <= ||A^-1|| (ber(A^2) + r^2 / (2|mu|))`` when ``||A - mu A*|| <= r``.
    """
    mu = complex(mu)
    space = A.space
    hyps = [_nonzero_mu(mu)]
    if variant == "i":
        r, h = _radius(A, mu * op.identity(space), grid, "A-mu")
        hyps += h
        s = sample(A, grid, check=False)
        gap = s.bernorm - s.ber
        rhs = r * r / (2 * abs(mu)) if mu != 0 else math.nan
        links = [Link("0 <= bernorm(A) - ber(A)", 0.0, gap, tol),
                 Link("bernorm(A) - ber(A) <= r^2/(2|mu|)", gap, rhs, tol)]
        cid = "cor_2_1_i"
    elif variant == "ii":
        r, h = _radius(A, mu * A.H, grid, "A-mu*A^*")
        hyps += h
        ainv = _inverse_norm(A)
        rhs = ainv * (_ber(A @ A, grid) + r * r / (2 * abs(mu))) if mu != 0 else math.nan
        links = [Link("bernorm(A) <= ||A^-1||(ber(A^2) + r^2/(2|mu|))", _bernorm(A, grid), rhs, tol)]
        cid = "cor_2_1_ii"
    else:
        raise UsageError(f"variant must be 'i' or 'ii', got {variant!r}")
    return InequalityReport(cid, hyps, links, params={"mu": mu, "r": r})


def check_prop_2_2(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Invertibility replaced by a lower bound ``C`` on the symbol of ``|B|^2``.

    ``C`` is the grid minimum of that symbol, which is exactly the constant
    the pointwise argument needs on the node set.
    """
    r, hyps = _radius(A, B, grid, "A-B")
    mb = op.modulus(B)
    c_sym = sample(mb @ mb, grid, check=False).symbol.real
    C = float(c_sym.min())
    hyps.append(Hypothesis("C = min symbol(|B|^2) > 0", C, C > 0, GRID))
    notes = []
    if 0 < C < DEGENERATE_C:
        notes.append(f"near-degenerate C = {C:.3e}")
    sa = sample(A, grid, check=False)
    ma = op.modulus(A)
    ber_abs_sq = sample(ma @ ma, grid, check=False).ber
    rhs = (_ber(B.H @ A, grid) + 0.5 * r * r) / math.sqrt(C) if C > 0 else math.nan
    links = [
        Link("bernorm(A) <= (ber(B*A) + r^2/2)/sqrt(C)", sa.bernorm, rhs, tol),
        Link("|bernorm(A) - sqrt(ber(|A|^2))|", abs(sa.bernorm - math.sqrt(ber_abs_sq)), 0.0, tol),
    ]
    return InequalityReport("prop_2_2", hyps, links, notes, params={"r": r, "C": C})


def check_prop_2_3(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(A) ||B|| <= ber(B* A) + (r^2 + ||B||^2 - ||B^-1||^-2) / 2``."""
    r, hyps = _radius(A, B, grid, "A-B")
    nb, binv = op.operator_norm(B), _inverse_norm(B)
    rhs = _ber(B.H @ A, grid) + 0.5 * (r * r + nb * nb - binv ** -2)
    return InequalityReport("prop_2_3", hyps, [Link("bernorm(A)||B|| <= ber(B*A) + (r^2+||B||^2-||B^-1||^-2)/2",
                                                    _bernorm(A, grid) * nb, rhs, tol)], params={"r": r})


def check_eq_2_17(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = mu A*`` in the previous bound.

    Headline: ``bernorm(A)^2 - ber(A^2) <= (r^2/|mu| + |mu|(||A||^2 - ||A^-1||^-2)) / 2``;
    the sharper ``bernorm(A)||A||`` form it is derived from is checked as
    a second link.
    """
    mu = complex(mu)
    hyps = [_nonzero_mu(mu)]
    r, h = _radius(A, mu * A.H, grid, "A-mu*A^*")
    hyps += h
    na, ainv = op.operator_norm(A), _inverse_norm(A)
    s = sample(A, grid, check=False)
    b2 = _ber(A @ A, grid)
    m = abs(mu)
    rhs = 0.5 * (r * r / m + m * (na * na - ainv ** -2)) if m > 0 else math.nan
    links = [Link("bernorm(A)^2 - ber(A^2) <= rhs", s.bernorm ** 2 - b2, rhs, tol),
             Link("bernorm(A)||A|| - ber(A^2) <= rhs", s.bernorm * na - b2, rhs, tol)]
    return InequalityReport("eq_2_17", hyps, links, params={"mu": mu, "r": r})


def check_prop_2_4(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(A) <= (ber(B* A) + (||B||^2 - ||B^-1||^-2)/2) / sqrt(||B||^2 - r^2)`` for ``r < ||B||``."""
    r, hyps = _radius(A, B, grid, "A-B")
    nb, binv = op.operator_norm(B), _inverse_norm(B)
    hyps.append(Hypothesis("r < ||B||", nb - r, r < nb, OPNORM))
    den = _sqrt(nb * nb - r * r)
    rhs = (_ber(B.H @ A, grid) + 0.5 * (nb * nb - binv ** -2)) / den if r < nb else math.nan
    return InequalityReport("prop_2_4", hyps, [Link("bernorm(A) <= rhs", _bernorm(A, grid), rhs, tol)],
                            params={"r": r})


def check_rem_2_1a(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(A) <= ber(A) / sqrt(1 - (r/|mu|)^2)`` for ``||A - mu|| <= r < |mu|``."""
    mu = complex(mu)
    r, hyps = _radius(A, mu * op.identity(A.space), grid, "A-mu")
    hyps.append(Hypothesis("r < |mu|", abs(mu) - r, r < abs(mu), EXACT))
    s = sample(A, grid, check=False)
    rhs = s.ber / math.sqrt(1 - (r / abs(mu)) ** 2) if r < abs(mu) else math.nan
    return InequalityReport("rem_2_1a", hyps, [Link("bernorm(A) <= ber(A)/sqrt(1-(r/|mu|)^2)", s.bernorm, rhs, tol)],
                            params={"mu": mu, "r": r})


def check_rem_2_1b(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = mu A*`` with ``||A|| > r/|mu|``:
    ``bernorm(A) <= (ber(A^2) + |mu|(||A||^2 - ||A^-1||^-2)/2) / sqrt(||A||^2 - (r/|mu|)^2)``.
    """
    mu = complex(mu)
    hyps = [_nonzero_mu(mu)]
    r, h = _radius(A, mu * A.H, grid, "A-mu*A^*")
    hyps += h
    na, ainv = op.operator_norm(A), _inverse_norm(A)
    m = abs(mu)
    ok = m > 0 and na > r / m
    hyps.append(Hypothesis("||A|| > r/|mu|", na - (r / m if m else math.inf), ok, OPNORM))
    rhs = (_ber(A @ A, grid) + 0.5 * m * (na * na - ainv ** -2)) / math.sqrt(na * na - (r / m) ** 2) if ok else math.nan
    return InequalityReport("rem_2_1b", hyps, [Link("bernorm(A) <= rhs", _bernorm(A, grid), rhs, tol)],
                            params={"mu": mu, "r": r})


def _window_rhs(x: float, binv: float, r: float) -> float:
    """``x^2 + 2x (b - sqrt(1 - r^2 b^2)) / b`` with ``b = ||B^-1||``."""
    return x * x + 2 * x * (binv - _sqrt(1 - r * r * binv * binv)) / binv


def check_thm_2_1(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(A)^2 <= ber(B*A)^2 + 2 ber(B*A)(b - sqrt(1 - r^2 b^2))/b``
    inside the window ``1/sqrt(r^2 + 1) <= b < 1/r``, ``b = ||B^-1||``.
    """
    r, hyps = _radius(A, B, grid, "A-B")
    binv = _inverse_norm(B)
    lo = 1 / math.sqrt(r * r + 1)
    hyps.append(Hypothesis("1/sqrt(r^2+1) <= ||B^-1||", binv - lo, binv >= lo, EXACT))
    hyps.append(Hypothesis("||B^-1|| < 1/r", 1 - r * binv, r * binv < 1, EXACT))
    x = _ber(B.H @ A, grid)
    return InequalityReport("thm_2_1", hyps, [Link("bernorm(A)^2 <= rhs", _bernorm(A, grid) ** 2,
                                                   _window_rhs(x, binv, r), tol)], params={"r": r})


def check_eq_2_29(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = mu I`` in the window bound, ``r <= |mu| <= sqrt(r^2 + 1)``:
    ``bernorm(A)^2 <= |mu|^2 ber(A)^2 + 2|mu|(1 - sqrt(|mu|^2 - r^2)) ber(A)``.
    """
    mu = complex(mu)
    r, hyps = _radius(A, mu * op.identity(A.space), grid, "A-mu")
    m = abs(mu)
    hyps.append(Hypothesis("r <= |mu|", m - r, r <= m, EXACT))
    hyps.append(Hypothesis("|mu| <= sqrt(r^2+1)", math.sqrt(r * r + 1) - m, m <= math.sqrt(r * r + 1), EXACT))
    s = sample(A, grid, check=False)
    rhs = m * m * s.ber ** 2 + 2 * m * (1 - _sqrt(m * m - r * r)) * s.ber
    return InequalityReport("eq_2_29", hyps, [Link("bernorm(A)^2 <= rhs", s.bernorm ** 2, rhs, tol)],
                            params={"mu": mu, "r": r})


def check_eq_2_30(A: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = A*`` in the window bound, ``||A - A*|| <= r``:
    ``bernorm(A)^2 <= ber(A^2)^2 + 2 ber(A^2)(a - sqrt(1 - r^2 a^2))/a``, ``a = ||A^-1||``.
    """
    r, hyps = _radius(A, A.H, grid, "A-A^*")
    ainv = _inverse_norm(A)
    lo = 1 / math.sqrt(r * r + 1)
    hyps.append(Hypothesis("1/sqrt(r^2+1) <= ||A^-1||", ainv - lo, ainv >= lo, EXACT))
    hyps.append(Hypothesis("||A^-1|| <= 1/r", 1 - r * ainv, r * ainv <= 1, EXACT))
    x = _ber(A @ A, grid)
    return InequalityReport("eq_2_30", hyps, [Link("bernorm(A)^2 <= rhs", _bernorm(A, grid) ** 2,
                                                   _window_rhs(x, ainv, r), tol)], params={"r": r})


def check_thm_2_2(A: OperatorMatrix, B: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``0 <= bernorm(A)^2 ||B||^2 - ber(B*A)^2 <= 2 ber(B*A) (||B||/b)(||B|| b - sqrt(1 - r^2 b^2))``
    for ``b = ||B^-1|| < 1/r``.
    """
    r, hyps = _radius(A, B, grid, "A-B")
    nb, binv = op.operator_norm(B), _inverse_norm(B)
    hyps.append(Hypothesis("||B^-1|| < 1/r", 1 - r * binv, r * binv < 1, EXACT))
    x = _ber(B.H @ A, grid)
    lhs = _bernorm(A, grid) ** 2 * nb * nb - x * x
    rhs = 2 * x * (nb / binv) * (nb * binv - _sqrt(1 - r * r * binv * binv))
    links = [Link("0 <= bernorm(A)^2||B||^2 - ber(B*A)^2", 0.0, lhs, tol),
             Link("bernorm(A)^2||B||^2 - ber(B*A)^2 <= rhs", lhs, rhs, tol)]
    return InequalityReport("thm_2_2", hyps, links, params={"r": r})


def check_eq_2_35(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = mu I``, ``|mu| >= r``:
    ``0 <= bernorm(A)^2 - ber(A)^2 <= 2|mu| ber(A)(1 - sqrt(1 - (r/|mu|)^2))``.
    """
    mu = complex(mu)
    r, hyps = _radius(A, mu * op.identity(A.space), grid, "A-mu")
    m = abs(mu)
    hyps.append(Hypothesis("|mu| >= r > 0", m - r, m >= r and m > 0, EXACT))
    s = sample(A, grid, check=False)
    lhs = s.bernorm ** 2 - s.ber ** 2
    rhs = 2 * m * s.ber * (1 - _sqrt(1 - (r / m) ** 2)) if m > 0 else math.nan
    links = [Link("0 <= bernorm(A)^2 - ber(A)^2", 0.0, lhs, tol),
             Link("bernorm(A)^2 - ber(A)^2 <= rhs", lhs, rhs, tol)]
    return InequalityReport("eq_2_35", hyps, links, params={"mu": mu, "r": r})


def check_eq_2_36(A: OperatorMatrix, mu: complex, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``B = mu A*``, ``||A^-1|| <= |mu|/r``:
    ``bernorm(A)^4 - ber(A^2)^2 <= 2|mu| ber(A^2)(||A||/a)(||A|| a - sqrt(1 - r^2 a^2/|mu|^2))``.

    The sharper ``bernorm(A)^2 ||A||^2`` form is checked as a second link.
    The lower bound ``0 <=`` needs ``ber(A^2) <= bernorm(A)^2``, which can
    fail for non-normal ``A``; it is recorded as a note only.
    """
    mu = complex(mu)
    hyps = [_nonzero_mu(mu)]
    r, h = _radius(A, mu * A.H, grid, "A-mu*A^*")
    hyps += h
    na, ainv = op.operator_norm(A), _inverse_norm(A)
    m = abs(mu)
    hyps.append(Hypothesis("||A^-1|| <= |mu|/r", m - r * ainv, r * ainv <= m and m > 0, EXACT))
    bn = _bernorm(A, grid)
    x = _ber(A @ A, grid)
    rhs = 2 * m * x * (na / ainv) * (na * ainv - _sqrt(1 - (r * ainv / m) ** 2)) if m > 0 else math.nan
    links = [Link("bernorm(A)^4 - ber(A^2)^2 <= rhs", bn ** 4 - x * x, rhs, tol),
             Link("bernorm(A)^2||A||^2 - ber(A^2)^2 <= rhs", bn * bn * na * na - x * x, rhs, tol)]
    notes = [f"lower side bernorm^4 - ber(A^2)^2 = {bn ** 4 - x * x!r}"]
    return InequalityReport("eq_2_36", hyps, links, notes, params={"mu": mu, "r": r})


# normal / hyponormal family -------------------------------------------------

def check_prop_3_1(N: OperatorMatrix, n, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Power bounds for a normal operator.

    even ``n``: ``ber(N^n) <= bernorm(N^(n/2))^2``;
    odd ``n``:  ``ber(N^n) <= ||N|| bernorm(N^((n-1)/2))^2``.

    ``n`` may be a single integer or a sequence; each exponent is one link.
    """
    ns = [int(n)] if np.isscalar(n) else [int(k) for k in n]
    if not ns or min(ns) < 1:
        raise UsageError("exponents must be integers >= 1")
    normal = op.is_normal(N)
    hyps = [
        Hypothesis("normal: ||N*N - NN*|| <= 1e-9 ||N||^2", 0.0 if normal else 1.0, normal, EXACT),
        Hypothesis("tagged normal_by_construction", float(op.NORMAL in N.tags), op.NORMAL in N.tags, EXACT),
    ]
    nn = op.operator_norm(N)
    links = []
    for k in ns:
        lhs = _ber(op.power(N, k), grid)
        half = _bernorm(op.power(N, k // 2), grid)
        if k % 2 == 0:
            links.append(Link(f"n={k}: ber(N^{k}) <= bernorm(N^{k // 2})^2", lhs, half * half, tol))
        else:
            links.append(Link(f"n={k}: ber(N^{k}) <= ||N|| bernorm(N^{k // 2})^2", lhs, nn * half * half, tol))
    return InequalityReport("prop_3_1", hyps, links, params={"n": ns[0] if len(ns) == 1 else ",".join(map(str, ns))})


def commutator_identity_error(T: OperatorMatrix, grid: DiskGrid) -> float:
    """Max relative gap between the symbol of ``[T*, T]`` and ``||T k||^2 - ||T* k||^2``.

    The identity needs no hyponormality, so it is valid for every ``T``.
    """
    k = grid_kernels(T.space, grid)
    lhs = sample(op.self_commutator(T), grid, check=False).symbol
    tk = k @ T.entries.T
    tsk = k @ T.entries.conj()
    rhs = np.einsum("kj,kj->k", tk.conj(), tk).real - np.einsum("kj,kj->k", tsk.conj(), tsk).real
    scale = max(op.operator_norm(T) ** 2, np.finfo(float).tiny)
    return float(np.abs(lhs - rhs).max() / scale)


def check_hyponormal_facts(T: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bernorm(T*) <= bernorm(T)`` and ``ber([T*, T]) <= bernorm(T)^2``.

    Gated on a positive self-commutator.  On a finite model that forces
    ``T`` to be normal (the commutator has zero trace), and the compressed
    shift fails the gate through its corner entry.
    """
    comm = op.self_commutator(T)
    lo = op.min_eigenvalue_hermitian(comm)
    hyps = [Hypothesis("min eig [T*,T] >= -1e-9", lo, lo >= -1e-9, EXACT)]
    st = sample(T, grid, check=False)
    links = [
        Link("bernorm(T*) <= bernorm(T)", _bernorm(T.H, grid), st.bernorm, tol),
        Link("ber([T*,T]) <= bernorm(T)^2", _ber(comm, grid), st.bernorm ** 2, tol),
        Link("symbol([T*,T]) == ||Tk||^2 - ||T*k||^2 (rel. error)", commutator_identity_error(T, grid),
             IDENTITY_TOL, 0.0),
    ]
    return InequalityReport("hyponormal_facts", hyps, links)


# general operators ----------------------------------------------------------

def check_thm_3_1(A: OperatorMatrix, grid: DiskGrid, tol: float = IDENTITY_TOL) -> InequalityReport:
    """``ber(A) <= sqrt(bernorm(A)^2 - inf_mu ||(A - A~(mu)) k_mu||^2)``."""
    s = sample(A, grid, check=True)
    rhs = _sqrt(s.bernorm ** 2 - s.inf_defect)
    return InequalityReport("thm_3_1", [], [Link("ber(A) <= sqrt(bernorm(A)^2 - inf defect)", s.ber, rhs, tol)],
                            params={"inf_defect": s.inf_defect})


def check_cor_3_1(A: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """A defect bounded away from zero forces ``ber(A) < bernorm(A)`` strictly."""
    s = sample(A, grid, check=True)
    d = s.inf_defect
    hyps = [Hypothesis("inf defect > tol", d, d > tol, GRID)]
    links = [Link("ber(A) < bernorm(A)", s.ber, s.bernorm, tol, strict=True)]
    return InequalityReport("cor_3_1", hyps, links, params={"inf_defect": d})


def check_basic_chain(A: OperatorMatrix, grid: DiskGrid, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``ber <= bernorm <= ||A||`` and ``ber <= w(A)``."""
    s = sample(A, grid, check=False)
    nrm = op.operator_norm(A)
    w = op.numerical_radius(A)
    links = [
        Link("ber(A) <= bernorm(A)", s.ber, s.bernorm, tol),
        Link("bernorm(A) <= ||A||", s.bernorm, nrm, tol),
        Link("ber(A) <= w(A)", s.ber, w, tol),
    ]
    return InequalityReport("basic_chain", [], links, params={"w": w, "norm": nrm})


CHECKERS = {
    "prop_2_1": check_prop_2_1,
    "cor_2_1_i": lambda A, mu, grid, tol=DEFAULT_TOL: check_cor_2_1(A, mu, grid, "i", tol),
    "cor_2_1_ii": lambda A, mu, grid, tol=DEFAULT_TOL: check_cor_2_1(A, mu, grid, "ii", tol),
    "prop_2_2": check_prop_2_2,
    "prop_2_3": check_prop_2_3,
    "eq_2_17": check_eq_2_17,
    "prop_2_4": check_prop_2_4,
    "rem_2_1a": check_rem_2_1a,
    "rem_2_1b": check_rem_2_1b,
    "thm_2_1": check_thm_2_1,
    "eq_2_29": check_eq_2_29,
    "eq_2_30": check_eq_2_30,
    "thm_2_2": check_thm_2_2,
    "eq_2_35": check_eq_2_35,
    "eq_2_36": check_eq_2_36,
    "prop_3_1": check_prop_3_1,
    "hyponormal_facts": check_hyponormal_facts,
    "thm_3_1": check_thm_3_1,
    "cor_3_1": check_cor_3_1,
    "basic_chain": check_basic_chain,
}
