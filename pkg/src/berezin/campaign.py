"""Seeded verification campaigns, reproduction targets and convergence studies.

Randomness: each (check, trial) pair gets its own Philox stream keyed by the
run seed, a CRC of the check id and the trial index, so any single trial can
be regenerated in isolation.
"""

from __future__ import annotations

import concurrent.futures
import configparser
import json
import math
import os
import time
import zlib
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import inequalities as ineq
from . import operators as op
from .calculus import DiskGrid, berezin_estimates, radial_defect_profile, sample, berezin_symbol
from .errors import ConfigurationError
from .rkhs import Kind, SpaceSpec, make_space

CHECK_IDS = tuple(ineq.CHECKERS)
PROP_3_1_EXPONENTS = (2, 3, 4, 5)
MAX_VACUOUS_FRACTION = 0.5


# configuration --------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    space: str = "hardy"
    dim: int = 64
    radial: int = 64
    angular: int = 128
    rmax: float = 0.995
    rounds: int = 3
    shrink: float = 0.25
    suite: tuple = CHECK_IDS
    trials: int = 100
    seed: int = 42
    tol: float = ineq.DEFAULT_TOL
    identity_tol: float = ineq.IDENTITY_TOL
    repro_tol: float = 1e-3
    jobs: int = 1
    out: str = "berezin-out"

    def __post_init__(self):
        if str(self.space).lower() not in {k.value for k in Kind}:
            raise ConfigurationError(f"space: expected 'hardy' or 'bergman', got {self.space!r}")
        if self.dim < 2:
            raise ConfigurationError(f"dim: must be >= 2, got {self.dim}")
        if not 0.0 < self.rmax < 1.0:
            raise ConfigurationError(f"rmax: must lie in (0, 1), got {self.rmax}")
        if self.trials < 1:
            raise ConfigurationError(f"trials: must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise ConfigurationError(f"jobs: must be >= 1, got {self.jobs}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed: must be a 64-bit unsigned integer, got {self.seed}")
        self.grid()  # validates radial/angular/rounds/shrink

    def space_spec(self) -> SpaceSpec:
        return make_space(self.space, self.dim, self.rmax)

    def grid(self) -> DiskGrid:
        return DiskGrid(self.radial, self.angular, self.rmax, self.rounds, self.shrink)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["suite"] = list(self.suite)
        return d


def parse_suite(value) -> tuple:
    if isinstance(value, str):
        items = [s.strip() for s in value.split(",") if s.strip()]
    else:
        items = list(value)
    if items == ["all"] or not items:
        return CHECK_IDS
    out = []
    for item in items:
        cid = item[len("check_"):] if item.startswith("check_") else item
        if cid == "cor_2_1":
            out += ["cor_2_1_i", "cor_2_1_ii"]
            continue
        if cid not in ineq.CHECKERS:
            raise ConfigurationError(f"suite: unknown check id {item!r}; known ids: {', '.join(CHECK_IDS)}")
        out.append(cid)
    return tuple(dict.fromkeys(out))


_CASTS = {
    "space": str, "dim": int, "radial": int, "angular": int, "rmax": float, "rounds": int,
    "shrink": float, "trials": int, "seed": int, "tol": float, "identity_tol": float,
    "repro_tol": float, "jobs": int, "out": str,
}
CONFIG_KEYS = tuple(_CASTS) + ("grid", "suite")


def _apply(values: dict, key: str, raw) -> None:
    key = key.strip().lower().replace("-", "_")
    if key == "r_max":
        key = "rmax"
    if key not in CONFIG_KEYS:
        raise ConfigurationError(f"unknown configuration key {key!r}; allowed: {', '.join(CONFIG_KEYS)}")
    try:
        if key == "grid":
            r, m = str(raw).lower().split("x")
            values["radial"], values["angular"] = int(r), int(m)
        elif key == "suite":
            values["suite"] = parse_suite(raw)
        else:
            values[key] = _CASTS[key](raw)
    except ConfigurationError:
        raise
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse value {raw!r}") from None


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; a leading ``[section]`` header is optional."""
    # a missing or unreadable file propagates as OSError (an I/O failure, not a bad value)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    parser = configparser.ConfigParser(interpolation=None)
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            _apply(values, key, raw)
    return values


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (flags win)."""
    values = read_config_file(path) if path else {}
    for key, raw in (overrides or {}).items():
        if raw is not None:
            _apply(values, key, raw)
    return RunConfig(**values)


# randomness -----------------------------------------------------------------

def trial_rng(seed: int, check_id: str, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(check_id.encode()), int(trial)))
    return np.random.Generator(np.random.Philox(ss))


# instance generation --------------------------------------------------------

def _phase(rng) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def _perturbation(space, rng, size: float) -> op.OperatorMatrix:
    if size == 0:
        return op.zero(space)
    return op.random_operator(space, rng, size)


def _scalar_plus(space, rng, mu, frac_lo, frac_hi):
    """``mu I + E`` with ``||E|| = U(frac_lo, frac_hi) |mu|``."""
    r = rng.uniform(frac_lo, frac_hi) * abs(mu)
    return mu * op.identity(space) + _perturbation(space, rng, r)


def _invertible_pair(space, rng, r_frac=(0.05, 0.95)):
    mu = rng.uniform(0.5, 2.0) * _phase(rng)
    b = op.random_invertible(space, rng, mu)
    r = rng.uniform(*r_frac) * op.min_singular(b)
    return b + _perturbation(space, rng, r), b


def _near_self_adjoint(space, rng):
    """``(A, mu)`` with ``A`` invertible and ``||A - mu A*||`` small.

    ``A = exp(i arg(mu)/2) (H + E)`` for Hermitian ``H`` with spectrum in
    +-[1, 2]; then ``A - mu A*`` only sees ``E`` and the deviation of
    ``|mu|`` from 1.
    """
    mu = rng.uniform(0.9, 1.1) * _phase(rng)
    u = op.random_unitary(space, rng)
    h = rng.uniform(1.0, 2.0, space.dim) * rng.choice([-1.0, 1.0], space.dim)
    herm = (u * h) @ u.conj().T
    e = _perturbation(space, rng, rng.uniform(0.01, 0.2)).entries
    half = np.exp(0.5j * np.angle(mu))
    return op.from_array(space, half * (herm + e)), mu


def _gen_prop_2_1(space, rng):
    a, b = _invertible_pair(space, rng)
    return {"A": a, "B": b}


def _gen_prop_2_2(space, rng):
    # half the trials use a positive diagonal B, half a generic invertible one
    if rng.uniform() < 0.5:
        b = op.diagonal(space, rng.uniform(0.5, 2.0, space.dim))
    else:
        b = op.random_invertible(space, rng, rng.uniform(0.5, 2.0) * _phase(rng))
    a = b + _perturbation(space, rng, rng.uniform(0.05, 1.0))
    return {"A": a, "B": b}


def _gen_cor_2_1_i(space, rng):
    mu = rng.uniform(0.5, 2.0) * _phase(rng)
    return {"A": _scalar_plus(space, rng, mu, 0.0, 0.5), "mu": mu}


def _gen_near_sa(space, rng):
    a, mu = _near_self_adjoint(space, rng)
    return {"A": a, "mu": mu}


def _gen_prop_2_4(space, rng):
    mu = rng.uniform(0.5, 2.0) * _phase(rng)
    b = op.random_invertible(space, rng, mu)
    r = rng.uniform(0.05, 0.9) * op.operator_norm(b)
    return {"A": b + _perturbation(space, rng, r), "B": b}


def _gen_rem_2_1a(space, rng):
    mu = rng.uniform(0.5, 2.0) * _phase(rng)
    return {"A": _scalar_plus(space, rng, mu, 0.05, 0.95), "mu": mu}


def _gen_thm_2_1(space, rng):
    r = rng.uniform(0.05, 0.9)
    top = math.sqrt(r * r + 1)
    beta = r + rng.uniform(0.02, 0.98) * (top - r)
    b = op.from_array(space, beta * op.random_unitary(space, rng), (op.INVERTIBLE, op.NORMAL))
    return {"A": b + _perturbation(space, rng, r), "B": b}


def _gen_eq_2_29(space, rng):
    r = rng.uniform(0.05, 0.9)
    top = math.sqrt(r * r + 1)
    mu = (r + rng.uniform(0.02, 0.98) * (top - r)) * _phase(rng)
    return {"A": mu * op.identity(space) + _perturbation(space, rng, r), "mu": mu}


def _gen_eq_2_30(space, rng):
    r = rng.uniform(0.05, 0.4)
    g = op.random_operator(space, rng, 1.0).entries
    k = g + g.conj().T
    k *= (0.5 * r) / np.linalg.norm(k, 2)
    beta = rng.uniform(1.5 * r, math.sqrt(r * r + 1) - 0.5 * r)
    u = op.random_unitary(space, rng)
    signs = rng.choice([-1.0, 1.0], space.dim)
    h = beta * (u * signs) @ u.conj().T
    return {"A": op.from_array(space, h + 1j * k)}


def _gen_thm_2_2(space, rng):
    a, b = _invertible_pair(space, rng)
    return {"A": a, "B": b}


def _gen_eq_2_35(space, rng):
    mu = rng.uniform(0.5, 2.0) * _phase(rng)
    return {"A": _scalar_plus(space, rng, mu, 0.05, 1.0), "mu": mu}


def _gen_normal(space, rng):
    if rng.uniform() < 0.5:
        d = np.sqrt(rng.uniform(0, 1, space.dim)) * np.exp(2j * np.pi * rng.uniform(0, 1, space.dim))
        return {"A": op.diagonal(space, d)}
    return {"A": op.random_normal(space, rng)}


def _gen_prop_3_1(space, rng):
    inst = _gen_normal(space, rng)
    inst["n"] = list(PROP_3_1_EXPONENTS)
    return inst


def _gen_general(space, rng):
    return {"A": op.random_operator(space, rng, rng.uniform(0.5, 2.0))}


GENERATORS = {
    "prop_2_1": _gen_prop_2_1,
    "cor_2_1_i": _gen_cor_2_1_i,
    "cor_2_1_ii": _gen_near_sa,
    "prop_2_2": _gen_prop_2_2,
    "prop_2_3": _gen_prop_2_1,
    "eq_2_17": _gen_near_sa,
    "prop_2_4": _gen_prop_2_4,
    "rem_2_1a": _gen_rem_2_1a,
    "rem_2_1b": _gen_near_sa,
    "thm_2_1": _gen_thm_2_1,
    "eq_2_29": _gen_eq_2_29,
    "eq_2_30": _gen_eq_2_30,
    "thm_2_2": _gen_thm_2_2,
    "eq_2_35": _gen_eq_2_35,
    "eq_2_36": _gen_near_sa,
    "prop_3_1": _gen_prop_3_1,
    "hyponormal_facts": _gen_normal,
    "thm_3_1": _gen_general,
    "cor_3_1": _gen_general,
    "basic_chain": _gen_general,
}

IDENTITY_LEVEL = {"thm_3_1"}


def generate_instance(check_id: str, space: SpaceSpec, seed: int, trial: int) -> dict:
    return GENERATORS[check_id](space, trial_rng(seed, check_id, trial))


def run_check(check_id: str, inst: dict, grid: DiskGrid, tol: float) -> ineq.InequalityReport:
    """Dispatch one instance (as produced by ``generate_instance``) to its checker."""
    fn = ineq.CHECKERS[check_id]
    a, b = inst["A"], inst.get("B")
    if "n" in inst:
        return fn(a, inst["n"], grid, tol)
    if b is not None:
        return fn(a, b, grid, tol)
    if "mu" in inst:
        return fn(a, inst["mu"], grid, tol)
    return fn(a, grid, tol)


def instance_to_dict(inst: dict) -> dict:
    out = {}
    for key, val in inst.items():
        if isinstance(val, op.OperatorMatrix):
            out[key] = op.to_json_dict(val)
        elif isinstance(val, complex):
            out[key] = [val.real, val.imag]
        else:
            out[key] = val
    return out


def instance_from_dict(doc: dict) -> dict:
    out = {}
    for key, val in doc.items():
        if key in ("A", "B"):
            out[key] = op.from_json_dict(val)
        elif key == "mu":
            out[key] = complex(val[0], val[1])
        else:
            out[key] = val
    return out


def replay(instance_path, check_id: str, grid: DiskGrid, tol: float) -> ineq.InequalityReport:
    """Reload a serialized failing instance and rerun its checker."""
    with open(instance_path, encoding="utf-8") as fh:
        inst = instance_from_dict(json.load(fh))
    return run_check(check_id, inst, grid, tol)


# campaigns ------------------------------------------------------------------

@dataclass
class CheckStats:
    trials: int = 0
    passes: int = 0
    vacuous: int = 0
    failures: int = 0
    min_slack: float = math.inf
    max_slack: float = -math.inf

    @property
    def vacuous_fraction(self) -> float:
        return self.vacuous / self.trials if self.trials else 0.0

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.vacuous_fraction <= MAX_VACUOUS_FRACTION

    def add(self, rep: ineq.InequalityReport) -> None:
        self.trials += 1
        if rep.vacuous:
            self.vacuous += 1
            return
        if rep.passed:
            self.passes += 1
        else:
            self.failures += 1
        self.min_slack = min(self.min_slack, rep.slack)
        self.max_slack = max(self.max_slack, rep.slack)

    def to_dict(self) -> dict:
        fin = lambda x: x if math.isfinite(x) else None
        return {
            "trials": self.trials, "passes": self.passes, "vacuous": self.vacuous,
            "failures": self.failures, "min_slack": fin(self.min_slack), "max_slack": fin(self.max_slack),
            "vacuous_fraction": self.vacuous_fraction, "ok": self.ok,
        }


@dataclass
class CampaignSummary:
    config: dict
    checks: dict = field(default_factory=dict)
    reproduction: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.checks.values()) and all(t["pass"] for t in self.reproduction)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "config": self.config,
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "reproduction": self.reproduction,
            "ok": self.ok,
        }
        if timing:
            d["timing"] = self.timing
        return d


def _trial(check_id, space, grid, tol, seed, k):
    inst = generate_instance(check_id, space, seed, k)
    rep = run_check(check_id, inst, grid, tol)
    rep.seed, rep.trial = seed, k
    rep.instance = {key: f"regen:{check_id}/{seed}/{k}" for key in ("A", "B") if key in inst}
    return rep, inst


def run_campaign(check_id: str, config: RunConfig, keep_instances: bool = False):
    """All trials of one check, aggregated in trial order.

    Returns ``(stats, reports, failing)`` where ``failing`` maps trial index
    to the instance of every non-vacuous failure.
    """
    space, grid = config.space_spec(), config.grid()
    tol = config.identity_tol if check_id in IDENTITY_LEVEL else config.tol
    run = lambda k: _trial(check_id, space, grid, tol, config.seed, k)
    if config.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(config.jobs) as pool:
            results = list(pool.map(run, range(config.trials)))
    else:
        results = [run(k) for k in range(config.trials)]
    stats = CheckStats()
    reports, failing = [], {}
    for k, (rep, inst) in enumerate(results):
        stats.add(rep)
        reports.append(rep)
        if rep.failed or keep_instances:
            failing[k] = inst
    return stats, reports, failing


def _closed_form_defect(r: float) -> float:
    x = r * r
    return x * (1 - x) - x * x * (1 - x) ** 2


def reproduce_reference_values(config: RunConfig) -> list:
    """Reproduction table for the rank-one projection ``S(I - SS*)S*`` on the Hardy model.

    Targets: ``ber = ||A||_ber^2 = 1/4``; the closed forms
    ``A~(lam) = |lam|^2 (1 - |lam|^2)`` and ``||A k|| = |lam| sqrt(1 - |lam|^2)``;
    and the radial defect profile along the positive axis.
    """
    grid = config.grid()
    rows = []

    def add(name, expected, computed, tol):
        rows.append({"target": name, "expected": expected, "computed": computed, "tolerance": tol,
                     "pass": bool(abs(computed - expected) <= tol)})

    a = op.example36_operator(make_space("hardy", max(64, config.dim), config.rmax))
    est = berezin_estimates(a, grid, anchors=False)
    add("ber(example36)", 0.25, est.ber, config.repro_tol)
    add("bernorm(example36)^2", 0.25, est.bernorm ** 2, config.repro_tol)

    a128 = op.example36_operator(make_space("hardy", max(128, config.dim), config.rmax))
    s = sample(a128, grid)
    inside = np.abs(s.points) <= 0.9
    x = np.abs(s.points) ** 2
    add("max |symbol - |lam|^2(1-|lam|^2)|, |lam|<=0.9", 0.0,
        float(np.abs(s.symbol - x * (1 - x))[inside].max()), 1e-6)
    add("max |action - |lam|sqrt(1-|lam|^2)|, |lam|<=0.9", 0.0,
        float(np.abs(s.action_norm - np.sqrt(x * (1 - x)))[inside].max()), 1e-6)

    # large model so that the truncation term |lam|^(2N) is negligible at r = 0.99
    big = op.example36_operator(make_space("hardy", 2048, 0.999))
    for row in radial_defect_profile(big, 0.0, (0.5, 0.9, 0.99)):
        add(f"defect(r={row.r})", _closed_form_defect(row.r), row.defect, 1e-5)
    return rows


def _write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_suite(config: RunConfig, write: bool = True, log=None) -> CampaignSummary:
    """Run every selected check plus the reproduction table.

    Per-trial reports go to ``<out>/reports/<check>.jsonl``, failing
    instances to ``<out>/instances/`` and the summary to
    ``<out>/summary.json``.  Timing lives under its own ``timing`` key.
    """
    summary = CampaignSummary(config.to_dict())
    out = config.out
    if write:
        os.makedirs(os.path.join(out, "reports"), exist_ok=True)
        os.makedirs(os.path.join(out, "instances"), exist_ok=True)
    for cid in config.suite:
        t0 = time.perf_counter()
        stats, reports, failing = run_campaign(cid, config)
        summary.checks[cid] = stats
        summary.timing[cid] = round(time.perf_counter() - t0, 3)
        if log:
            log(f"{cid:18s} trials={stats.trials} pass={stats.passes} vacuous={stats.vacuous} "
                f"fail={stats.failures} min_slack={stats.min_slack:.3e}")
        if write:
            for k, inst in failing.items():
                refs = {}
                path = os.path.join(out, "instances", f"{cid}_{k}.json")
                _write_json(path, instance_to_dict(inst))
                for key in ("A", "B"):
                    if key in inst:
                        refs[key] = os.path.relpath(path, out) + f"#{key}"
                reports[k].instance = refs
            with open(os.path.join(out, "reports", f"{cid}.jsonl"), "w", encoding="utf-8") as fh:
                for rep in reports:
                    fh.write(json.dumps(rep.to_dict(), sort_keys=True) + "\n")
    t0 = time.perf_counter()
    summary.reproduction = reproduce_reference_values(config)
    summary.timing["reproduction"] = round(time.perf_counter() - t0, 3)
    if write:
        _write_json(os.path.join(out, "summary.json"), summary.to_dict())
    return summary


# convergence ----------------------------------------------------------------

STUDY_HEADER = ("operator", "dim", "grid", "ber_grid", "bernorm_grid", "numerical_radius", "operator_norm",
                "symbol_at_half")


def convergence_study(config: RunConfig, dims, grids) -> list:
    """Rows of grid estimates for fixed study operators across model sizes and grids.

    Study operators: the rank-one example on the Hardy model, the compressed
    shift and one seeded random operator on the configured model.
    """
    rows = []
    for d in dims:
        hardy = make_space("hardy", d, config.rmax)
        space = make_space(config.space, d, config.rmax)
        ops = [
            ("example36", op.example36_operator(hardy)),
            ("shift", op.shift(space)),
            ("random", op.random_operator(space, trial_rng(config.seed, "convergence", d), 1.0)),
        ]
        for spec in grids:
            grid = spec if isinstance(spec, DiskGrid) else replace(
                config.grid(), **dict(zip(("radial", "angular"), map(int, str(spec).lower().split("x")))))
            for name, a in ops:
                est = berezin_estimates(a, grid)
                rows.append({
                    "operator": name, "dim": d, "grid": f"{grid.radial}x{grid.angular}",
                    "ber_grid": est.ber, "bernorm_grid": est.bernorm,
                    "numerical_radius": est.upper_anchor_w, "operator_norm": est.upper_anchor_norm,
                    "symbol_at_half": berezin_symbol(a, 0.5).real,
                })
    return rows
