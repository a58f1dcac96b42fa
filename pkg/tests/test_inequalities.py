import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from berezin import inequalities as ineq
from berezin import operators as op
from berezin.calculus import DiskGrid, ber_grid, bernorm_grid
from berezin.errors import SingularityError, UsageError
from berezin.rkhs import kernel_vector, make_space

GRID = DiskGrid(12, 24)
S = make_space("hardy", 12)
I = op.identity(S)
seeds = st.integers(0, 2 ** 32 - 1)


def brute_ber(a, grid):
    """Oracle: loop over nodes with hand-built kernels."""
    best_sym = best_act = 0.0
    for lam in grid.points():
        k = kernel_vector(a.space, lam)
        khat = k.coeffs / math.sqrt(k.norm_sq)
        ak = a.entries @ khat
        best_sym = max(best_sym, abs(np.vdot(khat, ak)))
        best_act = max(best_act, np.linalg.norm(ak))
    return best_sym, best_act


def unit_diag(seed, space=S, spread=0.2):
    """Unitary diagonal with phases in [-spread, spread], so ||A - A*|| <= 2 sin(spread)."""
    rng = np.random.default_rng(seed)
    return op.diagonal(space, np.exp(1j * rng.uniform(-spread, spread, size=space.dim)))


def E(seed, size):
    return op.random_operator(S, seed, size)


# report semantics ------------------------------------------------------------

def test_report_pass_iff_slack_within_tol():
    rep = ineq.InequalityReport("x", [], [ineq.Link("a", 1.0, 1.0 - 5e-9, 1e-8)])
    assert rep.passed and rep.slack == pytest.approx(-5e-9)
    rep = ineq.InequalityReport("x", [], [ineq.Link("a", 1.0, 1.0 - 2e-8, 1e-8)])
    assert not rep.passed and rep.failed


def test_vacuous_is_never_failed():
    rep = ineq.InequalityReport("x", [ineq.Hypothesis("h", 0.0, False, ineq.EXACT)],
                                [ineq.Link("a", 2.0, 1.0)])
    assert rep.vacuous and not rep.failed


def test_strict_link():
    assert not ineq.Link("s", 1.0, 1.0, strict=True).passed
    assert ineq.Link("s", 1.0, 1.0 + 1e-12, strict=True).passed


def test_headline_is_tightest_link():
    rep = ineq.InequalityReport("x", [], [ineq.Link("loose", 0.0, 5.0), ineq.Link("tight", 0.0, 0.1)])
    assert rep.headline.name == "tight" and rep.lhs == 0 and rep.rhs == 0.1


def test_report_json():
    rep = ineq.check_prop_2_1(I + E(1, 0.1), I, GRID)
    doc = json.loads(json.dumps(rep.to_dict()))
    for key in ("check_id", "seed", "hypotheses", "lhs", "rhs", "slack", "pass", "vacuous", "instance"):
        assert key in doc
    assert doc["hypotheses"][0]["certification"] == "operator-norm-bound"
    assert doc["slack"] == pytest.approx(doc["rhs"] - doc["lhs"])


def test_common_errors():
    with pytest.raises(UsageError):
        ineq.check_prop_2_1(I, op.identity(make_space("bergman", 12)), GRID)
    with pytest.raises(SingularityError):
        ineq.check_prop_2_1(I, op.zero(S), GRID)
    with pytest.raises(UsageError):
        ineq.check_cor_2_1(I, 1.0, GRID, variant="iii")


# invertible-operator family -------------------------------------------------

def test_prop_2_1_identity():
    rep = ineq.check_prop_2_1(I, I, GRID)
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1) and rep.slack == pytest.approx(0, abs=1e-14)
    assert rep.passed and not rep.vacuous


def test_prop_2_1_perturbed_identity_against_oracle():
    a = I + E(2, 0.1)
    rep = ineq.check_prop_2_1(a, I, GRID)
    sym, act = brute_ber(a, GRID)
    assert rep.params["r"] == pytest.approx(0.1)
    assert rep.rhs == pytest.approx(sym + 0.005, abs=1e-12)
    assert rep.lhs == pytest.approx(act, abs=1e-12)
    assert rep.passed


def test_prop_2_1_example36():
    s = make_space("hardy", 64)
    a = op.example36_operator(s)
    g = DiskGrid(64, 128)
    rep = ineq.check_prop_2_1(a, op.identity(s), g)
    assert rep.params["r"] == pytest.approx(1.0)
    assert rep.rhs == pytest.approx(ber_grid(a, g) + 0.5)
    assert rep.lhs == pytest.approx(0.5, abs=1e-3)
    assert rep.passed


def test_cor_2_1():
    rep = ineq.check_cor_2_1((1 - 1j) * I, 1 - 1j, GRID, "i")
    assert rep.params["r"] == pytest.approx(0, abs=1e-15) and rep.slack == pytest.approx(0, abs=1e-14)
    rep = ineq.check_cor_2_1(I + E(3, 0.1), 1, GRID, "i")
    gap = rep.links[1].lhs
    assert 0 <= gap <= 0.005 + 1e-12 and rep.passed
    u = unit_diag(4)
    rep = ineq.check_cor_2_1(u, 1, GRID, "ii")
    assert not rep.vacuous and rep.passed
    assert rep.params["r"] == pytest.approx(op.operator_norm(u - u.H))


def test_prop_2_2():
    a = I + E(5, 0.2)
    rep = ineq.check_prop_2_2(a, I, GRID)
    assert rep.params["C"] == pytest.approx(1)
    assert rep.links[0].rhs == pytest.approx(ineq.check_prop_2_1(a, I, GRID).rhs)
    d = np.full(12, 2.0)
    d[3] = 1.5
    b = op.diagonal(S, d)
    rep = ineq.check_prop_2_2(b + E(6, 0.3), b, GRID)
    assert 2.25 - 1e-12 <= rep.params["C"] <= 4 and rep.passed


def test_prop_2_2_near_degenerate_c_is_a_warning():
    d = np.ones(12)
    d[0] = 1e-4
    b = op.diagonal(S, d)
    rep = ineq.check_prop_2_2(b + E(7, 0.01), b, GRID)
    assert rep.params["C"] < ineq.DEGENERATE_C
    assert any("near-degenerate" in n for n in rep.notes)
    assert not rep.vacuous and rep.passed


def test_prop_2_3_and_eq_2_17():
    rep = ineq.check_prop_2_3(I, I, GRID)
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1)
    b = op.random_invertible(S, 8)
    rep = ineq.check_prop_2_3(b + op.random_operator(S, 9, 0.05), b, GRID)
    assert rep.passed and rep.slack > 0
    u = unit_diag(10)
    rep = ineq.check_eq_2_17(u, 1, GRID)
    assert not rep.vacuous and rep.passed
    # ||A|| = ||A^-1||^-1 = 1 leaves only r^2/2 on the right
    assert rep.rhs == pytest.approx(0.5 * op.operator_norm(u - u.H) ** 2)


def test_prop_2_4_and_rem_2_1():
    rep = ineq.check_rem_2_1a(I, 1, GRID)
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1) and rep.passed
    a = I + E(11, 0.2)
    rep = ineq.check_rem_2_1a(a, 1, GRID)
    assert rep.rhs == pytest.approx(ber_grid(a, GRID) / math.sqrt(1 - 0.04))
    two = 2 * I
    rep = ineq.check_prop_2_4(two + E(12, 0.5), two, GRID)
    assert not rep.vacuous and rep.passed
    rep = ineq.check_prop_2_4(two + E(12, 2.5), two, GRID)
    assert rep.vacuous
    rep = ineq.check_rem_2_1b(unit_diag(13), 1, GRID)
    assert not rep.vacuous and rep.passed


def test_window_family():
    rep = ineq.check_thm_2_1(I + E(14, 0.5), I, GRID)
    assert not rep.vacuous and rep.passed
    rep = ineq.check_eq_2_29(I + E(15, 0.6), 1, GRID)
    assert not rep.vacuous and rep.passed
    # r = 2 pushes 1/r below ||B^-1|| = 1: hypothesis gate closes
    rep = ineq.check_thm_2_1(I + E(16, 2.0), I, GRID)
    assert rep.vacuous and not rep.failed
    rep = ineq.check_eq_2_29(I + E(16, 2.0), 1, GRID)
    assert rep.vacuous


def test_eq_2_30_near_self_adjoint():
    h = op.random_normal(S, 17, spectrum=np.linspace(0.9, 1.0, 12))
    rep = ineq.check_eq_2_30(h + op.random_operator(S, 18, 0.05), GRID)
    assert not rep.vacuous and rep.passed


def test_thm_2_2_family():
    rep = ineq.check_thm_2_2(I, I, GRID)
    assert rep.links[0].slack == pytest.approx(0, abs=1e-12) and rep.passed
    a = I + E(19, 0.3)
    rep = ineq.check_eq_2_35(a, 1, GRID)
    lhs = bernorm_grid(a, GRID) ** 2 - ber_grid(a, GRID) ** 2
    assert rep.links[1].lhs == pytest.approx(lhs)
    assert rep.links[1].rhs == pytest.approx(2 * ber_grid(a, GRID) * (1 - math.sqrt(0.91)))
    assert 0 <= lhs and rep.passed
    u = unit_diag(20)
    rep = ineq.check_eq_2_36(u, 1, GRID)
    r = rep.params["r"]
    assert rep.links[0].rhs == pytest.approx(2 * ber_grid(u @ u, GRID) * (1 - math.sqrt(1 - r * r)))
    assert rep.passed and not rep.vacuous


# normal / hyponormal ---------------------------------------------------------

def test_prop_3_1_identity_and_scaled_identity():
    for n in (1, 2, 3, 4, 5):
        rep = ineq.check_prop_3_1(I, n, GRID)
        assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1) and rep.passed
    # 2I: ber(N^2) = 4 equals bernorm(N)^2 = 4; the unsquared right side (2) would be too small
    rep = ineq.check_prop_3_1(2 * I, 2, GRID)
    assert rep.lhs == pytest.approx(4) and rep.rhs == pytest.approx(4)


@settings(max_examples=50)
@given(seeds)
def test_prop_3_1_random_diagonal(seed):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=12) + 1j * rng.normal(size=12)
    rep = ineq.check_prop_3_1(op.diagonal(S, d), 2, GRID)
    assert rep.passed and not rep.vacuous


def test_prop_3_1_conjugated_and_list():
    n = op.random_normal(S, 21)
    assert ineq.check_prop_3_1(n, 3, GRID).passed
    rep = ineq.check_prop_3_1(n, [2, 3, 4, 5], GRID)
    assert len(rep.links) == 4 and rep.passed and not rep.vacuous
    rep = ineq.check_prop_3_1(op.random_operator(S, 22), 2, GRID)
    assert rep.vacuous
    with pytest.raises(UsageError):
        ineq.check_prop_3_1(n, 0, GRID)


def test_hyponormal_facts():
    t = op.random_normal(S, 23)
    rep = ineq.check_hyponormal_facts(t, GRID)
    assert rep.links[1].lhs <= 1e-12 and rep.passed and not rep.vacuous
    rep = ineq.check_hyponormal_facts(op.shift(S), GRID)
    assert rep.vacuous and rep.hypotheses[0].value == pytest.approx(-1)


@pytest.mark.parametrize("kind", ["hardy", "bergman"])
def test_commutator_identity_for_non_normal(kind):
    s = make_space(kind, 12)
    errs = [ineq.commutator_identity_error(op.random_operator(s, k), GRID) for k in range(100)]
    assert max(errs) <= 1e-10


def test_thm_3_1_examples():
    rep = ineq.check_thm_3_1((0.3 - 2j) * I, GRID)
    assert rep.lhs == pytest.approx(abs(0.3 - 2j)) and rep.rhs == pytest.approx(abs(0.3 - 2j))
    assert rep.slack == pytest.approx(0, abs=1e-12)
    s = make_space("hardy", 64)
    rep = ineq.check_thm_3_1(op.example36_operator(s), DiskGrid(64, 128))
    assert rep.lhs == pytest.approx(0.25, abs=1e-3) and rep.rhs == pytest.approx(0.5, abs=1e-3)
    assert rep.params["inf_defect"] == pytest.approx(0, abs=1e-15)


def test_thm_3_1_random():
    slacks = [ineq.check_thm_3_1(op.random_operator(S, k), GRID).slack for k in range(100)]
    assert min(slacks) >= -1e-10


def test_basic_chain():
    s = make_space("hardy", 64)
    rep = ineq.check_basic_chain(op.example36_operator(s), DiskGrid(64, 128))
    ber_, bern, nrm = rep.links[0].lhs, rep.links[0].rhs, rep.links[1].rhs
    assert ber_ == pytest.approx(0.25, abs=1e-3) and bern == pytest.approx(0.5, abs=1e-3) and nrm == pytest.approx(1)
    assert rep.params["w"] == pytest.approx(1)
    rep = ineq.check_basic_chain(I, GRID)
    assert all(link.lhs == pytest.approx(1) and link.rhs == pytest.approx(1) for link in rep.links)


def test_cor_3_1():
    assert ineq.check_cor_3_1(2 * I, GRID).vacuous
    assert ineq.check_cor_3_1(op.example36_operator(S), GRID).vacuous
    rep = ineq.check_cor_3_1(op.random_operator(S, 24), GRID)
    assert not rep.vacuous and rep.passed and rep.slack > 0
    assert rep.params["inf_defect"] > 0


def test_registry_covers_every_id():
    assert len(ineq.CHECKERS) == 20
    assert {"cor_2_1_i", "cor_2_1_ii", "prop_3_1", "basic_chain"} <= set(ineq.CHECKERS)
