import math

import numpy as np
import pytest

from aerocell.cell_plan import (
    LinkBudgetParams,
    Position,
    Scenario,
    UserEquipment,
    effective_bandwidth,
    exhaustive_plan,
    max_allowable_path_loss,
    path_loss,
    plan_cells,
    random_users,
)
from aerocell.errors import ConfigError, DomainError
from aerocell.power_models import MimoConfig

LB = LinkBudgetParams()
LB4 = LinkBudgetParams(P_TX_levels=(22.0, 28.0, 34.0, 40.0))
MIMO = MimoConfig()


def bs(x, y):
    return Position(x=x, y=y, z=50.0)


class TestPathLoss:
    def test_reference(self):
        assert path_loss(100, 3.5) == pytest.approx(82.88136088700551, rel=1e-12)

    def test_collapsed_logs(self):
        assert path_loss(10, 1.0) == pytest.approx(50.0, abs=1e-12)

    def test_nlos_not_below_los(self):
        for d in np.geomspace(1, 5000, 50):
            assert path_loss(d, 3.5, "UMa-NLOS") >= path_loss(d, 3.5)

    def test_monotone(self):
        d = np.geomspace(1, 5000, 200)
        for model in ("UMa-LOS", "UMa-NLOS"):
            v = [path_loss(x, 3.5, model) for x in d]
            assert all(b > a for a, b in zip(v, v[1:]))

    def test_short_distance(self):
        with pytest.raises(DomainError):
            path_loss(0.5, 3.5)


def budget_oracle(demand_mbps, p_tx_dbm, lb, mimo):
    """Linear-domain link budget: the largest tolerable channel attenuation."""
    bw = mimo.B_w * lb.N_SC_u / lb.N_SC_t / lb.SF * mimo.D_DL
    snr = max(2 ** (demand_mbps * 1e6 / bw) - 1, 0.1)
    kT = 10 ** (-174 / 10) * 1e-3  # W/Hz
    noise_w = kT * bw * 10 ** (lb.NF / 10)
    p_w = 10 ** (p_tx_dbm / 10) * 1e-3
    gain = 10 ** ((lb.G_a_BS + lb.G_a_UE + lb.G_SHO) / 10)
    loss = 10 ** ((lb.L_f + lb.IM + lb.DM + lb.FM + lb.SM + lb.IL) / 10)
    return 10 * math.log10(p_w * gain / (loss * noise_w * snr))


class TestMapl:
    def test_against_linear_budget(self):
        got = max_allowable_path_loss(100.0, 42.0, LB, MIMO)
        assert got == pytest.approx(budget_oracle(100.0, 42.0, LB, MIMO), rel=1e-12)

    def test_many_points(self):
        for d in (1.0, 10.0, 50.0, 100.0, 200.0, 250.0):
            for p in LB.P_TX_levels:
                assert max_allowable_path_loss(d, p, LB, MIMO) == pytest.approx(budget_oracle(d, p, LB, MIMO), rel=1e-12)

    def test_plus_three_db(self):
        a = max_allowable_path_loss(100.0, 30.0, LB, MIMO)
        assert max_allowable_path_loss(100.0, 33.0, LB, MIMO) - a == pytest.approx(3.0, abs=1e-12)

    def test_small_demand_hits_snr_floor(self):
        b_eff = effective_bandwidth(LB, MIMO)
        noise = -174 + 10 * math.log10(b_eff) + 7
        want = 42 + 24 - 3 - 28 - noise + 10
        assert max_allowable_path_loss(1e-6, 42.0, LB, MIMO) == pytest.approx(want, rel=1e-12)

    def test_unreachable(self):
        too_much = effective_bandwidth(LB, MIMO) * 8.01 / 1e6
        assert max_allowable_path_loss(too_much, 42.0, LB, MIMO) is None

    def test_bad_demand(self):
        with pytest.raises(DomainError):
            max_allowable_path_loss(0.0, 42.0, LB, MIMO)


class TestPlanner:
    def test_singleton_smallest_level(self):
        scn = Scenario((bs(500, 500),), (UserEquipment(520, 500),))
        plan = plan_cells(scn, LB, MIMO)
        assert plan.serving.tolist() == [0]
        assert plan.level.tolist() == [0]
        assert plan.p_tx_w[0] == pytest.approx(10 ** (22 / 10) / 1000)
        assert plan.K_UE.tolist() == [1] and plan.M_BS.tolist() == [64]
        assert plan.TR_DL[0] == pytest.approx(0.1) and plan.TR_UL[0] == pytest.approx(0.1 / 3)

    def test_level_rises_with_distance(self):
        near = plan_cells(Scenario((bs(0, 0),), (UserEquipment(400, 0),), (0, 0, 5000, 5000)), LB, MIMO)
        far = plan_cells(Scenario((bs(0, 0),), (UserEquipment(3000, 0),), (0, 0, 5000, 5000)), LB, MIMO)
        assert far.level[0] > near.level[0]

    def test_out_of_range(self):
        scn = Scenario((bs(0, 0),), (UserEquipment(40000, 0),), (0, 0, 40000, 1))
        plan = plan_cells(scn, LB, MIMO)
        assert plan.serving.tolist() == [-1]
        assert not plan.active[0] and plan.p_tx_w[0] == 0.0 and plan.M_BS[0] == 0

    def test_capacity(self):
        users = tuple(UserEquipment(500 + i, 500) for i in range(5))
        plan = plan_cells(Scenario((bs(500, 500),), users, k_max=3), LB, MIMO)
        assert plan.n_served == 3

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ConfigError):
            Scenario((bs(1500, 0),), (), (0, 0, 1000, 1000))

    def test_determinism_and_invariants(self, paper_cfg):
        from aerocell.sim_engine import build_scenario, draw_users, run_seeds

        seq = run_seeds(paper_cfg)[0]
        scn = build_scenario(paper_cfg, draw_users(paper_cfg, seq))
        a = plan_cells(scn, LB, MIMO, seed=1)
        b = plan_cells(build_scenario(paper_cfg, draw_users(paper_cfg, run_seeds(paper_cfg)[0])), LB, MIMO, seed=1)
        assert np.array_equal(a.serving, b.serving) and np.array_equal(a.level, b.level)
        assert len(scn.base_stations) == 8 and len(scn.users) == 100
        assert a.K_UE.sum() == a.n_served
        assert a.TR_DL.sum() == pytest.approx(a.n_served * 0.1)
        for u, b_ in enumerate(a.serving):
            if b_ >= 0:
                d = math.dist((scn.base_stations[b_].x, scn.base_stations[b_].y, 50.0),
                              (scn.users[u].x, scn.users[u].y, scn.users[u].z))
                mapl = max_allowable_path_loss(100.0, LB.P_TX_levels[a.level[b_]], LB, MIMO)
                assert path_loss(d, 3.5) <= mapl


class TestExhaustive:
    def test_singleton_agrees(self):
        scn = Scenario((bs(500, 500),), (UserEquipment(900, 500),))
        g, e = plan_cells(scn, LB4, MIMO), exhaustive_plan(scn, LB4, MIMO)
        assert g.serving.tolist() == e.serving.tolist() and g.total_power == e.total_power

    def test_greedy_optimal_instance(self):
        scn = Scenario((bs(100, 500), bs(900, 500)),
                       (UserEquipment(150, 500), UserEquipment(850, 500), UserEquipment(120, 520)))
        g, e = plan_cells(scn, LB4, MIMO), exhaustive_plan(scn, LB4, MIMO)
        assert g.n_served == e.n_served == 3
        assert g.total_power == pytest.approx(e.total_power)
        assert e.serving.tolist() == [0, 1, 0]

    def test_greedy_suboptimal_instance(self):
        scn = Scenario((bs(1020, 1900), bs(290, 1900)),
                       (UserEquipment(620, 850), UserEquipment(1660, 820), UserEquipment(1100, 60)),
                       (0, 0, 2000, 2000))
        g, e = plan_cells(scn, LB4, MIMO), exhaustive_plan(scn, LB4, MIMO)
        assert g.n_served == e.n_served == 3
        assert e.total_power < g.total_power
        assert e.active.sum() == 1 and g.active.sum() == 2

    def test_size_guard(self):
        users = tuple(UserEquipment(10 * i, 0) for i in range(7))
        with pytest.raises(ConfigError):
            exhaustive_plan(Scenario((bs(0, 0),), users), LB4, MIMO)
        with pytest.raises(ConfigError):
            exhaustive_plan(Scenario((bs(0, 0),), users[:2]), LB, MIMO)

    def test_random_users_within_bounds(self):
        us = random_users(np.random.default_rng(3), 50, (10, 20, 30, 40))
        assert all(10 <= u.x <= 30 and 20 <= u.y <= 40 for u in us)
