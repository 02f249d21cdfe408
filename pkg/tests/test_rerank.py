import math

import pytest

from tracerank.errors import DomainError
from tracerank.rerank import (
    CountTable,
    RewardConfig,
    apply_rewards,
    build_count_table,
    cutoff,
    final_links,
    select_hptas,
    specificity,
)

from conftest import ranked


class TestCutoff:
    def test_easyclinic_scale(self):
        assert cutoff(0.03, 63) == 1  # floor(1.89)

    def test_full_list(self):
        assert cutoff(1.0, 10) == 10

    def test_hand_value(self):
        assert cutoff(0.08, 62) == 4  # floor(4.96)

    def test_floor_never_below_one(self):
        assert cutoff(0.001, 10) == 1

    def test_float_step_artifacts_tolerated(self):
        # 0.29 * 100 = 28.999999... must still cut at 29
        assert cutoff(0.29, 100) == 29


class TestSelectHptas:
    def test_top_two(self):
        lst = ranked("SA1", [("TA1", .9), ("TA2", .8), ("TA3", .7), ("TA4", .6)])
        assert select_hptas(lst, RewardConfig(k1=0.5, k2=0.5)) == ["TA1", "TA2"]

    def test_minimum_is_top_one(self):
        lst = ranked("SA1", [("TA1", .9), ("TA2", .8)])
        assert select_hptas(lst, RewardConfig(k1=0.01, k2=0.5)) == ["TA1"]


class TestCountTable:
    def test_worked_example_counts(self, reward_example):
        _, ta_lists, cfg = reward_example
        counts = build_count_table(ta_lists, cfg)
        assert counts.m == 8
        assert counts.count["TA7"] == 3
        assert counts.count["TA8"] == 1
        assert counts.count["TA5"] == 1

    def test_two_targets(self):
        ta_lists = {
            "T1": ranked("T1", [("T2", .5)]),
            "T2": ranked("T2", [("T1", .5)]),
        }
        counts = build_count_table(ta_lists, RewardConfig(k1=1.0, k2=1.0))
        assert counts.count == {"T1": 1, "T2": 1}


class TestSpecificity:
    def test_boundary_zero(self):
        assert specificity(9, 10) == 0.0

    def test_hand_value(self):
        assert specificity(7, 50) == pytest.approx(math.log(7), abs=1e-9)

    def test_desk_example(self):
        assert specificity(3, 9) == pytest.approx(math.log(8 / 3), abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            specificity(0, 10)
        with pytest.raises(DomainError):
            specificity(10, 10)


class TestApplyRewards:
    def test_equal_specificity_hand_case(self):
        # one HPTA, two TRTAs of equal specificity -> weight 1/2 each
        sa = ranked("SA", [("T1", .9), ("T2", .7), ("T3", .5), ("T4", .3)])
        ta_lists = {
            "T1": ranked("T1", [("T3", .9), ("T4", .8), ("T2", .1)]),
            "T2": ranked("T2", [("T3", .9), ("T4", .8), ("T1", .1)]),
            "T3": ranked("T3", [("T1", .9), ("T2", .8), ("T4", .1)]),
            "T4": ranked("T4", [("T1", .9), ("T2", .8), ("T3", .1)]),
        }
        cfg = RewardConfig(k1=0.25, k2=2 / 3)  # 1 HPTA (T1), top-2 TRTAs (T3, T4)
        counts = build_count_table(ta_lists, cfg)
        assert counts.count["T3"] == counts.count["T4"] == 2
        new_list, trace = apply_rewards(sa, ta_lists, counts, cfg)
        by_id = dict(new_list.entries)
        # reward = (0.9 - 0.5) * 0.5 = 0.2 for T3
        assert by_id["T3"] == pytest.approx(0.7, abs=1e-12)
        assert by_id["T4"] == pytest.approx(0.3 + 0.6 * 0.5, abs=1e-12)
        assert len(trace.rows) == 2

    def test_rank1_trta_unchanged(self):
        sa = ranked("SA", [("T1", .9), ("T2", .7), ("T3", .5)])
        ta_lists = {
            "T1": ranked("T1", [("T2", .9), ("T3", .1)]),
            "T2": ranked("T2", [("T1", .9), ("T3", .1)]),
            "T3": ranked("T3", [("T1", .9), ("T2", .1)]),
        }
        cfg = RewardConfig(k1=0.67, k2=0.5)  # HPTAs T1, T2; T2's top TRTA is T1
        counts = build_count_table(ta_lists, cfg)
        new_list, trace = apply_rewards(sa, ta_lists, counts, cfg)
        # the rank-1 target as TRTA: Sim_first - Sim_origin = 0, score unchanged
        t1_rows = [r for r in trace.rows if r.trta_id == "T1"]
        assert t1_rows and all(r.reward == 0.0 for r in t1_rows)
        assert new_list.entries[0] == ("T1", 0.9)

    def test_disabled_returns_input(self, reward_example):
        sa_list, ta_lists, cfg = reward_example
        off = RewardConfig(k1=cfg.k1, k2=cfg.k2, rewarding_enabled=False)
        counts = build_count_table(ta_lists, off)
        new_list, trace = apply_rewards(sa_list, ta_lists, counts, off)
        assert new_list == sa_list
        assert trace.rows == []

    def test_zero_total_specificity_gives_zero_rewards(self):
        # every target in every top cut -> all counts = m-1 -> all specs 0
        sa = ranked("SA", [("T1", .9), ("T2", .7), ("T3", .5)])
        ta_lists = {
            "T1": ranked("T1", [("T2", .9), ("T3", .8)]),
            "T2": ranked("T2", [("T1", .9), ("T3", .8)]),
            "T3": ranked("T3", [("T1", .9), ("T2", .8)]),
        }
        cfg = RewardConfig(k1=1.0, k2=1.0)
        counts = build_count_table(ta_lists, cfg)
        assert all(c == 2 for c in counts.count.values())
        new_list, trace = apply_rewards(sa, ta_lists, counts, cfg)
        assert new_list.entries == sa.entries
        assert all(r.reward == 0.0 for r in trace.rows)

    def test_multi_hpta_takes_maximum(self):
        sa = ranked("SA", [("T1", .9), ("T2", .8), ("T3", .2), ("T4", .1)])
        # T3 is a TRTA of both HPTAs; candidates differ only via ties in spec
        ta_lists = {
            "T1": ranked("T1", [("T3", .9), ("T2", .5), ("T4", .1)]),
            "T2": ranked("T2", [("T3", .9), ("T4", .5), ("T1", .1)]),
            "T3": ranked("T3", [("T1", .9), ("T2", .5), ("T4", .1)]),
            "T4": ranked("T4", [("T1", .9), ("T2", .5), ("T3", .1)]),
        }
        cfg = RewardConfig(k1=0.5, k2=2 / 3)
        counts = build_count_table(ta_lists, cfg)
        new_list, trace = apply_rewards(sa, ta_lists, counts, cfg)
        t3_candidates = [r.sim_new for r in trace.rows if r.trta_id == "T3"]
        assert len(t3_candidates) == 2
        assert dict(new_list.entries)["T3"] == max(t3_candidates)

    def test_worked_example_full(self, reward_example):
        sa_list, ta_lists, cfg = reward_example
        counts = build_count_table(ta_lists, cfg)
        new_list, _ = apply_rewards(sa_list, ta_lists, counts, cfg)
        total = math.log(7 / 3) + math.log(7)
        expect = {
            "TA7": 0.4 + (0.9 - 0.4) * math.log(7 / 3) / total,
            "TA8": 0.35 + (0.9 - 0.35) * math.log(7) / total,
            "TA5": 0.5 + (0.9 - 0.5) * math.log(7) / total,
        }
        by_id = dict(new_list.entries)
        for tid, value in expect.items():
            assert by_id[tid] == pytest.approx(value, abs=1e-12)
        order = [tid for tid, _ in new_list.entries]
        assert order == ["TA1", "TA2", "TA3", "TA5", "TA4", "TA8", "TA7", "TA6"]


class TestFinalLinks:
    def test_top_six(self):
        lst = ranked("SA", [(f"T{i}", 1.0 - i / 100) for i in range(10)])
        cfg = RewardConfig(top_k_links=6)
        assert len(final_links(lst, cfg)) == 6

    def test_all(self):
        lst = ranked("SA", [(f"T{i}", 1.0 - i / 100) for i in range(10)])
        assert len(final_links(lst, RewardConfig(top_k_links="all"))) == 10

    def test_clamp_short_list(self):
        lst = ranked("SA", [(f"T{i}", 1.0 - i / 100) for i in range(4)])
        assert len(final_links(lst, RewardConfig(top_k_links=6))) == 4
