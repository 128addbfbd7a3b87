"""Tests for the CLDS reward, learning, selection and failover pieces."""

import numpy as np
import pytest
from scipy import stats

from src.core.errors import DomainError, ProtocolError, SimulationError
from src.models.grid.job import Job
from src.models.policies.clds import (
    RewardVector,
    ScheduledJobEntry,
    ScheduledJobList,
    UtilityTable,
    generate_local_rewards,
    promote_learner,
    reward_finished,
    reward_unfinished,
    schedule_queue,
    select_resource,
    update_utility_table,
)
from src.simulation.state import SchedulerAgent


class TestRewards:
    def test_finished(self):
        assert reward_finished(50.0, 100, 110) == 5.0
        assert reward_finished(8.0, 0, 1) == 8.0

    def test_faster_completion_earns_more(self):
        assert reward_finished(20.0, 0, 4) == 5.0
        assert reward_finished(20.0, 0, 10) == 2.0

    def test_finished_needs_positive_span(self):
        with pytest.raises(DomainError):
            reward_finished(10.0, 5, 5)

    def test_unfinished(self):
        assert reward_unfinished(4.0) == -0.25
        assert reward_unfinished(1.0) == -1.0
        assert reward_unfinished(100.0) > reward_unfinished(10.0)

    def test_matches_direct_evaluation(self):
        for case in range(1000):
            case_rng = np.random.default_rng(case)
            size = float(case_rng.uniform(0.01, 1000.0))
            start = int(case_rng.integers(0, 10000))
            end = start + int(case_rng.integers(1, 500))
            assert reward_finished(size, start, end) == pytest.approx(size / (end - start), rel=1e-12)
            assert reward_unfinished(size) == pytest.approx(-1.0 / size, rel=1e-12)

    def test_unfinished_needs_positive_size(self):
        with pytest.raises(DomainError):
            reward_unfinished(0.0)


class TestGenerateLocalRewards:
    def test_single_completed_entry(self):
        entries = [ScheduledJobEntry(job_id=1, job_size=50.0, resource_id=3, starting_time=0, completion_time=10)]
        vector = generate_local_rewards(0, entries, current_step=10, num_resources=5)
        assert vector.rewards.tolist() == [0.0, 0.0, 0.0, 5.0, 0.0]
        assert entries == []

    def test_pending_and_completed_sum(self):
        entries = [
            ScheduledJobEntry(job_id=1, job_size=4.0, resource_id=1, starting_time=5),
            ScheduledJobEntry(job_id=2, job_size=6.0, resource_id=1, starting_time=3, completion_time=5),
        ]
        vector = generate_local_rewards(0, entries, current_step=6, num_resources=3)
        assert vector.rewards[1] == pytest.approx(2.75)
        assert [e.job_id for e in entries] == [1]

    def test_empty_list(self):
        vector = generate_local_rewards(2, [], current_step=4, num_resources=4)
        assert not vector.rewards.any()
        assert vector.sender == 2
        assert vector.step == 4

    def test_unknown_resource(self):
        entries = [ScheduledJobEntry(job_id=1, job_size=4.0, resource_id=9, starting_time=0)]
        with pytest.raises(ProtocolError):
            generate_local_rewards(0, entries, current_step=1, num_resources=3)


class TestScheduledJobList:
    def test_matches_list_rebuild(self, rng):
        """The incremental list produces the same vectors as a full rebuild."""
        num_resources = 4
        incremental = ScheduledJobList(num_resources)
        plain = []
        next_id = 0
        for step in range(200):
            # completions for jobs submitted earlier
            for entry in list(plain):
                if entry.completion_time is None and entry.starting_time < step and rng.random() < 0.3:
                    entry.completion_time = step
                    incremental.mark_completed(entry.job_id, step)
            fast = incremental.produce_rewards(0, step)
            slow = generate_local_rewards(0, plain, step, num_resources)
            np.testing.assert_allclose(fast.rewards, slow.rewards, rtol=1e-9, atol=1e-9)
            assert sorted(e.job_id for e in incremental.entries()) == sorted(e.job_id for e in plain)
            for _ in range(int(rng.integers(0, 4))):
                size = float(rng.uniform(1.0, 50.0))
                resource_id = int(rng.integers(num_resources))
                incremental.record(ScheduledJobEntry(next_id, size, resource_id, step))
                plain.append(ScheduledJobEntry(next_id, size, resource_id, step))
                next_id += 1

    def test_slot_zero_without_entries(self):
        job_list = ScheduledJobList(3)
        job_list.record(ScheduledJobEntry(0, 10.0, 1, 0))
        job_list.mark_completed(0, 2)
        job_list.produce_rewards(0, 2)
        vector = job_list.produce_rewards(0, 3)
        assert vector.rewards.tolist() == [0.0, 0.0, 0.0]
        assert len(job_list) == 0

    def test_duplicate_notice_rejected(self):
        job_list = ScheduledJobList(2)
        job_list.record(ScheduledJobEntry(0, 10.0, 1, 0))
        job_list.mark_completed(0, 3)
        with pytest.raises(ProtocolError):
            job_list.mark_completed(0, 4)

    def test_notice_for_unknown_job_rejected(self):
        job_list = ScheduledJobList(2)
        with pytest.raises(ProtocolError):
            job_list.mark_completed(7, 1)
        job_list.record(ScheduledJobEntry(0, 10.0, 1, 0))
        job_list.mark_completed(0, 2)
        job_list.produce_rewards(0, 2)
        # entry already rewarded and removed
        with pytest.raises(ProtocolError):
            job_list.mark_completed(0, 3)

    def test_completion_before_start_rejected(self):
        job_list = ScheduledJobList(2)
        job_list.record(ScheduledJobEntry(0, 10.0, 1, 5))
        with pytest.raises(DomainError):
            job_list.mark_completed(0, 5)


class TestUpdateUtilityTable:
    def test_smoothing(self):
        table = UtilityTable(values=np.array([2.0]))
        vectors = [RewardVector(0, 1, np.array([1.5])), RewardVector(1, 1, np.array([2.5]))]
        updated = update_utility_table(table, vectors, alpha=0.5)
        assert updated.values[0] == pytest.approx(3.0)
        assert updated.version == 1

    def test_pure_decay(self):
        table = UtilityTable(values=np.array([10.0, 0.0]))
        vectors = [RewardVector(0, 3, np.zeros(2))]
        updated = update_utility_table(table, vectors, alpha=0.1)
        assert updated.values[0] == pytest.approx(9.0)

    def test_alpha_one_equals_sums(self):
        table = UtilityTable(values=np.array([7.0, -3.0]))
        vectors = [RewardVector(0, 0, np.array([1.0, 2.0])), RewardVector(1, 0, np.array([0.5, -1.0]))]
        updated = update_utility_table(table, vectors, alpha=1.0)
        assert updated.values.tolist() == [1.5, 1.0]

    def test_matches_direct_evaluation(self):
        for case in range(1000):
            case_rng = np.random.default_rng(case)
            num_resources = int(case_rng.integers(1, 6))
            alpha = float(case_rng.uniform(0.01, 1.0))
            start = case_rng.uniform(-10.0, 10.0, size=num_resources)
            sums = case_rng.uniform(-5.0, 5.0, size=(int(case_rng.integers(1, 5)), num_resources))
            vectors = [RewardVector(i, 0, row) for i, row in enumerate(sums)]
            updated = update_utility_table(UtilityTable(values=start), vectors, alpha=alpha)
            for q in range(num_resources):
                expected = (1 - alpha) * start[q] + alpha * sum(float(row[q]) for row in sums)
                assert updated.values[q] == pytest.approx(expected, rel=1e-12, abs=1e-12), case

    def test_geometric_convergence(self):
        """With constant rewards s, |U_k - s| = (1 - alpha)^k |U_0 - s| at every step."""
        for case in range(100):
            case_rng = np.random.default_rng(case)
            alpha = float(case_rng.uniform(0.01, 0.99))
            target = case_rng.uniform(-5.0, 5.0, size=3)
            start = case_rng.uniform(-5.0, 5.0, size=3)
            table = UtilityTable(values=start)
            for k in range(1, 101):
                table = update_utility_table(table, [RewardVector(0, k, target)], alpha=alpha)
                expected = (1 - alpha) ** k * np.abs(start - target)
                np.testing.assert_allclose(np.abs(table.values - target), expected, rtol=0, atol=1e-12)

    def test_fixed_point(self):
        """Constant rewards R drive every entry to R."""
        target = np.array([1.0, -2.0, 0.5])
        table = UtilityTable.zeros(3)
        for step in range(400):
            table = update_utility_table(table, [RewardVector(0, step, target)], alpha=0.1)
        np.testing.assert_allclose(table.values, target, atol=1e-12)

    def test_original_table_unchanged(self):
        table = UtilityTable.zeros(2)
        update_utility_table(table, [RewardVector(0, 0, np.ones(2))], alpha=0.5)
        assert table.values.tolist() == [0.0, 0.0]
        assert not table.values.flags.writeable

    def test_length_mismatch(self):
        with pytest.raises(ProtocolError):
            update_utility_table(UtilityTable.zeros(3), [RewardVector(0, 0, np.zeros(2))], alpha=0.1)

    def test_mixed_steps(self):
        vectors = [RewardVector(0, 1, np.zeros(2)), RewardVector(1, 2, np.zeros(2))]
        with pytest.raises(ProtocolError):
            update_utility_table(UtilityTable.zeros(2), vectors, alpha=0.1)

    def test_no_vectors_needs_step(self):
        with pytest.raises(ProtocolError):
            update_utility_table(UtilityTable.zeros(2), [], alpha=0.1)
        updated = update_utility_table(UtilityTable(values=np.array([4.0, 0.0])), [], alpha=0.5, step=6)
        assert updated.values.tolist() == [2.0, 0.0]
        assert updated.version == 6

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(DomainError):
            update_utility_table(UtilityTable.zeros(1), [], alpha=alpha, step=0)


class TestSelectResource:
    def test_unique_argmax(self, rng):
        assert select_resource(UtilityTable(values=np.array([1.0, 3.0, 2.0])), rng) == 1

    def test_tie_split(self):
        table = UtilityTable(values=np.array([5.0, 5.0, 1.0]))
        picks = [select_resource(table, np.random.default_rng(seed)) for seed in range(2000)]
        counts = np.bincount(picks, minlength=3)
        assert counts[2] == 0
        assert stats.binomtest(int(counts[0]), 2000, 0.5).pvalue > 1e-4

    def test_scale_invariance(self, rng):
        for _ in range(100):
            values = rng.normal(size=8)
            scale = 2.0 ** int(rng.integers(-10, 10))
            a = select_resource(UtilityTable(values=values), np.random.default_rng(1))
            b = select_resource(UtilityTable(values=values * scale), np.random.default_rng(1))
            assert a == b

    def test_epsilon_one_explores(self):
        table = UtilityTable(values=np.array([0.0, 0.0, 0.0, 9.0]))
        picks = [select_resource(table, np.random.default_rng(seed), epsilon=1.0) for seed in range(400)]
        assert set(picks) == {0, 1, 2, 3}

    def test_empty_table(self, rng):
        with pytest.raises(DomainError):
            select_resource(UtilityTable.zeros(0), rng)


class TestScheduleQueue:
    def _agent(self, seed: int = 0) -> SchedulerAgent:
        agent = SchedulerAgent(id=0, rng=np.random.default_rng(seed))
        agent.job_list = ScheduledJobList(4)
        return agent

    def test_all_jobs_to_argmax(self):
        agent = self._agent()
        agent.job_queue = [Job(id=i, length=10.0, origin_scheduler=0, created_step=0) for i in range(3)]
        table = UtilityTable(values=np.array([0.0, 0.0, 4.0, 1.0]))
        assignments = schedule_queue(agent, table, current_step=5)
        assert [rid for _, rid in assignments] == [2, 2, 2]
        assert agent.job_queue == []
        assert len(agent.job_list) == 3
        assert all(entry.starting_time == 5 for entry in agent.job_list.entries())

    def test_empty_queue(self):
        agent = self._agent()
        assert schedule_queue(agent, UtilityTable.zeros(4), current_step=0) == []

    def test_tied_table_spreads_uniformly(self):
        agent = self._agent(seed=42)
        agent.job_queue = [Job(id=i, length=1.0, origin_scheduler=0, created_step=0) for i in range(1000)]
        assignments = schedule_queue(agent, UtilityTable.zeros(4), current_step=0)
        counts = np.bincount([rid for _, rid in assignments], minlength=4)
        assert stats.chisquare(counts).pvalue > 1e-4


class TestPromoteLearner:
    def test_lowest_survivor(self):
        state = promote_learner(range(5), failed=0, table_snapshot=UtilityTable.zeros(2))
        assert state.current_learner == 1
        assert 0 in state.retired

    def test_uses_snapshot(self):
        snapshot = UtilityTable(values=np.array([1.0, 2.0]), version=9)
        state = promote_learner([0, 1, 2], failed=1, table_snapshot=snapshot, alpha=0.3)
        assert state.current_learner == 0
        assert state.table is snapshot
        assert state.alpha == 0.3

    def test_retired_skipped(self):
        state = promote_learner(range(4), failed=1, table_snapshot=UtilityTable.zeros(1), retired={0})
        assert state.current_learner == 2
        assert state.retired == frozenset({0, 1})

    def test_no_survivor(self):
        with pytest.raises(SimulationError):
            promote_learner([0], failed=0, table_snapshot=UtilityTable.zeros(1))
