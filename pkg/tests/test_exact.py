"""Tests for the trichotomy callback, exact solver, and frontier enumeration."""

from __future__ import annotations

from fractions import Fraction

import pytest

from bcmcf import (
    EdgeData,
    Flow,
    Instance,
    VerdictKind,
    add_return_arc,
    budget_combination,
    enumerate_frontier,
    generate_instance,
    instance_stats,
    lambda_callback,
    oracle_frontier,
    oracle_optimum,
    preprocess,
    solve_exact,
    validate_flow,
)
from bcmcf.oracle import iter_integral_values


def optima_fee_range(circ: Instance, lam: Fraction) -> tuple[Fraction, Fraction]:
    """Fee range over all integral circulations minimizing cost + lam * fee."""
    best = None
    fees = []
    for vals in iter_integral_values(circ):
        value = sum((e.cost + lam * e.fee) * v for e, v in zip(circ.edges, vals))
        fee = sum(e.fee * v for e, v in zip(circ.edges, vals))
        if best is None or value < best:
            best = value
            fees = [fee]
        elif value == best:
            fees.append(fee)
    return Fraction(min(fees)), Fraction(max(fees))


class TestLambdaCallback:
    @pytest.mark.parametrize(
        "lam,expected",
        [(1, VerdictKind.BELOW), (2, VerdictKind.INSIDE), (3, VerdictKind.ABOVE)],
    )
    def test_two_parallel_verdicts(self, inst_two_parallel, lam, expected):
        circ = add_return_arc(inst_two_parallel)
        verdict = lambda_callback(circ, Fraction(lam))
        assert verdict.kind is expected
        # witness fees are exactly the extremes of the optimal face
        lo, hi = optima_fee_range(circ, Fraction(lam))
        assert verdict.x_minfee.fee == lo
        assert verdict.x_maxfee.fee == hi

    def test_inside_brackets_budget(self, inst_two_parallel):
        circ = add_return_arc(inst_two_parallel)
        verdict = lambda_callback(circ, Fraction(2))
        assert verdict.x_minfee.fee <= circ.budget <= verdict.x_maxfee.fee

    def test_budget_slack_at_zero_is_inside(self, inst_two_parallel):
        slack = Instance(
            node_count=2, edges=inst_two_parallel.edges, source=1, sink=2, budget=100
        )
        verdict = lambda_callback(add_return_arc(slack), Fraction(0))
        assert verdict.kind is VerdictKind.INSIDE

    def test_monotone_pattern_on_random_instances(self):
        for seed in range(15):
            inst = preprocess(
                generate_instance(
                    nodes=2 + seed % 5,
                    edges=1 + seed % 8,
                    budget_mode=("tight", "zero")[seed % 2],
                    seed=500 + seed,
                )
            )
            circ = add_return_arc(inst)
            top = instance_stats(inst).lambda_above_all_slopes()
            kinds = [
                lambda_callback(circ, Fraction(k) * top / 11).kind for k in range(12)
            ]
            order = {VerdictKind.BELOW: 0, VerdictKind.INSIDE: 1, VerdictKind.ABOVE: 2}
            ranks = [order[k] for k in kinds]
            assert ranks == sorted(ranks)


class TestBudgetCombination:
    def test_interpolates_to_budget(self, inst_two_parallel):
        x1 = Flow.from_values(inst_two_parallel, [0, 2])
        x2 = Flow.from_values(inst_two_parallel, [2, 2])
        combo = budget_combination(x1, x2, 2)
        assert combo.values == (1, 2)
        assert combo.cost == -6
        assert combo.fee == 2
        assert validate_flow(inst_two_parallel, combo).ok

    def test_degenerate_interval_returns_first(self, inst_two_parallel):
        x1 = Flow.from_values(inst_two_parallel, [1, 0])
        x2 = Flow.from_values(inst_two_parallel, [1, 2])
        assert budget_combination(x1, x2, 2) is x1

    def test_budget_at_upper_end_returns_second(self, inst_two_parallel):
        x1 = Flow.from_values(inst_two_parallel, [0, 2])
        x2 = Flow.from_values(inst_two_parallel, [2, 2])
        combo = budget_combination(x1, x2, 4)
        assert combo.values == x2.values

    def test_precondition_violation(self, inst_two_parallel):
        x1 = Flow.from_values(inst_two_parallel, [1, 0])
        x2 = Flow.from_values(inst_two_parallel, [2, 0])
        with pytest.raises(ValueError):
            budget_combination(x1, x2, 1)


class TestSolveExact:
    def test_two_parallel(self, inst_two_parallel):
        sol = solve_exact(inst_two_parallel)
        assert sol.objective == -6
        assert sol.flow.values == (1, 2)
        assert sol.lam == 2
        assert sol.flow.fee == 2
        assert validate_flow(inst_two_parallel, sol.flow).ok

    def test_positive_costs_zero_flow(self, inst_single_positive):
        sol = solve_exact(inst_single_positive)
        assert sol.objective == 0
        assert all(v == 0 for v in sol.flow.values)

    def test_slack_budget_unconstrained(self, inst_two_parallel):
        slack = Instance(
            node_count=2, edges=inst_two_parallel.edges, source=1, sink=2, budget=100
        )
        sol = solve_exact(slack)
        assert sol.objective == -10
        assert sol.flow.values == (2, 2)
        assert sol.lam == 0

    def test_optimum_beyond_multiplier_grid(self):
        # the only negative edge carries a fee and the budget is zero: the
        # optimal multiplier (10) dwarfs the grid's upper end (bbar = 1)
        inst = Instance(
            node_count=2, edges=(EdgeData(1, 2, 1, -10, 1),), source=1, sink=2, budget=0
        )
        sol = solve_exact(inst)
        assert sol.objective == 0
        assert sol.search_probes <= 3

    def test_crossing_between_near_parallel_segments(self):
        # two frontier segments whose multipliers (1/4 and 1/5) both fall in
        # one grid gap of width 1/8; corner refinement must still land the
        # exact crossing on the second segment
        inst = Instance(
            node_count=2,
            edges=(EdgeData(1, 2, 1, -1, 4), EdgeData(1, 2, 1, -1, 5)),
            source=1,
            sink=2,
            budget=5,
        )
        sol = solve_exact(inst)
        reference = oracle_optimum(inst)
        assert sol.objective == reference.objective == Fraction(-6, 5)
        assert sol.lam == Fraction(1, 5)
        assert sol.refine_probes is not None and sol.refine_probes >= 1

    def test_matches_oracle_on_random_instances(self):
        for seed in range(40):
            inst = preprocess(
                generate_instance(
                    nodes=2 + seed % 5,
                    edges=1 + seed % 9,
                    budget_mode=("tight", "slack", "zero")[seed % 3],
                    seed=600 + seed,
                )
            )
            sol = solve_exact(inst)
            reference = oracle_optimum(inst)
            assert sol.objective == reference.objective
            report = validate_flow(inst, sol.flow)
            assert report.ok
            assert sol.flow.fee <= inst.budget

    def test_probe_budget(self, inst_two_parallel):
        stats = instance_stats(inst_two_parallel)
        bound = (2 * stats.bbar * stats.cbar**2 + 1).bit_length() + 2
        sol = solve_exact(inst_two_parallel)
        assert sol.search_probes is not None and sol.search_probes <= bound


class TestEnumerateFrontier:
    def test_two_parallel(self, inst_two_parallel):
        points = enumerate_frontier(inst_two_parallel)
        assert [(p.cost, p.fee) for p in points] == [(-2, 0), (-10, 4)]
        assert points[0].lambda_low == 2 and points[0].lambda_high is None
        assert points[1].lambda_low == 0 and points[1].lambda_high == 2

    def test_single_point(self, inst_single_positive):
        points = enumerate_frontier(inst_single_positive)
        assert [(p.cost, p.fee) for p in points] == [(0, 0)]

    def test_origin_plus_one_segment(self, inst_two_parallel):
        only_feed = Instance(
            node_count=2, edges=inst_two_parallel.edges[:1], source=1, sink=2, budget=2
        )
        points = enumerate_frontier(only_feed)
        assert [(p.cost, p.fee) for p in points] == [(0, 0), (-8, 4)]

    def test_matches_oracle_and_separates_slopes(self):
        for seed in range(30):
            inst = preprocess(
                generate_instance(
                    nodes=2 + seed % 5, edges=1 + seed % 9, seed=700 + seed
                )
            )
            mine = enumerate_frontier(inst)
            reference = oracle_frontier(inst)
            assert [(p.cost, p.fee) for p in mine] == [
                (p.cost, p.fee) for p in reference
            ]
            for p in mine:
                assert (p.witness.cost, p.witness.fee) == (p.cost, p.fee)
            cbar = instance_stats(inst).cbar
            slopes = [
                (b.fee - a.fee) / (b.cost - a.cost) for a, b in zip(mine, mine[1:])
            ]
            for s1, s2 in zip(slopes, slopes[1:]):
                assert abs(s1 - s2) >= Fraction(1, cbar**2)


class TestCallbackPreconditions:
    def test_requires_circulation_form(self, inst_two_parallel):
        with pytest.raises(ValueError, match="circulation"):
            lambda_callback(inst_two_parallel, Fraction(1))

    def test_rejects_negative_multiplier(self, inst_two_parallel):
        circ = add_return_arc(inst_two_parallel)
        with pytest.raises(ValueError):
            lambda_callback(circ, Fraction(-1))
