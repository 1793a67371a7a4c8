"""Packing-LP approximation scheme with minimum-ratio cycle/path oracles.

The circulation form of the problem is a packing LP over negative-cost
cycles: pack cycle flow against edge capacities and the fee budget.  The
multiplicative-weights loop keeps a positive length per capacity row and
one for the budget row, repeatedly routes the cycle minimizing
(fee-weighted length)/(-cost), and finally scales the accumulated flow
down to feasibility.  On acyclic graphs every candidate cycle is a path
between source and sink (in one orientation or the other) plus the
matching zero-cost closure arc, so an exact parametric path oracle
replaces the bisection cycle oracle.

Dual lengths are floats; routed amounts are converted exactly to rationals
when accumulated, so the returned flow conserves exactly and the final
feasibility repair is an exact comparison, not an epsilon test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .mcc import InternalSolverError
from .model import Flow, Instance, Solution, circulation_form


class CyclicGraphError(ValueError):
    """The acyclic-only entry point received a graph with a directed cycle."""


@dataclass
class DualState:
    """Multiplicative-weights lengths: one per capacity row, one for the budget.

    ``budget_length`` is None when the budget row is dropped (budget zero).
    True lengths are the stored ones times ``exp(log_shift)``: only length
    ratios feed the oracle, so the common scale lives in the exponent and
    the stored floats are renormalized whenever they grow large.  That keeps
    the loop exact-in-spirit for accuracies whose start value ``delta``
    underflows a float.  The dual objective, tracked in log space, starts
    below zero and the loop stops once it reaches it.
    """

    lengths: list[float]
    budget_length: float | None
    log_shift: float = 0.0

    def log_objective(self, capacities: Sequence[int], budget: int) -> float:
        total = sum(u * y for u, y in zip(capacities, self.lengths))
        if self.budget_length is not None:
            total += budget * self.budget_length
        return math.log(total) + self.log_shift

    def renormalize(self, capacities: Sequence[int], budget: int) -> float:
        """Divide stored lengths by their objective; returns the factor."""
        total = sum(u * y for u, y in zip(capacities, self.lengths))
        if self.budget_length is not None:
            total += budget * self.budget_length
        self.lengths = [y / total for y in self.lengths]
        if self.budget_length is not None:
            self.budget_length /= total
        self.log_shift += math.log(total)
        return total


@dataclass(frozen=True)
class RatioResult:
    """A cycle or path with its ratio numerator/denominator sums."""

    edges: tuple[int, ...]
    numerator: float | Fraction
    denominator: float | Fraction
    ratio: float | Fraction


# ---------------------------------------------------------------------------
# cycle oracle: bisection on the parametric lengths num - lam * den
# ---------------------------------------------------------------------------


def _negative_cycle_float(
    node_count: int,
    tails: Sequence[int],
    heads: Sequence[int],
    weights: Sequence[float],
) -> list[int] | None:
    """Bellman-Ford negative cycle in float arithmetic (all-zero start labels)."""
    n = node_count
    m = len(weights)
    dist = [0.0] * (n + 1)
    pred = [-1] * (n + 1)
    improved = -1
    for _ in range(n):
        changed = False
        for a in range(m):
            cand = dist[tails[a]] + weights[a]
            if cand < dist[heads[a]]:
                dist[heads[a]] = cand
                pred[heads[a]] = a
                changed = True
                improved = heads[a]
        if not changed:
            return None
    v = improved
    for _ in range(n):
        if pred[v] < 0:
            return None
        v = tails[pred[v]]
    cycle_rev = []
    node = v
    seen = set()
    while True:
        a = pred[node]
        if a < 0 or node in seen:
            return None
        seen.add(node)
        cycle_rev.append(a)
        node = tails[a]
        if node == v:
            break
    return list(reversed(cycle_rev))


def min_ratio_cycle(
    inst: Instance,
    num: Sequence[float],
    den: Sequence[float],
    rel_tol: float,
) -> RatioResult | None:
    """Nearly minimum-ratio simple cycle by bisection on the ratio value.

    Requires num >= 0 per edge.  A cycle with ratio below ``lam`` exists
    exactly when the lengths num - lam * den admit a negative cycle (cycles
    with nonpositive denominator can never look negative there since their
    parametric length stays nonnegative).  Bisection narrows to relative
    width ``rel_tol`` and returns the best cycle seen, whose ratio is then
    within (1 + rel_tol) of the true minimum over cycles with positive
    denominator; returns None when no such cycle exists.
    """
    if not 0 < rel_tol < 1:
        raise ValueError(f"rel_tol {rel_tol} outside (0, 1)")
    if any(x < 0 for x in num):
        raise ValueError("ratio numerators must be nonnegative")
    tails = [e.tail for e in inst.edges]
    heads = [e.head for e in inst.edges]

    # a qualifying cycle exists iff some cycle has negative total -den
    seed = _negative_cycle_float(inst.node_count, tails, heads, [-d for d in den])
    if seed is None:
        return None

    def ratio_of(cycle: Sequence[int]) -> float:
        d = sum(den[a] for a in cycle)
        return sum(num[a] for a in cycle) / d

    best = tuple(seed)
    best_ratio = ratio_of(seed)
    lo = 0.0
    hi = best_ratio
    for _ in range(200):
        # the width floor is relative: early ratios can sit many orders of
        # magnitude below 1 while still needing relative resolution
        if hi <= lo * (1.0 + rel_tol) or hi - lo <= 1e-14 * hi:
            break
        mid = 0.5 * (lo + hi) if lo > 0 else hi / 2.0
        found = _negative_cycle_float(
            inst.node_count,
            tails,
            heads,
            [num[a] - mid * den[a] for a in range(inst.edge_count)],
        )
        if found is None:
            lo = mid
        else:
            r = ratio_of(found)
            if r < best_ratio:
                best = tuple(found)
                best_ratio = r
            hi = min(mid, best_ratio)  # best is a real cycle: its ratio bounds the minimum
    d = sum(den[a] for a in best)
    nsum = sum(num[a] for a in best)
    return RatioResult(best, nsum, d, nsum / d)


# ---------------------------------------------------------------------------
# exact path oracle on acyclic graphs: sequential parametric search
# ---------------------------------------------------------------------------


def topological_order(inst: Instance, *, skip_return_arc: bool = True) -> list[int]:
    """Topological node order; raises CyclicGraphError on a directed cycle."""
    indeg = [0] * (inst.node_count + 1)
    out: list[list[int]] = [[] for _ in range(inst.node_count + 1)]
    for i, e in enumerate(inst.edges):
        if skip_return_arc and i == inst.return_arc_index:
            continue
        indeg[e.head] += 1
        out[e.tail].append(e.head)
    queue = [v for v in range(1, inst.node_count + 1) if indeg[v] == 0]
    order = []
    while queue:
        v = queue.pop()
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != inst.node_count:
        raise CyclicGraphError("graph contains a directed cycle")
    return order


def _dag_min_value_path(
    inst: Instance,
    order: Sequence[int],
    out_edges: Sequence[Sequence[int]],
    weights: Sequence[Fraction],
    dens: Sequence[Fraction],
    source: int,
    sink: int,
) -> tuple[Fraction, Fraction, list[int]] | None:
    """Minimize (total weight, -total den) lexicographically over s-t paths.

    The secondary criterion prefers larger denominators among equal-weight
    paths, so a zero-weight qualifying path is found whenever one exists.
    Returns (weight, den, edge list) or None if the sink is unreachable.
    """
    label: dict[int, tuple[Fraction, Fraction]] = {source: (Fraction(0), Fraction(0))}
    pred: dict[int, int] = {}
    for v in order:
        if v not in label:
            continue
        w0, d0 = label[v]
        for i in out_edges[v]:
            e = inst.edges[i]
            cand = (w0 + weights[i], d0 - dens[i])
            cur = label.get(e.head)
            if cur is None or cand < cur:
                label[e.head] = cand
                pred[e.head] = i
    if sink not in label:
        return None
    w, negd = label[sink]
    path = []
    node = sink
    while node != source:
        i = pred[node]
        path.append(i)
        node = inst.edges[i].tail
    path.reverse()
    return w, -negd, path


def min_ratio_path_dag(
    inst: Instance,
    num: Sequence[Fraction | float],
    den: Sequence[Fraction | float],
    source: int | None = None,
    sink: int | None = None,
    rel_tol: float | None = None,
) -> RatioResult | None:
    """Exact minimum-ratio source-sink path on an acyclic graph.

    Simulates the topological-order shortest-path recursion with labels
    linear in the ratio parameter.  Each comparison whose outcome flips
    inside the current parameter interval is resolved by the sign of the
    concrete shortest-path value at the breakpoint: negative means the
    breakpoint exceeds the optimal ratio, positive that it falls short,
    zero pins it exactly.  Inputs are converted to rationals, so the
    returned ratio is exact.  ``rel_tol`` is accepted for interface parity
    with the cycle oracle and ignored.

    Raises CyclicGraphError when the graph is not acyclic; returns None if
    no source-sink path has positive denominator.
    """
    del rel_tol
    source = inst.source if source is None else source
    sink = inst.sink if sink is None else sink
    nums = [Fraction(x) for x in num]
    dens = [Fraction(x) for x in den]
    if any(x < 0 for x in nums):
        raise ValueError("ratio numerators must be nonnegative")
    order = topological_order(inst, skip_return_arc=False)
    out_edges: list[list[int]] = [[] for _ in range(inst.node_count + 1)]
    for i, e in enumerate(inst.edges):
        out_edges[e.tail].append(i)

    # reachability and a finite starting bracket from the max-denominator path
    maxden: dict[int, Fraction] = {source: Fraction(0)}
    mpred: dict[int, int] = {}
    for v in order:
        if v not in maxden:
            continue
        for i in out_edges[v]:
            cand = maxden[v] + dens[i]
            head = inst.edges[i].head
            if head not in maxden or cand > maxden[head]:
                maxden[head] = cand
                mpred[head] = i
    if sink not in maxden or maxden[sink] <= 0:
        return None
    seed: list[int] = []
    node = sink
    while node != source:
        i = mpred[node]
        seed.append(i)
        node = inst.edges[i].tail
    hi = sum(nums[i] for i in seed) / maxden[sink]
    lo = Fraction(0)

    def concrete_sign(lam: Fraction) -> int:
        """Sign test at a breakpoint; also detects lam as the exact optimum."""
        got = _dag_min_value_path(
            inst,
            order,
            out_edges,
            [nums[i] - lam * dens[i] for i in range(len(nums))],
            dens,
            source,
            sink,
        )
        assert got is not None  # sink reachable
        value, d, _ = got
        if value < 0:
            return 1  # some qualifying path beats lam: optimum is below lam
        if value > 0:
            return -1
        return 0 if d > 0 else -1  # zero value counts only with positive den

    if concrete_sign(hi) == 0:
        lam_star = hi
    else:
        # symbolic labels a + b*lam, decided on the open interval (lo, hi)
        label: dict[int, tuple[Fraction, Fraction]] = {source: (Fraction(0), Fraction(0))}
        lam_star = None
        for v in order:
            if v not in label:
                continue
            a0, b0 = label[v]
            for i in out_edges[v]:
                cand = (a0 + nums[i], b0 - dens[i])
                head = inst.edges[i].head
                cur = label.get(head)
                if cur is None:
                    label[head] = cand
                    continue
                da, db = cand[0] - cur[0], cand[1] - cur[1]
                if da == 0 and db == 0:
                    continue
                if db != 0:
                    crossing = -da / db
                    if lo < crossing < hi:
                        sign = concrete_sign(crossing)
                        if sign == 0:
                            lam_star = crossing
                            break
                        if sign > 0:
                            hi = crossing
                        else:
                            lo = crossing
                mid = (lo + hi) / 2
                if cand[0] + cand[1] * mid < cur[0] + cur[1] * mid:
                    label[head] = cand
            if lam_star is not None:
                break
        if lam_star is None:
            a, b = label[sink]
            if b == 0:
                raise InternalSolverError("sink label lost its parametric slope")
            lam_star = -a / b
            if not lo <= lam_star <= hi:
                raise InternalSolverError("parametric root escaped its bracket")

    got = _dag_min_value_path(
        inst,
        order,
        out_edges,
        [nums[i] - lam_star * dens[i] for i in range(len(nums))],
        dens,
        source,
        sink,
    )
    assert got is not None
    value, d, path = got
    if value != 0 or d <= 0:
        raise InternalSolverError("optimal-ratio path failed its zero-value check")
    nsum = sum(nums[i] for i in path)
    return RatioResult(tuple(path), nsum, d, nsum / d)


# ---------------------------------------------------------------------------
# the multiplicative-weights loop
# ---------------------------------------------------------------------------

Oracle = Callable[[Sequence[float]], RatioResult | None]


def _reduced_for_packing(inst: Instance) -> tuple[Instance, list[int], bool]:
    """Drop zero-capacity edges, and fee-carrying edges when the budget is 0.

    Returns (reduced instance, original index per kept edge, budget row kept).
    """
    budget_row = inst.budget > 0
    keep = [
        i
        for i, e in enumerate(inst.edges)
        if e.capacity > 0 and (budget_row or e.fee == 0)
    ]
    reduced = Instance(
        node_count=inst.node_count,
        edges=tuple(inst.edges[i] for i in keep),
        source=inst.source,
        sink=inst.sink,
        budget=inst.budget,
        node_origin=inst.node_origin,
    )
    return reduced, keep, budget_row


def _gk_loop(
    reduced: Instance,
    budget_row: bool,
    eps_prime: float,
    oracle: Oracle,
    oracle_edge_count: int,
    iteration_cap: int | None,
) -> tuple[dict[tuple[int, ...], Fraction], int, float]:
    """Run the width-controlled packing loop.

    Returns (routed columns, iterations, final down-scale factor).
    ``oracle`` sees numerator lengths indexed like ``reduced`` edges plus
    possibly a trailing return arc (always zero there).  Oracle calls are
    lazy: the previously returned column keeps being routed while its ratio
    stays within (1 + eps_prime) of the last oracle answer, which the
    monotone growth of all lengths makes sound.
    """
    m = reduced.edge_count
    rows = m + (1 if budget_row else 0)
    budget = reduced.budget
    capacities = [e.capacity for e in reduced.edges]
    fees = [e.fee for e in reduced.edges]
    if m == 0:
        return {}, 0, 1.0  # no edges means no columns: the zero flow stands

    # start value delta and the final scale factor are handled in log space:
    # delta underflows a float for small accuracies, but only length ratios
    # ever reach the oracle
    log_delta = math.log1p(eps_prime) - math.log((1.0 + eps_prime) * rows) / eps_prime
    scale = (math.log1p(eps_prime) - log_delta) / math.log1p(eps_prime)
    if iteration_cap is None:
        iteration_cap = 4 * rows * (int(scale) + 1) + 64

    dual = DualState(
        lengths=[1.0 / u for u in capacities],
        budget_length=(1.0 / budget) if budget_row else None,
        log_shift=log_delta,
    )

    def numerators() -> list[float]:
        mu = dual.budget_length or 0.0
        nums = [y + b * mu for y, b in zip(dual.lengths, fees)]
        nums.extend([0.0] * (oracle_edge_count - m))
        return nums

    def column_ratio(edges: tuple[int, ...], nums: Sequence[float]) -> float:
        den = 0.0
        num = 0.0
        for i in edges:
            num += nums[i]
            if i < m:
                den -= reduced.edges[i].cost
        return num / den if den > 0 else math.inf

    routed: dict[tuple[int, ...], Fraction] = {}
    iterations = 0
    current: tuple[int, ...] | None = None
    threshold = math.inf
    while dual.log_objective(capacities, budget) < 0.0:
        iterations += 1
        if iterations > iteration_cap:
            raise InternalSolverError("packing loop exceeded its iteration cap")
        if max(dual.lengths) > 1e120:
            # thresholds are length ratios, so they rescale with the lengths
            threshold /= dual.renormalize(capacities, budget)
        nums = numerators()
        if current is None or column_ratio(current, nums) > threshold:
            answer = oracle(nums)
            if answer is None:
                break  # no qualifying column at all: optimum is the zero flow
            current = tuple(answer.edges)
            threshold = (1.0 + eps_prime) * column_ratio(current, nums)
        cycle_fee = sum(fees[i] for i in current if i < m)
        amount = min(capacities[i] for i in current if i < m)
        if budget_row and cycle_fee > 0:
            amount = min(amount, budget / cycle_fee)
        routed[current] = routed.get(current, Fraction(0)) + Fraction(amount)
        for i in current:
            if i < m:
                dual.lengths[i] *= 1.0 + eps_prime * amount / capacities[i]
        if budget_row and cycle_fee > 0:
            assert dual.budget_length is not None
            dual.budget_length *= 1.0 + eps_prime * amount * cycle_fee / budget
    return routed, iterations, scale


def _assemble_flow(
    inst: Instance,
    reduced: Instance,
    keep: Sequence[int],
    routed: dict[tuple[int, ...], Fraction],
    scale: float,
    budget_row: bool,
) -> Flow:
    """Exactly accumulate routed columns, scale down, and repair feasibility.

    Every float routing amount converts exactly to a rational, and each
    column's edges receive the same amount, so conservation holds exactly.
    The final division by the worst constraint-violation ratio is the exact
    counterpart of the framework's log-scale correction plus float slop.
    """
    m = reduced.edge_count
    values = [Fraction(0)] * m
    for edges, amount in routed.items():
        for i in edges:
            if i < m:
                values[i] += amount
    factor = Fraction(scale)
    if factor > 0:
        values = [v / factor for v in values]
    worst = Fraction(1)
    for v, e in zip(values, reduced.edges):
        if e.capacity > 0:
            ratio = v / e.capacity
            if ratio > worst:
                worst = ratio
    fee_total = sum(
        (Fraction(e.fee) * v for e, v in zip(reduced.edges, values)), Fraction(0)
    )
    if budget_row and reduced.budget > 0:
        ratio = fee_total / reduced.budget
        if ratio > worst:
            worst = ratio
    if worst > 1:
        values = [v / worst for v in values]

    full = [Fraction(0)] * inst.edge_count
    for i, v in zip(keep, values):
        full[i] = v
    return Flow.from_values(inst, full)


def solve_gk(
    inst: Instance,
    eps: float,
    *,
    iteration_cap: int | None = None,
) -> Solution:
    """(1 - eps)-approximate solver for general graphs.

    The internal accuracy is eps/4: the loop's own loss, the lazy
    re-pricing, and the bisection oracle's (1 + eps/4) slack together stay
    within the advertised factor.  The budget-zero case drops fee-carrying
    edges and the budget row entirely.
    """
    if not 0 < eps < 1:
        raise ValueError(f"epsilon {eps} outside (0, 1)")
    reduced, keep, budget_row = _reduced_for_packing(inst)
    eps_prime = eps / 4.0
    circ = circulation_form(reduced)
    den = [float(-e.cost) for e in circ.edges]  # zero on the closure arcs

    def oracle(nums: Sequence[float]) -> RatioResult | None:
        return min_ratio_cycle(circ, nums, den, rel_tol=eps_prime)

    routed, iterations, scale = _gk_loop(
        reduced, budget_row, eps_prime, oracle, circ.edge_count, iteration_cap
    )
    flow = _assemble_flow(inst, reduced, keep, routed, scale, budget_row)
    return Solution(
        flow=flow, objective=flow.cost, algorithm="gk", iterations=iterations
    )


def solve_gk_acyclic(
    inst: Instance,
    eps: float,
    *,
    iteration_cap: int | None = None,
    oracle_audit: Callable[
        [Instance, Sequence[float], Sequence[float], int, int, RatioResult | None], None
    ]
    | None = None,
) -> Solution:
    """(1 - eps)-approximate solver for acyclic graphs.

    Every circulation cycle is a simple path between source and sink (in
    either orientation) closed by the matching zero-cost closure arc, so
    the oracle is the exact parametric path search on the original graph,
    run in both directions; its exactness lets the internal accuracy relax
    to eps/3.  ``oracle_audit``, when given, is invoked after every oracle
    call with (graph, num, den, source, sink, result) for shadow
    verification.
    """
    if not 0 < eps < 1:
        raise ValueError(f"epsilon {eps} outside (0, 1)")
    try:
        topological_order(inst)
    except CyclicGraphError:
        raise CyclicGraphError(
            "graph contains a directed cycle; use solve_gk instead"
        ) from None
    reduced, keep, budget_row = _reduced_for_packing(inst)
    eps_prime = eps / 3.0
    den = [float(-e.cost) for e in reduced.edges]

    def directed_best(nums: Sequence[float], src: int, dst: int) -> RatioResult | None:
        result = min_ratio_path_dag(reduced, nums[: reduced.edge_count], den, src, dst)
        if oracle_audit is not None:
            oracle_audit(reduced, nums[: reduced.edge_count], den, src, dst, result)
        return result

    def oracle(nums: Sequence[float]) -> RatioResult | None:
        forward = directed_best(nums, reduced.source, reduced.sink)
        backward = directed_best(nums, reduced.sink, reduced.source)
        result = forward
        if backward is not None and (result is None or backward.ratio < result.ratio):
            result = backward
        if result is None:
            return None
        return RatioResult(
            result.edges,
            float(result.numerator),
            float(result.denominator),
            float(result.ratio),
        )

    routed, iterations, scale = _gk_loop(
        reduced, budget_row, eps_prime, oracle, reduced.edge_count, iteration_cap
    )
    flow = _assemble_flow(inst, reduced, keep, routed, scale, budget_row)
    return Solution(
        flow=flow, objective=flow.cost, algorithm="gk-acyclic", iterations=iterations
    )


def rescale_bicriteria(flow: Flow, eps: float | Fraction) -> Flow:
    """Divide a budget-overrunning flow by (1 + eps).

    Turns a solution overshooting the budget by at most a (1 + eps) factor
    into a feasible one; costs and fees scale linearly and exactly.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon {eps} outside (0, 1)")
    return flow.scaled(Fraction(1) / (1 + eps))
