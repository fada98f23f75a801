"""Extractable-value definitions and the exhaustive sequence search.

``mev`` maximizes the priced sum of per-domain balance changes over every
valid action sequence (distinct ids, bounded length), optimizing
continuous trade sizes by golden-section at the leaves. ``mev_oracle`` is
the independent cross-check: plain enumeration with amounts discretized
on an even grid, sharing nothing with the search but the state semantics.

Everything here is a pure function over immutable values; the only
mutable machinery is a guarded candidate counter, so concurrent queries
need no coordination.
"""

from __future__ import annotations

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .actions import (
    Action,
    ActionSpaceSpec,
    SequenceStep,
    apply_action,
    apply_sequence,
    max_feasible_amount,
)
from .errors import ExplosionGuard, NoOpportunity, UnknownId, XdmevError
from .fixedpoint import ZERO, Amount, div_half_even
from .model import PriceMatrix, WorldState, balance_of, convert
from .venues import ConstantProductPool
from . import _kernels

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_MAX_SEQUENCE_LENGTH = 8
DEFAULT_CANDIDATE_CAP = 10_000_000


@dataclass(frozen=True)
class MevQuery:
    """What to maximize: who acts where, where value is measured, in what."""

    player: str
    action_domains: frozenset[str]
    value_domains: tuple[str, ...]
    base_domain: str
    base_asset: str
    prices: PriceMatrix
    max_sequence_length: int = DEFAULT_MAX_SEQUENCE_LENGTH
    candidate_cap: int = DEFAULT_CANDIDATE_CAP


@dataclass(frozen=True)
class MevResult:
    value: Amount
    witness: tuple[SequenceStep, ...]
    final_state: WorldState
    explored: int
    method: str


class _Counter:
    """Thread-safe candidate counter; trips ExplosionGuard past the cap."""

    __slots__ = ("count", "cap", "_lock")

    def __init__(self, cap: int):
        self.count = 0
        self.cap = cap
        self._lock = threading.Lock()

    def bump(self) -> None:
        with self._lock:
            self.count += 1
            if self.count > self.cap:
                raise ExplosionGuard(
                    f"candidate sequences exceeded the cap of {self.cap}"
                )


_Candidate = tuple[Amount, tuple[SequenceStep, ...], WorldState]


def _candidate_better(a: _Candidate, b: _Candidate) -> bool:
    """Strict total preference: value desc, length asc, id list asc, amounts asc."""
    if a[0] != b[0]:
        return a[0] > b[0]
    if len(a[1]) != len(b[1]):
        return len(a[1]) < len(b[1])
    ids_a = tuple(step[0] for step in a[1])
    ids_b = tuple(step[0] for step in b[1])
    if ids_a != ids_b:
        return ids_a < ids_b
    amounts_a = tuple(step[1].units if step[1] is not None else -1 for step in a[1])
    amounts_b = tuple(step[1].units if step[1] is not None else -1 for step in b[1])
    return amounts_a < amounts_b


def _merge(a: Optional[_Candidate], b: Optional[_Candidate]) -> Optional[_Candidate]:
    if a is None:
        return b
    if b is None:
        return a
    return b if _candidate_better(b, a) else a


def priced_balance_delta(query: MevQuery, initial: WorldState, final: WorldState) -> Amount:
    """Sum over value domains of the native-asset delta priced into the base."""
    registry = initial.registry
    total = ZERO
    for domain in query.value_domains:
        asset = registry.native_asset(domain)
        delta = final.balance(domain, query.player, asset) - initial.balance(
            domain, query.player, asset
        )
        if delta.units:
            total = total + convert(query.prices, asset, query.base_asset, delta)
    return total


def extractable_value(
    space: ActionSpaceSpec,
    state: WorldState,
    player: str,
    seq: Sequence[SequenceStep],
    value_domain: str,
    asset: str,
) -> Amount:
    """Balance change of ``asset`` in ``value_domain`` after applying ``seq``.

    May be negative; sequence-application errors propagate with their index.
    """
    final = apply_sequence(space, state, player, seq)
    return balance_of(final, value_domain, player, asset) - balance_of(
        state, value_domain, player, asset
    )


def _validate_query(state: WorldState, query: MevQuery) -> None:
    registry = state.registry
    registry.require_player(query.player)
    if not query.action_domains:
        raise UnknownId("action_domains must be nonempty")
    if not query.value_domains:
        raise UnknownId("value_domains must be nonempty")
    if len(set(query.value_domains)) != len(query.value_domains):
        raise UnknownId("value_domains must not repeat")
    for domain in query.action_domains:
        registry.require_domain(domain)
    registry.require_domain(query.base_domain)
    registry.require_asset(query.base_asset)
    for domain in query.value_domains:
        registry.require_domain(domain)
        # raises MissingRate when a native asset cannot be priced to base
        query.prices.rate(registry.native_asset(domain), query.base_asset)
    if query.max_sequence_length < 0:
        raise XdmevError("max_sequence_length must be >= 0")


def _worker_count() -> int:
    env = os.environ.get("XDMEV_THREADS", "").strip()
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise XdmevError(f"XDMEV_THREADS must be a positive integer, got {env!r}") from None
        if workers < 1:
            raise XdmevError("XDMEV_THREADS must be a positive integer")
        return workers
    return os.cpu_count() or 1


# -- exhaustive search -------------------------------------------------------


def _evaluate_shape(
    initial: WorldState,
    query: MevQuery,
    shape: tuple[Action, ...],
) -> Optional[_Candidate]:
    """Best candidate realizing this exact ordered action list, or None.

    Discrete slots apply directly; parametric slots run a golden-section
    over the affordable part of their interval, each probe evaluating the
    optimized suffix. Probe positions travel as floats, but every probe is
    applied and valued in exact fixed point, so the returned candidate is
    exactly replayable.
    """
    player = query.player

    def go(idx: int, state: WorldState) -> Optional[_Candidate]:
        if idx == len(shape):
            return priced_balance_delta(query, initial, state), (), state
        action = shape[idx]
        if not action.parametric:
            try:
                nxt = apply_action(state, player, action, None)
            except XdmevError:
                return None
            rest = go(idx + 1, nxt)
            if rest is None:
                return None
            value, steps, final = rest
            return value, ((action.id, None),) + steps, final

        interval = action.interval
        lo_u = max(interval.lo.units, 1)
        hi_u = max_feasible_amount(state, player, action).units
        if hi_u < lo_u:
            return None

        memo: dict[int, Optional[_Candidate]] = {}

        def eval_units(units: int) -> Optional[_Candidate]:
            cached = memo.get(units, False)
            if cached is not False:
                return cached
            amount = Amount.from_units(units)
            try:
                nxt = apply_action(state, player, action, amount)
            except XdmevError:
                memo[units] = None
                return None
            rest = go(idx + 1, nxt)
            if rest is None:
                memo[units] = None
                return None
            value, steps, final = rest
            out = (value, ((action.id, amount),) + steps, final)
            memo[units] = out
            return out

        best: Optional[_Candidate] = None

        def consider(units: int) -> Optional[int]:
            nonlocal best
            res = eval_units(units)
            if res is None:
                return None
            if best is None or _candidate_better(res, best):
                best = res
            return res[0].units

        def clamp(x: float) -> int:
            return min(max(int(round(x)), lo_u), hi_u)

        consider(lo_u)
        consider(hi_u)
        if hi_u - lo_u <= 1:
            return best

        lo_f, hi_f = float(lo_u), float(hi_u)
        tol = max((hi_f - lo_f) * 1e-12, 1.0)
        c = hi_f - (hi_f - lo_f) * _INV_PHI
        d = lo_f + (hi_f - lo_f) * _INV_PHI
        fc = consider(clamp(c))
        fd = consider(clamp(d))
        while (hi_f - lo_f) > tol:
            # None scores as -inf: the probe was an invalid application
            left = fc is not None and (fd is None or fc > fd)
            if left:
                hi_f, d, fd = d, c, fc
                c = hi_f - (hi_f - lo_f) * _INV_PHI
                fc = consider(clamp(c))
            else:
                lo_f, c, fc = c, d, fd
                d = lo_f + (hi_f - lo_f) * _INV_PHI
                fd = consider(clamp(d))
        return best

    return go(0, initial)


def mev(space: ActionSpaceSpec, state: WorldState, query: MevQuery) -> MevResult:
    """Maximize the priced balance change over all valid sequences.

    Ties break by shortest sequence, then lexicographic action ids, then
    smallest amounts, so results are stable across runs and worker counts.
    """
    _validate_query(state, query)
    actions = tuple(
        a for a in space.for_player(query.player) if a.domains <= query.action_domains
    )
    counter = _Counter(query.candidate_cap)
    counter.bump()  # the empty sequence
    empty: _Candidate = (ZERO, (), state)
    best = empty

    if actions and query.max_sequence_length > 0:
        def search_branch(first: Action) -> Optional[_Candidate]:
            branch_best: Optional[_Candidate] = None

            def recurse(shape: tuple[Action, ...], used: frozenset[str], depth: int):
                nonlocal branch_best
                counter.bump()
                res = _evaluate_shape(state, query, shape)
                if res is None:
                    return
                branch_best = _merge(branch_best, res)
                if depth >= query.max_sequence_length:
                    return
                for nxt in actions:
                    if nxt.id not in used:
                        recurse(shape + (nxt,), used | {nxt.id}, depth + 1)

            recurse((first,), frozenset({first.id}), 1)
            return branch_best

        workers = min(_worker_count(), len(actions))
        if workers <= 1:
            branch_results = [search_branch(a) for a in actions]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                branch_results = list(pool.map(search_branch, actions))
        for candidate in branch_results:
            best = _merge(best, candidate)

    return MevResult(
        value=best[0],
        witness=best[1],
        final_state=best[2],
        explored=counter.count,
        method="exhaustive",
    )


def mev_cross_two(
    space: ActionSpaceSpec,
    state: WorldState,
    player: str,
    domain_i: str,
    domain_j: str,
    prices: PriceMatrix,
    max_len: int = DEFAULT_MAX_SEQUENCE_LENGTH,
) -> MevResult:
    """Two-domain convenience wrapper: act and value in {i, j}, base = i's asset."""
    registry = state.registry
    query = MevQuery(
        player=player,
        action_domains=frozenset({domain_i, domain_j}),
        value_domains=(domain_i, domain_j),
        base_domain=domain_i,
        base_asset=registry.native_asset(domain_i),
        prices=prices,
        max_sequence_length=max_len,
    )
    return mev(space, state, query)


# -- independent oracle -------------------------------------------------------


def grid_amounts(interval, points: int) -> tuple[Amount, ...]:
    """Evenly spaced amounts over [lo, hi], half-even to 18 digits, deduplicated."""
    if points < 2:
        raise XdmevError("grid needs at least 2 points")
    lo, hi = interval.lo.units, interval.hi.units
    steps = points - 1
    out: list[Amount] = []
    prev: Optional[int] = None
    for k in range(points):
        units = div_half_even(lo * (steps - k) + hi * k, steps)
        if units != prev:
            out.append(Amount.from_units(units))
            prev = units
    return tuple(out)


def mev_oracle(
    space: ActionSpaceSpec,
    state: WorldState,
    query: MevQuery,
    grid_points: int = 101,
) -> MevResult:
    """Brute-force reference: enumerate ordered subsets, amounts on a grid.

    Deliberately shares no search machinery with ``mev``; agreement between
    the two is the engine's correctness check.
    """
    _validate_query(state, query)
    actions = tuple(
        a for a in space.for_player(query.player) if a.domains <= query.action_domains
    )
    amount_choices: dict[str, tuple[Optional[Amount], ...]] = {}
    for action in actions:
        if action.parametric:
            amount_choices[action.id] = grid_amounts(action.interval, grid_points)
        else:
            amount_choices[action.id] = (None,)

    counter = _Counter(query.candidate_cap)
    counter.bump()
    best: _Candidate = (ZERO, (), state)

    def recurse(
        current: WorldState,
        steps: tuple[SequenceStep, ...],
        used: frozenset[str],
        depth: int,
    ):
        nonlocal best
        if depth >= query.max_sequence_length:
            return
        for action in actions:
            if action.id in used:
                continue
            for amount in amount_choices[action.id]:
                counter.bump()
                try:
                    nxt = apply_action(current, query.player, action, amount)
                except XdmevError:
                    continue
                value = priced_balance_delta(query, state, nxt)
                candidate = (value, steps + ((action.id, amount),), nxt)
                if _candidate_better(candidate, best):
                    best = candidate
                recurse(nxt, candidate[1], used | {action.id}, depth + 1)

    recurse(state, (), frozenset(), 0)
    return MevResult(
        value=best[0],
        witness=best[1],
        final_state=best[2],
        explored=counter.count,
        method="oracle",
    )


def replay_witness(
    space: ActionSpaceSpec, state: WorldState, query: MevQuery, witness
) -> Amount:
    """Re-apply a witness and re-price it; must reproduce MevResult.value."""
    final = apply_sequence(space, state, query.player, witness)
    return priced_balance_delta(query, state, final)


# -- reachable states ----------------------------------------------------------


def reachable_states(
    space: ActionSpaceSpec,
    state: WorldState,
    player: str,
    domains: frozenset[str] | set[str],
    max_len: int,
    grid_points: int = 5,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> frozenset[WorldState]:
    """Distinct states reachable by valid sequences of length <= max_len.

    Parametric amounts are sampled on the examination grid; the initial
    state (empty sequence) is always included.
    """
    if max_len < 0:
        raise XdmevError("max_len must be >= 0")
    state.registry.require_player(player)
    domains = frozenset(state.registry.require_domain(d) for d in domains)
    actions = tuple(
        a for a in space.for_player(player) if a.domains <= domains
    )
    counter = _Counter(candidate_cap)
    states: set[WorldState] = {state}

    def recurse(current: WorldState, used: frozenset[str], depth: int):
        if depth >= max_len:
            return
        for action in actions:
            if action.id in used:
                continue
            if action.parametric:
                choices: tuple[Optional[Amount], ...] = grid_amounts(
                    action.interval, grid_points
                )
            else:
                choices = (None,)
            for amount in choices:
                counter.bump()
                try:
                    nxt = apply_action(current, player, action, amount)
                except XdmevError:
                    continue
                states.add(nxt)
                recurse(nxt, used | {action.id}, depth + 1)

    recurse(state, frozenset(), 0)
    return frozenset(states)


# -- constant-product arbitrage -------------------------------------------------


class CpArbResult(NamedTuple):
    amount: Amount
    profit: Amount
    buy_pool: str
    sell_pool: str
    input_asset: str


def optimal_cp_arbitrage(
    pool_a: ConstantProductPool, pool_b: ConstantProductPool
) -> CpArbResult:
    """Input size maximizing buy-cheap/sell-dear profit across two pools.

    Zero-fee pairs use the closed form (integer square root, exact
    neighbor check); anything with fees falls back to golden-section over
    [0, hi], hi being the buy pool's input-side reserve.
    """
    if (pool_b.asset_x, pool_b.asset_y) == (pool_a.asset_x, pool_a.asset_y):
        b_rx, b_ry = pool_b.reserve_x.units, pool_b.reserve_y.units
    elif (pool_b.asset_x, pool_b.asset_y) == (pool_a.asset_y, pool_a.asset_x):
        b_rx, b_ry = pool_b.reserve_y.units, pool_b.reserve_x.units
    else:
        raise XdmevError(
            f"pools {pool_a.id} and {pool_b.id} do not share an asset pair"
        )
    a_rx, a_ry = pool_a.reserve_x.units, pool_a.reserve_y.units

    # prices of X in Y, compared exactly by cross-multiplication
    lhs = a_ry * b_rx
    rhs = b_ry * a_rx
    if lhs == rhs:
        raise NoOpportunity(
            f"pools {pool_a.id} and {pool_b.id} quote the same marginal price"
        )
    if lhs < rhs:
        cheap_rx, cheap_ry, cheap_fee = a_rx, a_ry, pool_a.fee_bps
        dear_rx, dear_ry, dear_fee = b_rx, b_ry, pool_b.fee_bps
        buy_pool, sell_pool = pool_a, pool_b
    else:
        cheap_rx, cheap_ry, cheap_fee = b_rx, b_ry, pool_b.fee_bps
        dear_rx, dear_ry, dear_fee = a_rx, a_ry, pool_a.fee_bps
        buy_pool, sell_pool = pool_b, pool_a

    def profit_at(units: int) -> int:
        return _kernels.round_trip_profit(
            cheap_ry, cheap_rx, dear_rx, dear_ry, cheap_fee, dear_fee, units
        )

    best_amount = 0
    best_profit = 0
    if cheap_fee == 0 and dear_fee == 0:
        k1 = dear_ry * cheap_rx
        k2 = dear_rx * cheap_ry
        k3 = dear_rx + cheap_rx
        center = (math.isqrt(k1 * k2) - k2) // k3
        for units in (center - 1, center, center + 1):
            if units <= 0:
                continue
            profit = profit_at(units)
            if profit > best_profit:
                best_profit = profit
                best_amount = units
    else:
        hi_u = cheap_ry
        lo_f, hi_f = 1.0, float(hi_u)
        tol = max(hi_f * 1e-12, 1.0)

        def consider(units: int) -> int:
            nonlocal best_amount, best_profit
            units = min(max(units, 1), hi_u)
            profit = profit_at(units)
            if profit > best_profit or (
                profit == best_profit and 0 < units < best_amount
            ):
                best_profit = profit
                best_amount = units
            return profit

        consider(1)
        consider(hi_u)
        c = hi_f - (hi_f - lo_f) * _INV_PHI
        d = lo_f + (hi_f - lo_f) * _INV_PHI
        fc = consider(int(round(c)))
        fd = consider(int(round(d)))
        while (hi_f - lo_f) > tol:
            if fc > fd:
                hi_f, d, fd = d, c, fc
                c = hi_f - (hi_f - lo_f) * _INV_PHI
                fc = consider(int(round(c)))
            else:
                lo_f, c, fc = c, d, fd
                d = lo_f + (hi_f - lo_f) * _INV_PHI
                fd = consider(int(round(d)))

    if best_amount <= 0 or best_profit <= 0:
        raise NoOpportunity(
            f"no profitable trade between {pool_a.id} and {pool_b.id}"
        )
    # reserves were normalized to pool_a's orientation, so the trade is
    # always denominated in pool_a's Y-side asset
    input_asset = pool_a.asset_y
    return CpArbResult(
        amount=Amount.from_units(best_amount),
        profit=Amount.from_units(best_profit),
        buy_pool=buy_pool.id,
        sell_pool=sell_pool.id,
        input_asset=input_asset,
    )
