"""Randomized property suite over generated small scenarios.

Each property runs over at least 200 seeded random scenarios (up to 3
domains, up to 5 actions), so failures reproduce from the seed in the
assertion message.
"""

import json
import random
from fractions import Fraction
from functools import lru_cache

from xdmev.collusion import Verdict, classify_collusion
from xdmev.engine import MevQuery, mev, mev_oracle, replay_witness
from xdmev.fixedpoint import Amount
from xdmev.model import PriceMatrix, convert
from xdmev.scenario import Scenario, loads

SCENARIO_RUNS = 200

PRICES = ("8", "10", "12.5", "20", "25", "40")
PUSH_TARGETS = ("5", "15", "18", "30", "50")
TIP_AMOUNTS = ("0.5", "1", "2.25", "3")
PROFITS = ("0.1", "0.4", "1", "1.5")
RATES = ("1/1", "1/2", "2/1", "3/2", "2/3")


def random_doc(rng: random.Random, cross_domain: bool = True) -> dict:
    n_domains = rng.randint(1, 3) if cross_domain else 2
    domains = [f"d{k}" for k in range(n_domains)]
    natives = {d: f"N{k}" for k, d in enumerate(domains)}
    assets = sorted(set(natives.values()) | {"CASH", "PAIR"})

    pools = []
    pool_domain = {}
    by_domain: dict[str, list[str]] = {d: [] for d in domains}
    for d in domains:
        for p in range(2):
            pid = f"pool_{d}_{p}"
            pools.append(
                {"id": pid, "type": "stylized_midpoint", "domain": d,
                 "asset_x": "PAIR", "asset_y": "CASH", "price": rng.choice(PRICES)}
            )
            pool_domain[pid] = d
            by_domain[d].append(pid)

    mempool, arbs, actions, bridges = [], [], [], []
    for k in range(rng.randint(1, 5)):
        choices = ["push", "transfer", "arb", "arb"]
        if cross_domain and n_domains > 1:
            choices.append("bridge")
        kind = rng.choice(choices)
        if kind == "push":
            pid = rng.choice(list(pool_domain))
            mempool.append(
                {"id": f"tx{k}_push", "domain": pool_domain[pid],
                 "effect": {"type": "price_push", "pool": pid,
                            "to_price": rng.choice(PUSH_TARGETS)}}
            )
        elif kind == "transfer":
            d = rng.choice(domains)
            mempool.append(
                {"id": f"tx{k}_tip", "domain": d,
                 "effect": {"type": "transfer", "from_account": "whale",
                            "to_account": "P", "asset": natives[d],
                            "amount": rng.choice(TIP_AMOUNTS)}}
            )
        elif kind == "arb":
            if cross_domain and n_domains > 1 and rng.random() < 0.5:
                da, db = rng.sample(domains, 2)
                pa, pb = rng.choice(by_domain[da]), rng.choice(by_domain[db])
            else:
                d = rng.choice(domains)
                pa, pb = by_domain[d]
            profit_domain = pool_domain[pa]
            arbs.append(
                {"id": f"spec{k}", "pool_a": pa, "pool_b": pb,
                 "declared_profit": rng.choice(PROFITS),
                 "profit_asset": natives[profit_domain],
                 "profit_domain": profit_domain}
            )
            actions.append(
                {"id": f"act{k}_arb", "player": "P", "kind": "StylizedArb",
                 "arb": f"spec{k}"}
            )
        else:
            da, db = rng.sample(domains, 2)
            bridges.append(
                {"id": f"br{k}", "from_domain": da, "to_domain": db,
                 "from_asset": natives[da], "to_asset": natives[db],
                 "rate": rng.choice(RATES), "flat_fee": rng.choice(("0", "0.1"))}
            )
            actions.append(
                {"id": f"act{k}_bridge", "player": "P", "kind": "Bridge",
                 "bridge": f"br{k}", "amount": {"fixed": rng.choice(("0.5", "1", "2"))}}
            )

    all_kinds = ["Bridge", "ExecutePendingTx", "StylizedArb", "Swap"]
    return {
        "schema_version": 1,
        "domains": [{"id": d, "native_asset": natives[d]} for d in domains],
        "assets": assets,
        "players": [
            {"id": "P",
             "balances": [
                 {"domain": d, "asset": natives[d], "amount": "10"} for d in domains
             ],
             "capabilities": [{"domain": d, "kinds": all_kinds} for d in domains]},
            {"id": "whale",
             "balances": [
                 {"domain": d, "asset": natives[d], "amount": "100"} for d in domains
             ],
             "capabilities": []},
        ],
        "pools": pools,
        "bridges": bridges,
        "mempool": mempool,
        "opportunities": [],
        "stylized_arbs": arbs,
        "actions": actions,
        "prices": [
            {"from": natives[d], "to": natives["d0"], "rate": rng.choice(RATES)}
            for d in domains[1:]
        ],
        "defaults": {
            "player": "P", "base_domain": "d0", "base_asset": natives["d0"],
            "max_sequence_length": 5, "alpha": "0",
            "action_domains": domains, "value_domains": domains,
        },
    }


@lru_cache(maxsize=None)
def build(seed: int, cross_domain: bool = True) -> Scenario:
    return loads(json.dumps(random_doc(random.Random(seed), cross_domain)))


def test_mev_is_never_negative():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        state = scenario.initial_state()
        rng = random.Random(10_000 + seed)
        domain_ids = [d.id for d in scenario.domains]
        acting = rng.sample(domain_ids, rng.randint(1, len(domain_ids)))
        valuing = rng.sample(domain_ids, rng.randint(1, len(domain_ids)))
        result = mev(scenario.space, state, scenario.default_query(
            action_domains=acting, value_domains=valuing))
        assert result.value >= Amount(0), f"seed {seed}: {result.value} < 0"


def test_action_space_monotonicity():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        state = scenario.initial_state()
        domain_ids = [d.id for d in scenario.domains]
        narrow = domain_ids[:1]
        values = []
        for upto in range(1, len(domain_ids) + 1):
            result = mev(scenario.space, state, scenario.default_query(
                action_domains=domain_ids[:upto], value_domains=domain_ids))
            values.append(result.value)
        assert values == sorted(values), f"seed {seed}: {values} not monotone"


def test_separability_without_cross_domain_actions():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed, cross_domain=False)
        state = scenario.initial_state()
        d0, d1 = (d.id for d in scenario.domains)
        joint = mev(scenario.space, state, scenario.default_query(
            action_domains=[d0, d1], value_domains=[d0, d1]))
        solo_sum = Amount(0)
        for d in (d0, d1):
            solo = mev(scenario.space, state, scenario.default_query(
                action_domains=[d], value_domains=[d]))
            solo_sum = solo_sum + solo.value
        assert joint.value == solo_sum, (
            f"seed {seed}: joint {joint.value} != solo sum {solo_sum}"
        )


def test_witness_replay_reproduces_value_exactly():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        state = scenario.initial_state()
        query = scenario.default_query()
        result = mev(scenario.space, state, query)
        replayed = replay_witness(scenario.space, state, query, result.witness)
        assert replayed == result.value, f"seed {seed}: replay {replayed} != {result.value}"


def test_verdict_monotone_in_alpha():
    rank = {Verdict.UNPROFITABLE: 0, Verdict.INDIFFERENT: 1, Verdict.PROFITABLE: 2}
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        domain_ids = tuple(d.id for d in scenario.domains)
        if len(domain_ids) < 2:
            continue
        state = scenario.initial_state()
        ranks = []
        for alpha in (Amount("0"), Amount("0.7"), Amount("3")):
            report = classify_collusion(
                scenario.space, state, "P", domain_ids, alpha,
                scenario.prices, scenario.defaults.base_domain,
                scenario.defaults.base_asset, scenario.defaults.max_sequence_length,
            )
            ranks.append(rank[report.verdict])
        assert ranks == sorted(ranks, reverse=True), f"seed {seed}: {ranks}"


def test_price_reciprocity_round_trip_within_one_unit():
    # expanding conversion first, contracting conversion last: the half-unit
    # quantization of the inner step shrinks instead of amplifying
    rng = random.Random(424242)
    one_unit = Amount.from_units(1)
    for run in range(SCENARIO_RUNS):
        rate = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        prices = PriceMatrix({("A", "B"): rate})
        start, mid = ("A", "B") if rate >= 1 else ("B", "A")
        x = Amount.from_units(rng.randint(0, 10**24))
        back = convert(prices, mid, start, convert(prices, start, mid, x))
        assert abs(back - x) <= one_unit, f"run {run}: rate {rate}, x {x}, back {back}"


def test_engine_agrees_with_oracle_on_random_discrete_scenarios():
    for seed in range(100):
        scenario = build(seed)
        state = scenario.initial_state()
        query = scenario.default_query()
        fast = mev(scenario.space, state, query)
        slow = mev_oracle(scenario.space, state, query)
        assert fast.value == slow.value, f"seed {seed}"
        assert fast.witness == slow.witness, f"seed {seed}"


def test_available_actions_are_individually_performable():
    # availability soundness: everything returned extends to a valid
    # single-action sequence, with the max affordable amount if parametric
    from xdmev.actions import available_actions, max_feasible_amount, validate_sequence

    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        state = scenario.initial_state()
        domains = frozenset(d.id for d in scenario.domains)
        for action in available_actions(scenario.space, "P", domains, state):
            amount = (
                max_feasible_amount(state, "P", action) if action.parametric else None
            )
            violation = validate_sequence(
                scenario.space, "P", domains, state, [(action.id, amount)]
            )
            assert violation is None, f"seed {seed}: {action.id}: {violation}"


def test_breakeven_alpha_is_never_negative():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        domain_ids = tuple(d.id for d in scenario.domains)
        if len(domain_ids) < 2:
            continue
        report = classify_collusion(
            scenario.space, scenario.initial_state(), "P", domain_ids, Amount("0"),
            scenario.prices, scenario.defaults.base_domain,
            scenario.defaults.base_asset, scenario.defaults.max_sequence_length,
        )
        assert report.breakeven >= Amount(0), f"seed {seed}: {report.breakeven}"


def test_rate_scaling_preserves_single_domain_witness():
    for seed in range(SCENARIO_RUNS):
        scenario = build(seed)
        domain_ids = [d.id for d in scenario.domains]
        if len(domain_ids) < 2:
            continue
        target = domain_ids[-1]
        state = scenario.initial_state()
        base_query = scenario.default_query(
            action_domains=domain_ids, value_domains=[target])
        plain = mev(scenario.space, state, base_query)
        scaled_query = MevQuery(
            player=base_query.player,
            action_domains=base_query.action_domains,
            value_domains=base_query.value_domains,
            base_domain=base_query.base_domain,
            base_asset=base_query.base_asset,
            prices=scenario.prices.scaled(Fraction(7, 2)),
            max_sequence_length=base_query.max_sequence_length,
        )
        scaled = mev(scenario.space, state, scaled_query)
        assert plain.witness == scaled.witness, f"seed {seed}"
