"""Scenario loading, validation completeness, and canonical serialization."""

import json

import pytest

from conftest import one_domain_doc, scen
from xdmev.errors import ParseError, ValidationError
from xdmev.fixedpoint import Amount
from xdmev.scenario import (
    BUNDLED_NAMES,
    bundled_path,
    load_bundled,
    load_scenario,
    loads,
    serialize_scenario,
)
from xdmev.venues import ConstantProductPool, StylizedMidpointPool


class TestBundledScenarios:
    def test_all_bundled_load(self):
        for name in BUNDLED_NAMES:
            scenario = load_bundled(name)
            assert scenario.schema_version == 1

    def test_two_amm_shape(self, bundled):
        scenario = bundled("section3_2amm")
        assert len(scenario.domains) == 2
        stylized = [p for p in scenario.pools if isinstance(p, StylizedMidpointPool)]
        assert len(stylized) == 2
        assert all(p.price == Amount("20") for p in stylized)
        assert len(scenario.mempool) == 1
        assert len(scenario.stylized_arbs) == 1
        assert scenario.stylized_arbs[0].declared_profit == Amount("1")

    def test_four_amm_shape(self, bundled):
        scenario = bundled("appendix_b_4amm")
        assert len(scenario.domains) == 2
        assert len(scenario.pools) == 4
        assert sorted(tx.id for tx in scenario.mempool) == [
            "tx1_i", "tx1_j", "tx2_i", "tx2_j", "tx3_i", "tx4_i", "tx5_i"
        ]
        profits = sorted(str(o.declared_profit) for o in scenario.opportunities)
        assert profits == ["0.3", "0.3", "1"]

    def test_cp_scenario_shape(self, bundled):
        scenario = bundled("cp_arbitrage_small")
        pools = {p.id: p for p in scenario.pools}
        assert isinstance(pools["pool_a"], ConstantProductPool)
        assert pools["pool_a"].reserve_y == Amount("2000")
        assert pools["pool_b"].reserve_y == Amount("3000")

    def test_round_trip_is_byte_stable(self):
        for name in BUNDLED_NAMES:
            raw = bundled_path(name).read_text(encoding="utf-8")
            assert serialize_scenario(loads(raw)) == raw, name

    def test_load_scenario_accepts_text_and_path(self):
        path = bundled_path("section3_2amm")
        from_path = load_scenario(str(path))
        from_text = load_scenario(path.read_text(encoding="utf-8"))
        assert serialize_scenario(from_path) == serialize_scenario(from_text)


class TestInitialState:
    def test_no_balances_reads_zero(self):
        scenario = scen(one_domain_doc())
        state = scenario.initial_state()
        assert state.balance("d0", "P", "GLD") == Amount(0)
        assert state.consumed == frozenset()

    def test_bridge_example_holdings(self, bundled):
        state = bundled("figure1_bridge").initial_state()
        assert state.balance("ethereum", "P", "MATIC") == Amount("238172.18")

    def test_round_trip_state_identical(self, bundled):
        scenario = bundled("figure2_3domain")
        reloaded = loads(serialize_scenario(scenario))
        assert scenario.initial_state() == reloaded.initial_state()


class TestValidation:
    def test_reciprocity_violation_names_the_pair(self):
        doc = one_domain_doc()
        doc["prices"] = [
            {"from": "AAA", "to": "GLD", "rate": "2/1"},
            {"from": "GLD", "to": "AAA", "rate": "6/10"},
        ]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "reciprocity" in str(err.value)
        assert "GLD" in str(err.value) and "AAA" in str(err.value)

    def test_dangling_pool_reference(self):
        doc = one_domain_doc()
        doc["actions"] = [
            {"id": "a", "player": "P", "kind": "Swap", "pool": "ghost",
             "direction": "x_to_y", "amount": {"fixed": "1"}},
        ]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert err.value.field == "actions[0].pool"
        assert "ghost" in str(err.value)

    def test_duplicate_action_ids_across_mempool_and_actions(self):
        doc = one_domain_doc()
        doc["pools"] = [{"id": "m", "type": "stylized_midpoint", "domain": "d0",
                         "asset_x": "AAA", "asset_y": "GLD", "price": "10"}]
        doc["mempool"] = [{"id": "dup", "domain": "d0",
                           "effect": {"type": "price_push", "pool": "m", "to_price": "12"}}]
        doc["actions"] = [{"id": "dup", "player": "P", "kind": "Swap", "pool": "m",
                           "direction": "x_to_y", "amount": {"fixed": "1"}}]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "duplicate" in str(err.value)

    def test_unknown_schema_version_rejected(self):
        doc = one_domain_doc()
        doc["schema_version"] = 2
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert err.value.field == "schema_version"

    def test_negative_balance_rejected(self):
        doc = one_domain_doc()
        doc["players"][0]["balances"] = [
            {"domain": "d0", "asset": "GLD", "amount": "-1"}
        ]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "balances" in err.value.field

    def test_amounts_must_be_strings(self):
        doc = one_domain_doc()
        doc["players"][0]["balances"] = [{"domain": "d0", "asset": "GLD", "amount": 5}]
        with pytest.raises(ValidationError):
            scen(doc)

    def test_capability_gate_on_actions(self):
        doc = one_domain_doc()
        doc["players"][0]["capabilities"] = [{"domain": "d0", "kinds": ["Swap"]}]
        doc["pools"] = [
            {"id": "m1", "type": "stylized_midpoint", "domain": "d0",
             "asset_x": "AAA", "asset_y": "GLD", "price": "10"},
            {"id": "m2", "type": "stylized_midpoint", "domain": "d0",
             "asset_x": "AAA", "asset_y": "GLD", "price": "12"},
        ]
        doc["stylized_arbs"] = [
            {"id": "spec", "pool_a": "m1", "pool_b": "m2", "declared_profit": "1",
             "profit_asset": "GLD", "profit_domain": "d0"},
        ]
        doc["actions"] = [{"id": "arb", "player": "P", "kind": "StylizedArb", "arb": "spec"}]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "capability" in str(err.value)

    def test_opportunity_legs_must_exist_in_mempool(self):
        doc = one_domain_doc()
        doc["pools"] = [{"id": "m", "type": "stylized_midpoint", "domain": "d0",
                         "asset_x": "AAA", "asset_y": "GLD", "price": "10"}]
        doc["opportunities"] = [
            {"id": "op", "beneficiary": "P", "declared_profit": "1",
             "profit_asset": "GLD", "profit_domain": "d0", "legs": ["l1", "l2"]},
        ]
        doc["mempool"] = [
            {"id": "l1", "domain": "d0",
             "effect": {"type": "arb_leg", "pool": "m", "from_price": "10",
                        "to_price": "11", "opportunity": "op"}},
        ]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "l2" in str(err.value)

    def test_parse_error_reports_position(self):
        with pytest.raises(ParseError) as err:
            loads("{\n  \"schema_version\": 1,\n  oops\n}")
        assert "line 3" in str(err.value)

    def test_unknown_top_level_field(self):
        doc = one_domain_doc()
        doc["extra"] = []
        with pytest.raises(ValidationError):
            scen(doc)

    def test_interval_bounds_checked(self):
        doc = one_domain_doc()
        doc["pools"] = [{"id": "pool", "type": "constant_product", "domain": "d0",
                         "asset_x": "AAA", "asset_y": "GLD",
                         "reserve_x": "1", "reserve_y": "1", "fee_bps": 0}]
        doc["actions"] = [{"id": "a", "player": "P", "kind": "Swap", "pool": "pool",
                           "direction": "x_to_y", "amount": {"interval": ["5", "5"]}}]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "hi must exceed lo" in str(err.value)

    def test_identifier_charset_enforced(self):
        doc = one_domain_doc()
        doc["assets"].append("bad asset!")
        with pytest.raises(ValidationError):
            scen(doc)

    def test_pending_tx_kind_not_allowed_in_actions(self):
        doc = one_domain_doc()
        doc["actions"] = [{"id": "a", "player": "P", "kind": "ExecutePendingTx"}]
        with pytest.raises(ValidationError) as err:
            scen(doc)
        assert "mempool" in str(err.value)


class TestCanonicalForm:
    def test_serialization_sorts_collections(self):
        doc = one_domain_doc()
        doc["assets"] = ["GLD", "AAA"]
        text = serialize_scenario(scen(doc))
        parsed = json.loads(text)
        assert parsed["assets"] == ["AAA", "GLD"]
        assert text.endswith("\n")

    def test_serialize_load_fixed_point(self):
        scenario = scen(one_domain_doc())
        once = serialize_scenario(scenario)
        twice = serialize_scenario(loads(once))
        assert once == twice
