"""CLI surface: flags, reports, exit codes, and output determinism."""

import json
import os
import subprocess
import sys

import pytest

from conftest import one_domain_doc
from xdmev import cli
from xdmev.errors import ExplosionGuard


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMevCommand:
    def test_two_amm_joint_query(self, capsys):
        code, out, _ = run_cli(
            capsys, "mev", "--scenario", "section3_2amm",
            "--action-domains", "i,j", "--value-domains", "i,j",
        )
        assert code == 0
        assert "value: 1 ETH" in out
        assert "tx_buy_eth" in out and "arb_uni_toro" in out

    def test_two_amm_solo_query_is_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "mev", "--scenario", "section3_2amm",
            "--action-domains", "i", "--value-domains", "i",
        )
        assert code == 0
        assert "value: 0 ETH" in out

    def test_foreign_actions_cannot_move_home_value(self, capsys):
        code, out, _ = run_cli(
            capsys, "mev", "--scenario", "separable_pair",
            "--action-domains", "d2", "--value-domains", "d1",
        )
        assert code == 0
        assert "value: 0 GLD" in out

    def test_json_report_contains_all_numbers(self, capsys):
        code, out, _ = run_cli(
            capsys, "mev", "--scenario", "section3_2amm", "--format", "json",
        )
        assert code == 0
        report = json.loads(out)
        assert report["result"]["value"] == "1"
        assert [w["action"] for w in report["result"]["witness"]] == [
            "tx_buy_eth", "arb_uni_toro"
        ]
        assert report["result"]["witness"][1]["deltas"] == {"i": {"ETH": "+1"}}

    def test_defaults_make_scenario_alone_runnable(self, capsys):
        code, out, _ = run_cli(capsys, "mev", "--scenario", "figure2_3domain")
        assert code == 0
        assert "value: 0.20475 ETH" in out

    def test_base_and_maxlen_flags(self, capsys):
        code, out, _ = run_cli(
            capsys, "mev", "--scenario", "section3_2amm",
            "--base", "j:ETH", "--max-len", "1",
        )
        assert code == 0
        assert "value: 0 ETH" in out  # the rebalance needs two steps

    def test_missing_scenario_file_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "mev", "--scenario", "/nope/none.json")
        assert code == 2
        assert "error" in err

    def test_bad_domain_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "mev", "--scenario", "section3_2amm", "--action-domains", "zz",
        )
        assert code == 2

    def test_explosion_maps_to_exit_3(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise ExplosionGuard("too many candidates")

        monkeypatch.setattr(cli, "mev", boom)
        code, _, err = run_cli(capsys, "mev", "--scenario", "section3_2amm")
        assert code == 3
        assert "too many" in err


class TestCollusionCommand:
    def test_four_amm_profitable(self, capsys):
        code, out, _ = run_cli(
            capsys, "collusion", "--scenario", "appendix_b_4amm", "--alpha", "0",
        )
        assert code == 0
        assert "verdict: Profitable" in out
        assert "margin: 0.6" in out
        assert "breakeven alpha: 0.6" in out

    def test_two_amm_boundary(self, capsys):
        code, out, _ = run_cli(
            capsys, "collusion", "--scenario", "section3_2amm", "--alpha", "1",
        )
        assert code == 0
        assert "verdict: Indifferent" in out

    def test_two_amm_expensive(self, capsys):
        code, out, _ = run_cli(
            capsys, "collusion", "--scenario", "section3_2amm", "--alpha", "2",
        )
        assert code == 0
        assert "verdict: Unprofitable" in out
        assert "margin: -1" in out

    def test_json_variant(self, capsys):
        code, out, _ = run_cli(
            capsys, "collusion", "--scenario", "section3_2amm",
            "--alpha", "0", "--format", "json",
        )
        assert code == 0
        report = json.loads(out)
        assert report["result"]["verdict"] == "Profitable"
        assert report["result"]["solo_values"] == {"i": "0", "j": "0"}
        assert report["result"]["breakeven_alpha"] == "1"


class TestOracleCheckCommand:
    def test_discrete_scenario_agrees_exactly(self, capsys):
        code, out, _ = run_cli(
            capsys, "oracle-check", "--scenario", "figure2_3domain",
        )
        assert code == 0
        assert "agree: yes" in out

    def test_coarse_grid_lower_bounds_and_exits_4(self, capsys):
        code, out, _ = run_cli(
            capsys, "oracle-check", "--scenario", "cp_arbitrage_small",
            "--grid-points", "11", "--format", "json",
        )
        assert code == 4
        report = json.loads(out)
        engine = report["result"]["engine_value"]
        oracle = report["result"]["oracle_value"]
        assert float(oracle) <= float(engine)
        assert "grid" in report["result"]["note"]

    def test_fine_grid_agrees_within_tolerance(self, capsys):
        code, out, _ = run_cli(
            capsys, "oracle-check", "--scenario", "cp_arbitrage_small",
            "--grid-points", "100001",
        )
        assert code == 0
        assert "agree: yes" in out


class TestValidateCommand:
    def test_bundled_are_valid(self, capsys):
        for name in ("section3_2amm", "appendix_b_4amm", "cp_arbitrage_small"):
            code, out, _ = run_cli(capsys, "validate", "--scenario", name)
            assert code == 0
            assert "valid" in out

    def test_reciprocity_violation_exits_2(self, capsys, tmp_path):
        doc = one_domain_doc()
        doc["prices"] = [
            {"from": "AAA", "to": "GLD", "rate": "2/1"},
            {"from": "GLD", "to": "AAA", "rate": "6/10"},
        ]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "validate", "--scenario", str(path))
        assert code == 2
        assert "AAA" in err and "GLD" in err

    def test_dangling_pool_exits_2(self, capsys, tmp_path):
        doc = one_domain_doc()
        doc["actions"] = [
            {"id": "a", "player": "P", "kind": "Swap", "pool": "ghost",
             "direction": "x_to_y", "amount": {"fixed": "1"}},
        ]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "validate", "--scenario", str(path))
        assert code == 2
        assert "ghost" in err


class TestDeterminism:
    """Byte-identical machine-readable output across runs and thread counts."""

    COMMANDS = (
        ("mev", "--scenario", "section3_2amm", "--format", "json"),
        ("mev", "--scenario", "appendix_b_4amm", "--format", "json"),
        ("collusion", "--scenario", "appendix_b_4amm", "--alpha", "0.5", "--format", "json"),
        ("oracle-check", "--scenario", "separable_pair", "--format", "json"),
        ("oracle-check", "--scenario", "cp_arbitrage_small",
         "--grid-points", "1001", "--format", "json"),
    )

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda argv: f"{argv[0]}:{argv[2]}")
    def test_thread_count_invariant_bytes(self, argv):
        outputs = {}
        for threads in ("1", "8"):
            env = dict(os.environ, XDMEV_THREADS=threads)
            proc = subprocess.run(
                [sys.executable, "-m", "xdmev.cli", *argv],
                capture_output=True, env=env,
            )
            outputs[threads] = (proc.returncode, proc.stdout)
        assert outputs["1"] == outputs["8"]
        # identical invocation repeated: still byte-identical
        env = dict(os.environ, XDMEV_THREADS="8")
        again = subprocess.run(
            [sys.executable, "-m", "xdmev.cli", *argv], capture_output=True, env=env
        )
        assert (again.returncode, again.stdout) == outputs["8"]
