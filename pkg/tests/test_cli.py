"""End-to-end tests of the command-line interface via subprocesses.

Each test invokes the real entry point (python -m pdakit.cli) so argument
parsing, stdin/stdout plumbing, JSON output, and exit codes are all
exercised exactly as a shell user sees them.  Exit code contract: 0 for
success/valid, 1 for a falsified claim, 2 for usage or format errors.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pdakit as pk

GOLDEN = Path(__file__).parent / "golden"

VIOLATOR = "#PDA v1\nK=2 F=2 Z=- S=2\n0 *\n1 0\n"


def run_cli(*argv, stdin=None, env_extra=None):
    env = os.environ.copy()
    env.pop("PDA_SEARCH_BUDGET", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "pdakit.cli", *argv],
        input=stdin,
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


def last_json(out: str) -> dict:
    return json.loads(out.strip().splitlines()[-1])


class TestConstruct:
    def test_mn_matches_golden_bytes(self):
        proc = run_cli("construct", "mn", "--f", "4", "--z", "2")
        assert proc.returncode == 0
        assert proc.stdout == (GOLDEN / "mn_4_2.pda").read_text()

    def test_opt2_and_f2(self):
        proc = run_cli("construct", "opt2", "--f", "7", "--s", "10")
        assert proc.returncode == 0
        assert pk.parse(proc.stdout).k == 27
        proc = run_cli("construct", "f2", "--s", "5")
        assert pk.parse(proc.stdout).k == 2

    def test_json_mirror_output(self):
        proc = run_cli("construct", "mn", "--f", "3", "--z", "1", "--json")
        assert proc.returncode == 0
        assert pk.parse_json(proc.stdout) == pk.mn_pda(3, 1)

    def test_recipe_flag_prints_recipe(self):
        proc = run_cli("construct", "opt2", "--f", "7", "--s", "10", "--recipe")
        assert proc.returncode == 0
        recipe = pk.ConstructionRecipe.from_json(proc.stdout)
        assert pk.evaluate_recipe(recipe) == pk.optimal_fz2(7, 10)

    def test_out_file(self, tmp_path):
        target = tmp_path / "g.pda"
        proc = run_cli("construct", "mn", "--f", "3", "--z", "2", "--out", str(target))
        assert proc.returncode == 0
        assert pk.parse(target.read_text()) == pk.mn_pda(3, 2)

    def test_construct_usage_error(self):
        proc = run_cli("construct", "mn", "--f", "3", "--z", "5")
        assert proc.returncode == 2
        assert "error:" in proc.stderr


class TestVerify:
    def test_pipe_from_construct(self):
        built = run_cli("construct", "mn", "--f", "4", "--z", "2").stdout
        proc = run_cli("verify", "-", stdin=built)
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj["valid"] is True
        assert (obj["k"], obj["f"], obj["z"], obj["s"]) == (6, 4, 2, 4)
        assert obj["violation_count"] == 0

    def test_verify_accepts_json_grid_on_stdin(self):
        proc = run_cli("verify", "-", stdin=pk.render_json(pk.mn_pda(3, 1)))
        assert proc.returncode == 0
        assert last_json(proc.stdout)["valid"] is True

    def test_corner_violation_exits_one(self):
        proc = run_cli("verify", "-", stdin=VIOLATOR)
        assert proc.returncode == 1
        obj = last_json(proc.stdout)
        assert obj["valid"] is False
        kinds = {v["type"] for v in obj["violations"]}
        assert "CornerViolation" in kinds

    def test_expected_z_mismatch_exits_one(self):
        built = run_cli("construct", "mn", "--f", "4", "--z", "2").stdout
        proc = run_cli("verify", "-", "--z", "3", stdin=built)
        assert proc.returncode == 1
        kinds = {v["type"] for v in last_json(proc.stdout)["violations"]}
        assert kinds == {"StarCountMismatch"}

    def test_structural_flag(self):
        built = run_cli("construct", "opt2", "--f", "7", "--s", "31").stdout
        proc = run_cli("verify", "-", "--structural", stdin=built)
        assert proc.returncode == 0
        st = last_json(proc.stdout)["structural"]
        assert (st["maxd"], st["maxe"], st["nar"]) == ("holds", "holds", "holds")

    def test_format_error_exits_two(self):
        proc = run_cli("verify", "-", stdin="not a grid\n")
        assert proc.returncode == 2
        assert "error:" in proc.stderr

    def test_unknown_flag_exits_two(self):
        proc = run_cli("verify", "--frobnicate", "-")
        assert proc.returncode == 2


class TestTransform:
    def test_every_op_reads_stdin(self, tmp_path):
        base = pk.render(pk.mn_pda(3, 1))
        other = tmp_path / "other.pda"
        other.write_text(pk.render(pk.optimal_fz2(3, 4)))
        cases = [
            (["transform", "transpose", "-"], pk.transpose(pk.mn_pda(3, 1))),
            (["transform", "dual", "-"], pk.symbol_dual(pk.mn_pda(3, 1))),
            (
                ["transform", "permute", "-", "--rows", "1,0,2"],
                pk.permute(pk.mn_pda(3, 1), row_perm=[1, 0, 2]),
            ),
            (
                ["transform", "role", "-", "--rows", "cols", "--cols", "rows"],
                pk.role_permute(pk.mn_pda(3, 1), rows="cols", cols="rows"),
            ),
            (
                ["transform", "subgrid", "-", "--cols", "0,2", "--compact"],
                pk.subgrid(pk.mn_pda(3, 1), range(3), [0, 2], compact_symbols=True),
            ),
            (
                ["transform", "concat", "-", str(other)],
                pk.concat(pk.mn_pda(3, 1), pk.optimal_fz2(3, 4)),
            ),
            (
                ["transform", "replicate", "-", "--m", "2"],
                pk.replicate(pk.mn_pda(3, 1), 2),
            ),
        ]
        for argv, expected in cases:
            proc = run_cli(*argv, stdin=base)
            assert proc.returncode == 0, (argv, proc.stderr)
            assert pk.parse(proc.stdout) == expected, argv

    def test_transform_usage_error(self):
        proc = run_cli(
            "transform", "permute", "-", "--rows", "0,0,1",
            stdin=pk.render(pk.mn_pda(3, 1)),
        )
        assert proc.returncode == 2
        assert "error:" in proc.stderr


class TestBound:
    def test_bound_lines_for_s(self):
        proc = run_cli("bound", "--f", "7", "--z", "f-2", "--s", "10")
        assert proc.returncode == 0
        rows = [json.loads(line) for line in proc.stdout.strip().splitlines()]
        by_kind = {r["kind"]: r for r in rows}
        assert by_kind["conjectured_K"]["value"] == 27
        assert by_kind["conjectured_K"]["certified"] is False
        assert by_kind["pjd_refutation"]["value"] == 28
        assert by_kind["upper_K"]["value"] == 30

    def test_bound_lines_for_k(self):
        proc = run_cli("bound", "--f", "4", "--z", "2", "--k", "6")
        assert proc.returncode == 0
        rows = [json.loads(line) for line in proc.stdout.strip().splitlines()]
        by_kind = {r["kind"]: r for r in rows}
        assert by_kind["lower_S_sum_f"]["value"] == 4
        assert by_kind["lower_S_recursive"]["value"] == 4
        assert by_kind["lower_S_yb2"]["value"] == 4

    def test_refute_exit_codes(self):
        refuted = run_cli("bound", "--f", "4", "--z", "f-2", "--s", "6", "--refute", "9")
        assert refuted.returncode == 1
        obj = last_json(refuted.stdout)
        assert obj["refuted"] is True
        assert obj["max_k"] == 8
        tolerated = run_cli(
            "bound", "--f", "4", "--z", "f-2", "--s", "6", "--refute", "8"
        )
        assert tolerated.returncode == 0
        assert last_json(tolerated.stdout)["refuted"] is False

    def test_bound_usage_errors(self):
        assert run_cli("bound", "--f", "4", "--z", "2").returncode == 2
        assert (
            run_cli("bound", "--f", "4", "--z", "1", "--s", "5", "--refute", "3").returncode
            == 2
        )


class TestSearch:
    def test_maxk_json_and_witness(self, tmp_path):
        out = tmp_path / "witness.pda"
        proc = run_cli(
            "search", "maxk", "--f", "4", "--z", "2", "--s", "4", "--out", str(out)
        )
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj["optimum"] == 6
        assert obj["exhausted"] is True
        witness = pk.parse(out.read_text())
        assert witness.k == 6
        assert pk.verify(witness, expected_z=2).valid

    def test_mins_json(self):
        proc = run_cli("search", "mins", "--k", "6", "--f", "4", "--z", "2")
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj["optimum"] == 4
        assert obj["exhausted"] is True

    def test_env_budget_is_honored(self):
        proc = run_cli(
            "search", "maxk", "--f", "4", "--z", "2", "--s", "6",
            env_extra={"PDA_SEARCH_BUDGET": "0.000001s"},
        )
        assert proc.returncode == 0
        assert last_json(proc.stdout)["exhausted"] is False

    def test_budget_flag_overrides_env(self):
        proc = run_cli(
            "search", "maxk", "--f", "4", "--z", "2", "--s", "4", "--budget", "60s",
            env_extra={"PDA_SEARCH_BUDGET": "0.000001s"},
        )
        assert proc.returncode == 0
        assert last_json(proc.stdout)["optimum"] == 6

    def test_bad_env_budget_exits_two(self):
        proc = run_cli(
            "search", "maxk", "--f", "3", "--z", "1", "--s", "3",
            env_extra={"PDA_SEARCH_BUDGET": "abc"},
        )
        assert proc.returncode == 2


class TestDecompose:
    def test_splits_and_writes_parts(self, tmp_path):
        built = run_cli("construct", "opt2", "--f", "7", "--s", "31").stdout
        block_path = tmp_path / "block.pda"
        rest_path = tmp_path / "rest.pda"
        proc = run_cli(
            "decompose", "-",
            "--out-block", str(block_path), "--out-rest", str(rest_path),
            stdin=built,
        )
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj["found"] is True
        assert obj["block"] == {"k": 21, "f": 7, "z": 5, "s": 7}
        assert obj["rest"] == {"k": 69, "f": 7, "z": 5, "s": 24}
        assert pk.verify(pk.parse(block_path.read_text()), expected_z=5).valid
        assert pk.verify(pk.parse(rest_path.read_text()), expected_z=5).valid

    def test_premise_error_exits_two(self):
        proc = run_cli("decompose", "-", stdin=pk.render(pk.mn_pda(4, 1)))
        assert proc.returncode == 2
        assert "premise" in proc.stderr

    def test_no_block_within_budget_exits_one(self):
        built = run_cli("construct", "opt2", "--f", "7", "--s", "31").stdout
        proc = run_cli("decompose", "-", "--budget", "0.000001s", stdin=built)
        assert proc.returncode == 1
        assert last_json(proc.stdout) == {"found": False}


class TestSimulate:
    def test_single_demand_vector(self):
        built = run_cli("construct", "mn", "--f", "3", "--z", "1").stdout
        proc = run_cli(
            "simulate", "--pda", "-", "--files", "2", "--demands", "0,1,0",
            stdin=built,
        )
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj == {
            "rate": "1",
            "broadcasts": 3,
            "decoded_all": True,
            "assignments": 1,
        }

    def test_all_demands_enumerates(self):
        built = run_cli("construct", "mn", "--f", "3", "--z", "1").stdout
        proc = run_cli(
            "simulate", "--pda", "-", "--files", "2", "--all-demands", stdin=built
        )
        assert proc.returncode == 0
        obj = last_json(proc.stdout)
        assert obj["assignments"] == 8
        assert obj["decoded_all"] is True

    def test_invalid_grid_fails_decode(self):
        proc = run_cli(
            "simulate", "--pda", "-", "--files", "2", "--demands", "0,1",
            stdin=VIOLATOR,
        )
        assert proc.returncode == 1
        assert last_json(proc.stdout)["decoded_all"] is False

    def test_usage_errors(self):
        built = run_cli("construct", "mn", "--f", "3", "--z", "1").stdout
        both = run_cli(
            "simulate", "--pda", "-", "--files", "2",
            "--demands", "0,1,0", "--all-demands", stdin=built,
        )
        assert both.returncode == 2
        neither = run_cli("simulate", "--pda", "-", "--files", "2", stdin=built)
        assert neither.returncode == 2
        short = run_cli(
            "simulate", "--pda", "-", "--files", "2", "--demands", "0,1", stdin=built
        )
        assert short.returncode == 2


class TestCatalog:
    def test_formula_and_search_agree_at_small_sizes(self):
        proc = run_cli("catalog", "--f", "2..4", "--s-max", "6")
        assert proc.returncode == 0
        rows = [json.loads(line) for line in proc.stdout.strip().splitlines()]
        assert len(rows) == 18
        for row in rows:
            assert row["exhausted"] is True
            assert row["agree"] is True, row
            assert row["certified"] is True
            if row["f"] == 2:
                assert row["k_formula"] == row["s"] // 2, row

    def test_rejects_other_z(self):
        proc = run_cli("catalog", "--f", "4", "--z", "1", "--s-max", "3")
        assert proc.returncode == 2

    def test_bad_range_exits_two(self):
        proc = run_cli("catalog", "--f", "6..2", "--s-max", "3")
        assert proc.returncode == 2


class TestHelp:
    def test_help_exits_zero(self):
        assert run_cli("--help").returncode == 0
        assert run_cli("search", "--help").returncode == 0

    def test_missing_subcommand_exits_two(self):
        assert run_cli().returncode == 2
        assert run_cli("nonsense").returncode == 2
