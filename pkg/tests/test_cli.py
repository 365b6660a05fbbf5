import json

import pytest
from click.testing import CliRunner

from cycletheta.cli import ResultCache, main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, env=None):
    result = runner.invoke(main, args, env=env or {"CYCLETHETA_CACHE": ""}, catch_exceptions=False)
    return result


class TestHeegnerCommand:
    def test_degree_printed(self, runner, tmp_path):
        result = invoke(
            runner,
            ["--cache-dir", str(tmp_path), "heegner", "--level", "1", "--residue", "1", "--disc", "3"],
        )
        assert result.exit_code == 0
        assert "1/3" in result.output

    def test_json_schema(self, runner, tmp_path):
        result = invoke(
            runner,
            ["--cache-dir", str(tmp_path), "heegner", "--level", "1", "--residue", "0",
             "--disc", "4", "--json"],
        )
        payload = json.loads(result.output)
        assert payload["degree"] == "1/2"
        assert payload["points"][0]["mult"] == "1/2"
        assert payload["points"][0]["stab"] == 4

    def test_cache_transparency(self, runner, tmp_path):
        args = ["heegner", "--level", "6", "--residue", "1", "--disc", "23", "--json"]
        cold = invoke(runner, ["--cache-dir", str(tmp_path)] + args)
        warm = invoke(runner, ["--cache-dir", str(tmp_path)] + args)
        nocache = invoke(runner, ["--cache-dir", str(tmp_path / "other")] + args)
        assert cold.output == warm.output == nocache.output
        assert list(tmp_path.glob("*.json"))


class TestEisensteinCommand:
    def test_e4_text(self, runner):
        result = invoke(runner, ["eisenstein", "--series", "ek", "--weight", "4", "--max", "3"])
        assert result.output.strip() == "1 + 240q + 2160q^2"

    def test_hurwitz_table(self, runner):
        result = invoke(runner, ["eisenstein", "--series", "hurwitz", "--max", "4"])
        assert "H(0) = -1/12" in result.output
        assert "H(4) = 1/2" in result.output

    def test_cohen_json(self, runner):
        result = invoke(
            runner, ["eisenstein", "--series", "cohen", "--weight", "2", "--max", "6", "--json"]
        )
        payload = json.loads(result.output)
        assert [0, "1/120"] in payload["coefficients"]
        assert "convention" in payload["metadata"]

    def test_weight_required(self, runner):
        result = runner.invoke(main, ["eisenstein", "--series", "ek", "--max", "3"])
        assert result.exit_code == 2

    def test_weight_2_is_a_computation_error(self, runner):
        result = runner.invoke(main, ["eisenstein", "--series", "ek", "--weight", "2", "--max", "3"])
        assert result.exit_code == 1
        assert "UnsupportedWeight" in result.output


class TestThetaCommand:
    def test_a1(self, runner, tmp_path):
        result = invoke(
            runner, ["--cache-dir", str(tmp_path), "theta", "--lattice", "A1", "--max", "2"]
        )
        assert "coset=(0): 1*q^(0) + 2*q^(1)" in result.output
        assert "coset=(1/2): 2*q^(1/4)" in result.output

    def test_fractional_max(self, runner, tmp_path):
        result = invoke(
            runner,
            ["--cache-dir", str(tmp_path), "theta", "--lattice", "A1", "--max", "5/2", "--json"],
        )
        payload = json.loads(result.output)
        assert payload["truncation"] == "5/2"

    def test_indefinite_is_error(self, runner, tmp_path):
        result = runner.invoke(
            main, ["--cache-dir", str(tmp_path), "theta", "--lattice", "U", "--max", "3"]
        )
        assert result.exit_code == 1


class TestLatticeCommands:
    def test_info(self, runner):
        result = invoke(runner, ["lattice", "info", "--lattice", "E8"])
        assert "rank 8" in result.output
        assert "det 1" in result.output

    def test_info_from_file(self, runner, tmp_path):
        gram_file = tmp_path / "gram.json"
        gram_file.write_text(json.dumps({"gram": [[2, -1], [-1, 2]]}))
        result = invoke(runner, ["lattice", "info", "--lattice", str(gram_file), "--json"])
        payload = json.loads(result.output)
        assert payload["det"] == 3

    def test_unknown_name(self, runner):
        result = runner.invoke(main, ["lattice", "info", "--lattice", "Z9"])
        assert result.exit_code == 2


class TestWeilrepCommand:
    def test_matrices(self, runner):
        result = invoke(runner, ["weilrep", "--lattice", "A1"])
        assert "rho(S)" in result.output
        assert "sqrt(2)" in result.output
        assert "relations: pass" in result.output

    def test_word(self, runner):
        result = invoke(runner, ["weilrep", "--lattice", "A1", "--word", "SS", "--json"])
        payload = json.loads(result.output)
        assert "SS" in payload["matrices"]


class TestDensityCommand:
    def test_e8(self, runner, tmp_path):
        result = invoke(
            runner,
            ["--cache-dir", str(tmp_path), "density", "--lattice", "E8", "--prime", "3", "--m", "1"],
        )
        assert "80/81" in result.output


class TestVerifyCommand:
    def test_weilrep_suite_exit_zero(self, runner):
        result = invoke(runner, ["verify", "--suite", "weilrep"])
        assert result.exit_code == 0
        assert "fail" in result.output  # "0 fail"
        assert " 0 fail" in result.output

    def test_json_deterministic(self, runner):
        a = invoke(runner, ["verify", "--suite", "siegelweil", "--json"])
        b = invoke(runner, ["verify", "--suite", "siegelweil", "--json"])
        assert a.output == b.output
        payload = json.loads(a.output)
        assert payload["passed"] is True


class TestRunEntryPoint:
    def test_exit_codes(self, capsys):
        from cycletheta.cli import run

        assert run(["eisenstein", "--series", "ek", "--weight", "4", "--max", "2"]) == 0
        capsys.readouterr()
        assert run(["eisenstein", "--series", "ek", "--max", "2"]) == 2
        capsys.readouterr()
        assert run(["eisenstein", "--series", "ek", "--weight", "2", "--max", "2"]) == 1
        capsys.readouterr()


class TestResultCache:
    def test_round_trip(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = cache.make_key("demo", {"x": "1/3"})
        assert cache.get(key) is None
        cache.put(key, {"value": "1/3"})
        assert cache.get(key) == {"value": "1/3"}

    def test_version_in_key(self, tmp_path):
        k1 = ResultCache.make_key("demo", {"x": 1})
        k2 = ResultCache.make_key("demo", {"x": 2})
        assert k1 != k2

    def test_corrupt_entry_ignored(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = cache.make_key("demo", {})
        (tmp_path / f"{key}.json").write_text("not json")
        assert cache.get(key) is None
