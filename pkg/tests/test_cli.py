import json
import subprocess
import sys

import pytest

from extrinsic.cli import main
from extrinsic.dataio import (ingest_prices, read_chain_json, read_config,
                              write_chain_json)
from extrinsic.errors import InputError
from extrinsic.markov import MarkovChain


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestUtility:
    def test_uniform(self, capsys):
        r = report(capsys, "utility", "--set", "probs=0.5,0.5", "--set", "K=1")
        assert r["results"]["extrinsic"] == 1.0
        assert r["results"]["maximizer"]["max_extrinsic"] == 1.0

    def test_degenerate(self, capsys):
        r = report(capsys, "utility", "--set", "probs=1,0", "--set", "K=1")
        assert r["results"]["extrinsic"] == 0.0

    def test_bayes(self, capsys):
        r = report(capsys, "utility", "--set", "probs=0.2,0.8",
                   "--set", "likelihoods=0.9,0.5", "--set", "rewards=10,0")
        assert r["results"]["posterior"] == pytest.approx([0.3103, 0.6897], abs=5e-5)
        assert r["results"]["intrinsic"] == pytest.approx(2.0)

    def test_bad_distribution(self, capsys):
        code, _, err = run(capsys, "utility", "--set", "probs=0.5,-0.1,0.6")
        assert code == 2
        assert "probs[1]" in err

    def test_curve_side_file(self, capsys, tmp_path):
        out = tmp_path / "u.json"
        assert main(["utility", "--set", "probs=0.5,0.5", "--out", str(out)]) == 0
        lines = (tmp_path / "u.curve.csv").read_text().splitlines()
        assert lines[0] == "p,extrinsic_utility,curvature"
        assert len(lines) == 100
        assert lines[50].startswith("0.5,1.0,")

    def test_config_file_and_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "u.cfg"
        cfg.write_text("# choices\nprobs = 0.25, 0.25, 0.25, 0.25\nrewards = 1,2,3,4\nK = 2\n")
        r = report(capsys, "utility", "--config", str(cfg), "--set", "rewards=4,4,4,4")
        assert r["results"]["extrinsic"] == pytest.approx(4.0)
        assert r["results"]["intrinsic"] == pytest.approx(4.0)
        assert r["config"]["rewards"] == "4,4,4,4"


class TestPortfolio:
    def test_sigma_zero(self, capsys):
        r = report(capsys, "portfolio", "--set", "mu=0.05", "--set", "sigma=0",
                   "--set", "risk_free_rate=0.05", "--set", "n_paths=100",
                   "--set", "markov_steps=50")
        assert r["results"]["expected_return"] == pytest.approx(100.0, rel=1e-12)
        assert r["results"]["capital_guaranteed"] is True

    def test_two_assets_four_choices(self, capsys):
        r = report(capsys, "portfolio", "--set", "mu=0.1,0.07", "--set", "sigma=0.2,0.25",
                   "--set", "risk_free_rate=0.03", "--set", "n_paths=2000",
                   "--set", "markov_steps=500")
        res = r["results"]
        assert res["choices"]["count"] == 4
        assert res["max_extrinsic_utility"]["value"] == pytest.approx(4.0)
        assert sum(res["rebalance_weights"].values()) == pytest.approx(1.0, abs=1e-11)
        assert res["best_performer"]["gibbs_slack"] >= 0

    def test_closed_form(self, capsys):
        r = report(capsys, "portfolio", "--set", "mu=0.10", "--set", "sigma=0.2",
                   "--set", "risk_free_rate=0.05", "--set", "wealth=100",
                   "--set", "n_paths=400000", "--set", "markov_steps=100")
        res = r["results"]
        assert abs(res["expected_return"] - 105.1271) < 3 * res["expected_return_stderr"]

    def test_bad_correlation(self, capsys):
        code, _, err = run(capsys, "portfolio", "--set", "mu=0.1,0.1", "--set", "sigma=0.2,0.2",
                           "--set", "risk_free_rate=0.05", "--set", "correlation=1,2;2,1")
        assert code == 2 and "semidefinite" in err

    def test_missing_key(self, capsys):
        code, _, err = run(capsys, "portfolio", "--set", "mu=0.1")
        assert code == 2 and "sigma" in err

    def test_seed_flag(self, capsys):
        base = ["portfolio", "--set", "mu=0.1", "--set", "sigma=0.3",
                "--set", "risk_free_rate=0.02", "--set", "n_paths=1000", "--set", "markov_steps=50"]
        a = report(capsys, *base, "--seed", "7")
        b = report(capsys, *base, "--seed", "8")
        assert a["provenance"]["seed"] == 7
        assert a["results"]["expected_return"] != b["results"]["expected_return"]


class TestCode:
    def test_dyadic(self, capsys):
        r = report(capsys, "code", "--set", "probs=0.5,0.25,0.125,0.125")
        assert r["results"]["average_length"] == r["results"]["entropy"] == 1.75
        assert r["results"]["codewords"] == ["0", "10", "110", "111"]

    def test_noiseless_channel(self, capsys, tmp_path):
        ch = tmp_path / "ch.csv"
        ch.write_text("1,0\n0,1\n")
        r = report(capsys, "code", "--set", "probs=0.5,0.5", "--set", f"channel_csv={ch}",
                   "--set", "trials=500")
        assert r["results"]["decoding_error"]["p_e"] == 0.0

    def test_lengths(self, capsys):
        r = report(capsys, "code", "--set", "probs=0.9,0.1", "--set", "message=s1,s2")
        assert r["results"]["lengths"] == [1, 4]
        assert r["results"]["encoded"] == "01110"

    def test_zero_probability(self, capsys):
        code, _, err = run(capsys, "code", "--set", "probs=1,0")
        assert code == 2

    def test_alphabet_table_round_trip(self, capsys, tmp_path):
        table = tmp_path / "alpha.tsv"
        table.write_text("hedge\t0.5\nequity\t0.25\ncommodity\t0.25\n")
        out = tmp_path / "c.json"
        assert main(["code", "--set", f"alphabet={table}", "--out", str(out)]) == 0
        written = (tmp_path / "c.code.tsv").read_text().splitlines()
        assert written == ["hedge\t0.5\t0", "equity\t0.25\t10", "commodity\t0.25\t11"]

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "code", "--set", "probs=0.5,0.5", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "key,value"
        assert "kraft_sum,1.0" in out.splitlines()


class TestMarkov:
    def test_alternating_sequence(self, capsys, tmp_path):
        seq = tmp_path / "s.csv"
        seq.write_text("state\n" + "\n".join(["0", "1"] * 10) + "\n")
        r = report(capsys, "markov", "--set", f"sequence={seq}")
        assert r["results"]["chain"]["transition"] == [[0.0, 1.0], [1.0, 0.0]]
        assert r["results"]["entropy_rate"] == 0.0

    def test_flip_chain(self, capsys, tmp_path):
        path = tmp_path / "chain.json"
        write_chain_json(MarkovChain([[0.9, 0.1], [0.1, 0.9]]), path)
        r = report(capsys, "markov", "--set", f"chain={path}")
        assert r["results"]["entropy_rate"] == pytest.approx(0.4690, abs=5e-5)
        assert r["results"]["steady_state"] is True

    def test_identity_is_analysis_error(self, capsys):
        code, _, err = run(capsys, "markov", "--set", "transition=1,0;0,1")
        assert code == 3 and "not unique" in err

    def test_prices(self, capsys, tmp_path):
        prices = tmp_path / "p.csv"
        prices.write_text("date,a,b\n2024-01-01,1,1\n2024-01-02,1.1,1\n"
                          "2024-01-03,1.0,1.2\n2024-01-04,1.1,1.2\n")
        r = report(capsys, "markov", "--set", f"prices={prices}", "--set", "risk_free_rate=0.0")
        assert r["results"]["chain"]["n_states"] == 3

    def test_missing_input(self, capsys):
        code, _, _ = run(capsys, "markov")
        assert code == 2


class TestIngest:
    def write(self, tmp_path, text):
        p = tmp_path / "prices.csv"
        p.write_text(text)
        return p

    def test_header_only(self, tmp_path):
        with pytest.raises(InputError, match="no rows"):
            ingest_prices(self.write(tmp_path, "date,a,b\n"))

    def test_valid(self, tmp_path):
        t = ingest_prices(self.write(tmp_path, "date,a,b\n2024-01-01,1,2\n2024-01-02,1.5,2.5\n"))
        assert t.assets == ("a", "b") and t.prices.shape == (2, 2)

    def test_negative_price_row(self, tmp_path):
        text = "date,a\n2024-01-01,1\n2024-01-02,2\n2024-01-03,-1.0\n"
        with pytest.raises(InputError, match="row 3"):
            ingest_prices(self.write(tmp_path, text))

    @pytest.mark.parametrize("text, match", [
        ("date,a\n2024-13-01,1\n", "date"),
        ("date,a,b\n2024-01-01,1\n", "expected 3 fields"),
        ("date,a\n2024-01-02,1\n2024-01-01,1\n", "ascending"),
        ("day,a\n2024-01-01,1\n", "header"),
        ("date,a\n2024-01-01,x\n", "column a"),
    ])
    def test_errors(self, tmp_path, text, match):
        with pytest.raises(InputError, match=match):
            ingest_prices(self.write(tmp_path, text))


def test_chain_json_round_trip(tmp_path):
    m = MarkovChain([[0.2, 0.8], [0.6, 0.4]])
    write_chain_json(m, tmp_path / "c.json")
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["n_states"] == 2
    assert (read_chain_json(tmp_path / "c.json").transition == m.transition).all()


def test_config_syntax(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("mu 0.1\n")
    with pytest.raises(InputError, match="bad.cfg:1"):
        read_config(p)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "extrinsic", "code", "--set", "probs=0.5,0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["kraft_sum"] == 1.0
