import json

import jsonschema
import numpy as np
import pytest

from hypercert import matio, schema
from hypercert.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def identity_csv(tmp_path):
    path = tmp_path / "i2.csv"
    path.write_text("# n=2 d=2\n1,0\n0,1\n")
    return path


@pytest.fixture
def rank_one_csv(tmp_path):
    path = tmp_path / "r1.csv"
    matio.write_csv(path, np.tile([1.2, 1.6], (5, 1)))  # rows 2u, u = (0.6, 0.8)
    return path


def test_gen_binary_and_sidecar(tmp_path, capsys):
    out = tmp_path / "g.m2qb"
    code, text = run(capsys, "gen", "--kind", "gaussian", "--n", 64, "--d", 4, "--seed", 7, "--out", out)
    assert code == 0
    payload = json.loads(text)
    jsonschema.validate(payload, schema.GEN_OUTPUT)
    X = matio.read_matrix(out)
    assert X.shape == (64, 4)
    assert matio.checksum(X) == payload["checksum"]
    assert json.loads((tmp_path / "g.m2qb.json").read_text())["seed"] == 7


def test_gen_appendix_reports_n(capsys):
    code, text = run(capsys, "gen", "--kind", "appendixA_spike", "--d", 8, "--C", 50, "--seed", 1)
    assert code == 0
    assert json.loads(text)["n"] == 25600


def test_gen_invalid_kind(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--kind", "nope", "--d", "2"])
    assert exc.value.code == 2


def test_gen_unwritable(tmp_path, capsys):
    code, _ = run(capsys, "gen", "--kind", "identity", "--n", 2, "--d", 2, "--out", tmp_path / "no" / "x.csv")
    assert code == 2


def test_gen_binary_roundtrip_matches_generator(tmp_path, capsys):
    from hypercert.generators import gen_gaussian

    out = tmp_path / "g.m2qb"
    run(capsys, "gen", "--kind", "gaussian", "--n", 30, "--d", 3, "--seed", 2, "--out", out)
    assert matio.read_matrix(out).tobytes() == gen_gaussian(30, 3, 2).tobytes()


def test_certify_identity_no(identity_csv, capsys):
    code, text = run(capsys, "certify", "--in", identity_csv, "--q", 4, "--method", "proxy", "--alpha", 1, "--json")
    assert code == 0
    payload = json.loads(text)
    jsonschema.validate(payload, schema.CERTIFY_OUTPUT)
    assert payload[0]["certified_upper"] == pytest.approx(0.917004, abs=1e-6)
    assert payload[0]["decision"] == "NO-consistent"


def test_certify_rank_one_yes(rank_one_csv, capsys):
    code, text = run(capsys, "certify", "--in", rank_one_csv, "--q", 4, "--alpha", 1)
    assert code == 3
    assert "YES-witnessed" in text and "witness=" in text


def test_certify_inconclusive_exit(identity_csv, capsys):
    code, _ = run(capsys, "certify", "--in", identity_csv, "--method", "baseline", "--alpha", 0.1)
    assert code == 4


def test_certify_all_methods(identity_csv, capsys):
    code, text = run(capsys, "certify", "--in", identity_csv, "--method", "all", "--json", "--p", 1)
    payload = json.loads(text)
    jsonschema.validate(payload, schema.CERTIFY_OUTPUT)
    assert [r["method"] for r in payload] == ["proxy", "baseline", "guth", "proxy-pq"]


@pytest.mark.parametrize("q", [3, 0])
def test_certify_bad_q(identity_csv, capsys, q):
    code, _ = run(capsys, "certify", "--in", identity_csv, "--q", q)
    assert code == 2


def test_certify_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert run(capsys, "certify", "--in", bad)[0] == 2
    assert run(capsys, "certify", "--in", tmp_path / "missing.csv")[0] == 2


def test_certify_budget(identity_csv, capsys):
    assert run(capsys, "certify", "--in", identity_csv, "--budget", 1)[0] == 5


def test_search(identity_csv, rank_one_csv, capsys):
    code, text = run(capsys, "search", "--in", identity_csv, "--q", 4)
    payload = json.loads(text)
    jsonschema.validate(payload, schema.SEARCH_OUTPUT)
    assert payload["B"] == pytest.approx(2**-0.25, rel=1e-12)
    assert payload["best_direction"]["provenance"].startswith("basis")
    payload = json.loads(run(capsys, "search", "--in", rank_one_csv)[1])
    assert payload["B"] == pytest.approx(2.0, rel=1e-12)
    assert abs(abs(np.dot(payload["best_direction"]["coords"], [0.6, 0.8])) - 1) < 1e-9


def test_oracle_cmd(identity_csv, rank_one_csv, tmp_path, capsys):
    payload = json.loads(run(capsys, "oracle", "--in", identity_csv, "--warm-from-proxy")[1])
    jsonschema.validate(payload, schema.ORACLE_OUTPUT)
    assert payload["value"] == pytest.approx(2**-0.25, abs=1e-6)
    assert json.loads(run(capsys, "oracle", "--in", rank_one_csv)[1])["value"] == pytest.approx(2.0, rel=1e-12)
    zero = tmp_path / "z.csv"
    zero.write_text("0,0\n0,0\n")
    assert json.loads(run(capsys, "oracle", "--in", zero)[1])["value"] == 0.0


def test_bench_cmd(tmp_path, capsys):
    csv, js = tmp_path / "b.csv", tmp_path / "b.json"
    code, text = run(
        capsys, "bench-scaling", "--dims", "2,3,4", "--n-rule", "fixed:20", "--seeds", 1,
        "--methods", "proxy,baseline", "--restarts", 2, "--csv", csv, "--json-out", js,
    )
    assert code == 0
    assert "slope" in text
    payload = json.loads(js.read_text())
    jsonschema.validate(payload, schema.BENCH_OUTPUT)
    assert csv.read_text().count("\n") == 1 + 3 * 2


def test_bench_cmd_too_few_dims(capsys):
    assert run(capsys, "bench-scaling", "--dims", "2,3")[0] == 2


def test_limitation_small_d_rejected(capsys):
    assert run(capsys, "limitation", "--d", 2)[0] == 2


def test_limitation_small_run(capsys):
    code, text = run(capsys, "limitation", "--d", 4, "--C", 2, "--seeds", 1)
    payload = json.loads(text)
    jsonschema.validate(payload, schema.LIMITATION_OUTPUT)
    assert code == (0 if payload["verdict"]["pass"] else 1)
    assert payload["seeds"][0]["e1_fourth"] == pytest.approx(4.0, rel=1e-12)
