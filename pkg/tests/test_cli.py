import json
import os

from linscat.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def write_cfg(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_places_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "p.json", {
        "field": [-2, 0, 1], "places": [2, 3, 7, "inf"]})
    code, doc = run(capsys, "places", "--config", cfg)
    assert code == 0
    assert doc["schema"] == 1 and len(doc["config_digest"]) == 64
    by_v = {row["v"]: row for row in doc["places"]}
    assert by_v["2"]["sum_ef"] == 2
    assert len(by_v["7"]["above"]) == 2  # 7 splits in Q(sqrt 2)
    assert by_v["inf"]["above"][0]["v"] == "inf"


def test_height_and_weil_commands(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "h.json", {"points": [[3, 4], [2, 4], [3, 4]]})
    code, doc = run(capsys, "height", "--config", cfg)
    assert code == 0
    assert [r["H"] for r in doc["heights"]] == ["2", "4"]  # dedup + sort
    wcfg = write_cfg(tmp_path, "w.json", {
        "field": [0, 1], "S": ["inf", 3], "form": [1, 0],
        "points": [[3, 4]]})
    code, doc = run(capsys, "weil", "--config", wcfg)
    assert code == 0
    lam = doc["weil"][0]["lambda"]
    assert abs(lam["inf"] - 0.2876820724) < 1e-9
    assert abs(lam["3"] - 1.0986122886) < 1e-9


def test_twisted_and_sweep_commands(tmp_path, capsys):
    base = {
        "field": [0, 1], "S": ["inf"],
        "forms": {"inf": [["1", "0"], ["0", "1"]]},
        "weights": {"inf": ["1", "-1"]},
        "epsilon": "1/10", "Q": 2,
        "points": [[3, 4], [1, 1]],
    }
    cfg = write_cfg(tmp_path, "t.json", base)
    code, doc = run(capsys, "twisted", "--config", cfg)
    assert code == 0
    by_pt = {tuple(r["point"]): r for r in doc["twisted"]}
    assert abs(by_pt[(3, 4)]["H_Q"] - 8.0) < 1e-9
    assert by_pt[(3, 4)]["identity_residual"] < 1e-9
    sweep = dict(base)
    sweep["Q_grid"] = ["1", "2", "10"]
    scfg = write_cfg(tmp_path, "s.json", sweep)
    code, doc = run(capsys, "sweep", "--config", scfg)
    # [1:1] at Q = 1 sits exactly on the boundary: indeterminate, exit 2
    assert code == 2
    assert [1, 1] in doc["sweep"][0]["indeterminate"]


def test_solve_command_with_outdir(tmp_path, capsys):
    cfg_path = write_cfg(tmp_path, "roth.json", {
        "mode": "schmidt",
        "field": [-2, 0, 1], "S": ["inf"],
        "w_choices": {"inf": 1},
        "forms": {"inf": [[["0", "-1"], ["1", "0"]], [["1", "0"], ["0", "0"]]]},
        "epsilon": "3/10", "slack": "0",
        "height_bound": 300, "precision": 17,
    })
    outdir = str(tmp_path / "rep")
    code = main(["solve", "--config", cfg_path, "--out", outdir])
    capsys.readouterr()
    assert code == 0
    with open(os.path.join(outdir, "solve.json")) as fh:
        doc = json.load(fh)
    assert [1, 1] in doc["solutions"] and [5, 7] in doc["solutions"]
    assert "cover" in doc and doc["density"]["point_count"] == len(doc["solutions"])
    with open(os.path.join(outdir, "solve.csv")) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "point,h,bucket"
    assert any(line.startswith("1:1,") for line in lines)


def test_report_determinism(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "d.json", {
        "field": [-2, 0, 1], "places": [2, 5, "inf"]})
    out1, out2 = str(tmp_path / "o1"), str(tmp_path / "o2")
    assert main(["places", "--config", cfg, "--out", out1]) == 0
    assert main(["places", "--config", cfg, "--out", out2]) == 0
    capsys.readouterr()
    b1 = open(os.path.join(out1, "places.json"), "rb").read()
    b2 = open(os.path.join(out2, "places.json"), "rb").read()
    assert b1 == b2


def test_scatter_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "sc.json", {
        "n": 1, "epsilon": "1/2", "S_size": 1,
        "profiles": [
            {"label": "a", "lambda": [["26", "4"]], "h": "10"},
            {"label": "d", "lambda": [["9", "9"]], "h": "10"},
        ]})
    code, doc = run(capsys, "scatter", "--config", cfg)
    assert code == 0
    assert doc["rejected"] == ["d"]
    assert len(doc["classes"]) == 1


def test_ruvojta_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "rv.json", {
        "n": 2, "m_max": 6, "betas": ["1", "1"], "b": 2,
        "m": 3, "epsilon1": "1/100", "epsilon": "1/2",
        "sigma": [0], "a": ["1"]})
    code, doc = run(capsys, "ruvojta", "--config", cfg)
    assert code == 0
    assert doc["gamma"] == "3" and doc["beta_sup"] == "1/3"
    assert all(r == "3" for r in doc["ratio_table"].values())
    assert doc["delta_sigma"] == [["0", "2"], ["1", "1"], ["2", "0"]]
    assert doc["filtration"]["h0"] == 10
    assert "feasible" in doc


def test_audit_command(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "a.json", {
        "seed": 3, "fields": [[0, 1], [-2, 0, 1]],
        "product_formula_samples": 8, "identity_samples": 4})
    code, doc = run(capsys, "audit", "--config", cfg)
    assert code == 0
    assert doc["product_formula_max_defect"] < 1e-10
    assert doc["identity_max_residual"] < 1e-8


def test_error_exit_codes(tmp_path, capsys):
    bad = write_cfg(tmp_path, "bad.json", {
        "field": [0, 1], "S": ["inf"],
        "forms": {"inf": [["1", "0"], ["0", "1"]]},
        "weights": {"inf": ["1", "1"]},  # does not sum to zero
        "points": [[1, 2]]})
    assert main(["twisted", "--config", bad]) == 1
    err = capsys.readouterr().err
    assert "sums to 2, not 0" in err
    assert main(["places", "--config", str(tmp_path / "missing.json")]) == 1
    notjson = tmp_path / "nj.json"
    notjson.write_text("{nope")
    assert main(["places", "--config", str(notjson)]) == 1
    capsys.readouterr()


def test_bundled_configs(capsys):
    roth = os.path.join(ROOT, "configs", "roth_sqrt2.json")
    code, doc = run(capsys, "solve", "--config", roth)
    assert code == 0
    assert [1, 2] in doc["solutions"] and [12, 17] in doc["solutions"]
    audit = os.path.join(ROOT, "configs", "identity_audit.json")
    code, doc = run(capsys, "audit", "--config", audit)
    assert code == 0
    assert doc["product_formula_max_defect"] < 1e-10
