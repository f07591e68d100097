import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from conftest import PHI, PSI, abs_net, zero_net
from reluregions.cli import main
from reluregions.gadgets import build_T_eps, build_zanotti
from reluregions.model import Network, evaluate
from reluregions.netio import load_network, serialize_network


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, data):
        p = tmp_path / name
        p.write_bytes(data if isinstance(data, bytes) else data.encode())
        paths[name] = str(p)

    put("abs.json", serialize_network(abs_net()))
    put("zero.json", serialize_network(zero_net()))
    put("deep.json", serialize_network(build_T_eps(1)))
    put("plane.json", serialize_network(build_zanotti()))
    put("phi.cnf", PHI)
    put("psi.cnf", PSI)
    put("bad.cnf", "p cnf 2 1\n1 -1 0\n")
    put("broken.json", "{not json")
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def test_count_abs(capsys, files):
    code, rep, err = run(capsys, "count", files["abs.json"])
    assert code == 0
    counts = rep["census"]["counts"]
    assert [counts[d]["value"] for d in ("1", "2", "4", "6")] == [3, 2, 2, 2]
    assert "sha256" in rep["inputs"][files["abs.json"]]
    assert "R4" in err or "4" in err


def test_count_deep_def5(capsys, files):
    code, rep, _ = run(capsys, "count", files["deep.json"], "--defs", "3,5")
    assert code == 0
    for d in ("3", "5"):
        assert rep["census"]["counts"][d]["value"] == "not computed"


def test_count_bad_defs(capsys, files):
    with pytest.raises(SystemExit) as exc:
        main(["count", files["abs.json"], "--defs", "9"])
    assert exc.value.code == 2


def test_report_byte_stable(capsys, files):
    main(["count", files["plane.json"]])
    a = capsys.readouterr().out
    main(["count", files["plane.json"], "--workers", "2"])
    b = capsys.readouterr().out
    assert json.loads(a)["census"] == json.loads(b)["census"]
    main(["count", files["plane.json"]])
    assert capsys.readouterr().out == a


def test_timing_flag(capsys, files):
    _, rep, _ = run(capsys, "count", files["abs.json"], "--timing")
    assert "seconds" in rep["timing"]
    _, rep, _ = run(capsys, "count", files["abs.json"])
    assert "timing" not in rep


def gen(capsys, files, *argv):
    out = files["dir"] / "gen.json"
    code, rep, _ = run(capsys, "gen", *argv, "-o", out)
    assert code == 0
    return str(out), rep["generated"]


def test_decide(capsys, files):
    sat, _ = gen(capsys, files, "nphi", "--cnf", files["phi.cnf"])
    code, rep, _ = run(capsys, "decide", sat, "--k", "1")
    assert code == 0 and rep["decision"]["more_than_k"] is True
    unsat, _ = gen(capsys, files, "nphi", "--cnf", files["psi.cnf"])
    code, rep, _ = run(capsys, "decide", unsat, "--k", "1")
    assert code == 1 and rep["decision"]["certificate"] == {"kind": "exact count", "value": 1, "method": "union-find-facet-merge"}
    with pytest.raises(SystemExit) as exc:
        main(["decide", unsat, "--k", "0"])
    assert exc.value.code == 2


def test_equiv(capsys, files):
    assert run(capsys, "equiv", files["abs.json"], files["abs.json"])[0] == 0
    assert run(capsys, "equiv", files["abs.json"], files["zero.json"])[0] == 1
    assert run(capsys, "equiv", files["abs.json"], files["plane.json"])[0] == 4


def test_gen_t_eps_prediction(capsys, files):
    path, rep = gen(capsys, files, "t-eps", "--n", "2", "--eps", "1/3")
    assert rep["prediction"]["value"] == 17
    _, rep, _ = run(capsys, "count", path, "--defs", "4")
    assert rep["census"]["counts"]["4"]["value"] == 17


def test_gen_nphi_star_prediction(capsys, files):
    path, rep = gen(capsys, files, "nphi-star", "--cnf", files["phi.cnf"])
    assert rep["prediction"]["value"] == 5
    _, rep, _ = run(capsys, "count", path, "--defs", "4")
    assert rep["census"]["counts"]["4"]["value"] == 5


def test_gen_t_to_stdout(capsys):
    code = main(["gen", "t", "--n", "1"])
    out, err = capsys.readouterr()
    assert code == 0
    from reluregions.netio import parse_network

    assert evaluate(parse_network(out), [F(1, 2)]) == F(-1, 2)
    assert '"prediction"' in err


@pytest.mark.parametrize(
    "argv",
    [
        ["zanotti"],
        ["fig2"],
        ["t", "--n", "2"],
        ["amplify", "--net", "ABS", "--k", "2"],
        ["arrangement", "--hyperplane", "1,0", "--hyperplane", "0,1", "--hyperplane", "1,1", "--point", "1,2"],
        ["subtract", "--net", "ABS", "--net", "ABS"],
        ["nphi-kl", "--cnf", "PSI", "--k", "3", "--l", "3"],
    ],
)
def test_gen_outputs_reparse_and_match(capsys, files, argv):
    argv = [files["abs.json"] if a == "ABS" else files["psi.cnf"] if a == "PSI" else a for a in argv]
    path, rep = gen(capsys, files, *argv)
    net = load_network(path)
    pred = rep.get("prediction")
    if pred and isinstance(pred["value"], bool):
        # "more than K regions iff satisfiable"
        K = pred["parameters"].get("K", 1)
        code = main(["decide", path, "--k", str(K)])
        capsys.readouterr()
        assert code == (0 if pred["value"] else 1)
    elif pred:
        defs = ",".join(str(d) for d in pred["definitions"] if d in (1, 2, 4, 6))
        _, counted, _ = run(capsys, "count", path, "--defs", defs)
        for d in defs.split(","):
            assert counted["census"]["counts"][d]["value"] == pred["value"]
    assert net.input_dim >= 1


def test_gen_errors(capsys, files):
    assert main(["gen", "nphi", "--cnf", files["bad.cnf"]]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["gen", "t-eps", "--n", "1", "--eps", "1/2"])
    assert exc.value.code == 2


def test_shallow(capsys, files):
    code, rep, _ = run(capsys, "shallow", files["abs.json"])
    assert code == 0
    assert rep["shallow"]["affine"] is False
    assert len(rep["shallow"]["effective_hyperplanes"]) == 1
    same = Network.from_lists(1, [([[1], [1]], [0, 0]), ([[1, -1]], [0])])
    p = files["dir"] / "same.json"
    p.write_bytes(serialize_network(same))
    assert run(capsys, "shallow", p)[1]["shallow"]["affine"] is True
    code, _, err = run(capsys, "shallow", files["deep.json"])
    assert code == 4 and "count" in err


def test_oracle(capsys, files):
    code, rep, _ = run(capsys, "oracle", "line", files["abs.json"])
    assert code == 0 and rep["oracle"]["soundness"] == "exact"
    assert [rep["census"]["counts"][str(d)]["value"] for d in range(1, 7)] == [3, 2, 2, 2, 2, 2]
    a = run(capsys, "oracle", "sample", files["plane.json"], "--trials", "50", "--seed", "3")[1]
    b = run(capsys, "oracle", "sample", files["plane.json"], "--trials", "50", "--seed", "3")[1]
    assert a == b and a["oracle"]["soundness"] == "lower bound"
    assert run(capsys, "oracle", "line", files["plane.json"])[0] == 4


def test_input_errors(capsys, files):
    assert main(["count", files["broken.json"]]) == 3
    assert main(["count", str(files["dir"] / "missing.json")]) == 3


def test_resource_limit(capsys, files):
    assert main(["count", files["plane.json"], "--max-lps", "3"]) == 5


def test_module_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "reluregions", "count", files["abs.json"]], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["version"]
