import json
from pathlib import Path

from rankineq.cli import main
from rankineq.expressions import builtin, evaluate
from rankineq.subspace import parse_assignment

REPRO = Path(__file__).resolve().parent.parent / "repro"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def machine_block(stdout):
    pairs = {}
    for line in stdout.splitlines():
        if "=" in line and " " not in line.split("=", 1)[0]:
            key, value = line.split("=", 1)
            pairs[key] = value
    return pairs


def test_ineq_eval_violation(capsys):
    code, out, _ = run(capsys, "ineq", "eval", "--ineq", "t8",
                       "--assignment", str(REPRO / "t8_char3.sub"))
    assert code == 1
    block = machine_block(out)
    assert block["residual"] == "-1"
    assert block["verdict"] == "violated"


def test_ineq_eval_non_t8(capsys):
    code, out, _ = run(capsys, "ineq", "eval", "--ineq", "non-t8",
                       "--assignment", str(REPRO / "nont8_char5.sub"))
    assert code == 1
    assert machine_block(out)["residual"] == "-1"


def test_ineq_eval_holds(capsys):
    code, out, _ = run(capsys, "ineq", "eval", "--ineq", "ingleton",
                       "--assignment", str(REPRO / "zero.sub"))
    assert code == 0
    block = machine_block(out)
    assert block["residual"] == "0"
    assert block["verdict"] == "holds"


def test_ineq_eval_expression_file(capsys):
    code, out, _ = run(capsys, "ineq", "eval",
                       "--ineq", str(REPRO / "t8.expr"),
                       "--assignment", str(REPRO / "t8_char3.sub"))
    assert code == 1
    assert machine_block(out)["residual"] == "-1"


def test_ineq_eval_bad_file(capsys):
    code, _, err = run(capsys, "ineq", "eval", "--ineq", "t8",
                       "--assignment", "no_such_file.sub")
    assert code == 2
    assert "error" in err


def test_ineq_eval_unbound_variable(capsys, tmp_path):
    partial = tmp_path / "partial.sub"
    partial.write_text("field 3\nambient 4\nA = span{(1,0,0,0)}\n")
    code, _, err = run(capsys, "ineq", "eval", "--ineq", "t8",
                       "--assignment", str(partial))
    assert code == 2
    assert "error" in err


def test_ineq_search_exhaustive_gf3(capsys):
    code, out, _ = run(capsys, "ineq", "search", "--ineq", "t8",
                       "--char", "3", "--dim", "4",
                       "--strategy", "exhaustive-1dim")
    assert code == 1
    block = machine_block(out)
    assert block["found"] == "violation"
    # the printed assignment must itself re-verify as violating
    start = out.index("field 3")
    end = out.index("found=")
    ctx = parse_assignment(out[start:end])
    assert evaluate(builtin("t8"), ctx) < 0


def test_ineq_search_random_none(capsys):
    code, out, _ = run(capsys, "ineq", "search", "--ineq", "t8",
                       "--char", "2", "--dim", "4", "--strategy", "random",
                       "--seed", "1", "--trials", "2000", "--max-dim", "4")
    assert code == 0
    assert machine_block(out)["found"] == "none"


def test_ineq_search_unknown_name(capsys):
    code, _, err = run(capsys, "ineq", "search", "--ineq", "bogus",
                       "--char", "3", "--dim", "4",
                       "--strategy", "exhaustive-1dim")
    assert code == 2
    assert "bogus" in err


def test_net_verify_t8_gf3(capsys):
    code, out, _ = run(capsys, "net", "verify", "--network", "t8",
                       "--code", "t8-gf3")
    assert code == 0
    block = machine_block(out)
    assert block["verified"] == "true"
    assert block["demand.n9"] == "ok"


def test_net_verify_t8_gf5(capsys):
    code, out, _ = run(capsys, "net", "verify", "--network", "t8",
                       "--code", "t8-gf5")
    assert code == 1
    block = machine_block(out)
    assert block["failing"] == "n9,n11,n13,n14"


def test_net_verify_missing_inverse(capsys):
    code, out, _ = run(capsys, "net", "verify", "--network", "non-t8",
                       "--code", "non-t8-gf3")
    assert code == 1
    block = machine_block(out)
    assert block["error"] == "missing-inverse"
    assert "3" in block["detail"]


def test_net_verify_from_files(capsys):
    code, out, _ = run(capsys, "net", "verify",
                       "--network", str(REPRO / "butterfly.net"),
                       "--code", str(REPRO / "butterfly_gf2.code"))
    assert code == 0
    assert machine_block(out)["verified"] == "true"


def test_net_bound_inequality(capsys):
    code, out, _ = run(capsys, "net", "bound", "--network", "t8",
                       "--ineq", "t8")
    assert code == 0
    assert machine_block(out)["bound"] == "48/49"
    code, out, _ = run(capsys, "net", "bound", "--network", "non-t8",
                       "--ineq", "non-t8")
    assert code == 0
    assert machine_block(out)["bound"] == "28/29"


def test_net_bound_cut(capsys):
    code, out, _ = run(capsys, "net", "bound", "--network", "non-t8", "--cut")
    assert code == 0
    assert machine_block(out)["bound"] == "1"
    code, out, _ = run(capsys, "net", "bound", "--network", "t8", "--cut",
                       "--demand", "n9")
    assert code == 0
    assert machine_block(out)["bound"] == "1"


def test_net_bound_mismatched_inequality(capsys):
    code, _, err = run(capsys, "net", "bound", "--network", "non-t8",
                       "--ineq", "t8")
    assert code == 2
    assert "H(Y|W,X,Z)" in err


def test_net_bound_flag_conflicts(capsys):
    code, _, err = run(capsys, "net", "bound", "--network", "t8")
    assert code == 2
    code, _, err = run(capsys, "net", "bound", "--network", "t8", "--cut",
                       "--ineq", "t8")
    assert code == 2


def test_matroid_info(capsys):
    code, out, _ = run(capsys, "matroid", "info", "--name", "t8-example-2x5",
                       "--char", "2")
    assert code == 0
    block = machine_block(out)
    assert block["rank"] == "2"
    assert block["bases"] == "5"
    assert block["circuits"] == "{a,b,e};{a,d};{b,d,e};{c}"


def test_matroid_info_unknown(capsys):
    code, _, err = run(capsys, "matroid", "info", "--name", "fano",
                       "--char", "2")
    assert code == 2


def test_entropy_eval_ingleton(capsys):
    code, out, _ = run(capsys, "entropy", "eval", "--dist", "ingleton-4atom",
                       "--expr", "ingleton")
    assert code == 1
    block = machine_block(out)
    assert block["verdict"] == "violated"
    assert float(block["residual"]) < -0.12


def test_entropy_eval_from_file(capsys):
    code, out, _ = run(capsys, "entropy", "eval",
                       "--dist", str(REPRO / "ingleton.dist"),
                       "--expr", "shannon-elemental")
    assert code == 0
    assert machine_block(out)["verdict"] == "holds"


def test_entropy_eval_base_flag(capsys, tmp_path):
    expr = tmp_path / "ha.expr"
    expr.write_text("H(A)\n")
    # a uniform 4-way value has entropy 2 in base 2 and 1 in base 4
    dist = tmp_path / "quad.dist"
    dist.write_text("vars A\n" + "".join(f"atom {i} : 1/4\n" for i in range(4)))
    _, out2, _ = run(capsys, "entropy", "eval", "--dist", str(dist),
                     "--expr", str(expr), "--base", "2")
    _, out4, _ = run(capsys, "entropy", "eval", "--dist", str(dist),
                     "--expr", str(expr), "--base", "4")
    assert abs(float(machine_block(out2)["residual"]) - 2.0) < 1e-12
    assert abs(float(machine_block(out4)["residual"]) - 1.0) < 1e-12


def test_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "net", "bound",
                       "--network", "t8", "--ineq", "t8")
    assert code == 0
    data = json.loads(out)
    assert data["bound"] == "48/49"


def test_workers_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("RANKINEQ_WORKERS", "not-a-number")
    code, _, err = run(capsys, "ineq", "search", "--ineq", "t8",
                       "--char", "2", "--dim", "4", "--strategy", "random",
                       "--seed", "1", "--trials", "10")
    assert code == 2
    monkeypatch.setenv("RANKINEQ_WORKERS", "2")
    code, out, _ = run(capsys, "ineq", "search", "--ineq", "t8",
                       "--char", "2", "--dim", "4", "--strategy", "random",
                       "--seed", "1", "--trials", "10")
    assert code == 0
