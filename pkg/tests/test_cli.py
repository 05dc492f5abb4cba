import json

import pytest

from ludics.cli import BOUND, INPUT, NEGATIVE, OK, run
from ludics.core import loads
from ludics.library import BETA, list_design, nat


def make(tmp_path, name, *args):
    out = tmp_path / name
    assert run(["make", *args, "--out", str(out)]) == OK
    return out


def test_make_round_trips(tmp_path):
    f = make(tmp_path, "n5.lud", "nat", "5")
    assert loads(f.read_text()) == nat(5)
    g = make(tmp_path, "l.lud", "list", "5,7,9")
    assert loads(g.read_text()) == list_design((5, 7, 9))


@pytest.mark.parametrize(
    "args",
    [["nat", "3"], ["list", "e"], ["fsigma", "4"], ["su", "2"], ["pred"], ["sum"], ["pair", "1", "2"],
     ["cons", "3"], ["el2"], ["el", "3"], ["proj1"], ["proj2"], ["id"], ["ep", "3,1,4"]],
)
def test_every_emitted_design_reparses(tmp_path, args):
    f = make(tmp_path, "d.lud", *args, "--depth", "3")
    d = loads(f.read_text())
    assert run(["validate", str(f)]) == OK
    assert loads(f.read_text()) == d


def test_make_from_files(tmp_path):
    a = make(tmp_path, "a.lud", "nat", "2", "--base", "sigma.1.1")
    b = make(tmp_path, "b.lud", "nat", "3", "--base", "sigma.2.2")
    p = make(tmp_path, "p.lud", "sigma-pair", str(a), str(b))
    q = make(tmp_path, "q.lud", "pair", "2", "3")
    assert loads(p.read_text()) == loads(q.read_text())


def test_normalize_net_with_trace_and_dot(tmp_path):
    make(tmp_path, "m3.lud", "nat", "3")
    make(tmp_path, "su2.lud", "su", "2")
    net = tmp_path / "m3_su2.net"
    net.write_text("; three plus two\n(base (right beta))\nm3.lud\nsu2.lud\n")
    out, dot = tmp_path / "out.txt", tmp_path / "net.dot"
    assert run(["normalize", str(net), "--trace", "--dot", str(dot), "--out", str(out)]) == OK
    text = out.read_text()
    design_text, trace = text.split("; trace\n")
    assert loads(design_text) == nat(5, BETA)
    assert trace.splitlines()[0] == "+ sigma {0}"
    assert "style=dashed" in dot.read_text()


def test_normalize_rejects_wrong_declared_base(tmp_path):
    make(tmp_path, "m3.lud", "nat", "3")
    make(tmp_path, "su2.lud", "su", "2")
    net = tmp_path / "bad.net"
    net.write_text("(base (right alpha))\nm3.lud\nsu2.lud\n")
    assert run(["normalize", str(net)]) == INPUT


def test_normalize_failure_is_negative(tmp_path):
    p = tmp_path / "p.lud"
    p.write_text("(base (right sigma))\n(+ sigma {1})")
    n = make(tmp_path, "f.lud", "fsigma", "2")
    assert run(["normalize", str(p), str(n)]) == NEGATIVE


def test_normalize_fuel_is_bound_exit(tmp_path):
    a = make(tmp_path, "m.lud", "nat", "9")
    b = make(tmp_path, "s.lud", "su", "9", "--depth", "12")
    assert run(["normalize", str(a), str(b), "--fuel", "2"]) == BOUND


def test_orth_exit_codes(tmp_path):
    n5 = make(tmp_path, "nat5.lud", "nat", "5")
    f6 = make(tmp_path, "fsig6.lud", "fsigma", "6")
    f3 = make(tmp_path, "fsig3.lud", "fsigma", "3")
    assert run(["orth", str(n5), str(f6)]) == OK
    assert run(["orth", str(n5), str(f3)]) == NEGATIVE


def test_orth_needs_closed_net(tmp_path):
    n = make(tmp_path, "n.lud", "nat", "1")
    s = make(tmp_path, "s.lud", "su", "1")
    assert run(["orth", str(n), str(s)]) == INPUT


def test_validate_reports_violation(tmp_path, capsys):
    f = tmp_path / "bad.lud"
    f.write_text("(base (right xi))\n(+ xi {0} (- xi.0 ({0} (+ xi.0.0 {1})) ({1} (+ xi.0.0 {}))))")
    assert run(["validate", str(f)]) == NEGATIVE
    assert "invalid" in capsys.readouterr().out


def test_validate_totality_message(tmp_path, capsys):
    f = tmp_path / "empty.lud"
    f.write_text("(base (right xi))\n")
    code = run(["validate", str(f)])
    out = capsys.readouterr()
    # the reader refuses an empty positive design before validation
    assert code == INPUT
    assert "Totality" in out.err


def test_parse_error_is_input_error(tmp_path):
    f = tmp_path / "junk.lud"
    f.write_text("(base (right xi)\n(+ xi")
    assert run(["validate", str(f)]) == INPUT


def test_missing_file_and_unknown_verb(tmp_path):
    assert run(["validate", str(tmp_path / "nope.lud")]) == INPUT
    assert run(["frobnicate"]) == INPUT
    assert run(["make", "unicorn"]) == INPUT


def test_paths_of_a_design(tmp_path):
    f = make(tmp_path, "n2.lud", "nat", "2")
    out = tmp_path / "paths.txt"
    assert run(["paths", str(f), "--out", str(out)]) == OK
    assert len(out.read_text().splitlines()) == 5
    assert run(["paths", str(f), "--visitable", "--out", str(out)]) == OK
    assert len(out.read_text().splitlines()) == 5


def test_dual_verb(tmp_path):
    good = tmp_path / "good.path"
    good.write_text("(base (right xi))\n+ xi {1}\n- xi.1 {0}\n")
    out = tmp_path / "dual.path"
    assert run(["dual", str(good), "--out", str(out)]) == OK
    assert out.read_text().splitlines()[1:] == ["- xi {1}", "+ xi.1 {0}"]
    bad = tmp_path / "bad.path"
    bad.write_text("(base (right xi sigma))\n+ xi {0}\n- xi.0 {1}\n+ sigma {1}\n")
    assert run(["dual", str(bad)]) == NEGATIVE
    notpath = tmp_path / "np.path"
    notpath.write_text("(base (right xi))\n- xi {0}\n")
    assert run(["dual", str(notpath)]) == INPUT


def test_dual_output_reparses(tmp_path):
    good = tmp_path / "good.path"
    good.write_text("(base (right xi))\n+ xi {1}\n- xi.1 {0}\n")
    out = tmp_path / "dual.path"
    run(["dual", str(good), "--out", str(out)])
    back = tmp_path / "back.path"
    assert run(["dual", str(out), "--out", str(back)]) == OK
    assert back.read_text().splitlines()[1:3] == ["+ xi {1}", "- xi.1 {0}"]


def test_incarnate(tmp_path, capsys):
    f = make(tmp_path, "n2.lud", "nat", "2")
    assert run(["incarnate", str(f), "--family", "nat", "--depth", "3"]) == OK
    assert "material" in capsys.readouterr().out
    nc = tmp_path / "noncan.lud"
    nc.write_text("(base (right sigma))\n(+ sigma {0,1} (- sigma.0 ({1} (+ sigma.0.1 {}))) (- sigma.1 ({1} (+ sigma.1.1 {}))))")
    assert run(["incarnate", str(nc), "--family", "nat", "--depth", "3"]) == NEGATIVE


def test_principal_verb(tmp_path):
    out = tmp_path / "rep.json"
    assert run(["principal", "--family", "nat", "--depth", "5", "--json", "--out", str(out)]) == OK
    data = json.loads(out.read_text())
    assert data["verdict"] == "equal" and data["routes_agree"] is True


def test_principal_negative(tmp_path):
    a = tmp_path / "a.lud"
    b = tmp_path / "b.lud"
    a.write_text("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({0} (+ sigma.0.0 {}))))")
    b.write_text("(base (right sigma))\n(+ sigma {0} (- sigma.0 ({1} (+ sigma.0.1 {}))))")
    assert run(["principal", "--generators", str(a), str(b)]) == NEGATIVE


def test_lemmas_verb(tmp_path):
    out = tmp_path / "lem.json"
    assert run(["lemmas", "oppch", "negact", "--json", "--out", str(out)]) == OK
    data = json.loads(out.read_text())
    assert data["passed"] is True
    assert run(["lemmas", "no-such-lemma"]) == INPUT
