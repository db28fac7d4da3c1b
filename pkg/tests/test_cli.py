"""CLI behavior: exit codes, report files, determinism."""

import json

import pytest

from locfusion.cli import main


def run(args):
    return main(args)


def test_group_info(capsys):
    assert run(["group", "info", "instance-a"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 24 and out["sylow_order"] == 8


def test_locality_build_and_validate(tmp_path):
    out = tmp_path / "r.json"
    assert run(["locality", "build", "instance-b", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["carrier_size"] == 24
    assert run(["locality", "validate", "instance-a",
                "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] is True


def test_unknown_descriptor_exits_2(capsys):
    assert run(["group", "info", "no-such-instance"]) == 2


def test_bad_delta_exits_2(tmp_path, capsys):
    d = {
        "name": "bad-delta",
        "group": {"degree": 4,
                  "generators": [[2, 3, 4, 1], [2, 1, 3, 4]]},
        "p": 2,
        "sylow": "auto",
        # order-4 members without the order-8 overgroup: not closed
        "delta": {"explicit": [
            [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]],
            [[1, 2, 3, 4], [2, 3, 4, 1], [3, 4, 1, 2], [4, 1, 2, 3]]]},
        "normal_subgroups": {}, "k_choices": {}, "fusion_products": {}
    }
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    assert run(["locality", "validate", str(p)]) == 2
    err = json.loads(capsys.readouterr().out)
    assert "error" in err


def test_theorem1_with_non_normal_k_exits_2(tmp_path, capsys):
    from locfusion.instances import load_descriptor
    d = load_descriptor("instance-b")
    d["theorem1"]["k"] = ["u2"]
    p = tmp_path / "tweaked.json"
    p.write_text(json.dumps(d))
    assert run(["theorem1", str(p)]) == 2


def test_theorem_commands(capsys):
    assert run(["theorem1", "instance-b"]) == 0
    assert run(["theorem2", "instance-b"]) == 0
    assert run(["restriction", "instance-b"]) == 0
    capsys.readouterr()


def test_fusion_commands(tmp_path):
    out = tmp_path / "f.json"
    assert run(["fusion", "build", "instance-a", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["morphisms"]) == 28
    assert run(["fusion", "saturate-check", "group-8",
                "--out", str(out)]) == 0


def test_product_and_verify(tmp_path):
    out = tmp_path / "p.json"
    assert run(["product-ed", "product-24", "--product", "i",
                "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["products"][0]["matches_oracle"] is True
    assert run(["verify-ed", "product-24", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert {p["instance"] for p in rep["products"]} == \
        {"product-24:i", "product-24:ii", "product-24:subn"}


def test_suite_exit_zero(tmp_path):
    out = tmp_path / "s.json"
    for name in ("instance-a", "product-24"):
        assert run(["suite", name, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["ok"] is True


def test_reports_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["suite", "product-24", "--out", str(a)]) == 0
    assert run(["suite", "product-24", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_echo_with_out(tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["group", "info", "instance-a", "--out", str(out), "--json"])
    assert json.loads(capsys.readouterr().out)["order"] == 24
    # without --json, nothing on stdout
    run(["group", "info", "instance-a", "--out", str(out)])
    assert capsys.readouterr().out == ""


def test_seed_recorded(capsys):
    run(["group", "info", "instance-a", "--seed", "7"])
    assert json.loads(capsys.readouterr().out)["seed"] == 7
