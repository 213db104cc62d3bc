import csv
import io
import json
import subprocess
import sys

import pytest

from dcsit_gdof import cli, core
from dcsit_gdof.core import RegionCase


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bounds_symmetric_point(capsys):
    code, out, _ = run(capsys, "bounds", "--alpha1", "1", "--alpha2", "1")
    assert code == 0
    (row,) = rows(out)
    assert row["upper"] == row["lower"] == row["closed_form"] == "1.333333333"
    assert row["tight"] == "1" and row["region"] == "BOTH_WEAK"


def test_bounds_open_region(capsys):
    code, out, _ = run(capsys, "bounds", "--alpha1", "1.5", "--alpha2", "0.2")
    (row,) = rows(out)
    assert row["region"] == "MIXED_OPEN" and row["closed_form"] == "OPEN"
    assert row["lower"] == "" and row["a_sum_star"] == ""
    assert row["upper"] == "1.750000000"  # single-user cap binds, see test_core


@pytest.mark.xfail(strict=True, reason="1.766666667 ignores the single-user cap d1 <= 1")
def test_bounds_open_region_uncapped_upper(capsys):
    _, out, _ = run(capsys, "bounds", "--alpha1", "1.5", "--alpha2", "0.2")
    assert rows(out)[0]["upper"] == "1.766666667"


def test_bounds_origin_and_swap(capsys):
    _, out, _ = run(capsys, "bounds", "--alpha1", "0", "--alpha2", "0")
    (row,) = rows(out)
    assert row["upper"] == row["lower"] == "2.000000000" and row["tight"] == "1"
    _, out, _ = run(capsys, "bounds", "--alpha1", "0.5", "--alpha2", "2", "--format", "json")
    obj = json.loads(out)
    assert obj["swapped"] is True and obj["region"] == "MIXED_COVERED"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--alpha1", "-1", "--alpha2", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--alpha1", "abc", "--alpha2", "0"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "sweep", "--min", "2", "--max", "1")
    assert code == 2 and "min" in err


def test_sweep_count_and_order(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--min", "0", "--max", "2", "--step", "0.5", "--out", str(out))
    assert code == 0
    text = out.read_bytes().decode("utf-8")
    assert text.splitlines()[0] == "alpha1,alpha2,region,lower,upper,tight,a_sum_star"
    assert "\r" not in text
    table = rows(text)
    assert len(table) == 25
    keys = [(float(r["alpha1"]), float(r["alpha2"])) for r in table]
    assert keys == sorted(keys)
    one = next(r for r in table if r["alpha1"] == r["alpha2"] == "1.000000000")
    assert one["tight"] == "1" and one["lower"] == "1.333333333"
    for r in table:
        assert (r["lower"] == "") == (r["region"] == "MIXED_OPEN")
        assert r["upper"] != ""
        if r["region"] in ("BOTH_WEAK", "MIXED_OPEN"):
            assert r["a_sum_star"] == ""


def _caps_bind(a1, a2):
    """True when the two weighted converse rows meet outside d_i <= 1."""
    a, _ = core.canonicalize((a1, a2))
    r1 = core.converse_weighted_rhs(a.alpha2)
    r2 = core.converse_weighted_rhs(a.alpha1)
    d1 = 4 / 3 * (r1 - r2 / 2)
    d2 = 4 / 3 * (r2 - r1 / 2)
    return d1 > 1 + 1e-12 or d2 > 1 + 1e-12


def test_sweep_lower_exceeds_upper_only_where_a_cap_binds(capsys):
    _, out, _ = run(capsys, "sweep", "--min", "0", "--max", "2", "--step", "0.5")
    for r in rows(out):
        if r["lower"] == "":
            continue
        over = float(r["lower"]) > float(r["upper"]) + 1e-9
        if over:
            assert _caps_bind(float(r["alpha1"]), float(r["alpha2"]))
        if not _caps_bind(float(r["alpha1"]), float(r["alpha2"])):
            assert not over


@pytest.mark.xfail(strict=True, reason="closed-form lower value exceeds the capped converse")
def test_sweep_lower_never_exceeds_upper(capsys):
    _, out, _ = run(capsys, "sweep", "--min", "0", "--max", "2", "--step", "0.5")
    for r in rows(out):
        if r["lower"]:
            assert float(r["lower"]) <= float(r["upper"]) + 1e-9


def test_sweep_json_mirrors_csv(capsys):
    _, text_csv, _ = run(capsys, "sweep", "--min", "0", "--max", "1", "--step", "0.5")
    _, text_json, _ = run(capsys, "sweep", "--min", "0", "--max", "1", "--step", "0.5", "--format", "json")
    objs = [json.loads(line) for line in text_json.splitlines()]
    table = rows(text_csv)
    assert len(objs) == len(table) == 9
    for obj, r in zip(objs, table):
        assert list(obj) == list(cli.SWEEP_FIELDS)
        assert obj["region"] == r["region"]
        assert f"{obj['upper']:.9f}" == r["upper"]


def test_sweep_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--step", "1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 3 and "I/O" in err


def test_ledger_examples(capsys):
    _, out, _ = run(capsys, "ledger", "--alpha1", "0.6", "--alpha2", "0.3")
    lines = out.splitlines()
    assert "# d1=0.900000000" in lines and "# d2=0.800000000" in lines
    assert len(rows("\n".join(l for l in lines if not l.startswith("#")))) == 8
    _, out, _ = run(capsys, "ledger", "--alpha1", "1", "--alpha2", "1", "--format", "json")
    obj = json.loads(out)
    assert obj["d1"] == obj["d2"] == round(2 / 3, 9)


def test_ledger_wrong_region_points_to_bounds(capsys):
    code, _, err = run(capsys, "ledger", "--alpha1", "1.5", "--alpha2", "0.5")
    assert code == 2 and "bounds" in err


def test_slopes_rows(capsys):
    code, out, _ = run(
        capsys, "slopes", "--selector", "BE7,BE5", "--k", "2,0", "--alpha2", "2.5", "--trials", "2000",
    )
    assert code == 0
    assert out.splitlines()[0] == "selector,k,alpha2,slope,expected,abs_err,r2"
    table = {(r["selector"], r["k"]): r for r in rows(out)}
    assert len(table) == 4
    assert float(table["BE7", "2"]["expected"]) == 0.0
    be5 = table["BE5", "0"]
    assert float(be5["expected"]) == 2.5 and float(be5["abs_err"]) <= 0.1


def test_slopes_bad_inputs(capsys):
    assert run(capsys, "slopes", "--selector", "BE9", "--trials", "100")[0] == 2
    assert run(capsys, "slopes", "--rhos", "1e2,1e3", "--trials", "100")[0] == 2
    assert run(capsys, "slopes", "--k", "x")[0] == 2


def test_audit_command(capsys):
    code, out, _ = run(capsys, "audit", "--alpha1", "0.8", "--alpha2", "0.6", "--trials", "200")
    assert code == 0 and len(rows(out)) == 20


def test_verify_coarse_counts_points(capsys):
    code, out, _ = run(capsys, "verify", "--step", "0.5")
    lines = out.splitlines()
    assert [l.split()[1] for l in lines[:-1]] == [
        "tightness", "kt_exhaustion", "continuity", "maximin", "lp_sampling",
    ]
    total = sum(int(l.split("(")[1].split()[0]) for l in lines[:-1])
    assert total >= 49
    assert code == (0 if lines[-1] == "PASS" else 1)


@pytest.mark.xfail(strict=True, reason="tightness and max-min checks fail on the default grid")
def test_verify_defaults_pass(capsys):
    assert run(capsys, "verify")[0] == 0


@pytest.mark.xfail(strict=True, reason="tightness and max-min checks fail on the coarse grid")
def test_verify_coarse_passes(capsys):
    assert run(capsys, "verify", "--step", "0.5")[0] == 0


def test_verify_catches_perturbed_coefficients(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "--step", "0.5")
    assert out.splitlines()[2].startswith("PASS continuity")
    original = core.theorem1_sum_gdof

    def perturbed(a):
        if core.classify_region(a) is RegionCase.MIXED_COVERED:
            return min((4.03 + a.alpha1 - a.alpha2) / 3, 2)
        return original(a)

    monkeypatch.setattr(core, "theorem1_sum_gdof", perturbed)
    code, out, _ = run(capsys, "verify", "--step", "0.5")
    assert code == 1
    line = out.splitlines()[2]
    assert line.startswith("FAIL continuity") and "first counterexample" in line


def test_output_is_byte_identical():
    cmd = [sys.executable, "-m", "dcsit_gdof.cli", "slopes", "--selector", "BE6", "--k", "1",
           "--alpha2", "1.5", "--trials", "300", "--seed", "9"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") == 2
