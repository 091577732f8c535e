import csv
import io
import json

import pytest

from conftest import OVERLAP, SEPARATED, LOWER_B, make
from crwrouter.cli import main


def write_config(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg.to_flat()))
    return str(p)


def read_csv(path):
    lines = [ln for ln in open(path).read().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_spectrum_overlapping_bands(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--config", write_config(tmp_path, OVERLAP), "--emin", "4", "--emax", "12",
                 "--points", "801", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["E", "T_a", "R_a", "transfer_total", "flux_residual"]
    energies = [float(r["E"]) for r in rows]
    assert energies == sorted(energies) and len(rows) == 801
    filled = [r for r in rows if r["T_a"]]
    assert all(float(r["flux_residual"]) < 1e-10 for r in filled)
    by_e = {float(r["E"]): r for r in filled}
    assert float(by_e[8.0]["T_a"]) == 1
    # two transfer peaks, symmetric about the transparency point
    tr = [float(r["transfer_total"]) for r in filled]
    peaks = [i for i in range(1, len(tr) - 1) if tr[i] > tr[i - 1] and tr[i] > tr[i + 1]]
    assert len(peaks) == 2
    # band-edge and out-of-band points are blank with a comment marker
    text = out.read_text()
    assert "# band edge at E=6" in text and "# outside band a at E=4" in text
    assert "\n4,,,,\n" in text


def test_spectrum_nonoverlap_confined(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--config", write_config(tmp_path, SEPARATED), "--emin", "6", "--emax", "10",
                 "--points", "401", "--out", str(out)]) == 0
    for r in read_csv(out):
        if r["T_a"]:
            assert float(r["T_a"]) + float(r["R_a"]) == pytest.approx(1, abs=1e-10)
            assert float(r["transfer_total"]) == 0


def test_spectrum_bright_column(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--config", write_config(tmp_path, OVERLAP), "--emin", "6.5", "--emax", "9.5",
                 "--points", "7", "--quantities", "T_a,T_B", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["E", "T_a", "T_B"]
    assert float(rows[3]["T_B"]) == 1
    out2 = tmp_path / "s2.csv"
    main(["spectrum", "--config", write_config(tmp_path, SEPARATED), "--emin", "6.5", "--emax", "9.5",
          "--points", "7", "--quantities", "T_a,T_B", "--out", str(out2)])
    assert list(read_csv(out2)[0]) == ["E", "T_a"]


def test_spectrum_deterministic(tmp_path):
    cfg = write_config(tmp_path, OVERLAP)
    args = ["spectrum", "--config", cfg, "--emin", "5", "--emax", "11", "--points", "333"]
    main(args + ["--out", str(tmp_path / "a.csv")])
    main(args + ["--out", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize(
    "extra",
    [
        ["--quantities", ""],
        ["--quantities", "T_x"],
        ["--emin", "9", "--emax", "7"],
        ["--points", "1"],
    ],
)
def test_spectrum_bad_sweep(tmp_path, extra):
    base = {"--emin": "6", "--emax": "10", "--points": "11"}
    args = ["spectrum", "--config", write_config(tmp_path, OVERLAP)]
    for k, v in base.items():
        if k not in extra:
            args += [k, v]
    assert main(args + extra) == 3


@pytest.mark.parametrize(
    "content",
    ["not json", "[1, 2]", json.dumps({"xi_a": 1}), json.dumps(OVERLAP.to_flat() | {"extra": 1}),
     json.dumps(OVERLAP.to_flat() | {"rabi": -1}), json.dumps(OVERLAP.to_flat() | {"g_a": "0.5"})],
)
def test_bad_config(tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert main(["spectrum", "--config", str(p), "--emin", "6", "--emax", "10"]) == 2
    assert main(["bound-states", "--config", str(p)]) == 2


def test_missing_config_file(tmp_path):
    assert main(["bound-states", "--config", str(tmp_path / "nope.json")]) == 2


def test_bright_dark(tmp_path):
    out = tmp_path / "bd.csv"
    assert main(["bright-dark", "--config", write_config(tmp_path, OVERLAP), "--emin", "6", "--emax", "10",
                 "--points", "9", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["E", "T_B", "R_B"]
    by_e = {float(r["E"]): r for r in rows if r["T_B"]}
    assert float(by_e[8.0]["T_B"]) == 1
    assert float(by_e[7.0]["R_B"]) == pytest.approx(1, abs=1e-10)
    assert main(["bright-dark", "--config", write_config(tmp_path, SEPARATED), "--emin", "6", "--emax", "10"]) == 2


def test_bound_states_json(tmp_path):
    out = tmp_path / "b.json"
    assert main(["bound-states", "--config", write_config(tmp_path, SEPARATED), "--out", str(out)]) == 0
    recs = json.loads(out.read_text())
    kinds = {r["kind"] for r in recs}
    assert kinds == {"single_crw_b", "total_system"}
    for r in recs:
        assert set(r) >= {"kind", "energy", "branch_a", "branch_b", "kappa_a", "kappa_b", "residual"}
        assert abs(r["residual"]) < 1e-10


def test_bound_states_rabi_locus(tmp_path):
    out = tmp_path / "b.json"
    cfg = write_config(tmp_path, LOWER_B.with_(g_a=0.0))
    assert main(["bound-states", "--config", cfg, "--rabi-grid", "0:1:101", "--out", str(out)]) == 0
    recs = [r for r in json.loads(out.read_text()) if r["kind"] == "single_crw_b" and r["branch_b"] == 1]
    by_rabi = {}
    for r in recs:
        by_rabi.setdefault(r["rabi"], []).append(r["energy"])
    assert len(by_rabi[0.0]) == 1
    seps = [max(v) - min(v) for k, v in sorted(by_rabi.items()) if k > 0]
    assert all(len(v) == 2 for k, v in by_rabi.items() if k > 0)
    assert all(b > a for a, b in zip(seps, seps[1:]))
    assert main(["bound-states", "--config", cfg, "--rabi-grid", "1:0:5"]) == 3


def test_bound_states_decoupled_empty(tmp_path):
    out = tmp_path / "b.json"
    assert main(["bound-states", "--config", write_config(tmp_path, SEPARATED.with_(g_a=0, g_b=0)),
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == []


def test_oracle_compare_decoupled(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["oracle-compare", "--config", write_config(tmp_path, make(g_a=0, g_b=0)), "--energies", "8",
                 "--lattice-size", "600", "--packet-width", "20", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["delta_T_a"]) < 1e-6 and float(row["delta_transfer"]) < 1e-6


def test_oracle_compare_overlapping_bands(tmp_path):
    # 7 and 9 sit on the transfer peaks; a 30-site packet smears them by ~0.027
    out = tmp_path / "o.csv"
    assert main(["oracle-compare", "--config", write_config(tmp_path, OVERLAP), "--energies", "7.0,8.0,9.0",
                 "--packet-width", "40", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 3


def test_oracle_compare_error_paths(tmp_path):
    cfg = write_config(tmp_path, OVERLAP)
    assert main(["oracle-compare", "--config", cfg, "--energies", "8", "--lattice-size", "100"]) == 5
    assert main(["oracle-compare", "--config", cfg, "--energies", "8", "--lattice-size", "20"]) == 5
    assert main(["oracle-compare", "--config", cfg, "--energies", "6.01"]) == 3
    assert main(["oracle-compare", "--config", cfg, "--energies", "x"]) == 3
    narrow = write_config(tmp_path, OVERLAP.with_(rabi=0.2), "weak.json")
    assert main(["oracle-compare", "--config", narrow, "--energies", "7.8", "--packet-width", "3",
                 "--lattice-size", "300"]) == 4


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "crwrouter", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "0.1.0"
