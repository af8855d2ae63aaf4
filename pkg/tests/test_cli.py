import json
import math

import numpy as np
import pytest

from entwit.cli import main
from entwit.linalg import HermitianMatrix, SystemShape
from entwit.states import state_from_json
from entwit.witnesses import SSR_DIAGONAL, Witness, witness_to_json


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


def read_csv(path):
    """Header comment, column names, data rows, trailing comment dict."""
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# version=")
    cols = lines[1].split(",")
    rows = []
    trailing = {}
    for ln in lines[2:]:
        if ln.startswith("# "):
            k, v = ln[2:].split("=", 1)
            trailing[k] = v
        else:
            rows.append(ln.split(","))
    return cols, rows, trailing


def test_compute_on_bell(tmp_path, capsys):
    st = tmp_path / "bell.json"
    assert main(["gen-state", "--kind", "bell", "--d", "2", "--out", str(st)]) == 0
    rc, out = run(capsys, "compute", "--measure", "negativity", "--state", str(st))
    assert rc == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(0.5, abs=1e-10)
    rc, out = run(capsys, "compute", "--measure", "rg-ppt-closed", "--state", str(st))
    assert rc == 0
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-10)
    rc, out = run(capsys, "compute", "--measure", "concurrence", "--state", str(st))
    assert rc == 0
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-10)


def test_compute_ssr_on_vc_state(tmp_path, capsys):
    st = tmp_path / "vc.json"
    main(["gen-state", "--kind", "vc-ssr", "--out", str(st)])
    rc, out = run(capsys, "compute", "--measure", "ssr-nonlocality", "--state", str(st))
    assert rc == 0
    assert json.loads(out)["value"] == pytest.approx(0.5, abs=1e-5)


def test_compute_writes_witness(tmp_path, capsys):
    st = tmp_path / "iso.json"
    wt = tmp_path / "w.json"
    main(["gen-state", "--kind", "isotropic", "--d", "3", "--p", "0.9",
          "--out", str(st)])
    rc, out = run(capsys, "compute", "--measure", "e-nm-ppt", "--state", str(st),
                  "--n", "2", "--m", "1", "--witness-out", str(wt))
    assert rc == 0
    doc = json.loads(out)
    # m = 1 and n/(d-1) = 1 tie; value is d F - 1
    f = 0.9 + 0.1 / 9
    assert doc["value"] == pytest.approx(3 * f - 1, abs=1e-5)
    assert wt.exists()
    rc, out = run(capsys, "validate-witness", "--witness", str(wt))
    assert rc == 0
    assert json.loads(out)["ok"] is True
    rc, out = run(capsys, "validate-witness", "--witness", str(wt),
                  "--mc-samples", "100", "--seed", "5")
    assert rc == 0
    doc = json.loads(out)
    assert doc["product_min"] is not None
    assert doc["product_min"] > -1e-6


def test_validate_rejects_bound_violation(tmp_path, capsys):
    w = Witness(
        op=HermitianMatrix(np.diag([1.0, -2.0]), SystemShape([2])),
        kind=SSR_DIAGONAL,
        bounds=(1.0, 1.0),
    )
    path = tmp_path / "bad.json"
    path.write_text(witness_to_json(w))
    rc, out = run(capsys, "validate-witness", "--witness", str(path))
    assert rc == 1
    doc = json.loads(out)
    assert doc["ok"] is False
    assert doc["worst"] == pytest.approx(1.0, abs=1e-12)


def test_gen_state_random_round_trip(tmp_path, capsys):
    st = tmp_path / "r.json"
    rc = main(["gen-state", "--kind", "random", "--dims", "2x3", "--seed", "11",
               "--out", str(st)])
    assert rc == 0
    rho = state_from_json(st.read_text())
    assert rho.shape.local_dims == (2, 3)
    assert np.trace(rho.mat).real == pytest.approx(1.0, abs=1e-12)
    # same seed reproduces the state exactly
    st2 = tmp_path / "r2.json"
    main(["gen-state", "--kind", "random", "--dims", "2x3", "--seed", "11",
          "--out", str(st2)])
    assert st.read_text() == st2.read_text()


def test_fig56_deterministic_across_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["reproduce", "fig56", "--dim", "2", "--samples", "30", "--seed", "9"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--workers", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    cols, rows, trailing = read_csv(a)
    assert cols == ["negativity", "rg_ppt"]
    assert len(rows) == 30
    for neg, rg in rows:
        assert 0.0 <= float(rg) <= 2.0 * float(neg) + 1e-10
    assert float(trailing["fraction_rg_le_2n"]) == 1.0


def test_isotropic_reproduction_matches_closed_form(tmp_path):
    out = tmp_path / "iso.csv"
    rc = main(["reproduce", "isotropic", "--d", "2", "--p-count", "5",
               "--n-list", "0.5,1,2", "--out", str(out)])
    assert rc == 0
    cols, rows, trailing = read_csv(out)
    assert cols == ["d", "p", "n", "closed", "sdp", "abs_diff"]
    assert len(rows) == 15
    assert float(trailing["max_abs_diff"]) <= 1e-5


def test_heisenberg_estimate_matches_witness_column(tmp_path):
    out = tmp_path / "h.csv"
    rc = main(["reproduce", "heisenberg", "--N", "4", "--periodic",
               "--beta-grid", "0:3:7", "--out", str(out)])
    assert rc == 0
    cols, rows, _ = read_csv(out)
    i_wv = cols.index("witness_value")
    i_est = cols.index("estimate")
    i_chi = cols.index("chi_exact")
    for row in rows:
        assert abs(float(row[i_wv]) - float(row[i_est])) <= 1e-10
    # chi columns are only defined away from beta = 0
    assert math.isnan(float(rows[0][i_chi]))
    assert not math.isnan(float(rows[1][i_chi]))
    assert math.isinf(float(rows[0][cols.index("T")]))


def test_example1_rows_and_values(tmp_path):
    out = tmp_path / "e1.csv"
    rc = main(["reproduce", "example1", "--q-count", "3", "--n-list", "1",
               "--out", str(out)])
    assert rc == 0
    cols, rows, _ = read_csv(out)
    assert cols == ["q", "n", "cut", "value"]
    assert len(rows) == 9
    assert all(float(r[3]) >= 0.0 for r in rows)


def test_fig7q_columns(tmp_path):
    out = tmp_path / "f7.csv"
    rc = main(["reproduce", "fig7q", "--a-grid", "0.3:0.3:1",
               "--e-grid", "1.0:1.0:1", "--out", str(out)])
    assert rc == 0
    cols, rows, _ = read_csv(out)
    assert cols == ["a", "e", "dps2_value", "rr_lower", "eof_lower"]
    a, e, v, rr, eof = (float(x) for x in rows[0])
    assert v > 1e-4
    assert rr > 0.0
    assert eof > 0.0


def test_exit_codes(tmp_path, capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
    assert main(["compute", "--measure", "bogus", "--state", "x"]) == 1
    capsys.readouterr()
    rc = main(["compute", "--measure", "negativity",
               "--state", str(tmp_path / "missing.json")])
    assert rc == 1
    capsys.readouterr()
