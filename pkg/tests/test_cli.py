import json

import pytest

from reinhardt import SeriesSpec
from reinhardt.cli import main
from conftest import LN2


@pytest.fixture()
def files(tmp_path, full_geom, f_zero, wedge_domain):
    fg = tmp_path / "full_geom.json"
    full_geom.save(fg)
    f0 = tmp_path / "f0.json"
    f_zero.save(f0)
    wedge = tmp_path / "wedge.json"
    wedge_domain.save(wedge)
    dirs = tmp_path / "dirs.json"
    dirs.write_text(
        json.dumps({"directions": [[i / 10, 1 - i / 10] for i in range(11)]})
    )
    return {"full_geom": str(fg), "f0": str(f0), "wedge": str(wedge), "dirs": str(dirs)}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_probe_json(capsys, files):
    code, out = run(capsys, ["probe", files["full_geom"], "--point", "0.5", "0.5"])
    assert code == 0
    data = json.loads(out)
    assert data["result"]["class"] == "converges"
    assert data["config"] == {"degree": 64, "margin": 0.1}
    assert abs(data["result"]["partial"] - 4.0) < 1e-6


def test_domain_csv_grid(capsys, files):
    code, out = run(
        capsys,
        ["domain", files["full_geom"], "--grid=-1:1:3,-1:1:3"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    header = [l for l in lines if l.startswith("#")]
    assert any("degree=64" in h and "epsilon=0.05" in h for h in header)
    rows = [l for l in lines if not l.startswith("#")][1:]
    assert len(rows) == 9
    # row-major order: first axis slowest
    assert rows[0].startswith("-1.0,-1.0,inside")
    first = rows[0].split(",")
    assert float(first[3]) == pytest.approx(-1.0, abs=1e-12)


def test_domain_deterministic(capsys, files):
    _, out1 = run(capsys, ["domain", files["f0"], "--grid=-1:1:5"])
    _, out2 = run(capsys, ["domain", files["f0"], "--grid=-1:1:5"])
    assert out1 == out2


def test_cfunc_grid_t(capsys, files):
    code, out = run(
        capsys,
        ["cfunc", files["f0"], "--grid-t", "21", "--delta", "0.02"],
    )
    assert code == 0
    data = json.loads(out)
    assert len(data["directions"]) == 21
    assert data["config"]["delta"] == 0.02
    mid = data["directions"].index([0.5, 0.5])
    assert abs(data["values"][mid] + LN2 / 2) < 0.02
    off = data["directions"].index([0.2, 0.8])
    assert data["values"][off] == 0.0


def test_support_scalar(capsys, files):
    code, out = run(
        capsys,
        ["support", "--domain", files["wedge"], "--direction", "0.3", "0.7"],
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"] == pytest.approx(-0.3 * LN2, abs=1e-9)


def test_envelope_scalar(tmp_path, capsys, files):
    samples = tmp_path / "samples.json"
    samples.write_text(
        json.dumps(
            {
                "directions": [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]],
                "values": [0.0, -LN2 / 2, 0.0],
            }
        )
    )
    code, out = run(
        capsys,
        ["envelope", "--samples", str(samples), "--direction", "0.25", "0.75"],
    )
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(-LN2 / 4, abs=1e-9)


def test_construct_then_check_round_trip(tmp_path, capsys, files):
    out_spec = tmp_path / "constructed.json"
    code, _ = run(
        capsys,
        [
            "construct",
            "--domain", files["wedge"],
            "--directions", files["dirs"],
            "--per-row", "8",
            "--out", str(out_spec),
        ],
    )
    assert code == 0
    series = SeriesSpec.load(out_spec)
    assert series.dimension == 2
    code, out = run(
        capsys,
        ["check", str(out_spec), "--grid=-1:1:11", "--epsilon", "0.1"],
    )
    assert code == 0
    report = json.loads(out)
    assert report["decisive"] > 0
    assert report["agreement"] >= 0.95


def test_decompose_elementary_writes_manifest(tmp_path, capsys, files):
    out_dir = tmp_path / "parts"
    code, _ = run(
        capsys,
        [
            "decompose", files["f0"],
            "--mode", "elementary",
            "--directions", files["dirs"],
            "--out", str(out_dir),
        ],
    )
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["exactness"]["ok"] is True
    assert len(manifest["parts"]) == 11
    assert all((out_dir / name).exists() for name in manifest["parts"])
    mid = manifest["directions"].index([0.5, 0.5])
    assert abs(manifest["offsets"][mid] - LN2 / 2) < 0.02


def test_decompose_simple_writes_wedges(tmp_path, capsys, files):
    out_dir = tmp_path / "simple"
    code, _ = run(
        capsys,
        [
            "decompose", files["full_geom"],
            "--mode", "simple",
            "--directions", files["dirs"],
            "--domain", files["wedge"],
            "--out", str(out_dir),
        ],
    )
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["wedges"][0] is None
    assert all(w is not None for w in manifest["wedges"][1:])
    assert manifest["exactness"]["ok"] is True


def test_decompose_simple_estimate_domain(tmp_path, capsys, files):
    out_dir = tmp_path / "simple_est"
    code, _ = run(
        capsys,
        [
            "decompose", files["f0"],
            "--mode", "simple",
            "--directions", files["dirs"],
            "--estimate-domain",
            "--out", str(out_dir),
        ],
    )
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["exactness"]["ok"] is True
    mid = manifest["directions"].index([0.5, 0.5])
    # estimated supporting level at the diagonal is the wedge face -ln2/2
    assert abs(manifest["halfspaces"][mid]["offset"] + LN2 / 2) < 0.02


def test_slice_radius_cli(capsys, files):
    code, out = run(
        capsys, ["slice-radius", files["full_geom"], "--point", "0.5", "0.5"]
    )
    assert code == 0
    value = json.loads(out)["value"]
    peak = max(((k + 1) / 2**k) ** (1.0 / k) for k in range(32, 65))
    assert value == pytest.approx(1.0 / peak, rel=1e-9)


def test_input_errors_exit_2(tmp_path, capsys, files):
    missing = str(tmp_path / "nope.json")
    code = main(["probe", missing, "--point", "0.5", "0.5"])
    err = capsys.readouterr().err
    assert code == 2
    assert "nope.json" in err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["probe", str(bad), "--point", "0.5", "0.5"])
    err = capsys.readouterr().err
    assert code == 2
    assert "bad.json" in err

    code = main(["domain", files["full_geom"], "--grid=-1:1:200,-1:1:200"])
    err = capsys.readouterr().err
    assert code == 2
    assert "--grid" in err


def test_infinite_support_exits_3(tmp_path, capsys, files):
    from reinhardt import HalfSpace, HDomain

    slab = tmp_path / "slab.json"
    HDomain(2, (HalfSpace((1.0, 0.0), -1.0),)).save(slab)
    dirs = tmp_path / "axis.json"
    dirs.write_text(json.dumps({"directions": [[0.0, 1.0]]}))
    code = main(
        [
            "construct",
            "--domain", str(slab),
            "--directions", str(dirs),
            "--out", str(tmp_path / "x.json"),
        ]
    )
    err = capsys.readouterr().err
    assert code == 3
    assert "infinite support" in err


def test_probe_deterministic_bytes(capsys, files):
    _, a = run(capsys, ["probe", files["f0"], "--point", "0.8", "0.8"])
    _, b = run(capsys, ["probe", files["f0"], "--point", "0.8", "0.8"])
    assert a == b
    assert json.loads(a)["result"]["class"] == "diverges"
