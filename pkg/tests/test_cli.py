import json

import numpy as np
import pytest

from qlct.cli import main
from qlct.families import gaussian, impulse
from qlct.signal import Grid2D, QSignal2D, load, save


def write_gaussian(path, n=16, dx=0.5):
    grid = Grid2D.centered(n, n, dx, dx)
    save(path, gaussian(grid, 1.0))


def rel_l2(a, b):
    return float(np.sqrt(np.sum((a - b)**2) / np.sum(b**2)))


def test_forward_inverse_file_round_trip(tmp_path, capsys):
    src = tmp_path / "f.qsig"
    write_gaussian(src)
    fwd = tmp_path / "F.qsig"
    back = tmp_path / "f2.qsig"
    assert main(["forward", "--a1", "0,1,-1,0", "--a2", "0,1,-1,0",
                 "-i", str(src), "-o", str(fwd), "--method", "fast",
                 "--check"]) == 0
    out = capsys.readouterr()
    assert "plancherel ratio" in out.out
    assert out.err == ""
    assert main(["inverse", "-i", str(fwd), "-o", str(back)]) == 0
    f = load(src)
    f2 = load(back)
    assert rel_l2(f2.samples, f.samples) <= 1e-8


def test_forward_direct_method(tmp_path):
    src = tmp_path / "f.qsig"
    write_gaussian(src, n=8)
    assert main(["forward", "-i", str(src), "-o", str(tmp_path / "F.qsig"),
                 "--method", "direct"]) == 0


def test_non_unimodular_matrix_exits_2(tmp_path, capsys):
    src = tmp_path / "f.qsig"
    write_gaussian(src)
    code = main(["forward", "--a1", "1,1,1,1", "-i", str(src),
                 "-o", str(tmp_path / "F.qsig")])
    assert code == 2
    assert "det(A1) != 1" in capsys.readouterr().err


def test_missing_input_exits_2(tmp_path, capsys):
    code = main(["forward", "-i", str(tmp_path / "nope.qsig"),
                 "-o", str(tmp_path / "F.qsig")])
    assert code == 2
    assert capsys.readouterr().err != ""


def test_same_input_output_rejected(tmp_path, capsys):
    src = tmp_path / "f.qsig"
    write_gaussian(src)
    assert main(["forward", "-i", str(src), "-o", str(src)]) == 2


@pytest.mark.filterwarnings("ignore:overflow")
@pytest.mark.filterwarnings("ignore:invalid value")
def test_overflowing_signal_exits_3(tmp_path, capsys):
    grid = Grid2D.centered(8, 8, 0.5, 0.5)
    vals = np.full((8, 8, 4), 1e308)
    save(tmp_path / "huge.qsig", QSignal2D(grid, vals))
    code = main(["forward", "-i", str(tmp_path / "huge.qsig"),
                 "-o", str(tmp_path / "F.qsig")])
    assert code == 3
    assert "non-finite" in capsys.readouterr().err


def test_gabor_analyze_synthesize_spectrogram(tmp_path, capsys):
    src = tmp_path / "f.qsig"
    write_gaussian(src, n=16, dx=0.5)
    coef = tmp_path / "coef"
    assert main(["gabor", "analyze", "-i", str(src), "-o", str(coef),
                 "--window", "gaussian:sigma=1.0,1.0"]) == 0
    out = capsys.readouterr().out
    assert "256 slices" in out
    manifest = json.loads((coef / "manifest.json").read_text())
    assert len(manifest["slices"]) == 256

    back = tmp_path / "back.qsig"
    assert main(["gabor", "synthesize", "-i", str(coef), "-o", str(back)]) == 0
    f = load(src)
    fb = load(back)
    assert rel_l2(fb.samples, f.samples) <= 1e-2

    pgm = tmp_path / "spec.pgm"
    assert main(["gabor", "spectrogram", "-i", str(coef),
                 "--slice", "max_over_omega", "-o", str(pgm)]) == 0
    assert pgm.read_bytes().startswith(b"P5\n")
    sidecar = json.loads((tmp_path / "spec.pgm.json").read_text())
    assert sidecar["max"] >= sidecar["min"]
    assert (tmp_path / "spec.pgm.csv").exists()


def test_gabor_spectrogram_impulse_peak(tmp_path):
    grid = Grid2D.centered(8, 8, 0.5, 0.5)
    save(tmp_path / "imp.qsig", impulse(grid, (6, 2)))
    coef = tmp_path / "coef"
    assert main(["gabor", "analyze", "-i", str(tmp_path / "imp.qsig"),
                 "-o", str(coef), "--window", "gaussian:sigma=0.5,0.5"]) == 0
    assert main(["gabor", "spectrogram", "-i", str(coef),
                 "--slice", "max_over_omega",
                 "-o", str(tmp_path / "s.pgm")]) == 0
    field = np.loadtxt(tmp_path / "s.pgm.csv", delimiter=",")
    iy = np.unravel_index(np.argmax(field), field.shape)
    # y value nearest the impulse position x = (1.25, -1.25)
    assert iy == (6, 2) or abs(field[iy] - field[6, 2]) <= 1e-12


def test_gabor_memory_refusal_and_force(tmp_path, capsys):
    src = tmp_path / "f.qsig"
    write_gaussian(src, n=40, dx=0.25)
    code = main(["gabor", "analyze", "-i", str(src),
                 "-o", str(tmp_path / "coef")])
    assert code == 2
    assert "--force" in capsys.readouterr().err
    # strided analysis is allowed without --force
    assert main(["gabor", "analyze", "-i", str(src), "--stride", "8",
                 "-o", str(tmp_path / "coef2")]) == 0


def test_verify_young_writes_reports(tmp_path, capsys):
    rpt = tmp_path / "young.json"
    code = main(["verify", "young", "--trials", "5", "--seed", "7",
                 "--report", str(rpt)])
    assert code == 0
    out = capsys.readouterr()
    assert "suite young: pass" in out.out
    reports = json.loads(rpt.read_text())
    assert len(reports) == 10  # 5 trials x 2 exponent pairs
    assert min(r["margin"] for r in reports) >= -1e-6
    assert (tmp_path / "young.csv").exists()


def test_verify_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "bogus"])


def test_verify_determinism_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "lemma-log", "--seed", "3",
                     "--report", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_verify_grid_and_dx_flags(tmp_path):
    rpt = tmp_path / "log.json"
    assert main(["verify", "log", "--grid", "16x16", "--dx", "0.5",
                 "--report", str(rpt)]) == 0
    reports = json.loads(rpt.read_text())
    assert all(r["grid"]["n1"] == 32 for r in reports)  # log suite pins 32x32
