import csv
import io
import os
import subprocess
import sys

import numpy as np
import pytest

from qceqio.bench import CSV_HEADER, run_bench
from qceqio.circuit import Circuit, load_circuit, serialize_circuit, tensor_extend
from qceqio.cli import format_complex, main
from qceqio.corpus import qft, write_corpus


@pytest.fixture
def files(tmp_path):
    texts = {
        "hh": "qubits 1\nH 0\nH 0\n",
        "id": "qubits 1\n",
        "t": "qubits 1\nT 0\n",
        "s": "qubits 1\nS 0\n",
        "cx": "qubits 2\nCX 0 1\n",
        "bad": "qubits 1\nFOO 0\n",
        "qft3": serialize_circuit(Circuit(3, tuple(qft(3)))),
        "tof": "qubits 3\nH 2\nCX 1 2\nTDG 2\nCX 0 2\nT 2\nCX 1 2\nTDG 2\nCX 0 2\nT 1\nT 2\nH 2\n"
               "CX 0 1\nT 0\nTDG 1\nCX 0 1\n",
    }
    out = {}
    for name, text in texts.items():
        p = tmp_path / f"{name}.qcx"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_exit_codes(files, capsys):
    assert run(capsys, "check", files["hh"], files["id"])[:2] == (0, "equivalent\n")
    code, out, _ = run(capsys, "check", files["t"], files["s"])
    assert code == 1 and out.startswith("not-equivalent (witness: |")
    assert run(capsys, "check", files["t"], files["t"])[0] == 0
    assert run(capsys, "check", files["bad"], files["id"])[0] == 64
    assert run(capsys, "check", files["cx"], files["id"])[0] == 65
    assert run(capsys, "check", files["cx"], files["cx"], "--pad")[0] == 0
    assert run(capsys, "check", files["hh"], files["t"] + ".missing")[0] == 3
    assert run(capsys, "nonsense")[0] == 3


def test_check_inconclusive_exit(tmp_path, capsys):
    a = tmp_path / "a.qcx"
    b = tmp_path / "b.qcx"
    a.write_text("qubits 1\nH 0\nT 0\nH 0\n")
    b.write_text("qubits 1\nH 0\nTDG 0\nH 0\n")
    assert run(capsys, "check", str(a), str(b), "--method", "reduce")[0] == 2


def test_check_probably_equivalent_exit(tmp_path, capsys):
    # a two-point sampling set makes the phase test weak enough to accept a real difference
    a = tmp_path / "a.qcx"
    a.write_text("qubits 2\nCRK 2 0 1\n")
    b = tmp_path / "b.qcx"
    b.write_text("qubits 2\n")
    code, out, _ = run(capsys, "check", str(a), str(b), "--pit-r", "2", "--pit-trials", "1", "--seed", "1")
    assert (code, out) == (0, "probably-equivalent (failure ≤ 1)\n")
    assert run(capsys, "check", str(a), str(b))[0] == 1


def test_amplitude_and_pathsum(files, capsys):
    assert run(capsys, "amplitude", files["hh"], "--in", "0", "--out", "0")[1] == "1+0i\n"
    assert run(capsys, "amplitude", files["hh"], "--in", "1", "--out", "0")[1] == "0+0i\n"
    for x in range(8):
        for z in range(8):
            out = run(capsys, "amplitude", files["qft3"], "--in", str(x), "--out", str(z))[1]
            got = complex(out.strip().replace("i", "j"))
            assert abs(got - np.exp(2j * np.pi * x * z / 8) / np.sqrt(8)) < 1e-11
    code, out, _ = run(capsys, "pathsum", files["id"])
    assert code == 0 and out == "in: 1\npaths: 0\nnorm: 0\nphase: 0\nout_1: x1\n"
    assert run(capsys, "pathsum", files["hh"], "--reduce")[1] == out


def test_parse_and_simulate(files, capsys):
    code, out, _ = run(capsys, "parse", files["cx"])
    assert code == 0 and out == "qubits 2\nCX 0 1\n"
    assert "t=7" in run(capsys, "parse", files["tof"], "--stats")[1]
    assert run(capsys, "simulate", files["cx"], "--in", "10")[1] == "|11⟩ 1+0i\n"
    assert run(capsys, "parse", files["bad"])[0] == 64


def test_format_complex():
    assert format_complex(1) == "1+0i"
    assert format_complex(-0.0 - 1e-17j) == "0+0i"
    assert format_complex(0.5 - 0.25j) == "0.5-0.25i"


def test_obfuscate_end_to_end(files, tmp_path, capsys):
    prefix = str(tmp_path / "o")
    code, out, _ = run(capsys, "obfuscate", files["tof"], "--lambda", "2", "--ell", "6", "--seed", "3",
                       "-o", prefix)
    assert code == 0 and "wires: 3 -> 5" in out
    main_text = open(prefix + ".main.qcx").read()
    prep_text = open(prefix + ".prep.qcx").read()
    manifest = open(prefix + ".manifest.jsonl").read()
    assert len(manifest.splitlines()) == 7
    code, out, _ = run(capsys, "check", prefix + ".main.qcx", files["tof"], "--prep1",
                       prefix + ".prep.qcx", "--pad")
    assert code == 0
    prefix2 = str(tmp_path / "p")
    run(capsys, "obfuscate", files["tof"], "--lambda", "2", "--ell", "6", "--seed", "3", "-o", prefix2)
    assert open(prefix2 + ".main.qcx").read() == main_text
    assert open(prefix2 + ".prep.qcx").read() == prep_text
    assert open(prefix2 + ".manifest.jsonl").read() == manifest


def test_obfuscate_ell_zero(files, tmp_path, capsys):
    prefix = str(tmp_path / "z")
    run(capsys, "obfuscate", files["tof"], "--ell", "0", "--lambda", "3", "-o", prefix)
    assert load_circuit(prefix + ".main.qcx") == tensor_extend(load_circuit(files["tof"]), 3)


def test_seed_env_fallback(files, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QCEQIO_SEED", "17")
    run(capsys, "obfuscate", files["qft3"], "-o", str(tmp_path / "a"))
    run(capsys, "obfuscate", files["qft3"], "--seed", "17", "-o", str(tmp_path / "b"))
    assert (tmp_path / "a.main.qcx").read_text() == (tmp_path / "b.main.qcx").read_text()
    assert '"seed": 17' in (tmp_path / "a.manifest.jsonl").read_text()


def test_bench_csv(tmp_path, capsys):
    write_corpus(tmp_path / "c")
    keep = {"qft_3.qcx", "toff_3.qcx", "gf4_mult.qcx"}
    for p in (tmp_path / "c").iterdir():
        if p.name not in keep:
            p.unlink()
    out_csv = tmp_path / "b.csv"
    assert run(capsys, "bench", str(tmp_path / "c"), "--repeats", "1", "--csv", str(out_csv))[0] == 0
    rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
    assert tuple(rows[0].keys()) == CSV_HEADER
    assert [r["name"] for r in rows] == ["gf4_mult", "qft_3", "toff_3"]
    for r in rows:
        assert r["verdict_pos"] == "equivalent" and r["verdict_neg"] == "not-equivalent"
        assert r["status"] == "ok"
    toff = rows[2]
    assert toff["n"] == "5"


def test_bench_empty_and_broken(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", str(tmp_path))
    assert code == 0 and out == ",".join(CSV_HEADER) + "\n"
    (tmp_path / "broken.qcx").write_text("qubits 1\nCX 0 1\n")
    (tmp_path / "ok.qcx").write_text("qubits 2\nH 0\nCX 0 1\n")
    rows = run_bench(tmp_path, repeats=1)
    assert rows[0].status.startswith("error") and rows[1].status == "ok"


def test_bench_deterministic_except_times(tmp_path):
    (tmp_path / "a.qcx").write_text("qubits 3\nH 0\nCCX 0 1 2\nT 2\n")
    strip = lambda rows: [r.as_csv_row()[:5] + r.as_csv_row()[7:] for r in rows]
    assert strip(run_bench(tmp_path, seed=2, repeats=1)) == strip(run_bench(tmp_path, seed=2, repeats=1))


def test_console_script(files):
    exe = [sys.executable, "-m", "qceqio.cli"]
    proc = subprocess.run(exe + ["check", files["t"], files["s"]], capture_output=True, text=True,
                          env={**os.environ})
    assert proc.returncode == 1 and proc.stdout.startswith("not-equivalent")
