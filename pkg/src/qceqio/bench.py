"""Positive / negative verification timings over a directory of circuits.

For every ``*.qcx`` file: obfuscate it, time the check of the obfuscated
composite against the flag-extended original (positive), then mutate the
obfuscated composite once and time the same check again (negative). Each
timing is the mean of ``repeats`` runs.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from pathlib import Path

from .circuit import gate_stats, load_circuit, mutate, tensor_extend
from .obfuscate import ObfuscationConfig, QuantumImplementation, obfuscate
from .pathsum import circuit_pathsum
from .reduce import CheckConfig, Verdict, check_equivalence

__all__ = ["BenchRow", "CSV_HEADER", "bench_file", "run_bench", "rows_to_csv"]

CSV_HEADER = ("name", "n", "m", "clifford", "t", "time_pos", "time_neg",
              "verdict_pos", "verdict_neg", "status")


@dataclass(frozen=True)
class BenchRow:
    name: str
    n: int
    m: int
    clifford_count: int
    t_count: int
    time_pos_seconds: float
    time_neg_seconds: float
    verdict_pos: str
    verdict_neg: str
    status: str = "ok"

    def as_csv_row(self) -> list:
        return [self.name, self.n, self.m, self.clifford_count, self.t_count,
                f"{self.time_pos_seconds:.6f}", f"{self.time_neg_seconds:.6f}",
                self.verdict_pos, self.verdict_neg, self.status]


def _timed_check(c1, c2, cfg: CheckConfig, repeats: int):
    result = None
    start = time.perf_counter()
    for _ in range(repeats):
        result = check_equivalence(c1, c2, cfg)
    return result, (time.perf_counter() - start) / repeats


def bench_file(path, seed: int = 0, do_mutate: bool = True, repeats: int = 5,
               obf: ObfuscationConfig | None = None) -> BenchRow:
    path = Path(path)
    name = path.stem
    try:
        c = load_circuit(path)
        cfg = obf if obf is not None else ObfuscationConfig(seed=seed)
        ob = obfuscate(QuantumImplementation.from_circuit(c), cfg)
        composite = ob.composite()
        reference = tensor_extend(c, cfg.lam)
        stats = gate_stats(composite)
        m = circuit_pathsum(composite).m
        check_cfg = CheckConfig(seed=seed)
        pos, t_pos = _timed_check(composite, reference, check_cfg, repeats)
        neg_verdict, t_neg = "", 0.0
        status = "ok"
        if pos.verdict not in (Verdict.EQUIVALENT, Verdict.PROBABLY_EQUIVALENT):
            status = "positive-check-failed"
        if do_mutate:
            neg, t_neg = _timed_check(mutate(composite, seed), reference, check_cfg, repeats)
            neg_verdict = neg.verdict.value
            if neg.verdict is not Verdict.NOT_EQUIVALENT and status == "ok":
                status = "negative-check-failed"
        return BenchRow(name, c.n_wires, m, stats.clifford_count, stats.t_count, t_pos, t_neg,
                        pos.verdict.value, neg_verdict, status)
    except Exception as exc:  # recorded per row; the run goes on
        return BenchRow(name, 0, 0, 0, 0, 0.0, 0.0, "", "", f"error: {type(exc).__name__}: {exc}")


def run_bench(directory, seed: int = 0, do_mutate: bool = True, repeats: int = 5) -> list[BenchRow]:
    """One row per ``.qcx`` file in ``directory``, sorted by name."""
    files = sorted(Path(directory).glob("*.qcx"), key=lambda p: p.stem)
    rows = [bench_file(p, seed=seed, do_mutate=do_mutate, repeats=repeats) for p in files]
    return sorted(rows, key=lambda r: r.name)


def rows_to_csv(rows, out=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv_row())
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
