import itertools
import json

import numpy as np
import pytest

from qceqio.circuit import Circuit, Gate, concat, random_circuit, tensor_extend
from qceqio.corpus import toffoli_clifford_t
from qceqio.obfuscate import (ObfuscationConfig, QuantumImplementation, Strategy, SubpathDelta,
                              default_loop_bound, obfuscate, sample_loop, split_loop, write_manifest)
from qceqio.pathsum import circuit_pathsum
from qceqio.reduce import Verdict, check_equivalence, is_identity, reduce
from qceqio.sim import circuit_unitary, implementation_computes, unitary_equal_up_to_phase

TOFFOLI = Circuit(3, tuple(toffoli_clifford_t(0, 1, 2)))


def _local(d: SubpathDelta) -> Circuit:
    order = sorted(d.wires)
    pos = {w: i for i, w in enumerate(order)}
    return Circuit(len(order), tuple(Gate(g.kind, tuple(pos[w] for w in g.wires), g.k) for g in d.gates))


def test_default_loop_bound():
    assert [default_loop_bound(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [2, 4, 6, 6, 8, 8, 10]


def test_sampled_loops_are_identities():
    cfg = ObfuscationConfig(B=8)
    families = set()
    for seed in range(10_000):
        d = sample_loop(cfg, Circuit(5), seed)
        families.add(d.family)
        assert 0 <= d.split_index <= len(d) <= 8
        assert is_identity(reduce(circuit_pathsum(_local(d))))
    assert families == {"word_inverse", "phase_cycle", "involution_pair"}


def test_sampled_loops_oracle(rng):
    cfg = ObfuscationConfig()
    for seed in range(300):
        d = sample_loop(cfg, Circuit(4), seed)
        c = _local(d)
        assert unitary_equal_up_to_phase(circuit_unitary(c), np.eye(2**c.n_wires))


def test_loop_respects_wire_pool_and_bound():
    cfg = ObfuscationConfig(B=4)
    for seed in range(500):
        d = sample_loop(cfg, Circuit(6), seed, wires=[4, 5])
        assert d.wires <= {4, 5} and len(d) <= 4


def test_phase_cycle_t_example():
    seen = False
    for seed in range(2000):
        d = sample_loop(ObfuscationConfig(B=8), Circuit(1), seed)
        if d.family == "phase_cycle" and len(d) == 8:
            assert all(g.kind == "T" for g in d.gates)
            seen = True
    assert seen


def test_split_loop():
    hh = SubpathDelta((Gate("H", (0,)), Gate("H", (0,))), 1, frozenset({0}), "involution_pair")
    assert split_loop(hh, 0.5) == ((Gate("H", (0,)),), (Gate("H", (0,)),))
    assert split_loop(hh, 0) == ((), hh.gates)
    assert split_loop(hh, 1) == (hh.gates, ())
    d = sample_loop(ObfuscationConfig(B=8), Circuit(3), 7)
    for r in (0, 0.25, 0.5, 0.7, 1, None):
        head, tail = split_loop(d, r)
        assert head + tail == d.gates
    with pytest.raises(ValueError):
        split_loop(hh, 1.5)


def test_ell_zero_only_extends():
    c = random_circuit(np.random.default_rng(0), 3, 10)
    ob = obfuscate(QuantumImplementation.from_circuit(c), ObfuscationConfig(lam=3, ell=0))
    assert ob.main == tensor_extend(c, 3)
    assert ob.prep == Circuit(6)
    assert ob.flag_wires == (3, 4, 5) and ob.data_wires == (0, 1, 2)


def test_toffoli_example_oracle():
    for strategy in Strategy:
        ob = obfuscate(QuantumImplementation.from_circuit(TOFFOLI),
                       ObfuscationConfig(lam=2, ell=4, seed=11, strategy=strategy))
        assert ob.n_wires == 5
        assert unitary_equal_up_to_phase(circuit_unitary(ob.composite()),
                                         circuit_unitary(tensor_extend(TOFFOLI, 2)), 1e-9)


def test_toffoli_still_computes_and():
    table = {}
    for a, b, t in itertools.product((0, 1), repeat=3):
        table[(a, b, t)] = (a, b, t ^ (a & b))
    ob = obfuscate(QuantumImplementation.from_circuit(TOFFOLI), ObfuscationConfig(lam=2, ell=6, seed=2))
    assert implementation_computes(ob, table)


def test_size_bounds_and_equivalence(rng):
    for i in range(100):
        n = int(rng.integers(1, 6))
        c = random_circuit(rng, n, int(rng.integers(0, 20)))
        cfg = ObfuscationConfig(lam=int(rng.integers(0, 4)), ell=int(rng.integers(0, 10)),
                                B=int(rng.integers(2, 9)) if rng.random() < 0.5 else None,
                                split_ratio=float(rng.random()),
                                strategy=list(Strategy)[rng.integers(3)], seed=i)
        ob = obfuscate(QuantumImplementation.from_circuit(c), cfg)
        B = cfg.loop_bound(n)
        assert ob.n_wires == n + cfg.lam
        assert len(ob.main) <= len(c) + cfg.ell * B
        assert len(ob.prep) <= cfg.ell * B
        res = check_equivalence(ob.composite(), tensor_extend(c, cfg.lam))
        assert res.verdict is Verdict.EQUIVALENT
        if ob.n_wires <= 10:
            assert unitary_equal_up_to_phase(circuit_unitary(ob.composite()),
                                             circuit_unitary(tensor_extend(c, cfg.lam)), 1e-9)


def test_with_existing_prep(rng):
    c = random_circuit(rng, 3, 12)
    prep = random_circuit(rng, 3, 5)
    impl = QuantumImplementation.from_circuit(c, prep=prep)
    ob = obfuscate(impl, ObfuscationConfig(lam=1, ell=8, seed=4))
    ref = tensor_extend(concat(prep, c), 1)
    assert unitary_equal_up_to_phase(circuit_unitary(ob.composite()), circuit_unitary(ref))


def test_determinism(rng):
    c = random_circuit(rng, 4, 20)
    cfg = ObfuscationConfig(lam=2, ell=16, seed=99)
    a = obfuscate(QuantumImplementation.from_circuit(c), cfg)
    b = obfuscate(QuantumImplementation.from_circuit(c), cfg)
    assert a == b and a.manifest == b.manifest
    other = obfuscate(QuantumImplementation.from_circuit(c), ObfuscationConfig(lam=2, ell=16, seed=100))
    assert other != a


def test_state_split_uses_prep_and_in_circuit_does_not(rng):
    c = random_circuit(rng, 4, 20)
    split = obfuscate(QuantumImplementation.from_circuit(c),
                      ObfuscationConfig(ell=8, seed=1, strategy=Strategy.STATE_CIRCUIT_SPLIT))
    loop = obfuscate(QuantumImplementation.from_circuit(c),
                     ObfuscationConfig(ell=8, seed=1, strategy=Strategy.IN_CIRCUIT_LOOP))
    assert len(split.prep) > 0
    assert len(loop.prep) == 0 and len(loop.main) > len(c)


def test_manifest(tmp_path, rng):
    c = random_circuit(rng, 3, 10)
    ob = obfuscate(QuantumImplementation.from_circuit(c), ObfuscationConfig(ell=5, seed=3))
    path = tmp_path / "m.jsonl"
    write_manifest(ob, path)
    lines = [json.loads(s) for s in path.read_text().splitlines()]
    assert lines[0]["ell"] == 5 and lines[0]["lambda"] == 2
    assert len(lines) == 6
    for rec in lines[1:]:
        assert {"iter", "family", "wires", "split_index"} <= rec.keys()
        assert "prep_pos" in rec or "main_pos" in rec


def test_config_validation():
    with pytest.raises(ValueError):
        ObfuscationConfig(lam=-1)
    with pytest.raises(ValueError):
        ObfuscationConfig(B=1)
    with pytest.raises(ValueError):
        ObfuscationConfig(split_ratio=2)
    with pytest.raises(ValueError):
        QuantumImplementation(Circuit(2), Circuit(3), (0,))
    with pytest.raises(ValueError):
        QuantumImplementation(Circuit(2), Circuit(2), (0,), (0,))
