"""Path-sum semantics, equivalence checking and identity-loop obfuscation for quantum circuits."""
from .circuit import (Circuit, CircuitParseError, Gate, GateStats, MutationError, concat,
                      gate_stats, idle_intervals, insert_gates, inverse, load_circuit, mutate,
                      parse_circuit, random_circuit, serialize_circuit, tensor_extend)
from .obfuscate import (ObfuscationConfig, QuantumImplementation, Strategy, SubpathDelta,
                        obfuscate, sample_loop, split_loop, write_manifest)
from .pathsum import (EnumerationLimitError, PathSum, amplitude_matrix, circuit_pathsum, compose,
                      evaluate_amplitude, gate_pathsum, identity_pathsum, render_pathsum)
from .pit import PitConfig, PitReport, failure_bound, pit_phase_equal
from .poly import BoolPoly, DyadicPhase, PhasePoly
from .reduce import (CheckConfig, CheckResult, Verdict, check_equivalence, is_identity, reduce,
                     reduce_step)
from .sim import (WireLimitError, circuit_unitary, clifford_twirl_check, implementation_computes,
                  simulate_state, unitary_equal_up_to_phase)

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitParseError", "Gate", "GateStats", "MutationError", "concat", "gate_stats",
    "idle_intervals", "insert_gates", "inverse", "load_circuit", "mutate", "parse_circuit",
    "random_circuit", "serialize_circuit", "tensor_extend",
    "ObfuscationConfig", "QuantumImplementation", "Strategy", "SubpathDelta", "obfuscate",
    "sample_loop", "split_loop", "write_manifest",
    "EnumerationLimitError", "PathSum", "amplitude_matrix", "circuit_pathsum", "compose",
    "evaluate_amplitude", "gate_pathsum", "identity_pathsum", "render_pathsum",
    "PitConfig", "PitReport", "failure_bound", "pit_phase_equal",
    "BoolPoly", "DyadicPhase", "PhasePoly",
    "CheckConfig", "CheckResult", "Verdict", "check_equivalence", "is_identity", "reduce",
    "reduce_step",
    "WireLimitError", "circuit_unitary", "clifford_twirl_check", "implementation_computes",
    "simulate_state", "unitary_equal_up_to_phase",
]
