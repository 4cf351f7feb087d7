"""Dense state-vector simulation of circuits and the one-clean-qubit model.

The maximally mixed register is never materialized as a density matrix.
Every quantity is assembled from pure forward passes: the input
|0><0| (x) I/2**n is the uniform mixture of the basis states |0 x>, so the
output distribution is the average of the 2**n pure output distributions.
Passes are batched column-wise so one gate sweep covers many inputs.

Index layout (see circuits module): qubit q owns bit (width-1-q) of the
amplitude index, so reshaping a state to (2**q, 2, -1) exposes qubit q on
the middle axis as a zero-copy view.  Kernels mutate such views in place
on an array the caller owns.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate, adjoint

__all__ = [
    "StateVector",
    "Distribution",
    "apply_circuit",
    "amplitude_zero",
    "f_value",
    "dqc1_distribution",
    "sample",
    "bits_to_index",
    "index_to_bits",
    "DEFAULT_MAX_MIXED_QUBITS",
    "MAX_SINGLE_PASS_WIDTH",
]

# dqc1_distribution runs 2**n forward passes; this cap stops accidental
# exponential blowups.  Single-pass ops only pay one state vector and get a
# far looser cap.
DEFAULT_MAX_MIXED_QUBITS = 14
MAX_SINGLE_PASS_WIDTH = 26

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_PHASE_S = 1.0j
_PHASE_T = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))

# Entries per batch chunk (~16 MiB of complex128): small enough to be
# cache-friendly per gate sweep, large enough to amortize dispatch.
_CHUNK_ENTRIES = 1 << 20


def bits_to_index(zbits, width: int) -> int:
    """Index of |z> for a bit string ('010') or bit sequence, qubit 0 first."""
    if isinstance(zbits, str):
        if len(zbits) != width or any(ch not in "01" for ch in zbits):
            msg = f"need a {width}-bit string of 0/1, got {zbits!r}"
            raise ValueError(msg)
        return int(zbits, 2)
    bits = [int(b) for b in zbits]
    if len(bits) != width or any(b not in (0, 1) for b in bits):
        msg = f"need {width} bits of 0/1, got {zbits!r}"
        raise ValueError(msg)
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_to_bits(index: int, width: int) -> str:
    """Bit string of |index> with qubit 0 as the leftmost character."""
    if not 0 <= index < (1 << width):
        msg = f"index {index} out of range for width {width}"
        raise ValueError(msg)
    return format(index, f"0{width}b")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable amplitudes over 2**width basis states.

    The constructor takes ownership of the array and marks it read-only.
    """

    width: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.width,):
            msg = f"need {1 << self.width} amplitudes for width {self.width}, got shape {amps.shape}"
            raise ValueError(msg)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, width: int) -> "StateVector":
        return cls.basis(width, 0)

    @classmethod
    def basis(cls, width: int, index_or_bits) -> "StateVector":
        idx = (
            index_or_bits
            if isinstance(index_or_bits, int)
            else bits_to_index(index_or_bits, width)
        )
        amps = np.zeros(1 << width, dtype=np.complex128)
        amps[idx] = 1.0
        return cls(width, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probabilities over the 2**(n+1) outcomes of measuring all n+1 qubits.

    Construction checks nonnegativity (to 1e-12) and normalization (to
    1e-9) only.  The per-outcome ceiling 2**-n holds for every simulator
    output and is enforced where those are produced; deliberately
    perturbed distributions may exceed it slightly.
    """

    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 0:
            msg = f"n must be a nonnegative integer, got {self.n!r}"
            raise ValueError(msg)
        object.__setattr__(self, "n", int(self.n))
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (1 << (self.n + 1),):
            msg = f"need {1 << (self.n + 1)} probabilities for n={self.n}, got shape {p.shape}"
            raise ValueError(msg)
        if p.min(initial=0.0) < -1e-12:
            msg = f"negative probability {p.min()}"
            raise ValueError(msg)
        total = float(p.sum())
        if abs(total - 1.0) > 1e-9:
            msg = f"probabilities sum to {total}, not 1"
            raise ValueError(msg)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def outcome_bits(self, index: int) -> str:
        return index_to_bits(index, self.n + 1)


# --- in-place gate kernels ---------------------------------------------------
#
# _axis_view reshapes a (2**width,) or (2**width, batch) array so each
# involved qubit gets its own length-2 axis; basic indexing then yields
# zero-copy views of the matching amplitude blocks.


def _axis_view(amps: np.ndarray, qubits: tuple[int, ...]):
    shape = []
    prev = 0
    for q in qubits:
        shape.append(1 << (q - prev))
        shape.append(2)
        prev = q + 1
    shape.append(-1)
    view = amps.reshape(shape)
    axes = tuple(2 * i + 1 for i in range(len(qubits)))
    return view, axes


def _block(view: np.ndarray, axes: tuple[int, ...], bits: tuple[int, ...]) -> np.ndarray:
    idx: list = [slice(None)] * view.ndim
    for a, b in zip(axes, bits):
        idx[a] = b
    return view[tuple(idx)]


def _swap_blocks(view, axes, bits0, bits1) -> None:
    b0 = _block(view, axes, bits0)
    b1 = _block(view, axes, bits1)
    tmp = b0.copy()
    b0[...] = b1
    b1[...] = tmp


def _apply_gate(amps: np.ndarray, width: int, g: Gate) -> None:
    kind = g.kind
    if kind == "H":
        view, axes = _axis_view(amps, g.targets)
        lo = _block(view, axes, (0,))
        hi = _block(view, axes, (1,))
        # In-place butterfly: lo' = (lo + hi)/sqrt2, hi' = lo' - sqrt2*hi.
        lo += hi
        lo *= _INV_SQRT2
        hi *= -2.0 * _INV_SQRT2
        hi += lo
    elif kind == "X":
        view, axes = _axis_view(amps, g.targets)
        _swap_blocks(view, axes, (0,), (1,))
    elif kind in ("Z", "S", "SDG", "T", "TDG"):
        view, axes = _axis_view(amps, g.targets)
        factor = {
            "Z": -1.0,
            "S": _PHASE_S,
            "SDG": -_PHASE_S,
            "T": _PHASE_T,
            "TDG": _PHASE_T.conjugate(),
        }[kind]
        hi = _block(view, axes, (1,))
        hi *= factor
    elif kind == "RZ":
        view, axes = _axis_view(amps, g.targets)
        half = 0.5 * g.theta
        lo = _block(view, axes, (0,))
        hi = _block(view, axes, (1,))
        lo *= complex(math.cos(half), -math.sin(half))
        hi *= complex(math.cos(half), math.sin(half))
    elif kind == "CZ":
        view, axes = _axis_view(amps, tuple(sorted(g.targets)))
        blk = _block(view, axes, (1, 1))
        blk *= -1.0
    elif kind == "CCZ":
        view, axes = _axis_view(amps, tuple(sorted(g.targets)))
        blk = _block(view, axes, (1, 1, 1))
        blk *= -1.0
    elif kind in ("CX", "MCX"):
        pols = g.polarities if kind == "MCX" else (1,)
        wanted = dict(zip(g.controls, pols))
        qubits = tuple(sorted(g.qubits))
        view, axes = _axis_view(amps, qubits)
        # Controls pinned at their polarity; the free bit is the target.
        bits0 = tuple(wanted.get(q, 0) for q in qubits)
        bits1 = tuple(wanted.get(q, 1) for q in qubits)
        _swap_blocks(view, axes, bits0, bits1)
    else:  # pragma: no cover - Gate validation makes this unreachable
        msg = f"unhandled gate kind {kind}"
        raise ValueError(msg)


def _run_gates(amps: np.ndarray, width: int, gates: tuple[Gate, ...]) -> None:
    for g in gates:
        _apply_gate(amps, width, g)


def _check_width(width: int) -> None:
    if width > MAX_SINGLE_PASS_WIDTH:
        msg = f"{width} qubits exceeds the single-pass cap of {MAX_SINGLE_PASS_WIDTH}"
        raise ValueError(msg)


def apply_circuit(psi: StateVector, c: Circuit) -> StateVector:
    """Pure function: returns the circuit applied to psi, inputs untouched."""
    if psi.width != c.width:
        msg = f"state width {psi.width} != circuit width {c.width}"
        raise ValueError(msg)
    _check_width(c.width)
    amps = np.array(psi.amplitudes, dtype=np.complex128)
    _run_gates(amps, c.width, c.gates)
    return StateVector(c.width, amps)


def amplitude_zero(c: Circuit) -> complex:
    """<0...0| C |0...0>: first amplitude of the circuit applied to the zero state."""
    _check_width(c.width)
    amps = np.zeros(1 << c.width, dtype=np.complex128)
    amps[0] = 1.0
    _run_gates(amps, c.width, c.gates)
    return complex(amps[0])


def f_value(u: Circuit, zbits) -> float:
    """Probability weight 2**n * p_z: squared norm of U^dagger |z> on the clean-0 block.

    Equals <z| U (|0><0| (x) I) U^dagger |z>, which is 2**n times the
    probability of outcome z when U runs on one clean qubit plus n
    maximally mixed ones.  Result lies in [0, 1] up to 1e-12 float slack.
    """
    _check_width(u.width)
    if isinstance(zbits, int):
        if not 0 <= zbits < (1 << u.width):
            msg = f"outcome index {zbits} out of range for width {u.width}"
            raise ValueError(msg)
        idx = zbits
    else:
        idx = bits_to_index(zbits, u.width)
    amps = np.zeros(1 << u.width, dtype=np.complex128)
    amps[idx] = 1.0
    _run_gates(amps, u.width, adjoint(u).gates)
    half = amps[: 1 << (u.width - 1)]
    return float(np.sum(half.real * half.real + half.imag * half.imag))


def dqc1_distribution(
    u: Circuit,
    *,
    max_n: int = DEFAULT_MAX_MIXED_QUBITS,
    threads: int = 1,
) -> Distribution:
    """Exact output distribution of u on |0><0| (x) I/2**n, all qubits measured.

    Runs one forward pass per mixed-register basis state |0 x> and averages
    the 2**n output distributions.  Passes are batched into fixed column
    chunks; chunk results are reduced in index order, so the output is
    bit-identical for any ``threads`` value.
    """
    n = u.width - 1
    if n < 0:
        msg = "need at least the clean qubit"
        raise ValueError(msg)
    if n > max_n:
        msg = f"n={n} mixed qubits exceeds the cap of {max_n} (2**n passes); raise max_n to override"
        raise ValueError(msg)
    dim = 1 << (n + 1)
    ncols = 1 << n
    chunk = max(1, min(ncols, _CHUNK_ENTRIES // dim))
    starts = list(range(0, ncols, chunk))

    def one_chunk(c0: int) -> np.ndarray:
        cols = min(chunk, ncols - c0)
        amps = np.zeros((dim, cols), dtype=np.complex128)
        amps[c0 + np.arange(cols), np.arange(cols)] = 1.0
        _run_gates(amps, u.width, u.gates)
        return np.sum(amps.real * amps.real + amps.imag * amps.imag, axis=1)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(one_chunk, starts))
    else:
        partials = [one_chunk(c0) for c0 in starts]

    probs = partials[0]
    for part in partials[1:]:
        probs += part
    probs /= float(ncols)

    total = float(probs.sum())
    if abs(total - 1.0) > 1e-9:  # unitarity self-check
        msg = f"distribution sums to {total}; simulator defect"
        raise RuntimeError(msg)
    ceiling = 2.0 ** (-n) + 1e-12
    if float(probs.max()) > ceiling:  # clean-qubit ceiling self-check
        msg = f"outcome probability {probs.max()} exceeds 2**-{n}; simulator defect"
        raise RuntimeError(msg)
    return Distribution(n, probs)


def sample(d: Distribution, count: int, seed: int) -> list[str]:
    """Draw ``count`` outcome bit strings; identical (d, count, seed) give identical draws."""
    if count < 0:
        msg = f"count must be nonnegative, got {count}"
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    p = np.maximum(d.probs, 0.0)
    p = p / p.sum()
    width = d.n + 1
    draws = rng.choice(len(p), size=count, p=p)
    return [format(int(i), f"0{width}b") for i in draws]
