"""Dense states over labeled registers of photon-number qubits.

A mode is a single optical mode carrying a logical qubit in the
photon-number basis: |0> is the vacuum, |1> a single photon. Registers
are ordered tuples of string labels and the computational basis is
big-endian over the label sequence, so for labels (A, B) the amplitude
of |ab> sits at index 2a + b.

Density matrices may be subnormalized: ``weight`` tracks the trace,
which after a projection equals the post-selection probability. States
here are never renormalized behind the caller's back.

Everything is immutable after construction and every operation is a
pure function, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

__all__ = [
    "ATOL",
    "PSD_MIN_EIG",
    "Label",
    "LabelError",
    "PureState",
    "DensityMatrix",
    "ValidationReport",
    "basis_state",
    "tensor",
    "partial_trace",
    "project",
    "validate",
]

ATOL = 1e-12          # entrywise equality, Hermiticity and trace tolerance
PSD_MIN_EIG = -1e-10  # most negative admissible density-matrix eigenvalue

Label = str


class LabelError(ValueError):
    """A register was given duplicate, unknown, or colliding mode labels."""


def _as_labels(labels: Union[Label, Iterable[Label]]) -> tuple[Label, ...]:
    labels = (labels,) if isinstance(labels, str) else tuple(labels)
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate mode labels in {labels!r}")
    return labels


@dataclass(frozen=True)
class PureState:
    """Ket on a labeled register; ``amps[i]`` is the amplitude of basis index i."""

    labels: tuple[Label, ...]
    amps: np.ndarray

    def __post_init__(self):
        labels = _as_labels(self.labels)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(labels):
            raise ValueError(
                f"amplitude vector of length {amps.size} does not fit "
                f"{len(labels)} modes"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @property
    def num_modes(self) -> int:
        return len(self.labels)

    @property
    def norm2(self) -> float:
        """Squared norm; the weight carried by an unnormalized ket."""
        return float(np.vdot(self.amps, self.amps).real)

    def is_normalized(self, atol: float = ATOL) -> bool:
        return abs(self.norm2 - 1.0) <= atol

    def normalized(self) -> "PureState":
        n2 = self.norm2
        if n2 <= 0.0:
            raise ValueError("cannot normalize a zero state")
        return PureState(self.labels, self.amps / np.sqrt(n2))

    def reorder(self, labels: Iterable[Label]) -> "PureState":
        """Permute the register so it reads ``labels``."""
        labels = _as_labels(labels)
        if set(labels) != set(self.labels):
            raise LabelError(f"cannot reorder {self.labels!r} into {labels!r}")
        perm = [self.labels.index(lab) for lab in labels]
        amps = self.amps.reshape((2,) * self.num_modes).transpose(perm).reshape(-1)
        return PureState(labels, amps)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(
            self.labels, np.outer(self.amps, self.amps.conj()), weight=self.norm2
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": "pure_state",
            "labels": list(self.labels),
            "amps": [[z.real, z.imag] for z in self.amps],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PureState":
        amps = np.array([complex(re, im) for re, im in data["amps"]])
        return cls(tuple(data["labels"]), amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Possibly subnormalized density operator on a labeled register.

    ``weight`` is the trace. Operations keep it in sync; projections set
    it to the post-selection probability instead of renormalizing.
    """

    labels: tuple[Label, ...]
    entries: np.ndarray
    weight: float | None = None  # derived from the trace when omitted

    def __post_init__(self):
        labels = _as_labels(self.labels)
        dim = 2 ** len(labels)
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (dim, dim):
            raise ValueError(
                f"matrix of shape {entries.shape} does not fit {len(labels)} modes"
            )
        entries.setflags(write=False)
        weight = self.weight
        if weight is None:
            weight = float(np.trace(entries).real)
        weight = float(weight)
        if weight < 0.0:
            if weight < -ATOL:
                raise ValueError(f"negative weight {weight}")
            weight = 0.0
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "weight", weight)

    @property
    def num_modes(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 2 ** len(self.labels)

    def normalized(self) -> "DensityMatrix":
        if self.weight <= 0.0:
            raise ValueError("cannot normalize a zero-weight state")
        return DensityMatrix(self.labels, self.entries / self.weight, weight=1.0)

    def reorder(self, labels: Iterable[Label]) -> "DensityMatrix":
        """Permute the register so it reads ``labels``."""
        labels = _as_labels(labels)
        if set(labels) != set(self.labels):
            raise LabelError(f"cannot reorder {self.labels!r} into {labels!r}")
        n = self.num_modes
        perm = [self.labels.index(lab) for lab in labels]
        t = self.entries.reshape((2,) * (2 * n))
        t = t.transpose(perm + [n + p for p in perm])
        return DensityMatrix(labels, t.reshape(self.dim, self.dim), weight=self.weight)

    def to_json_dict(self) -> dict:
        return {
            "kind": "density_matrix",
            "labels": list(self.labels),
            "weight": self.weight,
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        entries = np.array(
            [[complex(re, im) for re, im in row] for row in data["entries"]]
        )
        return cls(tuple(data["labels"]), entries, weight=data.get("weight"))


def basis_state(labels: Iterable[Label], bits: Iterable[int]) -> PureState:
    """Computational-basis ket |b0 b1 ...> on the given register."""
    labels = _as_labels(labels)
    bits = tuple(int(b) for b in bits)
    if len(bits) != len(labels) or any(b not in (0, 1) for b in bits):
        raise ValueError(f"need one bit in {{0,1}} per mode, got {bits!r}")
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[idx] = 1.0
    return PureState(labels, amps)


State = Union[PureState, DensityMatrix]


def tensor(a: State, b: State) -> State:
    """Tensor product of two registers; labels concatenate, weights multiply."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.labels + b.labels, np.kron(a.amps, b.amps))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(
            a.labels + b.labels,
            np.kron(a.entries, b.entries),
            weight=a.weight * b.weight,
        )
    raise TypeError("tensor requires two states of the same kind")


def partial_trace(
    rho: DensityMatrix, discard: Union[Label, Iterable[Label]]
) -> DensityMatrix:
    """Trace out the ``discard`` modes, preserving the order of the rest.

    Discarding every mode leaves a 0-mode register whose 1x1 matrix holds
    the trace.
    """
    discard_set = set(_as_labels(discard))
    unknown = discard_set - set(rho.labels)
    if unknown:
        raise LabelError(f"cannot trace out unknown modes {sorted(unknown)!r}")
    n = rho.num_modes
    keep = [i for i, lab in enumerate(rho.labels) if lab not in discard_set]
    kept_labels = tuple(rho.labels[i] for i in keep)
    if not keep:
        tr = np.array([[np.trace(rho.entries)]])
        return DensityMatrix((), tr, weight=rho.weight)
    keep_set = set(keep)
    t = rho.entries.reshape((2,) * (2 * n))
    row_sub = list(range(n))
    col_sub = [n + i if i in keep_set else i for i in range(n)]
    out_sub = keep + [n + i for i in keep]
    red = np.einsum(t, row_sub + col_sub, out_sub)
    dim = 2 ** len(keep)
    return DensityMatrix(kept_labels, red.reshape(dim, dim), weight=rho.weight)


def project(rho: DensityMatrix, projector_ket: PureState) -> DensityMatrix:
    """Project a sub-register onto a normalized ket and trace it out.

    Returns <k|rho|k> as an operator on the remaining modes. Its weight
    is the post-selection probability, never larger than ``rho.weight``.
    """
    if not projector_ket.is_normalized():
        raise ValueError(
            f"projector ket must be normalized (norm^2 = {projector_ket.norm2})"
        )
    missing = set(projector_ket.labels) - set(rho.labels)
    if missing:
        raise LabelError(f"projector acts on unknown modes {sorted(missing)!r}")
    n = rho.num_modes
    proj_pos = [i for i, lab in enumerate(rho.labels) if lab in set(projector_ket.labels)]
    keep = [i for i in range(n) if i not in set(proj_pos)]
    kept_labels = tuple(rho.labels[i] for i in keep)
    # align the ket's mode order with its modes' order inside rho
    ket = projector_ket.reorder(tuple(rho.labels[i] for i in proj_pos))
    k = ket.amps.reshape((2,) * len(proj_pos))
    t = rho.entries.reshape((2,) * (2 * n))
    rho_sub = list(range(2 * n))
    bra_sub = proj_pos
    ket_sub = [n + p for p in proj_pos]
    out_sub = keep + [n + i for i in keep]
    res = np.einsum(k.conj(), bra_sub, t, rho_sub, k, ket_sub, out_sub)
    dim = 2 ** len(keep)
    res = res.reshape(dim, dim)
    return DensityMatrix(kept_labels, res, weight=float(np.trace(res).real))


@dataclass(frozen=True)
class ValidationReport:
    """Diagnostics of a density matrix against the module tolerances."""

    hermiticity_dev: float
    min_eigenvalue: float
    trace_dev: float
    passed: bool

    def __str__(self) -> str:
        status = "ok" if self.passed else "FAILED"
        return (
            f"validation {status}: |rho - rho^dag|_max = {self.hermiticity_dev:.3e}, "
            f"min eigenvalue = {self.min_eigenvalue:.3e}, "
            f"|trace - weight| = {self.trace_dev:.3e}"
        )


def validate(
    rho: DensityMatrix, atol: float = ATOL, min_eig: float = PSD_MIN_EIG
) -> ValidationReport:
    """Check Hermiticity, positivity, and trace bookkeeping.

    Always returns a report; never raises. The eigenvalue check runs on
    the Hermitian part so it stays meaningful for non-Hermitian input.
    """
    e = rho.entries
    herm_dev = float(np.max(np.abs(e - e.conj().T)))
    lo = float(np.linalg.eigvalsh((e + e.conj().T) / 2.0)[0])
    trace_dev = float(abs(complex(np.trace(e)) - rho.weight))
    passed = herm_dev <= atol and lo >= min_eig and trace_dev <= atol
    return ValidationReport(herm_dev, lo, trace_dev, passed)
