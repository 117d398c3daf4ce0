"""Per-partition amplitude storage.

A partition holds 2**n_local amplitudes in one of three storage modes.
Arithmetic always runs in double precision; the mode only controls what is
kept at rest (and therefore what travels over exchanges):

  FP64: complex128, 16 bytes per amplitude
  FP32: complex64, 8 bytes per amplitude
  BYTE: two uint8 codebook indices, 2 bytes per amplitude
"""
from __future__ import annotations

import enum

import numpy as np

from .codec import Codebook


class PrecisionMode(enum.Enum):
    FP64 = "fp64"
    FP32 = "fp32"
    BYTE = "be"

    @property
    def bytes_per_element(self) -> int:
        return {PrecisionMode.FP64: 16, PrecisionMode.FP32: 8, PrecisionMode.BYTE: 2}[self]

    @property
    def norm_tolerance(self) -> float:
        return 1e-5 if self is PrecisionMode.FP32 else 1e-12


class LocalState:
    """One partition's slice of the state vector."""

    def __init__(self, n_local: int, mode: PrecisionMode):
        self.n_local = n_local
        self.mode = mode
        size = 1 << n_local
        if mode is PrecisionMode.FP64:
            self.psi = np.zeros(size, dtype=np.complex128)
        elif mode is PrecisionMode.FP32:
            self.psi = np.zeros(size, dtype=np.complex64)
        else:
            self.mag_idx = np.zeros(size, dtype=np.uint8)
            self.phase_idx = np.zeros(size, dtype=np.uint8)

    @classmethod
    def zero_state(cls, n_local: int, mode: PrecisionMode, with_unit_amplitude: bool):
        """All-zeros slice; the partition owning global index 0 gets amplitude 1.

        In BYTE mode this relies on the codebook's pinned entries: magnitude
        index 1 is 1.0 and phase index 0 is 0, so no synchronisation is needed
        to encode the initial state.
        """
        state = cls(n_local, mode)
        if with_unit_amplitude:
            if mode is PrecisionMode.BYTE:
                state.mag_idx[0] = 1
            else:
                state.psi[0] = 1.0
        return state

    @property
    def size(self) -> int:
        return 1 << self.n_local

    @property
    def storage_nbytes(self) -> int:
        return self.size * self.mode.bytes_per_element

    def working(self, codebook: Codebook | None = None) -> np.ndarray:
        """Decoded complex128 copy of the full slice."""
        if self.mode is PrecisionMode.BYTE:
            return codebook.decode(self.mag_idx, self.phase_idx)
        return self.psi.astype(np.complex128)

    def store(self, values: np.ndarray, codebook: Codebook | None = None,
              where: np.ndarray | None = None) -> None:
        """Write back computed values, re-encoding as the mode requires.

        ``where`` restricts the write to an index array or boolean mask; in
        BYTE mode untouched positions keep their existing bytes.  BYTE writes
        must happen after the codebook barrier for the producing gate.
        """
        if self.mode is PrecisionMode.BYTE:
            vals = values if where is None else values
            mag, ph = codebook.encode(vals)
            if where is None:
                self.mag_idx[:] = mag
                self.phase_idx[:] = ph
            else:
                self.mag_idx[where] = mag
                self.phase_idx[where] = ph
        elif where is None:
            self.psi[:] = values
        else:
            self.psi[where] = values

    def norm_squared(self, codebook: Codebook | None = None) -> float:
        w = self.working(codebook)
        return float(np.real(np.vdot(w, w)))
