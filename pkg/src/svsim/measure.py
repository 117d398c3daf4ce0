"""All-qubit expectation reporting along the three spin axes.

For each qubit the report gives the probability of the -1 eigenvalue along
x, y and z, i.e. (1 - <sigma>) / 2.  With this convention a qubit in |1>
reads (0.50, 0.50, 1.00) and a qubit in |+> reads (0.00, 0.50, 0.50).

Measurement only reads the state.  A qubit below the local width is summed
rank-locally; a qubit at or above it needs the partner rank's matching
half, one pairwise exchange of half the local elements per such qubit, with
each rank summing the half of the pair products it received data for.
Scalar reductions ride the collective channel and cost no counted bytes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codec import Codebook
from .layout import PartitionLayout, TrafficLedger
from .state import LocalState, PrecisionMode
from .transport import Transport


@dataclass(frozen=True)
class ExpectationReport:
    qx: tuple[float, ...]
    qy: tuple[float, ...]
    qz: tuple[float, ...]
    norm_deviation: float = 0.0

    @property
    def n_qubits(self) -> int:
        return len(self.qz)

    def relabelled(self, permutation: tuple[int, ...]) -> "ExpectationReport":
        """Present values in program labels: label q lives at storage perm[q]."""
        return ExpectationReport(
            tuple(self.qx[p] for p in permutation),
            tuple(self.qy[p] for p in permutation),
            tuple(self.qz[p] for p in permutation),
            self.norm_deviation)

    def max_difference(self, other: "ExpectationReport") -> float:
        return max(
            max(abs(a - b) for a, b in zip(self.qx, other.qx)),
            max(abs(a - b) for a, b in zip(self.qy, other.qy)),
            max(abs(a - b) for a, b in zip(self.qz, other.qz)))


def _pair_sums_local(working: np.ndarray, q: int) -> tuple[float, complex]:
    """(one-weight, cross-product sum) over local pairs split by bit q."""
    view = working.reshape(-1, 2, 1 << q)
    ones = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    cross = complex(np.sum(view[:, 0, :].conj() * view[:, 1, :]))
    return ones, cross


def measure_all(states: list[LocalState], layout: PartitionLayout,
                transport: Transport, ledgers: list[TrafficLedger],
                codebook: Codebook | None = None,
                rank_order: list[int] | None = None) -> ExpectationReport:
    n = layout.total_qubits
    n_local = layout.local_qubits
    n_ranks = layout.rank_count
    half = layout.local_size // 2
    mode = states[0].mode
    order = list(rank_order) if rank_order is not None else list(range(n_ranks))

    workings = [None] * n_ranks
    for rank in order:
        workings[rank] = states[rank].working(codebook)
    local_norms = [float(np.real(np.vdot(w, w))) for w in workings]
    total_norm = sum(transport.collective(local_norms))

    qx, qy, qz = [], [], []
    for q in range(n):
        ones = [0.0] * n_ranks
        cross = [0j] * n_ranks
        if q < n_local:
            for rank in order:
                ones[rank], cross[rank] = _pair_sums_local(workings[rank], q)
        else:
            mask = 1 << (q - n_local)
            payload_bytes = half * mode.bytes_per_element
            for rank in order:
                partner = rank ^ mask
                low_side = (rank & mask) == 0
                send_sl = slice(half, None) if low_side else slice(0, half)
                transport.send(rank, partner, workings[rank][send_sl].copy(),
                               payload_bytes)
            for rank in order:
                partner = rank ^ mask
                low_side = (rank & mask) == 0
                received = transport.recv(rank, partner)
                own_sl = slice(0, half) if low_side else slice(half, None)
                own = workings[rank][own_sl]
                a0, a1 = (own, received) if low_side else (received, own)
                cross[rank] = complex(np.sum(a0.conj() * a1))
                if (rank >> (q - n_local)) & 1:
                    ones[rank] = local_norms[rank]
        s = sum(transport.collective(cross))
        z = sum(transport.collective(ones))
        qx.append((1.0 - 2.0 * s.real) / 2.0)
        qy.append((1.0 - 2.0 * s.imag) / 2.0)
        qz.append(z)

    return ExpectationReport(tuple(qx), tuple(qy), tuple(qz),
                             norm_deviation=abs(total_norm - 1.0))
