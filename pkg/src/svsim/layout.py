"""Partitioning of the state vector across ranks and exchange planning.

The full index space of an N-qubit state is split over n = 2**(N - N')
ranks; rank r owns the 2**N' global indices whose top N - N' bits equal r.
Gates on qubits below N' touch only co-resident pairs and need no
communication.  A non-diagonal single-qubit gate on qubit j >= N' pairs each
rank with rank XOR 2**(j - N') and moves half the local elements in each
direction; a generic two-qubit gate with both qubits high spreads each
quadruple over a four-rank group and moves three quarters per rank.
Diagonal gates never move data regardless of their qubit indices.

The traffic ledger records these volumes exactly (count times bytes per
element for the storage mode), which is what makes the volume rules
assertable in tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import gates as g
from .state import PrecisionMode

GIB = 1 << 30


@dataclass(frozen=True)
class PartitionLayout:
    total_qubits: int
    local_qubits: int

    def __post_init__(self):
        if self.total_qubits < 1:
            raise ValueError("need at least one qubit")
        if not 1 <= self.local_qubits <= self.total_qubits:
            raise ValueError(
                f"local qubits {self.local_qubits} not in [1, {self.total_qubits}]")

    @property
    def rank_count(self) -> int:
        return 1 << (self.total_qubits - self.local_qubits)

    @property
    def local_size(self) -> int:
        return 1 << self.local_qubits

    def rank_base(self, rank: int) -> int:
        return rank << self.local_qubits


def memory_bytes(n_qubits: int, mode: PrecisionMode) -> int:
    """State-vector bytes for an N-qubit register in the given storage mode."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    shift = {PrecisionMode.FP64: 4, PrecisionMode.FP32: 3, PrecisionMode.BYTE: 1}[mode]
    return 1 << (n_qubits + shift)


@dataclass(frozen=True)
class ExchangePlan:
    """What one gate moves between ranks.

    kind "none": all touched amplitudes are co-resident.
    kind "pairwise": each rank exchanges element_count elements with
        rank XOR masks[0].
    kind "quad": each rank sends element_count elements in total, a third to
        each other member of its four-rank group spanned by masks.
    """
    kind: str
    masks: tuple[int, ...]
    element_count: int
    bytes_per_element: int

    @property
    def bytes_per_rank(self) -> int:
        return self.element_count * self.bytes_per_element


def plan_exchange(layout: PartitionLayout, gate: g.Gate, mode: PrecisionMode) -> ExchangePlan:
    """Exchange volume and partners implied by a gate under a layout."""
    none = ExchangePlan("none", (), 0, mode.bytes_per_element)
    if gate.kind == "M" or g.is_diagonal(gate):
        return none
    n_local = layout.local_qubits
    high = tuple(q for q in gate.qubits if q >= n_local)
    if not high:
        return none
    half = layout.local_size // 2
    if len(high) == 1:
        if len(gate.qubits) == 2 and layout.local_size < 4:
            raise ValueError("two-qubit exchange needs at least 4 local amplitudes")
        mask = 1 << (high[0] - n_local)
        return ExchangePlan("pairwise", (mask,), half, mode.bytes_per_element)
    if layout.local_size < 4:
        raise ValueError("two-qubit exchange needs at least 4 local amplitudes")
    masks = tuple(1 << (q - n_local) for q in high)
    return ExchangePlan("quad", masks, 3 * layout.local_size // 4, mode.bytes_per_element)


@dataclass
class TrafficLedger:
    """Monotone per-rank counters; one instance per rank worker."""
    inter_rank_bytes_sent: int = 0
    inter_rank_bytes_received: int = 0
    inter_rank_messages: int = 0
    tier_bytes_moved: int = 0
    tier_transfer_count: int = 0
    gate_operations: int = 0

    def count_send(self, nbytes: int) -> None:
        self.inter_rank_bytes_sent += nbytes
        self.inter_rank_messages += 1

    def count_receive(self, nbytes: int) -> None:
        self.inter_rank_bytes_received += nbytes

    def count_tier(self, nbytes: int, transfers: int = 1) -> None:
        self.tier_bytes_moved += nbytes
        self.tier_transfer_count += transfers

    def snapshot(self) -> dict:
        return dict(self.__dict__)


def gibibytes_exchanged(ledger: TrafficLedger) -> int:
    """Data sent plus received by one rank, in integer GiB as reported."""
    return round((ledger.inter_rank_bytes_sent + ledger.inter_rank_bytes_received) / GIB)
