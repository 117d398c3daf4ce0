"""Strided gate kernels for one partition's amplitude array.

All kernels perform arithmetic in complex128 regardless of the array's
storage dtype; storing back into a complex64 array truncates, which is the
intended reduced-precision storage behaviour.

A single-qubit gate on local qubit q updates the disjoint pairs
(i, i + 2**q) over indices with bit q clear; a two-qubit gate updates the
disjoint quadruples spanned by both qubit strides.  Updates are vectorised,
so results do not depend on any internal visiting order.

The ``*_arrays`` variants operate element-wise across separate buffers that
hold pair/quadruple components owned by different partitions (or different
memory chunks); callers align the buffers so equal offsets are partners.
"""
from __future__ import annotations

import numpy as np


def pair_indices(n_local: int, q: int) -> np.ndarray:
    """Ascending indices with bit q clear: the low member of every pair."""
    if not 0 <= q < n_local:
        raise IndexError(f"qubit {q} outside local range {n_local}")
    step = 1 << q
    base = np.arange(0, 1 << n_local, step << 1, dtype=np.int64)
    return (base[:, None] + np.arange(step, dtype=np.int64)[None, :]).ravel()


def apply_single(psi: np.ndarray, q: int, matrix: np.ndarray) -> None:
    """In-place 2x2 update of all (i, i + 2**q) pairs."""
    n = psi.size
    step = 1 << q
    if step >= n:
        raise IndexError(f"qubit {q} outside local array of {n} amplitudes")
    view = psi.reshape(-1, 2, step)
    a0 = view[:, 0, :].astype(np.complex128)
    a1 = view[:, 1, :].astype(np.complex128)
    view[:, 0, :] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    view[:, 1, :] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def apply_two(psi: np.ndarray, qa: int, qb: int, matrix: np.ndarray) -> None:
    """In-place 4x4 update of all quadruples spanned by qubits qa and qb.

    Matrix basis: index = bit(qa) + 2 * bit(qb).
    """
    n = psi.size
    if qa == qb:
        raise ValueError("two-qubit gate requires distinct qubits")
    if (1 << qa) >= n or (1 << qb) >= n:
        raise IndexError(f"qubits ({qa}, {qb}) outside local array of {n} amplitudes")
    lo, hi = sorted((qa, qb))
    view = psi.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)

    def comp(xa: int, xb: int) -> np.ndarray:
        bit_hi, bit_lo = (xa, xb) if qa == hi else (xb, xa)
        return view[:, bit_hi, :, bit_lo, :]

    a = [comp(i & 1, i >> 1).astype(np.complex128) for i in range(4)]
    for row in range(4):
        comp(row & 1, row >> 1)[...] = (
            matrix[row, 0] * a[0] + matrix[row, 1] * a[1]
            + matrix[row, 2] * a[2] + matrix[row, 3] * a[3])


def apply_diagonal(psi: np.ndarray, local_bits: tuple[int, ...], factor: complex) -> None:
    """Multiply by ``factor`` where every listed local bit reads 1.

    Bits at or above the local width are the caller's responsibility: it
    resolves them against the partition's global index base and either drops
    them from ``local_bits`` or skips the call entirely.
    """
    if not local_bits:
        psi *= np.complex128(factor)
        return
    idx = np.arange(psi.size, dtype=np.int64)
    mask = np.ones(psi.size, dtype=bool)
    for b in local_bits:
        mask &= (idx >> b) & 1 == 1
    psi[mask] = psi[mask].astype(np.complex128) * factor


def apply_pair_arrays(a0: np.ndarray, a1: np.ndarray, matrix: np.ndarray):
    """2x2 update across two aligned component buffers; returns new buffers."""
    b0 = a0.astype(np.complex128)
    b1 = a1.astype(np.complex128)
    return matrix[0, 0] * b0 + matrix[0, 1] * b1, matrix[1, 0] * b0 + matrix[1, 1] * b1


def apply_quad_arrays(components: list[np.ndarray], matrix: np.ndarray) -> list[np.ndarray]:
    """4x4 update across four aligned component buffers (basis order 0..3)."""
    a = [c.astype(np.complex128) for c in components]
    return [
        matrix[row, 0] * a[0] + matrix[row, 1] * a[1]
        + matrix[row, 2] * a[2] + matrix[row, 3] * a[3]
        for row in range(4)
    ]


def norm_squared(psi: np.ndarray) -> float:
    a = psi.astype(np.complex128, copy=False)
    return float(np.real(np.vdot(a, a)))
