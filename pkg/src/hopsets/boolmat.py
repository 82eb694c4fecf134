"""Word-packed boolean matrices and transitive closure by repeated squaring."""
from __future__ import annotations

import math

import numpy as np

from ._kernels import backend as _k
from .augment import AugmentSet
from .errors import InputError
from .graph import VertexSubset, induced


class BoolMat:
    """Square bit matrix, rows packed little-endian into uint64 words."""

    __slots__ = ("dim", "bits")

    def __init__(self, dim, bits=None):
        self.dim = int(dim)
        words = max(1, (self.dim + 63) // 64)
        if bits is None:
            bits = np.zeros((self.dim, words), dtype=np.uint64)
        bits = np.ascontiguousarray(bits, dtype=np.uint64)
        if bits.shape != (self.dim, words):
            raise InputError(f"bit array shape {bits.shape} does not match dim {dim}")
        self.bits = bits

    @property
    def words(self):
        return self.bits.shape[1]

    @classmethod
    def identity(cls, dim):
        m = cls(dim)
        i = np.arange(dim)
        m.bits[i, i // 64] = np.left_shift(np.uint64(1), (i % 64).astype(np.uint64))
        return m

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=bool)
        dim = dense.shape[0]
        if dense.shape != (dim, dim):
            raise InputError("matrix must be square")
        words = max(1, (dim + 63) // 64)
        padded = np.zeros((dim, words * 64), dtype=bool)
        padded[:, :dim] = dense
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(dim, packed.view(np.uint64).reshape(dim, words))

    def to_dense(self):
        raw = np.unpackbits(self.bits.view(np.uint8), axis=1, bitorder="little")
        return raw[:, : self.dim].astype(bool)

    def __or__(self, other):
        return BoolMat(self.dim, self.bits | other.bits)

    def __eq__(self, other):
        if not isinstance(other, BoolMat):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.bits, other.bits)

    __hash__ = None


def bool_matmul(a, b, meter=None):
    """C[i, j] = OR_k A[i, k] AND B[k, j], OR-ing whole word rows of B.

    Rows of C are independent tasks; the meter charges one unit per word
    operation and the longest possible row as span.
    """
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")
    bits, work = _k.bool_matmul(a.bits, b.bits)
    if meter is not None:
        meter.charge(work, span=a.words * (a.dim + 1) + meter.barrier)
    return BoolMat(a.dim, bits)


def adjacency(g):
    dense = np.zeros((g.n, g.n), dtype=bool)
    src, dst = g.edges()
    dense[src, dst] = True
    return BoolMat.from_dense(dense)


def closure_matrix(g, meter=None):
    """Reflexive-transitive closure of g as a BoolMat: (A | I) squared ceil(log2 n) times."""
    m = adjacency(g) | BoolMat.identity(g.n)
    for _ in range(math.ceil(math.log2(g.n)) if g.n > 1 else 0):
        m = bool_matmul(m, m, meter)
    return m


def transitive_closure(g, s, meter=None):
    """All pairs (u, v), u != v, with u reaching v inside G[s], in g's vertex ids."""
    if not isinstance(s, VertexSubset):
        s = VertexSubset(s, g.n)
    if len(s) == 0:
        raise InputError("closure needs a non-empty vertex subset")
    sub = induced(g, s)
    dense = closure_matrix(sub, meter).to_dense()
    np.fill_diagonal(dense, False)
    u, v = np.nonzero(dense)
    out = AugmentSet()
    out.add_arrays(s.members[u], s.members[v])
    return out
