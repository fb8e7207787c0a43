"""Field-dispatching facade over the GF(2) bitset kernels and mod-p code.

Modules and submodules never touch packed words or dense rows directly;
they go through an ops object obtained from `ops_for(p)`.  For p = 2
the representation is packed uint64 bitsets (`bitmat`), otherwise dense
int64 rows mod p (`modp`).  All methods treat row spaces as immutable
values in fully reduced row-echelon form.
"""

import numpy as np

from . import bitmat, modp


class F2Ops:
    p = 2

    def pack(self, dense, n):
        return bitmat.pack_rows(dense, n)

    def pack_vec(self, dense, n):
        return bitmat.pack_vec(dense, n)

    def unpack(self, rows, n):
        return bitmat.unpack_rows(rows, n)

    def unpack_vec(self, vec, n):
        return bitmat.unpack_vec(vec, n)

    def zero_vec(self, n):
        return bitmat.zero_vec(n)

    def unit_vec(self, i, n):
        v = bitmat.zero_vec(n)
        bitmat.set_bit(v, i)
        return v

    def empty_mat(self, n):
        return bitmat.zero_mat(0, n)

    def rref(self, mat, n):
        return bitmat.rref(mat, n)

    def reduce_row(self, row, basis, pivots):
        return bitmat.reduce_row(row, basis, pivots)

    def vec_mat(self, v, act, n):
        return bitmat.vec_mat(v, act, n)

    def cyclic_closure(self, seed, acts, n):
        if not acts:
            return bitmat.rref(seed[None, :], n)
        stack = np.stack(acts)
        return bitmat.cyclic_closure(seed, stack, n)

    def nullspace(self, mat, n):
        return bitmat.nullspace(mat, n)

    def left_nullspace(self, mat, nrows, n):
        return bitmat.left_nullspace(mat, nrows, n)

    def coords(self, row, basis, pivots, n):
        return bitmat.coords_in_basis(row, basis, pivots, n)

    def vstack(self, mats, n):
        mats = [m for m in mats if m.shape[0]]
        if not mats:
            return self.empty_mat(n)
        return np.vstack(mats)

    def is_zero(self, vec):
        return bitmat.is_zero(vec)

    def mat_key(self, mat):
        return mat.tobytes()

    def add(self, a, b):
        return a ^ b

    def enumerate_nonzero(self, n):
        return bitmat.enumerate_nonzero_vectors(n)

    def count_nonzero_vectors(self, n):
        return (1 << n) - 1


class FpOps:
    def __init__(self, p):
        self.p = p

    def pack(self, dense, n):
        out = np.array(dense, dtype=np.int64) % self.p
        if out.ndim == 1:
            out = out[None, :]
        return out

    def pack_vec(self, dense, n):
        return np.array(dense, dtype=np.int64) % self.p

    def unpack(self, rows, n):
        return np.array(rows, dtype=np.int64)

    def unpack_vec(self, vec, n):
        return np.array(vec, dtype=np.int64)

    def zero_vec(self, n):
        return np.zeros(n, dtype=np.int64)

    def unit_vec(self, i, n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return v

    def empty_mat(self, n):
        return np.zeros((0, n), dtype=np.int64)

    def rref(self, mat, n):
        return modp.rref(mat, self.p)

    def reduce_row(self, row, basis, pivots):
        return modp.reduce_row(row, basis, pivots, self.p)

    def vec_mat(self, v, act, n):
        return modp.vec_mat(v, act, self.p)

    def cyclic_closure(self, seed, acts, n):
        return modp.cyclic_closure(seed, acts, self.p)

    def nullspace(self, mat, n):
        return modp.nullspace(mat, self.p)

    def left_nullspace(self, mat, nrows, n):
        return modp.nullspace(np.ascontiguousarray(mat[:nrows].T), self.p)

    def coords(self, row, basis, pivots, n):
        return modp.coords_in_basis(row, basis, pivots, self.p)

    def vstack(self, mats, n):
        mats = [m for m in mats if m.shape[0]]
        if not mats:
            return self.empty_mat(n)
        return np.vstack(mats)

    def is_zero(self, vec):
        return not vec.any()

    def mat_key(self, mat):
        return mat.tobytes()

    def add(self, a, b):
        return (a + b) % self.p

    def enumerate_nonzero(self, n):
        return modp.enumerate_nonzero_vectors(n, self.p)

    def count_nonzero_vectors(self, n):
        return self.p ** n - 1


_F2 = F2Ops()
_CACHE = {2: _F2}


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def ops_for(p):
    """Ops object for GF(p); cached per prime."""
    if p not in _CACHE:
        _CACHE[p] = FpOps(p)
    return _CACHE[p]


def in_span(ops, row, basis, pivots):
    return ops.is_zero(ops.reduce_row(row, basis, pivots))


def span_contains(ops, big, big_piv, small, small_piv):
    """Whether the row space `small` is contained in `big`."""
    for i in range(small.shape[0]):
        if not in_span(ops, small[i], big, big_piv):
            return False
    return True
