# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) Markowitz elimination, p < 2**31.

Mirrors ``_markowitz.eliminate`` in modular mode step for step, so both
produce the same pivot sequence.
"""

from libc.stdint cimport int32_t, int64_t
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

from ._markowitz import Elimination, NnzCapExceeded

ctypedef pair[int32_t, int64_t] Entry
ctypedef pair[int64_t, int64_t] Key

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef struct Op:
    # row operation R[tgt] -= f * R[src], in elimination order
    int32_t tgt
    int32_t src
    int64_t f


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef inline Py_ssize_t _find(vector[Entry]& row, int32_t c) nogil:
    cdef Py_ssize_t lo = 0, hi = <Py_ssize_t>row.size(), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid].first < c:
            lo = mid + 1
        else:
            hi = mid
    if lo < <Py_ssize_t>row.size() and row[lo].first == c:
        return lo
    return -1


cdef int _run(int32_t ncols, vector[vector[Entry]]& R, int64_t p, int64_t cap,
              bint keep, vector[int32_t]& piv_col, vector[vector[Entry]]& piv_rows,
              int64_t* nnz_out, vector[Op]* ops=NULL, vector[int32_t]* piv_src=NULL) nogil:
    cdef Py_ssize_t nrows = R.size()
    cdef vector[char] active
    cdef vector[vector[int32_t]] colrows
    cdef vector[int32_t] colcount
    cdef vector[char] isdirty
    cdef vector[int32_t] dirty
    cdef priority_queue[Key] rowq
    cdef priority_queue[Key] colq
    cdef vector[Entry] tmp
    cdef vector[int32_t] targets
    cdef Py_ssize_t i, t, a_i, b_i, na, nb, idx
    cdef int32_t c, j, r0, c_r, pr, pc, c0, r_c, best_cnt, best_len
    cdef int64_t nnz = 0, L0, C0, cost_r, cost_c, pv, inv, f, v, before
    cdef Key top

    active.resize(nrows, 0)
    colrows.resize(ncols)
    colcount.resize(ncols, 0)
    isdirty.resize(ncols, 0)
    for i in range(nrows):
        if R[i].size():
            active[i] = 1
            rowq.push(Key(-<int64_t>R[i].size(), -i))
            nnz += R[i].size()
            for t in range(<Py_ssize_t>R[i].size()):
                c = R[i][t].first
                colrows[c].push_back(<int32_t>i)
                colcount[c] += 1
    for c in range(ncols):
        if colcount[c]:
            colq.push(Key(-<int64_t>colcount[c], -c))

    while True:
        while not rowq.empty():
            top = rowq.top()
            i = -top.second
            if active[i] and <int64_t>R[i].size() == -top.first:
                break
            rowq.pop()
        if rowq.empty():
            break
        top = rowq.top()
        r0 = <int32_t>(-top.second)
        L0 = -top.first
        c_r = -1
        best_cnt = 0
        for t in range(<Py_ssize_t>R[r0].size()):
            c = R[r0][t].first
            if c_r < 0 or colcount[c] < best_cnt or (colcount[c] == best_cnt and c < c_r):
                c_r = c
                best_cnt = colcount[c]
        cost_r = (L0 - 1) * (best_cnt - 1)
        pr = r0
        pc = c_r
        if cost_r > 0:
            while not colq.empty():
                top = colq.top()
                c = <int32_t>(-top.second)
                if -top.first > 0 and colcount[c] == -top.first:
                    break
                colq.pop()
            if not colq.empty():
                top = colq.top()
                c0 = <int32_t>(-top.second)
                C0 = -top.first
                r_c = -1
                best_len = 0
                for t in range(<Py_ssize_t>colrows[c0].size()):
                    i = colrows[c0][t]
                    if not active[i] or _find(R[i], c0) < 0:
                        continue
                    if r_c < 0 or <int32_t>R[i].size() < best_len or (
                            <int32_t>R[i].size() == best_len and i < r_c):
                        r_c = <int32_t>i
                        best_len = <int32_t>R[i].size()
                cost_c = (best_len - 1) * (C0 - 1)
                if cost_c < cost_r:
                    pr = r_c
                    pc = c0

        # take the pivot row out of the active matrix
        active[pr] = 0
        piv_rows.push_back(vector[Entry]())
        piv_rows.back().swap(R[pr])
        piv_col.push_back(pc)
        if piv_src != NULL:
            piv_src.push_back(pr)
        idx = _find(piv_rows.back(), pc)
        pv = piv_rows.back()[idx].second
        inv = _inv(pv, p)
        for t in range(<Py_ssize_t>piv_rows.back().size()):
            j = piv_rows.back()[t].first
            colcount[j] -= 1
            if not isdirty[j]:
                isdirty[j] = 1
                dirty.push_back(j)

        # distinct active rows holding pc
        targets.clear()
        for t in range(<Py_ssize_t>colrows[pc].size()):
            i = colrows[pc][t]
            if active[i] == 1 and _find(R[i], pc) >= 0:
                targets.push_back(<int32_t>i)
                active[i] = 2
        for t in range(<Py_ssize_t>targets.size()):
            active[targets[t]] = 1

        for t in range(<Py_ssize_t>targets.size()):
            i = targets[t]
            idx = _find(R[i], pc)
            f = R[i][idx].second * inv % p
            if ops != NULL:
                ops.push_back(Op(i, pr, f))
            before = R[i].size()
            tmp.clear()
            na = R[i].size()
            nb = piv_rows.back().size()
            a_i = 0
            b_i = 0
            while a_i < na or b_i < nb:
                if b_i >= nb or (a_i < na and R[i][a_i].first < piv_rows.back()[b_i].first):
                    tmp.push_back(R[i][a_i])
                    a_i += 1
                elif a_i >= na or piv_rows.back()[b_i].first < R[i][a_i].first:
                    j = piv_rows.back()[b_i].first
                    v = (p - f * piv_rows.back()[b_i].second % p) % p
                    tmp.push_back(Entry(j, v))
                    colrows[j].push_back(<int32_t>i)
                    colcount[j] += 1
                    if not isdirty[j]:
                        isdirty[j] = 1
                        dirty.push_back(j)
                    b_i += 1
                else:
                    j = R[i][a_i].first
                    v = (R[i][a_i].second - f * piv_rows.back()[b_i].second % p) % p
                    if v < 0:
                        v += p
                    if v:
                        tmp.push_back(Entry(j, v))
                    else:
                        colcount[j] -= 1
                        if not isdirty[j]:
                            isdirty[j] = 1
                            dirty.push_back(j)
                    a_i += 1
                    b_i += 1
            R[i].swap(tmp)
            nnz += <int64_t>R[i].size() - before
            if R[i].size():
                rowq.push(Key(-<int64_t>R[i].size(), -i))
            else:
                active[i] = 0

        colrows[pc].clear()
        for t in range(<Py_ssize_t>dirty.size()):
            j = dirty[t]
            isdirty[j] = 0
            if colcount[j] > 0:
                colq.push(Key(-<int64_t>colcount[j], -j))
                if <int64_t>colrows[j].size() > 4 * <int64_t>colcount[j] + 32:
                    _compact(colrows[j], R, active, j)
        dirty.clear()
        if not keep:
            nnz -= piv_rows.back().size()
            piv_rows.back().clear()
            piv_rows.back().shrink_to_fit()
        if cap > 0 and nnz > cap:
            nnz_out[0] = nnz
            return 1
    nnz_out[0] = nnz
    return 0


cdef void _compact(vector[int32_t]& lst, vector[vector[Entry]]& R, vector[char]& active,
                   int32_t c) nogil:
    cdef vector[int32_t] keep
    cdef Py_ssize_t t
    cdef int32_t i
    for t in range(<Py_ssize_t>lst.size()):
        i = lst[t]
        if active[i] == 1 and _find(R[i], c) >= 0:
            active[i] = 3
            keep.push_back(i)
    for t in range(<Py_ssize_t>keep.size()):
        active[keep[t]] = 1
    lst.swap(keep)


cdef void _backsolve(int32_t ncols, int64_t p, vector[int32_t]& piv_col,
                     vector[vector[Entry]]& piv_rows, vector[int32_t]& free,
                     vector[vector[Entry]]& out) nogil:
    cdef vector[int64_t] x
    cdef Py_ssize_t k, t, nf = free.size()
    cdef int32_t pc, j
    cdef int64_t s, pv
    out.resize(nf)
    for t in range(nf):
        x.assign(ncols, 0)
        x[free[t]] = 1
        k = <Py_ssize_t>piv_col.size() - 1
        while k >= 0:
            pc = piv_col[k]
            s = 0
            pv = 0
            for j in range(<int32_t>piv_rows[k].size()):
                if piv_rows[k][j].first == pc:
                    pv = piv_rows[k][j].second
                elif x[piv_rows[k][j].first]:
                    s = (s + piv_rows[k][j].second * x[piv_rows[k][j].first]) % p
            if s:
                x[pc] = (p - s) * _inv(pv, p) % p
            k -= 1
        for j in range(ncols):
            if x[j]:
                out[t].push_back(Entry(j, x[j]))


def eliminate(int ncols, rows, long long modulus, long long nnz_cap=0,
              bint keep_pivots=False, bint kernel=False):
    """Same contract as ``_markowitz.eliminate`` for ``0 < modulus < 2**31``."""
    if modulus <= 1 or modulus >= 2 ** 31:
        raise ValueError("compiled kernel needs 1 < modulus < 2**31")
    cdef vector[vector[Entry]] R
    cdef vector[int32_t] piv_col
    cdef vector[vector[Entry]] piv_rows
    cdef vector[int32_t] free
    cdef vector[vector[Entry]] kern
    cdef vector[char] done
    cdef int64_t p = modulus, v, nnz = 0
    cdef int status
    cdef int32_t c
    cdef bint keep = keep_pivots or kernel
    R.resize(len(rows))
    cdef Py_ssize_t i = 0, t, k
    for row in rows:
        for c_obj, v_obj in sorted(row):
            c = c_obj
            if c < 0 or c >= ncols:
                raise IndexError(f"column {c} out of range")
            v = v_obj % modulus
            if v:
                if R[i].size() and R[i].back().first == c:
                    raise ValueError(f"duplicate entry in row {i}, column {c}")
                R[i].push_back(Entry(c, v))
        i += 1
    with nogil:
        status = _run(ncols, R, p, nnz_cap, keep, piv_col, piv_rows, &nnz)
    if status:
        raise NnzCapExceeded(nnz, nnz_cap)
    pcols = [piv_col[t] for t in range(<Py_ssize_t>piv_col.size())]
    prows = []
    if keep_pivots:
        for t in range(<Py_ssize_t>piv_rows.size()):
            prows.append({piv_rows[t][k].first: piv_rows[t][k].second
                          for k in range(<Py_ssize_t>piv_rows[t].size())})
    elim = Elimination(ncols, pcols, prows, modulus)
    if kernel:
        done.resize(ncols, 0)
        for t in range(<Py_ssize_t>piv_col.size()):
            done[piv_col[t]] = 1
        for c in range(ncols):
            if not done[c]:
                free.push_back(c)
        with nogil:
            _backsolve(ncols, p, piv_col, piv_rows, free, kern)
        elim.kernel = [{kern[t][k].first: kern[t][k].second for k in range(<Py_ssize_t>kern[t].size())}
                       for t in range(<Py_ssize_t>kern.size())]
    return elim


cdef class PadicSolver:
    """p-adic digits of the kernel vector with a 1 in column ``free_col``.

    The columns other than ``free_col`` must be independent modulo p (so the
    kernel is at most one-dimensional and the vector is unique).  The
    factorization is computed once; each digit costs a replay of the row
    operations, a back substitution and an exact residual update on the
    square system of pivot rows.  ``ok`` is false when that fails or when
    coefficients are too large for the int64 residual arithmetic.
    """

    cdef int64_t p
    cdef int32_t ncols, free_col
    cdef vector[vector[Entry]] orig
    cdef vector[int32_t] piv_col
    cdef vector[int32_t] piv_src
    cdef vector[vector[Entry]] piv_rows
    cdef vector[Op] ops
    cdef vector[int64_t] resid
    cdef vector[int64_t] inv_piv
    cdef public bint ok

    def __init__(self, int ncols, rows, int free_col, long long modulus):
        if modulus <= 1 or modulus >= 2 ** 31:
            raise ValueError("compiled kernel needs 1 < modulus < 2**31")
        cdef vector[vector[Entry]] R
        cdef int64_t nnz = 0, v
        cdef int32_t c
        cdef Py_ssize_t i = 0, k
        self.p = modulus
        self.ncols = ncols
        self.free_col = free_col
        self.ok = True
        R.resize(len(rows))
        self.orig.resize(len(rows))
        self.resid.assign(len(rows), 0)
        for row in rows:
            rowsum = 0
            for c_obj, v_obj in sorted(row):
                if abs(v_obj) >= 2 ** 31:
                    self.ok = False
                    return
                rowsum += abs(v_obj)
                if c_obj == free_col:
                    self.resid[i] = -v_obj
                    continue
                c = c_obj
                if c < 0 or c >= ncols:
                    raise IndexError(f"column {c} out of range")
                self.orig[i].push_back(Entry(c, v_obj))
                v = v_obj % modulus
                if v:
                    R[i].push_back(Entry(c, v))
            if rowsum >= 2 ** 31:
                self.ok = False
                return
            i += 1
        with nogil:
            _run(ncols, R, self.p, 0, True, self.piv_col, self.piv_rows, &nnz,
                 &self.ops, &self.piv_src)
        if <int32_t>self.piv_col.size() != ncols - 1:
            self.ok = False
            return
        self.inv_piv.resize(self.piv_col.size())
        for k in range(<Py_ssize_t>self.piv_col.size()):
            self.inv_piv[k] = _inv(self.piv_rows[k][_find(self.piv_rows[k], self.piv_col[k])].second,
                                   self.p)

    cdef void _step(self, vector[int64_t]& y) nogil:
        cdef vector[int64_t] b
        cdef Py_ssize_t t, k, nr = self.resid.size()
        cdef int64_t p = self.p, s, w
        cdef int32_t pc, j
        cdef i128 acc
        b.resize(nr)
        for t in range(nr):
            w = self.resid[t] % p
            b[t] = w + p if w < 0 else w
        for t in range(<Py_ssize_t>self.ops.size()):
            b[self.ops[t].tgt] = (b[self.ops[t].tgt] + (p - self.ops[t].f) * b[self.ops[t].src]) % p
        y.assign(self.ncols, 0)
        k = <Py_ssize_t>self.piv_col.size() - 1
        while k >= 0:
            pc = self.piv_col[k]
            s = b[self.piv_src[k]]
            for t in range(<Py_ssize_t>self.piv_rows[k].size()):
                j = self.piv_rows[k][t].first
                if j != pc and y[j]:
                    s = (s + (p - self.piv_rows[k][t].second) * y[j]) % p
            y[pc] = s * self.inv_piv[k] % p
            k -= 1
        # exact residual update on the pivot rows: r <- (r - M y) / p
        for k in range(<Py_ssize_t>self.piv_src.size()):
            t = self.piv_src[k]
            acc = self.resid[t]
            for j in range(<int32_t>self.orig[t].size()):
                acc -= <i128>self.orig[t][j].second * y[self.orig[t][j].first]
            self.resid[t] = <int64_t>(acc / p)

    def digits(self, int n):
        """The next ``n`` digit vectors, as lists of length ``ncols``."""
        if not self.ok:
            raise ValueError("solver is not usable")
        cdef vector[int64_t] y
        out = []
        for _ in range(n):
            with nogil:
                self._step(y)
            out.append([y[j] for j in range(self.ncols)])
        return out
