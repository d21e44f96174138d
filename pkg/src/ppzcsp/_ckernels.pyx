# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pykernels`` exactly, including float order."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


def ppz_batch(int d, int n, const i64[::1] lit_con, const i64[::1] lit_val,
              const i64[::1] con_len, const i64[::1] occ_start, const i64[::1] occ_lit,
              const i64[:, ::1] perms, const double[:, ::1] uniforms,
              unsigned char[::1] out_success, i64[:, ::1] out_assign):
    cdef Py_ssize_t m = con_len.shape[0]
    cdef Py_ssize_t B = perms.shape[0]
    cdef Py_ssize_t t, i, p, c, li
    cdef i64 x, v, size, idx, nforb, mark = 0
    cdef bint ok
    cdef i64 total = 0
    cdef i64 *remaining = <i64 *> malloc((m + 1) * sizeof(i64))
    cdef unsigned char *sat = <unsigned char *> malloc((m + 1) * sizeof(unsigned char))
    cdef i64 *forb = <i64 *> malloc((d + 1) * sizeof(i64))
    cdef i64 *assign = <i64 *> malloc((n + 1) * sizeof(i64))
    if remaining == NULL or sat == NULL or forb == NULL or assign == NULL:
        free(remaining); free(sat); free(forb); free(assign)
        raise MemoryError()
    try:
        for v in range(d + 1):
            forb[v] = -1
        for t in range(B):
            for c in range(m):
                remaining[c] = con_len[c]
                sat[c] = 0
            ok = True
            for i in range(n):
                x = perms[t, i]
                mark += 1
                nforb = 0
                for p in range(occ_start[x], occ_start[x + 1]):
                    li = occ_lit[p]
                    c = lit_con[li]
                    if sat[c] == 0 and remaining[c] == 1 and forb[lit_val[li]] != mark:
                        forb[lit_val[li]] = mark
                        nforb += 1
                size = d - nforb
                if size == 0:
                    ok = False
                    break
                idx = <i64> (uniforms[t, i] * size)
                if idx >= size:
                    idx = size - 1
                v = 0
                for v in range(1, d + 1):
                    if forb[v] != mark:
                        if idx == 0:
                            break
                        idx -= 1
                assign[x] = v
                for p in range(occ_start[x], occ_start[x + 1]):
                    li = occ_lit[p]
                    c = lit_con[li]
                    if lit_val[li] != v:
                        sat[c] = 1
                    remaining[c] -= 1
            if ok:
                for c in range(m):
                    if sat[c] == 0:
                        ok = False
                        break
            if ok:
                out_success[t] = 1
                for i in range(n):
                    out_assign[t, i] = assign[i]
                total += 1
            else:
                out_success[t] = 0
    finally:
        free(remaining); free(sat); free(forb); free(assign)
    return total


cdef struct DfsState:
    int d
    int n
    Py_ssize_t m
    const i64 *lit_con
    const i64 *lit_val
    const i64 *occ_start
    const i64 *occ_lit
    const i64 *perm
    i64 *remaining
    i64 *satcount
    unsigned char *forb   # n rows of d + 1 flags
    Py_ssize_t nsat


cdef double _dfs(DfsState *s, int depth, double weight) noexcept nogil:
    if depth == s.n:
        return weight if s.nsat == s.m else 0.0
    cdef i64 x = s.perm[depth]
    cdef unsigned char *forb = s.forb + depth * (s.d + 1)
    cdef i64 p, li, c, v, nforb = 0, size
    cdef double w, total = 0.0
    for v in range(s.d + 1):
        forb[v] = 0
    for p in range(s.occ_start[x], s.occ_start[x + 1]):
        li = s.occ_lit[p]
        c = s.lit_con[li]
        if s.satcount[c] == 0 and s.remaining[c] == 1 and forb[s.lit_val[li]] == 0:
            forb[s.lit_val[li]] = 1
            nforb += 1
    size = s.d - nforb
    if size == 0:
        return 0.0
    w = weight / size
    for v in range(1, s.d + 1):
        if forb[v]:
            continue
        for p in range(s.occ_start[x], s.occ_start[x + 1]):
            li = s.occ_lit[p]
            c = s.lit_con[li]
            if s.lit_val[li] != v:
                if s.satcount[c] == 0:
                    s.nsat += 1
                s.satcount[c] += 1
            s.remaining[c] -= 1
        total += _dfs(s, depth + 1, w)
        for p in range(s.occ_start[x], s.occ_start[x + 1]):
            li = s.occ_lit[p]
            c = s.lit_con[li]
            if s.lit_val[li] != v:
                s.satcount[c] -= 1
                if s.satcount[c] == 0:
                    s.nsat -= 1
            s.remaining[c] += 1
    return total


def branch_success(int d, int n, const i64[::1] lit_con, const i64[::1] lit_val,
                   const i64[::1] con_len, const i64[::1] occ_start, const i64[::1] occ_lit,
                   const i64[::1] perm):
    cdef Py_ssize_t m = con_len.shape[0]
    cdef Py_ssize_t c
    cdef DfsState s
    cdef double result
    cdef i64 dummy = 0
    s.d = d
    s.n = n
    s.m = m
    s.lit_con = &lit_con[0] if lit_con.shape[0] else &dummy
    s.lit_val = &lit_val[0] if lit_val.shape[0] else &dummy
    s.occ_start = &occ_start[0]
    s.occ_lit = &occ_lit[0] if occ_lit.shape[0] else &dummy
    s.perm = &perm[0] if perm.shape[0] else &dummy
    s.remaining = <i64 *> malloc((m + 1) * sizeof(i64))
    s.satcount = <i64 *> malloc((m + 1) * sizeof(i64))
    s.forb = <unsigned char *> malloc((n + 1) * (d + 1) * sizeof(unsigned char))
    if s.remaining == NULL or s.satcount == NULL or s.forb == NULL:
        free(s.remaining); free(s.satcount); free(s.forb)
        raise MemoryError()
    for c in range(m):
        s.remaining[c] = con_len[c]
        s.satcount[c] = 0
    s.nsat = 0
    try:
        with nogil:
            result = _dfs(&s, 0, 1.0)
    finally:
        free(s.remaining); free(s.satcount); free(s.forb)
    return result
