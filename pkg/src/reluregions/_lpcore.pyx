# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer simplex kernel over GMP integers.

Same algorithm and pivot sequence as ``_simplex.solve``; see that module for
the contract.
"""

from libc.stdlib cimport malloc, free
from libc.limits cimport LONG_MIN, LONG_MAX
from libc.string cimport strlen


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_ptr)
    void mpz_set_si(mpz_ptr, long)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_ptr)
    void mpz_mul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_sub(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_submul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_addmul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_divexact(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_neg(mpz_ptr, mpz_ptr)
    int mpz_cmp(mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    void mp_get_memory_functions(void *(**)(size_t), void *(**)(void *, size_t, size_t), void (**)(void *, size_t))


cdef int OPTIMAL = 0
cdef int INFEASIBLE = 1
cdef int UNBOUNDED = 2


cdef inline void _load(mpz_ptr z, object v) except *:
    if LONG_MIN < v < LONG_MAX:
        mpz_set_si(z, <long>v)
    else:
        s = format(v, "x").encode()
        mpz_set_str(z, s, 16)


cdef object _store(mpz_ptr z):
    cdef void (*freefunc)(void *, size_t) noexcept
    cdef char *buf = mpz_get_str(NULL, 16, z)
    cdef size_t length = strlen(buf)
    try:
        return int(buf[:length], 16)
    finally:
        mp_get_memory_functions(NULL, NULL, &freefunc)
        freefunc(buf, length + 1)


cdef class _Tableau:
    cdef mpz_ptr data
    cdef Py_ssize_t rows, width
    cdef mpz_t D, tmp, tmp2, best_num, best_den

    def __cinit__(self, Py_ssize_t rows, Py_ssize_t width):
        cdef Py_ssize_t k
        self.rows = rows
        self.width = width
        self.data = <mpz_ptr>malloc(rows * width * sizeof(__mpz_struct))
        if self.data == NULL:
            raise MemoryError()
        for k in range(rows * width):
            mpz_init(&self.data[k])
        mpz_init(self.D)
        mpz_init(self.tmp)
        mpz_init(self.tmp2)
        mpz_init(self.best_num)
        mpz_init(self.best_den)
        mpz_set_si(self.D, 1)

    def __dealloc__(self):
        cdef Py_ssize_t k
        if self.data != NULL:
            for k in range(self.rows * self.width):
                mpz_clear(&self.data[k])
            free(self.data)
        mpz_clear(self.D)
        mpz_clear(self.tmp)
        mpz_clear(self.tmp2)
        mpz_clear(self.best_num)
        mpz_clear(self.best_den)

    cdef inline mpz_ptr at(self, Py_ssize_t i, Py_ssize_t j):
        return &self.data[i * self.width + j]

    cdef void pivot(self, Py_ssize_t r, Py_ssize_t c, Py_ssize_t nrows):
        cdef Py_ssize_t i, j
        cdef mpz_t p, f
        cdef mpz_ptr cell
        cdef int p_is_D
        mpz_init(p)
        mpz_init(f)
        mpz_set(p, self.at(r, c))
        p_is_D = mpz_cmp(p, self.D) == 0
        for i in range(nrows):
            if i == r:
                continue
            mpz_set(f, self.at(i, c))
            if mpz_sgn(f) != 0:
                for j in range(self.width):
                    cell = self.at(i, j)
                    mpz_mul(self.tmp, p, cell)
                    mpz_submul(self.tmp, f, self.at(r, j))
                    mpz_divexact(cell, self.tmp, self.D)
            elif not p_is_D:
                for j in range(self.width):
                    cell = self.at(i, j)
                    if mpz_sgn(cell) != 0:
                        mpz_mul(self.tmp, p, cell)
                        mpz_divexact(cell, self.tmp, self.D)
        if mpz_sgn(p) < 0:
            for i in range(self.rows * self.width):
                mpz_neg(&self.data[i], &self.data[i])
            mpz_neg(self.D, p)
        else:
            mpz_set(self.D, p)
        mpz_clear(p)
        mpz_clear(f)

    cdef int run(self, list basis, Py_ssize_t m, Py_ssize_t ncols, list allowed, list active):
        cdef Py_ssize_t j, enter, leave, i
        cdef mpz_ptr a
        cdef int cmp
        while True:
            enter = -1
            for j in range(ncols):
                if allowed[j] and mpz_sgn(self.at(m, j)) < 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            for i in active:
                a = self.at(i, enter)
                if mpz_sgn(a) > 0:
                    if leave < 0:
                        leave = i
                        mpz_set(self.best_num, self.at(i, ncols))
                        mpz_set(self.best_den, a)
                        continue
                    mpz_mul(self.tmp, self.at(i, ncols), self.best_den)
                    mpz_mul(self.tmp2, self.best_num, a)
                    cmp = mpz_cmp(self.tmp, self.tmp2)
                    if cmp < 0 or (cmp == 0 and basis[i] < basis[leave]):
                        leave = i
                        mpz_set(self.best_num, self.at(i, ncols))
                        mpz_set(self.best_den, a)
            if leave < 0:
                return UNBOUNDED
            self.pivot(leave, enter, m + 1)
            basis[leave] = enter


def solve(A, b, eq, c):
    cdef Py_ssize_t m = len(A), n = len(c), i, j, k, col, ncols, width
    cdef _Tableau T
    cdef int status, s
    ineq = [i for i in range(m) if not eq[i]]
    slack_col = {}
    col = 2 * n
    for i in ineq:
        slack_col[i] = col
        col += 1
    sign = [(-1 if b[i] < 0 else 1) for i in range(m)]
    need_art = [i for i in range(m) if eq[i] or sign[i] < 0]
    art_col = {}
    for i in need_art:
        art_col[i] = col
        col += 1
    ncols = col
    width = ncols + 1

    T = _Tableau(m + 1, width)
    basis = []
    for i in range(m):
        s = sign[i]
        row = A[i]
        for k in range(n):
            v = row[k] * s
            if v:
                _load(T.at(i, k), v)
                _load(T.at(i, n + k), -v)
        if i in slack_col:
            mpz_set_si(T.at(i, slack_col[i]), s)
        if i in art_col:
            mpz_set_si(T.at(i, art_col[i]), 1)
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        _load(T.at(i, ncols), b[i] * s)
    active = list(range(m))

    if need_art:
        for i in need_art:
            for j in range(width):
                mpz_sub(T.at(m, j), T.at(m, j), T.at(i, j))
        for i in need_art:
            mpz_set_si(T.at(m, art_col[i]), 0)
        allowed = [True] * ncols
        T.run(basis, m, ncols, allowed, active)
        if mpz_sgn(T.at(m, ncols)) < 0:
            return INFEASIBLE, _store(T.D), None, None, None
        art_set = set(art_col.values())
        for i in range(m):
            if basis[i] in art_set:
                for j in range(ncols):
                    if j not in art_set and mpz_sgn(T.at(i, j)) != 0:
                        T.pivot(i, j, m + 1)
                        basis[i] = j
                        break
                else:
                    active.remove(i)
        allowed = [j not in art_set for j in range(ncols)]
    else:
        allowed = [True] * ncols

    cdef mpz_t acc, cz
    mpz_init(acc)
    mpz_init(cz)
    cost = [0] * ncols
    for k in range(n):
        cost[k] = c[k]
        cost[n + k] = -c[k]
    for j in range(width):
        mpz_set_si(acc, 0)
        for i in range(m):
            cb = cost[basis[i]]
            if cb:
                _load(cz, cb)
                mpz_addmul(acc, cz, T.at(i, j))
        if j < ncols and cost[j]:
            _load(cz, cost[j])
            mpz_submul(acc, cz, T.D)
        mpz_set(T.at(m, j), acc)
    mpz_clear(acc)
    mpz_clear(cz)

    status = T.run(basis, m, ncols, allowed, active)
    D = _store(T.D)
    if status == UNBOUNDED:
        return UNBOUNDED, D, None, None, None

    x_num = [0] * n
    for i in range(m):
        v = basis[i]
        if v < n:
            x_num[v] += _store(T.at(i, ncols))
        elif v < 2 * n:
            x_num[v - n] -= _store(T.at(i, ncols))
    y_num = [0] * m
    for i in range(m):
        if i in slack_col:
            y_num[i] = _store(T.at(m, slack_col[i]))
        else:
            y_num[i] = sign[i] * _store(T.at(m, art_col[i]))
    return OPTIMAL, D, x_num, y_num, _store(T.at(m, ncols))
