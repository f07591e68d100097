"""Pure-Python integer simplex kernel.

Solves ``max c.x  s.t.  A x <= b`` (rows flagged in ``eq`` are equalities) over
free variables ``x``, with integer data.  The tableau is kept fraction-free:
entries are integers sharing one positive denominator ``D`` (Bareiss-style
pivoting, every division is exact).  Bland's rule guarantees termination.

Returns ``(status, D, x_num, y_num, obj_num)`` with ``status`` 0 optimal,
1 infeasible, 2 unbounded.  On optimality ``x = x_num / D`` is a primal
vertex, ``y = y_num / D`` the row duals and ``obj_num / D`` the optimum.

The compiled kernel in ``_lpcore`` implements the same algorithm pivot for
pivot; both must return identical results.
"""

OPTIMAL, INFEASIBLE, UNBOUNDED = 0, 1, 2


def _pivot(T, r, c, D, nrows, width):
    row_r = T[r]
    p = row_r[c]
    for i in range(nrows):
        if i == r:
            continue
        row = T[i]
        f = row[c]
        if f:
            for j in range(width):
                row[j] = (p * row[j] - f * row_r[j]) // D
        elif p != D:
            for j in range(width):
                if row[j]:
                    row[j] = p * row[j] // D
    if p < 0:
        for row in T:
            for j in range(width):
                row[j] = -row[j]
        return -p
    return p


def _run(T, basis, D, m, ncols, allowed, active):
    """Primal simplex on rows ``active`` with objective row ``T[m]``."""
    rhs = ncols
    obj = T[m]
    width = ncols + 1
    while True:
        enter = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, D
        leave = -1
        best_num = best_den = 0
        for i in active:
            a = T[i][enter]
            if a > 0:
                num = T[i][rhs]
                if leave < 0:
                    leave, best_num, best_den = i, num, a
                    continue
                lhs = num * best_den
                cur = best_num * a
                if lhs < cur or (lhs == cur and basis[i] < basis[leave]):
                    leave, best_num, best_den = i, num, a
        if leave < 0:
            return UNBOUNDED, D
        D = _pivot(T, leave, enter, D, m + 1, width)
        basis[leave] = enter


def solve(A, b, eq, c):
    m = len(A)
    n = len(c)
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

    T = []
    basis = []
    for i in range(m):
        s = sign[i]
        row = [0] * width
        for k in range(n):
            v = A[i][k] * s
            row[k] = v
            row[n + k] = -v
        if i in slack_col:
            row[slack_col[i]] = s
        if i in art_col:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        row[ncols] = b[i] * s
        T.append(row)
    obj = [0] * width
    T.append(obj)
    D = 1
    active = list(range(m))

    if need_art:
        for i in need_art:
            for j in range(width):
                obj[j] -= T[i][j]
        for i in need_art:
            obj[art_col[i]] = 0
        allowed = [True] * ncols
        status, D = _run(T, basis, D, m, ncols, allowed, active)
        if T[m][ncols] < 0:
            return INFEASIBLE, D, None, None, None
        art_set = set(art_col.values())
        for i in range(m):
            if basis[i] in art_set:
                for j in range(ncols):
                    if j not in art_set and T[i][j]:
                        D = _pivot(T, i, j, D, m + 1, width)
                        basis[i] = j
                        break
                else:
                    active.remove(i)
        allowed = [j not in art_set for j in range(ncols)]
    else:
        allowed = [True] * ncols

    cost = [0] * ncols
    for k in range(n):
        cost[k] = c[k]
        cost[n + k] = -c[k]
    obj = T[m]
    for j in range(width):
        acc = 0
        for i in range(m):
            cb = cost[basis[i]]
            if cb:
                acc += cb * T[i][j]
        if j < ncols:
            acc -= cost[j] * D
        obj[j] = acc

    status, D = _run(T, basis, D, m, ncols, allowed, active)
    if status == UNBOUNDED:
        return UNBOUNDED, D, None, None, None

    x_num = [0] * n
    for i in range(m):
        v = basis[i]
        if v < n:
            x_num[v] += T[i][ncols]
        elif v < 2 * n:
            x_num[v - n] -= T[i][ncols]
    y_num = [0] * m
    obj = T[m]
    for i in range(m):
        if i in slack_col:
            y_num[i] = obj[slack_col[i]]
        else:
            y_num[i] = sign[i] * obj[art_col[i]]
    return OPTIMAL, D, x_num, y_num, obj[ncols]
