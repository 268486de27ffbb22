# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled DPLL core: transliteration of pure.py with C storage.

Must stay behaviourally identical to the pure backend: same branching order
(lowest variable id, false first), same propagation order, same conflict
counts.
"""

from libc.stdlib cimport calloc, free, malloc, realloc

SAT = 10
UNSAT = 20
UNKNOWN = 0


cdef struct WatchList:
    int *data
    int size
    int cap


cdef inline int wl_push(WatchList *wl, int ci) except -1:
    cdef int ncap
    cdef int *ndata
    if wl.size == wl.cap:
        ncap = wl.cap * 2 if wl.cap else 8
        ndata = <int *> realloc(wl.data, ncap * sizeof(int))
        if ndata == NULL:
            raise MemoryError()
        wl.data = ndata
        wl.cap = ncap
    wl.data[wl.size] = ci
    wl.size += 1
    return 0


def solve_cnf(int num_vars, clauses, long long conflict_budget=10_000_000):
    """Solve a CNF over variables 1..num_vars; see pure.solve_cnf."""
    cdef list units = []
    cdef list db = []
    cdef int lit, total_lits = 0
    for clause in clauses:
        lits = []
        seen = set()
        tautology = False
        for l in clause:
            lit = l
            if lit == 0 or lit > num_vars or lit < -num_vars:
                raise ValueError(f"literal {lit} out of range")
            if -lit in seen:
                tautology = True
                break
            if lit not in seen:
                seen.add(lit)
                lits.append(lit)
        if tautology:
            continue
        if not lits:
            return UNSAT, None, 0
        if len(lits) == 1:
            units.append(lits[0])
        else:
            db.append(lits)
            total_lits += len(lits)

    cdef int num_clauses = len(db)
    cdef int *cstart = <int *> malloc((num_clauses + 1) * sizeof(int))
    cdef int *buf = <int *> malloc(max(total_lits, 1) * sizeof(int))
    cdef signed char *assign = <signed char *> calloc(num_vars + 1, sizeof(signed char))
    cdef int *trail = <int *> malloc(max(num_vars, 1) * sizeof(int))
    cdef int n_slots = 2 * num_vars + 2
    cdef WatchList *watches = <WatchList *> calloc(n_slots, sizeof(WatchList))
    cdef int *dec_var = <int *> malloc(max(num_vars, 1) * sizeof(int))
    cdef int *dec_mark = <int *> malloc(max(num_vars, 1) * sizeof(int))
    cdef signed char *dec_flipped = <signed char *> malloc(max(num_vars, 1) * sizeof(signed char))
    if (cstart == NULL or buf == NULL or assign == NULL or trail == NULL
            or watches == NULL or dec_var == NULL or dec_mark == NULL or dec_flipped == NULL):
        raise MemoryError()

    cdef int ci, k, pos = 0
    try:
        for ci in range(num_clauses):
            cstart[ci] = pos
            for l in db[ci]:
                buf[pos] = l
                pos += 1
        cstart[num_clauses] = pos

        for ci in range(num_clauses):
            wl_push(&watches[_slot(buf[cstart[ci]])], ci)
            wl_push(&watches[_slot(buf[cstart[ci] + 1])], ci)

        return _search(num_vars, num_clauses, cstart, buf, assign, trail,
                       watches, dec_var, dec_mark, dec_flipped, units,
                       conflict_budget)
    finally:
        free(cstart)
        free(buf)
        free(assign)
        free(trail)
        for k in range(n_slots):
            if watches[k].data != NULL:
                free(watches[k].data)
        free(watches)
        free(dec_var)
        free(dec_mark)
        free(dec_flipped)


cdef inline int _slot(int lit):
    return 2 * lit if lit > 0 else -2 * lit + 1


cdef inline int _value(signed char *assign, int lit):
    cdef int a = assign[lit if lit > 0 else -lit]
    if a == 0:
        return 0
    return a if lit > 0 else -a


cdef _search(int num_vars, int num_clauses, int *cstart, int *buf,
             signed char *assign, int *trail, WatchList *watches,
             int *dec_var, int *dec_mark, signed char *dec_flipped,
             list units, long long conflict_budget):
    cdef int trail_len = 0
    cdef int qhead = 0
    cdef int n_dec = 0
    cdef long long conflicts = 0
    cdef int lit, v, k, mark

    for l in units:
        lit = l
        v = _value(assign, lit)
        if v == -1:
            return UNSAT, None, 0
        if v == 0:
            assign[lit if lit > 0 else -lit] = 1 if lit > 0 else -1
            trail[trail_len] = lit
            trail_len += 1

    if _propagate(cstart, buf, assign, trail, &trail_len, &qhead, watches):
        return UNSAT, None, conflicts

    cdef int next_var = 1
    while True:
        v = next_var
        while v <= num_vars and assign[v] != 0:
            v += 1
        if v > num_vars:
            model = [1 if assign[k] == 1 else 0 for k in range(1, num_vars + 1)]
            return SAT, model, conflicts
        next_var = v
        dec_var[n_dec] = v
        dec_mark[n_dec] = trail_len
        dec_flipped[n_dec] = 0
        n_dec += 1
        assign[v] = -1  # false first
        trail[trail_len] = -v
        trail_len += 1
        while _propagate(cstart, buf, assign, trail, &trail_len, &qhead, watches):
            conflicts += 1
            if conflicts >= conflict_budget:
                return UNKNOWN, None, conflicts
            while n_dec > 0 and dec_flipped[n_dec - 1]:
                mark = dec_mark[n_dec - 1]
                for k in range(trail_len - 1, mark - 1, -1):
                    assign[trail[k] if trail[k] > 0 else -trail[k]] = 0
                trail_len = mark
                n_dec -= 1
            if n_dec == 0:
                return UNSAT, None, conflicts
            v = dec_var[n_dec - 1]
            mark = dec_mark[n_dec - 1]
            for k in range(trail_len - 1, mark - 1, -1):
                assign[trail[k] if trail[k] > 0 else -trail[k]] = 0
            trail_len = mark
            qhead = mark
            dec_flipped[n_dec - 1] = 1
            if v < next_var:
                next_var = v
            assign[v] = 1  # second branch: true
            trail[trail_len] = v
            trail_len += 1


cdef int _propagate(int *cstart, int *buf, signed char *assign, int *trail,
                    int *trail_len, int *qhead, WatchList *watches):
    """Returns 1 on conflict."""
    cdef int lit, false_lit, ci, i, j, k, start, end, tmp, v0
    cdef bint moved
    cdef WatchList *wl
    while qhead[0] < trail_len[0]:
        lit = trail[qhead[0]]
        qhead[0] += 1
        false_lit = -lit
        wl = &watches[_slot(false_lit)]
        i = 0
        j = 0
        while i < wl.size:
            ci = wl.data[i]
            i += 1
            start = cstart[ci]
            end = cstart[ci + 1]
            if buf[start] == false_lit:
                tmp = buf[start]
                buf[start] = buf[start + 1]
                buf[start + 1] = tmp
            if _value(assign, buf[start]) == 1:
                wl.data[j] = ci
                j += 1
                continue
            moved = False
            for k in range(start + 2, end):
                if _value(assign, buf[k]) != -1:
                    tmp = buf[start + 1]
                    buf[start + 1] = buf[k]
                    buf[k] = tmp
                    wl_push(&watches[_slot(buf[start + 1])], ci)
                    moved = True
                    break
            if moved:
                continue
            wl.data[j] = ci
            j += 1
            v0 = _value(assign, buf[start])
            if v0 == -1:
                while i < wl.size:
                    wl.data[j] = wl.data[i]
                    j += 1
                    i += 1
                wl.size = j
                return 1
            if v0 == 0:
                assign[buf[start] if buf[start] > 0 else -buf[start]] = 1 if buf[start] > 0 else -1
                trail[trail_len[0]] = buf[start]
                trail_len[0] += 1
        wl.size = j
    return 0
