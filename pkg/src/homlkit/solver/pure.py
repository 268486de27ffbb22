"""Pure-Python DPLL with two-literal watching.

Chronological backtracking, deterministic branching: always the lowest
unassigned variable id, tried false first. The compiled extension in
``_core.pyx`` implements the identical algorithm; the two backends must
produce identical results (including conflict counts).
"""

SAT = 10
UNSAT = 20
UNKNOWN = 0


def solve_cnf(num_vars, clauses, conflict_budget=10_000_000):
    """Solve a CNF over variables 1..num_vars.

    Returns (status, assignment, conflicts) where assignment is a list of
    num_vars truth values (index 0 = variable 1) when status is SAT.
    """
    units = []
    db = []
    for clause in clauses:
        lits = []
        seen = set()
        tautology = False
        for lit in clause:
            if lit == 0 or abs(lit) > num_vars:
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

    # assign[v]: 0 unassigned, 1 true, -1 false
    assign = [0] * (num_vars + 1)
    trail = []
    qhead = 0
    # watches keyed by literal slot: positive v -> 2v, negative v -> 2v+1
    watches = [[] for _ in range(2 * num_vars + 2)]

    def slot(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    for ci, lits in enumerate(db):
        watches[slot(lits[0])].append(ci)
        watches[slot(lits[1])].append(ci)

    def value(lit):
        a = assign[abs(lit)]
        if a == 0:
            return 0
        return a if lit > 0 else -a

    def enqueue(lit):
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)

    for lit in units:
        v = value(lit)
        if v == -1:
            return UNSAT, None, 0
        if v == 0:
            enqueue(lit)

    def propagate():
        """Returns True on conflict."""
        nonlocal qhead
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            false_lit = -lit
            wl = watches[slot(false_lit)]
            i = 0
            j = 0
            conflict = False
            while i < len(wl):
                ci = wl[i]
                i += 1
                lits = db[ci]
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], lits[0]
                # lits[1] is the falsified watch
                if value(lits[0]) == 1:
                    wl[j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, len(lits)):
                    if value(lits[k]) != -1:
                        lits[1], lits[k] = lits[k], lits[1]
                        watches[slot(lits[1])].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                # clause is unit or conflicting on lits[0]
                wl[j] = ci
                j += 1
                v0 = value(lits[0])
                if v0 == -1:
                    while i < len(wl):
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    conflict = True
                    break
                if v0 == 0:
                    enqueue(lits[0])
            del wl[j:]
            if conflict:
                return True
        return False

    conflicts = 0
    if propagate():
        return UNSAT, None, conflicts

    dec_var = []
    dec_mark = []
    dec_flipped = []
    next_var = 1
    while True:
        v = next_var
        while v <= num_vars and assign[v] != 0:
            v += 1
        if v > num_vars:
            return SAT, [1 if assign[x] == 1 else 0 for x in range(1, num_vars + 1)], conflicts
        next_var = v
        dec_var.append(v)
        dec_mark.append(len(trail))
        dec_flipped.append(False)
        enqueue(-v)  # false first
        while propagate():
            conflicts += 1
            if conflicts >= conflict_budget:
                return UNKNOWN, None, conflicts
            while dec_flipped and dec_flipped[-1]:
                mark = dec_mark[-1]
                for k in range(len(trail) - 1, mark - 1, -1):
                    assign[abs(trail[k])] = 0
                del trail[mark:]
                dec_var.pop()
                dec_mark.pop()
                dec_flipped.pop()
            if not dec_flipped:
                return UNSAT, None, conflicts
            v = dec_var[-1]
            mark = dec_mark[-1]
            for k in range(len(trail) - 1, mark - 1, -1):
                assign[abs(trail[k])] = 0
            del trail[mark:]
            qhead = mark
            dec_flipped[-1] = True
            if v < next_var:
                next_var = v
            enqueue(v)  # second branch: true
