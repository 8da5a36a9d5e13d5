"""Pure-Python CDCL solver; reference for the compiled twin in ``_ccdcl.pyx``.

Both implementations follow the same algorithm step for step (two watched
literals, first-UIP learning, VSIDS with lowest-index tie break, false-first
phase), so identical clause histories produce identical models.

Internal literal codes: variable ``v`` (0-based) is ``2*v`` positive and
``2*v + 1`` negative.  The value of a code is ``value[v] ^ (code & 1)``,
which is 1 (true), 0 (false) or negative (unassigned).
"""
from __future__ import annotations

import time

SAT, UNSAT, CANCELLED = 10, 20, 0

_DECAY = 1 / 0.95
_CHECK_EVERY = 1024


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class CdclSolver:
    backend = "python"

    def __init__(self, num_vars: int, clauses=(), restart_base: int = 0):
        self.num_vars = n = num_vars
        self.value = [-1] * n
        self.level = [0] * n
        self.reason = [-1] * n
        self.activity = [0.0] * n
        self.seen = [0] * n
        self.var_inc = 1.0
        self.watches = [[] for _ in range(2 * n)]
        self.clauses = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.unsat = False
        self.restart_base = restart_base
        self.decisions = self.conflicts = self.propagations = 0
        for c in clauses:
            self.add_clause(c)

    # ------------------------------------------------------------ clauses

    def add_clause(self, clause) -> None:
        if self.unsat:
            return
        self._backtrack(0)
        lits = []
        for l in clause:
            v = abs(l) - 1
            if not 0 <= v < self.num_vars:
                raise ValueError(f"literal {l} out of range")
            code = 2 * v + (l < 0)
            val = self.value[v] ^ (code & 1)
            if val == 1 or (code ^ 1) in lits:
                return
            if val == 0 or code in lits:
                continue
            lits.append(code)
        if not lits:
            self.unsat = True
        elif len(lits) == 1:
            self._assign(lits[0], -1)
            if self._propagate() >= 0:
                self.unsat = True
        else:
            self._attach(lits)

    def _attach(self, lits) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    # -------------------------------------------------------------- trail

    def _assign(self, code: int, reason: int) -> None:
        v = code >> 1
        self.value[v] = 1 - (code & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        value, reason = self.value, self.reason
        for code in self.trail[stop:]:
            v = code >> 1
            value[v] = -1
            reason[v] = -1
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = stop

    def _propagate(self) -> int:
        """Unit propagation; returns a conflicting clause index or -1."""
        value, clauses, watches, trail = self.value, self.clauses, self.watches, self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            nws = len(ws)
            while i < nws:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if value[first >> 1] ^ (first & 1) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    q = c[k]
                    if value[q >> 1] ^ (q & 1) != 0:
                        c[1] = q
                        c[k] = false_lit
                        watches[q].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if value[first >> 1] ^ (first & 1) == 0:
                        while i < nws:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return ci
                    self._assign(first, ci)
            del ws[j:]
        return -1

    # ----------------------------------------------------------- learning

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100

    def _analyze(self, confl: int):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        learnt = [-1]
        counter = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            lits = self.clauses[c]
            for q in (lits if p < 0 else lits[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            c = reason[v]
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
        learnt[0] = p ^ 1
        bt = 0
        if len(learnt) > 1:
            best = 1
            for k in range(1, len(learnt)):
                seen[learnt[k] >> 1] = 0
                if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        return learnt, bt

    def _pick(self) -> int:
        best, best_act = -1, -1.0
        value, activity = self.value, self.activity
        for v in range(self.num_vars):
            if value[v] < 0 and activity[v] > best_act:
                best, best_act = v, activity[v]
        return best

    # -------------------------------------------------------------- solve

    def solve(self, deadline: float | None = None):
        """Return ``(status, model)``; model is a list of bools when SAT."""
        if self.unsat:
            return UNSAT, None
        self._backtrack(0)
        if self._propagate() >= 0:
            self.unsat = True
            return UNSAT, None
        next_check = self.propagations + _CHECK_EVERY
        restart_no = 1
        restart_at = self.conflicts + (luby(1) * self.restart_base if self.restart_base else -1)
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                if not self.trail_lim:
                    self.unsat = True
                    return UNSAT, None
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], -1)
                else:
                    self._assign(learnt[0], self._attach(learnt))
                self.var_inc *= _DECAY
                if self.restart_base and self.conflicts >= restart_at:
                    restart_no += 1
                    restart_at = self.conflicts + luby(restart_no) * self.restart_base
                    self._backtrack(0)
                continue
            if deadline is not None and self.propagations >= next_check:
                next_check = self.propagations + _CHECK_EVERY
                if time.monotonic() >= deadline:
                    self._backtrack(0)
                    return CANCELLED, None
            v = self._pick()
            if v < 0:
                return SAT, [x == 1 for x in self.value]
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(2 * v + 1, -1)
