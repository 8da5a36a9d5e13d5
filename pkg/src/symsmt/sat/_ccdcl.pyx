# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled CDCL core.  Mirrors ``_pycdcl.CdclSolver`` step for step."""
from libcpp.vector cimport vector

import time

cdef long CHECK_EVERY = 1024

cdef int SAT = 10
cdef int UNSAT = 20
cdef int CANCELLED = 0


cdef long luby(long i):
    cdef long k = 1
    while ((1 << k) - 1) < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while ((1 << k) - 1) < i:
            k += 1


cdef class CdclSolver:
    cdef public int num_vars
    cdef vector[int] value
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[double] activity
    cdef vector[char] seen
    cdef double var_inc
    cdef vector[vector[int]] watches
    cdef vector[vector[int]] clauses
    cdef vector[int] trail
    cdef vector[int] trail_lim
    cdef size_t qhead
    cdef public bint unsat
    cdef public int restart_base
    cdef public long decisions, conflicts, propagations

    backend = "cython"

    def __init__(self, int num_vars, clauses=(), int restart_base=0):
        self.num_vars = num_vars
        self.value.assign(num_vars, -1)
        self.level.assign(num_vars, 0)
        self.reason.assign(num_vars, -1)
        self.activity.assign(num_vars, 0.0)
        self.seen.assign(num_vars, 0)
        self.var_inc = 1.0
        self.watches.resize(2 * num_vars)
        self.qhead = 0
        self.unsat = False
        self.restart_base = restart_base
        self.decisions = self.conflicts = self.propagations = 0
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, clause):
        cdef vector[int] lits
        cdef int v, code, val
        cdef size_t k
        cdef bint skip
        if self.unsat:
            return
        self._backtrack(0)
        for l in clause:
            v = abs(l) - 1
            if not 0 <= v < self.num_vars:
                raise ValueError(f"literal {l} out of range")
            code = 2 * v + (1 if l < 0 else 0)
            val = self.value[v] ^ (code & 1)
            if val == 1:
                return
            skip = False
            for k in range(lits.size()):
                if lits[k] == (code ^ 1):
                    return
                if lits[k] == code:
                    skip = True
            if val == 0 or skip:
                continue
            lits.push_back(code)
        if lits.size() == 0:
            self.unsat = True
        elif lits.size() == 1:
            self._assign(lits[0], -1)
            if self._propagate() >= 0:
                self.unsat = True
        else:
            self._attach(lits)

    cdef int _attach(self, vector[int]& lits):
        cdef int ci = <int>self.clauses.size()
        self.clauses.push_back(lits)
        self.watches[lits[0]].push_back(ci)
        self.watches[lits[1]].push_back(ci)
        return ci

    cdef inline void _assign(self, int code, int reason):
        cdef int v = code >> 1
        self.value[v] = 1 - (code & 1)
        self.level[v] = <int>self.trail_lim.size()
        self.reason[v] = reason
        self.trail.push_back(code)

    cdef void _backtrack(self, int lvl):
        cdef size_t stop, k
        cdef int v
        if <int>self.trail_lim.size() <= lvl:
            return
        stop = self.trail_lim[lvl]
        for k in range(stop, self.trail.size()):
            v = self.trail[k] >> 1
            self.value[v] = -1
            self.reason[v] = -1
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = stop

    cdef int _propagate(self):
        cdef int p, false_lit, ci, first, q
        cdef bint found
        cdef size_t i, j, nws, k
        cdef vector[int]* ws
        cdef vector[int]* c
        while self.qhead < self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            i = 0
            j = 0
            nws = ws.size()
            while i < nws:
                ci = ws[0][i]
                i += 1
                c = &self.clauses[ci]
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                if (self.value[first >> 1] ^ (first & 1)) == 1:
                    ws[0][j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, c.size()):
                    q = c[0][k]
                    if (self.value[q >> 1] ^ (q & 1)) != 0:
                        c[0][1] = q
                        c[0][k] = false_lit
                        # push_back may reallocate the other list only; ws stays valid
                        self.watches[q].push_back(ci)
                        found = True
                        break
                if found:
                    continue
                ws[0][j] = ci
                j += 1
                if (self.value[first >> 1] ^ (first & 1)) == 0:
                    while i < nws:
                        ws[0][j] = ws[0][i]
                        j += 1
                        i += 1
                    ws.resize(j)
                    return ci
                self._assign(first, ci)
            ws.resize(j)
        return -1

    cdef void _bump(self, int v):
        cdef size_t k
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for k in range(self.activity.size()):
                self.activity[k] *= 1e-100
            self.var_inc *= 1e-100

    cdef int _analyze(self, int confl, vector[int]& learnt):
        cdef int cur = <int>self.trail_lim.size()
        cdef int counter = 0
        cdef int p = -1
        cdef long idx = <long>self.trail.size() - 1
        cdef int c = confl
        cdef int v, q, best, bt, tmp
        cdef size_t k, start
        cdef vector[int]* lits
        learnt.clear()
        learnt.push_back(-1)
        while True:
            lits = &self.clauses[c]
            start = 0 if p < 0 else 1
            for k in range(start, lits.size()):
                q = lits[0][k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self.seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = p >> 1
            c = self.reason[v]
            self.seen[v] = 0
            counter -= 1
            if counter == 0:
                break
        learnt[0] = p ^ 1
        bt = 0
        if learnt.size() > 1:
            best = 1
            for k in range(1, learnt.size()):
                self.seen[learnt[k] >> 1] = 0
                if self.level[learnt[k] >> 1] > self.level[learnt[best] >> 1]:
                    best = <int>k
            tmp = learnt[1]
            learnt[1] = learnt[best]
            learnt[best] = tmp
            bt = self.level[learnt[1] >> 1]
        return bt

    cdef int _pick(self):
        cdef int best = -1
        cdef double best_act = -1.0
        cdef int v
        for v in range(self.num_vars):
            if self.value[v] < 0 and self.activity[v] > best_act:
                best = v
                best_act = self.activity[v]
        return best

    def solve(self, deadline=None):
        """Return ``(status, model)``; model is a list of bools when SAT."""
        cdef int confl, bt, v
        cdef long next_check, restart_no, restart_at
        cdef vector[int] learnt
        cdef bint has_deadline = deadline is not None
        cdef double dl = deadline if has_deadline else 0.0
        if self.unsat:
            return UNSAT, None
        self._backtrack(0)
        if self._propagate() >= 0:
            self.unsat = True
            return UNSAT, None
        next_check = self.propagations + CHECK_EVERY
        restart_no = 1
        restart_at = self.conflicts + (luby(1) * self.restart_base if self.restart_base else -1)
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                if self.trail_lim.size() == 0:
                    self.unsat = True
                    return UNSAT, None
                bt = self._analyze(confl, learnt)
                self._backtrack(bt)
                if learnt.size() == 1:
                    self._assign(learnt[0], -1)
                else:
                    self._assign(learnt[0], self._attach(learnt))
                self.var_inc *= 1 / 0.95
                if self.restart_base and self.conflicts >= restart_at:
                    restart_no += 1
                    restart_at = self.conflicts + luby(restart_no) * self.restart_base
                    self._backtrack(0)
                continue
            if has_deadline and self.propagations >= next_check:
                next_check = self.propagations + CHECK_EVERY
                if time.monotonic() >= dl:
                    self._backtrack(0)
                    return CANCELLED, None
            v = self._pick()
            if v < 0:
                return SAT, [self.value[k] == 1 for k in range(self.num_vars)]
            self.decisions += 1
            self.trail_lim.push_back(<int>self.trail.size())
            self._assign(2 * v + 1, -1)
