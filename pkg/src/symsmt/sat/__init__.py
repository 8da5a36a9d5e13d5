"""CDCL SAT core with a compiled backend and a pure-Python fallback.

The compiled extension ``_ccdcl`` is used when it was built; otherwise (or
when ``SYMSMT_PURE_PYTHON=1`` is set) the reference implementation in
``_pycdcl`` is loaded.  Both produce identical results.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from . import _pycdcl

_py_impl = _pycdcl.CdclSolver
_c_impl = None
if os.environ.get("SYMSMT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ccdcl import CdclSolver as _c_impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _c_impl = None

BACKEND = "cython" if _c_impl is not None else "python"


class Outcome(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    CANCELLED = "cancelled"


_CODES = {_pycdcl.SAT: Outcome.SAT, _pycdcl.UNSAT: Outcome.UNSAT, _pycdcl.CANCELLED: Outcome.CANCELLED}


@dataclass
class SatResult:
    outcome: Outcome
    model: Optional[List[bool]] = None
    stats: Dict[str, int] = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.outcome is Outcome.SAT


def available_backends() -> List[str]:
    return ["python"] + (["cython"] if _c_impl is not None else [])


class SatSolver:
    """Incremental CDCL solver over DIMACS-style integer clauses."""

    def __init__(self, num_vars: int, clauses=(), *, restart_base: int = 0, backend: str | None = None):
        backend = backend or BACKEND
        if backend == "cython":
            if _c_impl is None:
                raise RuntimeError("compiled SAT backend is not available")
            impl = _c_impl
        elif backend == "python":
            impl = _py_impl
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self._s = impl(num_vars, (), restart_base)
        self.num_vars = num_vars
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, clause) -> None:
        """Add a clause permanently; an empty clause makes the solver UNSAT for good."""
        self._s.add_clause(clause)

    def solve(self, deadline: float | None = None) -> SatResult:
        code, model = self._s.solve(deadline)
        return SatResult(_CODES[code], model, self.stats())

    @property
    def is_unsat(self) -> bool:
        return bool(self._s.unsat)

    def stats(self) -> Dict[str, int]:
        return {
            "decisions": self._s.decisions,
            "conflicts": self._s.conflicts,
            "propagations": self._s.propagations,
        }


def new_solver(cnf, **kw) -> SatSolver:
    return SatSolver(cnf.num_vars, cnf.clauses, **kw)
