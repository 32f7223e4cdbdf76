"""Recompute the closed-form reference values of the transport example
and compare at fixed tolerances. The battery is deterministic: two runs
on the same build produce byte-identical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dissipation import build_toolkit, dissipation_rate, energy_audit
from .grids import make_uniform_grid
from .presets import initial_state
from .probes import probe_states
from .reporting import fmt_float
from .semigroup import ControlSignal, mild_solution
from .systems import assemble_transport, graph_norm


@dataclass
class VerifyRow:
    name: str
    computed: float
    reference: float
    tol: float
    ok: bool


@dataclass
class VerifyReport:
    n_grid: int
    rows: list[VerifyRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def table_text(self) -> str:
        width = max(len(r.name) for r in self.rows)
        lines = [f"reference battery on n={self.n_grid}"]
        for r in self.rows:
            lines.append(
                f"  {r.name:<{width}}  computed={r.computed: .12e}  "
                f"reference={r.reference: .12e}  tol={r.tol:.0e}  "
                f"{'pass' if r.ok else 'FAIL'}"
            )
        lines.append("overall: " + ("pass" if self.ok else "FAIL"))
        return "\n".join(lines)

    def csv_rows(self):
        header = ["row", "computed", "reference", "tol", "status"]
        rows = [
            (r.name, fmt_float(r.computed), fmt_float(r.reference),
             fmt_float(r.tol), "pass" if r.ok else "fail")
            for r in self.rows
        ]
        return header, rows


def _row(name: str, computed: float, reference: float, tol: float) -> VerifyRow:
    return VerifyRow(name=name, computed=float(computed), reference=float(reference),
                     tol=tol, ok=bool(abs(computed - reference) <= tol))


def verify_paper_values(n_grid: int = 201) -> VerifyReport:
    """Run the battery on the transport model at one grid size."""
    grid = make_uniform_grid(n_grid)
    system = assemble_transport(grid)
    toolkit = build_toolkit(system)
    rows: list[VerifyRow] = []

    # (a) graph norm of the sinh profile: ||x||^2 + ||x'||^2 = sinh(2)/2
    sinh_state = initial_state(grid, "sinh_bc")
    rows.append(_row("sinh_graph_norm_sq", graph_norm(system, sinh_state) ** 2,
                     math.sinh(2.0) / 2.0, 2e-3))

    # (b) the rate-operator square root acts as the rank-one map
    #     x -> x(0) sinh(1 - w) / sqrt(sinh 2); error measured in graph norm
    target = sinh_state.values[0] * np.sinh(1.0 - grid.nodes) / math.sqrt(math.sinh(2.0))
    got = toolkit.m_sqrt @ sinh_state.values
    rel = (graph_norm(system, got - target) / graph_norm(system, target))
    rows.append(_row("rate_sqrt_rank_one_rel_err", rel, 0.0, 5e-2))

    # (c) rates of outflow-compatible states equal |x(0)|^2 / 2
    for preset in ("sinh_bc", "poly:2", "poly:1"):
        state = initial_state(grid, preset)
        ref = 0.5 * float(state.values[0]) ** 2
        rows.append(_row(f"rate_{preset.replace(':', '')}",
                         dissipation_rate(toolkit, state.values), ref,
                         5e-2 * max(ref, 1.0)))

    # (d) probe norms ||(1 - w)^n|| = (2n + 1)^{-1/2}
    states = probe_states("power", grid, 8)
    w = grid.weights
    dev = max(
        abs(math.sqrt(float(np.sum(w * s**2))) - (2 * n + 1) ** -0.5)
        for n, s in enumerate(states, start=1)
    )
    rows.append(_row("probe_norm_max_dev", dev, 0.0, 1e-3))

    # (e) full-exit audit: everything dissipates, balance closes
    x0 = initial_state(grid, "one")
    u = ControlSignal.zero(1.0, grid.h)
    ledger = energy_audit(system, toolkit, mild_solution(system, x0, u), u)
    rows.append(_row("full_exit_dissipated", ledger.dissipated_total, 0.5, 1e-3))
    rows.append(_row("full_exit_residual", ledger.residual, 0.0, 1e-3))

    return VerifyReport(n_grid=n_grid, rows=rows)
