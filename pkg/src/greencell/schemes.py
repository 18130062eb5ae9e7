"""Scheme dispatch and the side-by-side cost comparison."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .comm import optimize_comp, optimize_offloading, optimize_spectrum_sharing
from .errors import GreenCellError
from .joint import (joint_energy_spectrum, joint_sharing_comp, joint_trading_comp,
                    joint_trading_comp_fixed_price)
from .link import conventional_plan
from .model import PowerProfile, Scenario
from .results import SchemeResult, make_result
from .tariff import EnergyLedger, settle_baseline, settle_sharing, settle_trading

SCHEMES = ("conventional", "trading", "sharing", "offload", "spectrum", "comp",
           "joint-energy-spectrum", "joint-trading-comp", "joint-sharing-comp")

# rows of the comparison table, in print order
TABLE_ROWS = (
    ("conventional", "Conventional (no cooperation)"),
    ("trading", "Energy trading via aggregator"),
    ("sharing", "Energy sharing via aggregator"),
    ("spectrum", "Spectrum sharing"),
    ("comp", "CoMP"),
    ("joint-energy-spectrum", "Joint energy and spectrum sharing"),
    ("joint-trading-comp", "Joint energy trading and CoMP"),
    ("joint-sharing-comp", "Joint energy sharing and CoMP"),
)


def _supply_side(s: Scenario, scheme: str, settle) -> SchemeResult:
    plan = conventional_plan(s)
    q = PowerProfile(plan.per_bs(s.n_bs))
    ledger, cost = settle(q, s)
    return make_result(scheme, s, q, ledger, cost, plan)


def _grid_settled(s: Scenario, scheme: str, alloc, q: PowerProfile, cost) -> SchemeResult:
    return make_result(scheme, s, q, EnergyLedger.grid_only(q.array, s.harvest), cost, alloc)


def run_scheme(s: Scenario, scheme: str, *, fixed_price: bool = False) -> SchemeResult:
    """Run one scheme.

    ``fixed_price`` selects the fixed-marginal-price operating point for
    ``joint-trading-comp`` instead of the exact optimizer.
    """
    if scheme == "conventional":
        return _supply_side(s, scheme, settle_baseline)
    if scheme == "trading":
        return _supply_side(s, scheme, settle_trading)
    if scheme == "sharing":
        return _supply_side(s, scheme, settle_sharing)
    if scheme == "offload":
        return _grid_settled(s, scheme, *optimize_offloading(s))
    if scheme == "spectrum":
        return _grid_settled(s, scheme, *optimize_spectrum_sharing(s))
    if scheme == "comp":
        return _grid_settled(s, scheme, *optimize_comp(s))
    if scheme == "joint-energy-spectrum":
        return joint_energy_spectrum(s)
    if scheme == "joint-trading-comp":
        return joint_trading_comp_fixed_price(s) if fixed_price else joint_trading_comp(s)
    if scheme == "joint-sharing-comp":
        return joint_sharing_comp(s)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")


@dataclass(frozen=True, eq=False)
class ComparisonRow:
    scheme: str
    label: str
    result: SchemeResult | None = None
    error: str | None = None

    @property
    def total(self) -> float | None:
        return None if self.result is None else self.result.total


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    footnotes: tuple[str, ...] = ()

    def row(self, scheme: str) -> ComparisonRow:
        for r in self.rows:
            if r.scheme == scheme:
                return r
        raise KeyError(scheme)

    def totals(self) -> dict[str, float | None]:
        return {r.scheme: r.total for r in self.rows}

    def format_table(self, precision: int = 2) -> str:
        n_bs = max((len(r.result.supply) for r in self.rows if r.result), default=0)
        head = (["Scheme"] + [f"BS {i + 1} supply" for i in range(n_bs)]
                + [f"BS {i + 1} consumption" for i in range(n_bs)] + ["Total cost"])
        body = []
        for r in self.rows:
            if r.result is None:
                body.append([r.label] + ["-"] * (2 * n_bs) + [f"unsupported: {r.error}"])
                continue
            res = r.result
            cells = ([f"{x:.{precision}f}" for x in res.supply]
                     + [f"{x:.{precision}f}" for x in res.profile.per_bs_power]
                     + [f"{res.total:.{precision}f}"])
            mark = " *" if res.notes else ""
            body.append([r.label + mark] + cells)
        widths = [max(len(row[j]) for row in [head] + body) for j in range(len(head))]
        fmt = lambda row: "  ".join(c.ljust(widths[0]) if j == 0 else c.rjust(widths[j])
                                    for j, c in enumerate(row))
        lines = [fmt(head), "  ".join("-" * w for w in widths)]
        lines += [fmt(row) for row in body]
        lines += [f"* {note}" for note in self.footnotes]
        return "\n".join(lines)

    def records(self) -> list[dict]:
        out = []
        for r in self.rows:
            if r.result is None:
                out.append({"scheme": r.scheme, "label": r.label, "error": r.error})
            else:
                out.append({"label": r.label, **r.result.to_record()})
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec) + "\n" for rec in self.records())

    def to_csv(self) -> str:
        n_bs = max((len(r.result.supply) for r in self.rows if r.result), default=0)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scheme"] + [f"supply_{i}" for i in range(n_bs)]
                   + [f"consumption_{i}" for i in range(n_bs)] + ["total", "error"])
        for r in self.rows:
            if r.result is None:
                w.writerow([r.scheme] + [""] * (2 * n_bs) + ["", r.error])
            else:
                res = r.result
                w.writerow([r.scheme] + [repr(x) for x in res.supply]
                           + [repr(x) for x in res.profile.per_bs_power] + [repr(res.total), ""])
        return buf.getvalue()


def compare_all(s: Scenario, trading_comp: str = "fixed-price") -> ComparisonReport:
    """All eight table rows; per-row failures become annotated rows.

    ``trading_comp`` is ``"fixed-price"`` (the reference operating point) or
    ``"optimal"`` (the exact optimizer).
    """
    if trading_comp not in ("fixed-price", "optimal"):
        raise ValueError("trading_comp must be 'fixed-price' or 'optimal'")
    rows, notes = [], []
    for scheme, label in TABLE_ROWS:
        try:
            res = run_scheme(s, scheme, fixed_price=(trading_comp == "fixed-price"))
        except GreenCellError as exc:
            rows.append(ComparisonRow(scheme, label, None, str(exc)))
            continue
        rows.append(ComparisonRow(scheme, label, res))
        notes.extend(f"{label}: {n}" for n in res.notes)
    return ComparisonReport(tuple(rows), tuple(notes))
