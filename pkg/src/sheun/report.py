"""Check results and report rendering shared by every verification suite."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

PASS = "pass"
FAIL = "fail"
FINDING = "finding"
STATUSES = (PASS, FAIL, FINDING)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    status: str
    witness: Optional[str] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self):
        d = {"name": self.name, "anchor": self.anchor, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def check(name: str, anchor: str, ok: bool, witness=None) -> Check:
    return Check(name, anchor, PASS if ok else FAIL, None if ok or witness is None else str(witness))


@dataclass
class Report:
    suite: str
    grid: str
    seed: int
    trials: int
    checks: List[Check] = field(default_factory=list)
    elapsed_ms: int = 0

    def extend(self, checks: Iterable[Check]):
        self.checks.extend(checks)

    @property
    def failed(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def findings(self) -> List[Check]:
        return [c for c in self.checks if c.status == FINDING]

    @property
    def ok(self) -> bool:
        return not self.failed

    def validate(self):
        names = [c.name for c in self.checks]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate check names: {dupes}")

    def as_dict(self, timing: bool = True):
        d = {
            "suite": self.suite,
            "grid": self.grid,
            "seed": self.seed,
            "trials": self.trials,
            "checks": [c.as_dict() for c in self.checks],
            "summary": {s: sum(c.status == s for c in self.checks) for s in STATUSES},
        }
        if timing:
            d["elapsed_ms"] = self.elapsed_ms
        return d


def all_ok(checks: Iterable[Check]) -> bool:
    return all(c.ok for c in checks)


def render(report: Report, fmt: str, timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(timing), indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "anchor", "status", "witness"])
        for c in report.checks:
            w.writerow([c.name, c.anchor, c.status, c.witness or ""])
        return buf.getvalue()
    if fmt == "md":
        lines = [
            f"# {report.suite} ({report.grid})",
            "",
            f"seed {report.seed}, trials {report.trials}",
            "",
            "| check | anchor | status | witness |",
            "|---|---|---|---|",
        ]
        for c in report.checks:
            wit = (c.witness or "").replace("|", "\\|")
            lines.append(f"| {c.name} | {c.anchor} | {c.status} | {wit} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
