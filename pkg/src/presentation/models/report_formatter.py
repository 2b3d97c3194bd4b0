"""
Report formatter for command-line output.
"""

import csv
import io
import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.domain.entities import (
    BenchRecord,
    CriterionVerdict,
    DifferenceFamily,
    GroupSpec,
    GroupSubset,
    MateResult,
    ScedfCheck,
    SearchReport,
    Table3Verdict,
)


def _element_lists(subset: Optional[GroupSubset]) -> Optional[List[List[int]]]:
    if subset is None:
        return None
    return [list(g) for g in subset.elements()]


class ReportFormatter:
    """Factory for the text and JSON shown by each subcommand."""

    @staticmethod
    def mate(group: GroupSpec, subset: GroupSubset, result: MateResult, lam: int, elapsed_ms: float) -> str:
        """Sorted mate elements followed by one JSON object."""
        lines = [f"{result.tag.value}: " + (result.mate.format() if result.mate is not None else result.detail)]
        payload = {
            "group": group.literal,
            "A": _element_lists(subset),
            "B": _element_lists(result.mate),
            "lambda": lam,
            "algorithm": result.solver.value,
            "tag": result.tag.value,
            "elapsed_ms": round(elapsed_ms, 3),
        }
        lines.append(json.dumps(payload, sort_keys=True))
        return "\n".join(lines)

    @staticmethod
    def inverse(matrix: Optional[List[List[Fraction]]]) -> str:
        if matrix is None:
            return "X is singular"
        cells = [[str(x) for x in row] for row in matrix]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    @staticmethod
    def verify(multiset_ok: bool, matrix_ok: bool) -> str:
        return json.dumps({"verify": multiset_ok, "matrix_product_check": matrix_ok}, sort_keys=True)

    @staticmethod
    def search(report: SearchReport, representatives: Optional[Sequence] = None) -> str:
        task = report.task
        lines = [f"{task.group.literal} (r,s)=({task.r},{task.s}) lambda={task.lam} strategy={task.strategy.value}"]
        for verdict in report.filter_verdicts:
            if verdict.ruled_out:
                lines.append(f"  ruled out by {verdict.criterion.value}: {verdict.details}")
        for warning in report.warnings:
            lines.append(f"  warning: {warning}")
        lines.append(f"  candidates tested: {report.candidates_tested}")
        lines.append(f"  found: {len(report.found)}")
        for nf in report.found:
            lines.append(f"    A = {nf.a.format()}  B = {nf.b.format()}")
        if representatives is not None:
            lines.append(f"  inequivalent: {len(representatives)}")
        lines.append(f"  exhaustive: {report.exhaustive}")
        if report.checkpoint is not None:
            lines.append(f"  checkpoint: {report.checkpoint.to_dict()}")
        lines.append(f"  wall time: {report.wall_time:.3f}s")
        return "\n".join(lines)

    @staticmethod
    def verdicts(verdicts: List[CriterionVerdict]) -> str:
        width = max(len(v.criterion.value) for v in verdicts)
        return "\n".join(
            f"{v.criterion.value.ljust(width)}  {v.outcome.value:<12}  {v.details}" for v in verdicts
        )

    @staticmethod
    def verdict_summary(verdicts: List[CriterionVerdict]) -> str:
        fired = [v.criterion.value for v in verdicts if v.ruled_out]
        return "RuledOut(" + "+".join(fired) + ")" if fired else "Inconclusive"

    @staticmethod
    def filters_csv(rows: List[Tuple[GroupSpec, int, int, List[CriterionVerdict]]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["group", "r", "s", "verdict"])
        for group, r, s, verdicts in rows:
            writer.writerow([group.canonical_literal, r, s, ReportFormatter.verdict_summary(verdicts)])
        return buffer.getvalue()

    @staticmethod
    def scedf(family: DifferenceFamily, check: ScedfCheck, blocked: Optional[bool] = None) -> str:
        group = family.group
        histograms: List[Dict[str, int]] = [
            {group.format_element(group.elements[idx]): count for idx, count in histogram.items()}
            for histogram in check.histograms
        ]
        payload = {
            "group": group.literal,
            "lambda": family.lam,
            "is_scedf": check.is_scedf,
            "disjoint": check.disjoint,
            "uniform_size": check.uniform_size,
            "failing_pairs": check.failing_pairs,
            "histograms": histograms,
        }
        if blocked is not None:
            payload["third_set_blocked"] = blocked
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def table3(verdicts: List[Table3Verdict]) -> str:
        width = max(len(v.label) for v in verdicts)
        return "\n".join(
            f"{v.label.ljust(width)}  (r,s)=({v.r},{v.s})  {'pass' if v.passed else 'FAIL'}" for v in verdicts
        )

    @staticmethod
    def bench(record: BenchRecord) -> str:
        return json.dumps(record.to_dict(), sort_keys=True)
