"""Helper methods for rendering run reports."""

from typing import Any, Dict, Iterator

import pandas as pd

from ._run import Report

# pylint: disable=unsupported-assignment-operation

_KEYS = ("dim", "blocks", "ideal_dim", "range_dim")


def report_frame(report: Report) -> pd.DataFrame:
    """
    One row per task.

    :param report: Output of :py:func:`run`
    :return: Pandas dataframe indexed by task name
    """

    def _stream() -> Iterator[Dict[str, Any]]:
        for r in report.results:
            dd = r.to_dict()
            row: Dict[str, Any] = {"task": r.name, "verb": r.verb, "status": r.status}
            for k in _KEYS:
                v = dd.get(k)
                row[k] = "" if v is None else v
            failing = [k for k, ok in dd.get("checks", {}).items() if not ok]
            failing += [e["key"] for e in dd.get("expectations", [])]
            if r.error is not None:
                failing.append(r.error["error"])
            row["failing"] = ",".join(failing)
            if r.seconds is not None:
                row["seconds"] = r.seconds
            yield row

    xx = pd.DataFrame(list(_stream()))
    if xx.empty:
        return xx
    xx["blocks"] = xx["blocks"].map(lambda b: " ".join(map(str, b)) if isinstance(b, list) else b)
    return xx.set_index("task")


def render_text(report: Report) -> str:
    xx = report_frame(report)
    status = "PASS" if report.passed else "FAIL"
    if xx.empty:
        return f"{report.source}: no tasks ({status})"
    return f"{report.source}\n{xx.to_string()}\n{status}"
