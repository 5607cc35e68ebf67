"""Scenario files and the command line tool."""

from pathlib import Path
from typing import Dict

from ._parse import Scenario, Task, load_scenario, parse_scenario
from ._report import render_text, report_frame
from ._run import Report, TaskResult, run, run_task

SAMPLES_DIR = Path(__file__).parent / "samples"
SAMPLES: Dict[str, Path] = {p.stem: p for p in sorted(SAMPLES_DIR.glob("*.json"))}

__all__ = (
    "SAMPLES",
    "SAMPLES_DIR",
    "Scenario",
    "Task",
    "parse_scenario",
    "load_scenario",
    "Report",
    "TaskResult",
    "run",
    "run_task",
    "report_frame",
    "render_text",
)
