"""
Task execution and run reports.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from time import monotonic
from typing import Any, Callable, Dict, List, Optional, Tuple

import dask
import numpy as np
from dask import delayed

from xmod.core import (
    CrossedModule,
    FiniteGroup,
    FiniteGroupoid,
    Ideal,
    StarAlgebra,
    VerificationFailed,
    XmodError,
    get_config,
    wedderburn,
)
from xmod.core._errors import _jsonable

from .._actions import fiber_dimensions, pontryagin_decompose, tensor_fiber_dimensions, verify_dual_equivariance
from .._convolution import crossed_product
from .._crossed_products import cm_crossed_product, cm_cstar, verify_exactness, verify_thm51
from .._morita import bimodule_check, verify_morita
from .._symmetries import induced_algebra_action, translation_action, translation_bridge
from ..types import CMAction, GroupoidAlgebraAction, LinkingData, VerificationReport
from ._parse import Scenario, Task

# pylint: disable=too-many-return-statements

log = logging.getLogger(__name__)

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class TaskResult:
    """Outcome of one task."""

    name: str
    verb: str
    status: str
    args: Dict[str, Any] = field(default_factory=dict)
    data: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
    seconds: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        dd: Dict[str, Any] = {
            "name": self.name,
            "verb": self.verb,
            "status": self.status,
            "args": _jsonable(self.args),
            **_jsonable(self.data),
        }
        if self.error is not None:
            dd["error"] = self.error
        if self.seconds is not None:
            dd["seconds"] = round(self.seconds, 6)
        return dd


@dataclass
class Report:
    """
    Results of running a scenario, in scenario order.
    """

    source: str
    results: List[TaskResult]
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.status == PASS for r in self.results)

    @property
    def exit_code(self) -> int:
        """``0`` when every task passed, ``1`` otherwise."""
        return 0 if self.passed else 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "passed": self.passed,
            "config": dict(self.config),
            "tasks": [r.to_dict() for r in self.results],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _blocks(A: StarAlgebra) -> List[int]:
    return list(wedderburn(A))


def _algebra_info(A: StarAlgebra) -> Dict[str, Any]:
    return {"dim": A.dim, "blocks": _blocks(A), "objects": len(A.objects)}


def _summary(obj: Any) -> Dict[str, Any]:
    if isinstance(obj, FiniteGroup):
        return {"order": len(obj), "abelian": obj.commute_witness() is None}
    if isinstance(obj, FiniteGroupoid):
        return {"objects": obj.n_objects, "arrows": obj.n_arrows}
    if isinstance(obj, CrossedModule):
        return obj.describe()
    if isinstance(obj, StarAlgebra):
        return _algebra_info(obj)
    if isinstance(obj, CMAction):
        return obj.describe()
    if isinstance(obj, GroupoidAlgebraAction):
        return {"arrows": obj.groupoid.n_arrows, **_algebra_info(obj.algebra)}
    if isinstance(obj, Ideal):
        return {"dim": obj.dim, "parent_dim": obj.parent.dim}
    if isinstance(obj, LinkingData):
        corner_dims = [obj.left.source.algebra.dim, obj.right.source.algebra.dim]
        return {"dim": obj.action.algebra.dim, "corner_dims": corner_dims}
    return {}


def _report(rep: VerificationReport) -> Tuple[Dict[str, Any], bool]:
    return rep.to_dict(), rep.passed


Handler = Callable[[Scenario, Task], Tuple[Dict[str, Any], bool]]


def _check(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    names = [task.args["of"]] if "of" in task.args else sorted(scn.declarations)
    out = {n: {"type": scn.kinds[n], **_summary(scn.get(n, task=task))} for n in names}
    return {"declarations": out}, True


def _product(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    act = scn.get(task.args["action"], "groupoid_action", task)
    return _algebra_info(crossed_product(act).algebra), True


def _cm_product(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    act = scn.get(task.args["action"], "action", task)
    res, _ = cm_crossed_product(act)
    assert res.parent is not None and res.ideal is not None
    return {
        **_algebra_info(res.algebra),
        "parent_dim": res.parent.dim,
        "ideal_dim": res.ideal.dim,
        "range_dim": res.range_dim,
        "closure_iterations": res.ideal.iterations,
    }, True


def _cstar(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    return _algebra_info(cm_cstar(scn.get(task.args["cm"], "crossed_module", task))), True


def _blocks_of(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    name = task.args.get("algebra", task.args.get("action"))
    obj = scn.get(name, task=task)
    if isinstance(obj, (CMAction, GroupoidAlgebraAction)):
        obj = obj.algebra
    if not isinstance(obj, StarAlgebra):
        raise ValueError(f"{name!r} has no algebra")
    return _algebra_info(obj), True


def _thm51(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    cm = scn.get(task.args["cm"], "crossed_module", task)
    beta = scn.get(task.args["beta"], "groupoid_action", task)
    return _report(verify_thm51(cm, beta, strict=False))


def _exactness(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    act = scn.get(task.args["action"], "action", task)
    ideal = scn.get(task.args["ideal"], "ideal", task)
    return _report(verify_exactness(act, ideal, strict=False))


def _morita(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    link = scn.get(task.args["linking"], "linking", task)
    rep = verify_morita(link, strict=False)
    w = bimodule_check(link)
    return {**rep.to_dict(), "bimodule": w.to_dict()}, rep.passed and w.passed


def _pontryagin(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    act = scn.get(task.args["action"], "action", task)
    A, chars = pontryagin_decompose(act)
    data: Dict[str, Any] = {"characters": list(chars.labels), "fiber_dims": fiber_dimensions(A)}
    ok = True
    G = act.cm.G
    if all(act.cm.boundary(0, h) == int(G.unit[0]) for h in range(len(act.cm.H.fibers[0]))):
        rep = verify_dual_equivariance(act)
        data["dual"] = rep.to_dict()
        ok = rep.passed
    if "tensor_with" in task.args:
        other = scn.get(task.args["tensor_with"], "action", task)
        dims = tensor_fiber_dimensions(act, other)
        data["tensor_fiber_dims"] = {k: list(v) for k, v in dims.items()}
        ok = ok and all(a == b for a, b in dims.values())
    return data, ok


def _induced(scn: Scenario, task: Task) -> Tuple[Dict[str, Any], bool]:
    cm = scn.get(task.args["cm"], "crossed_module", task)
    act = induced_algebra_action(translation_action(cm))
    res, _ = cm_crossed_product(act)
    bridge = translation_bridge(cm, act).hom
    iso = bridge.is_injective() and bridge.is_surjective()
    return {
        "algebra_dim": act.algebra.dim,
        "fiber_dims": fiber_dimensions(act.algebra),
        "product": _algebra_info(res.algebra),
        "product_blocks": _blocks(res.algebra),
        "bridge_isomorphism": iso,
    }, iso


HANDLERS: Dict[str, Handler] = {
    "check": _check,
    "product": _product,
    "cm_product": _cm_product,
    "cstar": _cstar,
    "blocks": _blocks_of,
    "verify_thm51": _thm51,
    "verify_exactness": _exactness,
    "verify_morita": _morita,
    "pontryagin": _pontryagin,
    "induced_action": _induced,
}


def _expectations(expect: Dict[str, Any], data: Dict[str, Any]) -> List[Dict[str, Any]]:
    bad = []
    for key, want in sorted(expect.items()):
        got = _jsonable(data.get(key))
        if key == "blocks" and got is not None:
            want, got = sorted(want), sorted(got)
        if got != want:
            bad.append({"key": key, "expected": want, "got": got})
    return bad


def run_task(scn: Scenario, task: Task, timing: bool = False) -> TaskResult:
    """
    Run one task, turning errors into a failed result.
    """
    t0 = monotonic()
    res = TaskResult(task.name, task.verb, PASS, args=task.args)
    try:
        data, ok = HANDLERS[task.verb](scn, task)
        res.data = data
        mismatch = _expectations(task.expect, data)
        if mismatch:
            res.data["expectations"] = mismatch
        res.status = PASS if ok and not mismatch else FAIL
    except VerificationFailed as e:
        res.status, res.error = FAIL, e.to_dict()
    except (XmodError, ValueError, KeyError, np.linalg.LinAlgError) as e:
        res.status = ERROR
        res.error = e.to_dict() if isinstance(e, XmodError) else {"error": type(e).__name__, "message": str(e)}
    if timing:
        res.seconds = monotonic() - t0
    log.info("%s [%s] %s", task.name, task.verb, res.status)
    return res


def run(scn: Scenario, jobs: int = 1, timing: bool = False) -> Report:
    """
    Run every task of a scenario.

    Failures are recorded per task and never stop the remaining tasks.

    :param jobs: Run tasks on the dask threaded scheduler with this many workers
    :param timing: Record wall time per task (makes reports differ between runs)
    """
    if jobs > 1 and len(scn.tasks) > 1:
        todo = [delayed(run_task)(scn, t, timing) for t in scn.tasks]
        results = list(dask.compute(*todo, scheduler="threads", num_workers=jobs))
    else:
        results = [run_task(scn, t, timing) for t in scn.tasks]
    cfg = get_config()
    return Report(scn.source, results, {"tol_alg": cfg.tol_alg, "seed": cfg.seed, "max_dim": cfg.max_dim})


__all__ = (
    "TaskResult",
    "Report",
    "HANDLERS",
    "run_task",
    "run",
)
