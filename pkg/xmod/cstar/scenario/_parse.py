"""
Scenario documents.

A scenario is a JSON document with two keys:

.. code-block:: json

   {
     "declare": {
       "S3": {"type": "group", "builtin": "symmetric", "args": [3]},
       "A3": {"type": "group", "builtin": "alternating", "args": [3]},
       "xm": {"type": "crossed_module", "kind": "normal_subgroup", "group": "S3", "subgroup": "A3"}
     },
     "tasks": [
       {"verb": "cstar", "args": {"cm": "xm"}, "expect": {"dim": 2, "blocks": [1, 1]}}
     ]
   }

Declarations may refer to each other by name in any order; every constructor runs its validation while
the document is parsed.
"""

from __future__ import annotations

import json
import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Set, Union

import numpy as np

from xmod.core import (
    FiniteGroup,
    FiniteGroupoid,
    ParseError,
    XmodError,
    action_groupoid,
    b_group,
    builtin_group,
    complex_line,
    crossed_module,
    cyclic_pair,
    direct_sum,
    from_abelian_extension,
    from_central_extension,
    from_isotropy,
    from_normal_subgroup,
    functions_on,
    group_algebra,
    group_from_table,
    group_groupoid,
    groupoid_algebra,
    groupoid_from_data,
    ideal_generated,
    isotropy_bundle,
    matrix_algebra,
    pair_groupoid,
    quotient_groupoid,
    space,
    tensor,
)

from .._actions import (
    canonical_action_on_BH,
    cm_action,
    diagonal_action,
    function_algebra_action,
    groupoid_action,
    inner_action,
    left_translation,
    trivial_action,
    unit_action,
)
from .._morita import linking
from .._symmetries import aut2, induced_algebra_action, translation_action
from ..types import CMAction, GroupoidAlgebraAction

log = logging.getLogger(__name__)

LITERAL_ARGS = ("side",)

VERBS = (
    "check",
    "product",
    "cm_product",
    "cstar",
    "blocks",
    "verify_thm51",
    "verify_exactness",
    "verify_morita",
    "pontryagin",
    "induced_action",
)


@dataclass
class Task:
    """One entry of the ``tasks`` list."""

    verb: str
    args: Dict[str, Any]
    expect: Dict[str, Any] = field(default_factory=dict)
    name: str = ""
    line: Optional[int] = None


@dataclass
class Scenario:
    """
    Parsed scenario: constructed objects by name and the ordered task list.
    """

    declarations: Dict[str, Any]
    kinds: Dict[str, str]
    tasks: List[Task]
    source: str = "<string>"

    def get(self, name: Any, kind: Optional[str] = None, task: Optional[Task] = None) -> Any:
        if not isinstance(name, str) or name not in self.declarations:
            raise ParseError(
                f"Unresolved reference {name!r}", line=None if task is None else task.line, witness=name
            )
        if kind is not None and self.kinds[name] != kind:
            raise ParseError(
                f"{name!r} is a {self.kinds[name]}, expected a {kind}",
                line=None if task is None else task.line,
                declaration=name,
            )
        return self.declarations[name]


def _line_of(text: str, pattern: str, nth: int = 0) -> Optional[int]:
    for i, m in enumerate(re.finditer(pattern, text)):
        if i == nth:
            return text.count("\n", 0, m.start()) + 1
    return None


def as_complex(v: Any) -> np.ndarray:
    """Numbers, strings such as ``"0.5-1j"`` and nested lists of them."""
    if isinstance(v, str):
        return np.asarray(complex(v.replace(" ", "")))
    if isinstance(v, (list, tuple)):
        return np.asarray([as_complex(x) for x in v], dtype=complex)
    return np.asarray(v, dtype=complex)


def _matrix_map(spec: Any) -> Any:
    if spec is None:
        return None
    if isinstance(spec, dict):
        return {k: as_complex(v) for k, v in spec.items()}
    return [as_complex(v) for v in spec]


class _Builder:
    """Resolves declarations on demand, detecting cycles."""

    def __init__(self, text: str, declare: Dict[str, Any]) -> None:
        self.text = text
        self.declare = declare
        self.done: Dict[str, Any] = {}
        self.kinds: Dict[str, str] = {}
        self._active: Set[str] = set()
        self._makers: Dict[str, Callable[[str, Dict[str, Any]], Any]] = {
            "group": self._group,
            "groupoid": self._groupoid,
            "crossed_module": self._crossed_module,
            "algebra": self._algebra,
            "groupoid_action": self._groupoid_action,
            "action": self._action,
            "ideal": self._ideal,
            "linking": self._linking,
        }

    def line(self, name: str) -> Optional[int]:
        return _line_of(self.text, r'"' + re.escape(name) + r'"\s*:')

    def ref(self, name: Any, kind: Union[str, tuple], owner: str) -> Any:
        kinds = (kind,) if isinstance(kind, str) else kind
        if not isinstance(name, str) or name not in self.declare:
            raise ParseError(f"{owner}: unresolved reference {name!r}", self.line(owner), owner, witness=name)
        obj = self.build(name)
        if self.kinds[name] not in kinds:
            raise ParseError(
                f"{owner}: {name!r} is a {self.kinds[name]}, expected {' or '.join(kinds)}", self.line(owner), owner
            )
        return obj

    def build(self, name: str) -> Any:
        if name in self.done:
            return self.done[name]
        if name in self._active:
            raise ParseError(f"Cyclic reference through {name!r}", self.line(name), name, witness=sorted(self._active))
        spec = self.declare[name]
        if not isinstance(spec, dict) or spec.get("type") not in self._makers:
            raise ParseError(f"{name}: unknown declaration type", self.line(name), name)
        self._active.add(name)
        try:
            obj = self._makers[spec["type"]](name, spec)
        except ParseError:
            raise
        except (XmodError, ValueError, KeyError, TypeError, IndexError) as e:
            witness = e.to_dict() if isinstance(e, XmodError) else str(e)
            raise ParseError(f"{name}: {type(e).__name__}: {e}", self.line(name), name, witness=witness) from None
        finally:
            self._active.discard(name)
        self.done[name] = obj
        self.kinds[name] = spec["type"]
        log.debug("declared %s (%s)", name, spec["type"])
        return obj

    # constructors

    def _group(self, name: str, spec: Dict[str, Any]) -> FiniteGroup:
        if "builtin" in spec:
            return builtin_group(spec["builtin"], *spec.get("args", []))
        return group_from_table(spec["elements"], spec["table"])

    def _groupoid(self, name: str, spec: Dict[str, Any]) -> FiniteGroupoid:
        kind = spec.get("kind")
        if kind == "group":
            return group_groupoid(self.ref(spec["group"], "group", name))
        if kind == "pair":
            return pair_groupoid(spec["objects"])
        if kind == "space":
            return space(spec["objects"])
        if kind == "action":
            return action_groupoid(self.ref(spec["group"], "group", name), spec["objects"], spec["action"])
        if kind == "quotient":
            K = self.ref(spec["groupoid"], "groupoid", name)
            by = spec.get("by", "isotropy")
            return quotient_groupoid(K, isotropy_bundle(K) if by == "isotropy" else by)
        if kind == "explicit":
            comp = [tuple(t) for t in spec["comp"]]
            return groupoid_from_data(spec["objects"], spec["arrows"], spec["src"], spec["tgt"], comp)
        raise ParseError(f"{name}: unknown groupoid kind {kind!r}", self.line(name), name)

    def _crossed_module(self, name: str, spec: Dict[str, Any]) -> Any:
        kind = spec.get("kind")
        if kind == "normal_subgroup":
            sub = spec["subgroup"]
            N = self.ref(sub, "group", name) if isinstance(sub, str) else sub
            return from_normal_subgroup(self.ref(spec["group"], "group", name), N)
        if kind == "cyclic_pair":
            return cyclic_pair(*spec["args"])
        if kind == "b_group":
            return b_group(self.ref(spec["group"], "group", name))
        if kind in ("abelian_extension", "central_extension"):
            sub = spec["subgroup"]
            N = self.ref(sub, "group", name) if isinstance(sub, str) else sub
            maker = from_abelian_extension if kind == "abelian_extension" else from_central_extension
            return maker(self.ref(spec["group"], "group", name), N)
        if kind == "isotropy":
            return from_isotropy(self.ref(spec["groupoid"], "groupoid", name))
        if kind == "aut2":
            return aut2(self.ref(spec["groupoid"], "groupoid", name))
        if kind == "explicit":
            G = self.ref(spec["G"], ("group", "groupoid"), name)
            H = self.ref(spec["H"], "group", name)
            return crossed_module(G, H, spec.get("d"), spec.get("c"))
        raise ParseError(f"{name}: unknown crossed module kind {kind!r}", self.line(name), name)

    def _algebra(self, name: str, spec: Dict[str, Any]) -> Any:
        kind = spec.get("kind")
        if kind == "line":
            return complex_line()
        if kind == "matrix":
            return matrix_algebra(*spec["args"])
        if kind == "functions":
            return functions_on(spec["objects"])
        if kind == "group_algebra":
            return group_algebra(self.ref(spec["group"], "group", name))
        if kind == "groupoid_algebra":
            return groupoid_algebra(self.ref(spec["groupoid"], "groupoid", name))
        if kind in ("direct_sum", "tensor"):
            parts = [self.ref(p, "algebra", name) for p in spec["parts"]]
            if kind == "direct_sum":
                return direct_sum(*parts, objects=spec.get("objects"))
            out = parts[0]
            for p in parts[1:]:
                out = tensor(out, p)
            return out
        raise ParseError(f"{name}: unknown algebra kind {kind!r}", self.line(name), name)

    def _groupoid_action(self, name: str, spec: Dict[str, Any]) -> GroupoidAlgebraAction:
        kind = spec.get("kind")
        if kind == "left_translation":
            src = spec.get("group", spec.get("groupoid"))
            return left_translation(self.ref(src, ("group", "groupoid"), name))
        if kind in ("trivial", "explicit"):
            K = self.ref(spec["groupoid"], ("group", "groupoid"), name)
            A = self.ref(spec["algebra"], "algebra", name)
            return groupoid_action(K, A, _matrix_map(spec.get("alpha")))
        raise ParseError(f"{name}: unknown groupoid action kind {kind!r}", self.line(name), name)

    def _action(self, name: str, spec: Dict[str, Any]) -> CMAction:
        kind = spec.get("kind")
        if kind == "unit":
            return unit_action(self.ref(spec["cm"], "crossed_module", name))
        if kind == "induced":
            return induced_algebra_action(translation_action(self.ref(spec["cm"], "crossed_module", name)))
        if kind == "diagonal":
            return diagonal_action(self.ref(spec["left"], "action", name), self.ref(spec["right"], "action", name))

        cm = self.ref(spec["cm"], "crossed_module", name)
        if kind == "canonical":
            return canonical_action_on_BH(cm, self.ref(spec["beta"], "groupoid_action", name))
        if kind == "function_algebra":
            return function_algebra_action(cm, spec["objects"], spec["action"], _matrix_map(spec.get("u")))

        A = self.ref(spec["algebra"], "algebra", name)
        if kind == "trivial":
            return trivial_action(cm, A)
        if kind == "inner":
            return inner_action(cm, A, _matrix_map(spec["unitaries_G"]), _matrix_map(spec.get("u")))
        if kind == "explicit":
            return cm_action(cm, A, _matrix_map(spec.get("alpha")), _matrix_map(spec.get("u")))
        raise ParseError(f"{name}: unknown action kind {kind!r}", self.line(name), name)

    def _ideal(self, name: str, spec: Dict[str, Any]) -> Any:
        src = spec.get("algebra", spec.get("action"))
        obj = self.ref(src, ("algebra", "action"), name)
        A = obj.algebra if isinstance(obj, CMAction) else obj
        gens = [as_complex(v).reshape(A.dim) for v in spec.get("generators", [])]
        return ideal_generated(A, np.column_stack(gens) if gens else np.zeros((A.dim, 0)))

    def _linking(self, name: str, spec: Dict[str, Any]) -> Any:
        D = self.ref(spec["action"], "action", name)
        return linking(D, as_complex(spec["p"]))


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """
    Parse and validate a scenario document.

    :raises ParseError: on malformed JSON, unknown forms, unresolved or cyclic references, and on any
                        validation error raised while constructing a declaration
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("Scenario must be a JSON object", line=1)
    unknown = set(doc) - {"declare", "tasks", "description"}
    if unknown:
        raise ParseError(f"Unknown top-level keys: {sorted(unknown)}", line=_line_of(text, f'"{sorted(unknown)[0]}"'))
    declare = doc.get("declare", {})
    if not isinstance(declare, dict):
        raise ParseError('"declare" must map names to declarations', line=_line_of(text, '"declare"'))

    builder = _Builder(text, declare)
    for name in declare:
        builder.build(name)

    tasks: List[Task] = []
    for i, t in enumerate(doc.get("tasks", [])):
        line = _line_of(text, r'"verb"\s*:', i)
        if not isinstance(t, dict) or t.get("verb") not in VERBS:
            verb = t.get("verb") if isinstance(t, dict) else None
            raise ParseError(f"Unknown verb {verb!r}", line=line, witness=verb)
        for key in ("args", "expect"):
            if not isinstance(t.get(key, {}), dict):
                raise ParseError(f'"{key}" of a task must be an object', line=line, witness=key)
        task = Task(
            t["verb"],
            dict(t.get("args", {})),
            dict(t.get("expect", {})),
            t.get("name", f"{i}:{t['verb']}"),
            line,
        )
        for key, ref in task.args.items():
            if isinstance(ref, str) and key not in LITERAL_ARGS and ref not in declare:
                raise ParseError(f"Unresolved reference {ref!r}", line=line, witness=ref)
        tasks.append(task)

    log.info("parsed %s: %d declarations, %d tasks", source, len(declare), len(tasks))
    return Scenario(builder.done, builder.kinds, tasks, source)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read a scenario from a file, ``"-"`` reads standard input."""
    if str(path) == "-":
        return parse_scenario(sys.stdin.read(), "<stdin>")
    with open(path, "rt", encoding="utf8") as src:
        return parse_scenario(src.read(), str(path))
