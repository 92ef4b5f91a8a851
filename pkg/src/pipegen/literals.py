"""Literal values and their canonical source text form.

A literal is a plain Python value restricted to int, float, bool, str, or a
(possibly nested) list of those. The same canonical rendering is used in the
content tables, in form submissions, and in the emitted script, so a value
always appears as exactly one spelling:

    ints bare        5
    floats dotted    0.1, 1.0
    bools            True / False
    strings          'single-quoted'
    lists            [0.1, 1, 10]
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from typing import Union

LiteralValue = Union[int, float, bool, str, list]

VALUE_TYPES = ("int", "float", "bool", "string", "list")


class MalformedLiteral(ValueError):
    """Raised when a text form cannot be parsed into a literal value."""


def check_literal(value: LiteralValue) -> None:
    """Reject values outside the literal domain (incl. non-finite floats)."""
    if isinstance(value, bool):
        return
    if isinstance(value, int):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise MalformedLiteral(f"non-finite float {value!r} is not a literal")
        return
    if isinstance(value, str):
        return
    if isinstance(value, list):
        for item in value:
            check_literal(item)
        return
    raise MalformedLiteral(f"{type(value).__name__} is not a literal type")


def parse_literal(text: str) -> LiteralValue:
    """Parse canonical literal text (a safe Python-literal subset)."""
    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError, MemoryError, RecursionError) as exc:
        raise MalformedLiteral(f"cannot parse literal {text!r}: {exc}") from None
    check_literal(value)
    return value


_ESCAPES = {"\\": "\\\\", "'": "\\'", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_string(value: str) -> str:
    out = []
    for char in value:
        if char in _ESCAPES:
            out.append(_ESCAPES[char])
        elif ord(char) < 32 or ord(char) == 127:
            out.append(f"\\x{ord(char):02x}")
        else:
            out.append(char)
    return "".join(out)


def render_literal(value: LiteralValue) -> str:
    """Render a literal value to its canonical source text."""
    check_literal(value)
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = repr(value)
        if "." not in text and "e" not in text and "E" not in text:
            text += ".0"
        return text
    if isinstance(value, str):
        return f"'{_escape_string(value)}'"
    return "[" + ", ".join(render_literal(item) for item in value) + "]"


def render_kwargs_dict(items: list[tuple[str, LiteralValue]]) -> str:
    """Render ordered (name, value) pairs as a dict display, e.g. {'C': 1}."""
    inner = ", ".join(f"'{name}': {render_literal(value)}" for name, value in items)
    return "{" + inner + "}"


def matches_type(value: LiteralValue, value_type: str) -> bool:
    """Check a literal against a declared value type.

    Ints are accepted where floats are declared (the spelling is preserved,
    so `1` stays `1` in the output even for a float-typed parameter).
    """
    if value_type == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if value_type == "float":
        return (isinstance(value, (int, float))
                and not isinstance(value, bool)
                and (not isinstance(value, float) or math.isfinite(value)))
    if value_type == "bool":
        return isinstance(value, bool)
    if value_type == "string":
        return isinstance(value, str)
    if value_type == "list":
        return isinstance(value, list)
    raise ValueError(f"unknown value type {value_type!r}")


_RANGE_RE = re.compile(r"^range\s*\((?P<args>.*)\)$", re.DOTALL)


def parse_range_text(text: str) -> tuple[LiteralValue, LiteralValue, LiteralValue] | None:
    """Parse `range(min, max[, step])` text; None if it is not range syntax."""
    match = _RANGE_RE.match(text.strip())
    if match is None:
        return None
    try:
        args = ast.literal_eval("(" + match.group("args") + ",)")
    except (ValueError, SyntaxError) as exc:
        raise MalformedLiteral(f"cannot parse range {text!r}: {exc}") from None
    if len(args) == 2:
        lo, hi = args
        step = 1
    elif len(args) == 3:
        lo, hi, step = args
    else:
        raise MalformedLiteral(f"range takes 2 or 3 arguments, got {len(args)}")
    for bound in (lo, hi, step):
        if isinstance(bound, bool) or not isinstance(bound, (int, float)):
            raise MalformedLiteral(f"range bounds must be numbers: {text!r}")
    return lo, hi, step


SPACE_KINDS = ("categorical_list", "int_range", "float_range")


@dataclass
class HyperparamSpace:
    """Value space searched during hyperparameter optimization.

    Either an explicit list of candidates or a numeric range; ranges expand
    to an explicit candidate list when the script is emitted.
    """

    kind: str
    values: list | None = None
    min: LiteralValue | None = None
    max: LiteralValue | None = None
    step: LiteralValue | None = None

    def check(self) -> None:
        if self.kind == "categorical_list":
            if not isinstance(self.values, list) or not self.values:
                raise MalformedLiteral("categorical hyperparameter list must not be empty")
            check_literal(self.values)
            return
        if self.kind not in ("int_range", "float_range"):
            raise MalformedLiteral(f"unknown hyperparameter space kind {self.kind!r}")
        for name, bound in (("min", self.min), ("max", self.max), ("step", self.step)):
            if isinstance(bound, bool) or not isinstance(bound, (int, float)):
                raise MalformedLiteral(f"range {name} must be a number")
            if self.kind == "int_range" and not isinstance(bound, int):
                raise MalformedLiteral(f"int range {name} must be an integer")
        if not self.min < self.max:
            raise MalformedLiteral("range requires min < max")
        if not self.step > 0:
            raise MalformedLiteral("range requires step > 0")

    def grid_values(self) -> list:
        """Explicit candidate list; ranges are enumerated min, min+step, ... <= max."""
        self.check()
        if self.kind == "categorical_list":
            return list(self.values)
        values = []
        k = 0
        while True:
            value = self.min + k * self.step
            if self.kind == "float_range":
                value = round(float(value), 10)
            if value > self.max + (1e-9 if self.kind == "float_range" else 0):
                break
            values.append(min(value, self.max) if self.kind == "float_range" else value)
            k += 1
        return values

    def to_dict(self) -> dict:
        if self.kind == "categorical_list":
            return {"kind": self.kind, "values": list(self.values)}
        return {"kind": self.kind, "min": self.min, "max": self.max, "step": self.step}

    @classmethod
    def from_dict(cls, data: dict) -> "HyperparamSpace":
        space = cls(
            kind=data.get("kind", ""),
            values=data.get("values"),
            min=data.get("min"),
            max=data.get("max"),
            step=data.get("step"),
        )
        space.check()
        return space


def parse_hyperparam_text(text: str, value_type: str) -> HyperparamSpace:
    """Parse a hyperparameter space from text.

    Accepts a bracketed candidate list, `range(min, max[, step])`, or a bare
    scalar (treated as a single-candidate list).
    """
    bounds = parse_range_text(text)
    if bounds is not None:
        if value_type == "int":
            space = HyperparamSpace(kind="int_range", min=bounds[0], max=bounds[1], step=bounds[2])
        elif value_type == "float":
            space = HyperparamSpace(kind="float_range", min=bounds[0], max=bounds[1], step=bounds[2])
        else:
            raise MalformedLiteral(f"range spaces need a numeric parameter, not {value_type}")
        space.check()
        return space
    value = parse_literal(text)
    values = value if isinstance(value, list) else [value]
    space = HyperparamSpace(kind="categorical_list", values=values)
    space.check()
    for item in space.values:
        if not matches_type(item, value_type):
            raise MalformedLiteral(
                f"hyperparameter candidate {render_literal(item)} does not match type {value_type}"
            )
    return space


def render_hyperparam_text(space: HyperparamSpace) -> str:
    """Inverse of parse_hyperparam_text, in canonical spelling."""
    space.check()
    if space.kind == "categorical_list":
        return render_literal(space.values)
    args = f"{render_literal(space.min)}, {render_literal(space.max)}, {render_literal(space.step)}"
    return f"range({args})"
