"""Data model, ARFF-subset reader/writer and the student-record helpers.

A :class:`Dataset` is an immutable schema plus weighted instances. Cells are
plain Python values: an ``int`` index into a nominal attribute's value list,
a ``float`` for numeric attributes, or ``None`` for a missing value.

The ARFF dialect understood here is deliberately small::

    % comment
    @relation students
    @attribute SSG {O,A,B,C,D,E,F}
    @attribute marks numeric
    @attribute Result {Pass,Promoted,Fail}
    @data
    A,81.5,Pass
    ?,40,Fail,{0.5}

The optional trailing ``{w}`` field carries an instance weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ArffError, SchemaError
from .outcomes import GT, LE, Equals, InSubset

NUMERIC_TYPES = ("numeric", "real", "integer")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    values: tuple[str, ...] | None = None  # None means numeric

    def __post_init__(self):
        if not self.name:
            raise SchemaError("attribute name is empty")
        if self.values is not None:
            vals = tuple(self.values)
            object.__setattr__(self, "values", vals)
            if not vals:
                raise SchemaError(f"nominal attribute {self.name!r} has no values")
            if len(set(vals)) != len(vals):
                raise SchemaError(f"nominal attribute {self.name!r} repeats a value")

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    @property
    def kind(self) -> str:
        return "nominal" if self.is_nominal else "numeric"

    @property
    def cardinality(self) -> int:
        return len(self.values) if self.values is not None else 0

    def index_of(self, value: str) -> int:
        try:
            return self.values.index(value)
        except (ValueError, AttributeError):
            raise SchemaError(f"{value!r} is not a value of {self.name!r}") from None


def nominal(name: str, *values: str) -> AttributeSpec:
    return AttributeSpec(name, tuple(values))


def numeric(name: str) -> AttributeSpec:
    return AttributeSpec(name, None)


@dataclass(frozen=True)
class Instance:
    cells: tuple
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise SchemaError(f"instance weight must be positive, got {self.weight!r}")


def _check_cell(spec: AttributeSpec, cell):
    if cell is None:
        return
    if spec.is_nominal:
        if isinstance(cell, bool) or not isinstance(cell, (int, np.integer)):
            raise SchemaError(f"{spec.name!r} expects a nominal index, got {cell!r}")
        if not 0 <= cell < spec.cardinality:
            raise SchemaError(f"index {cell} out of range for {spec.name!r}")
    else:
        if not isinstance(cell, (float, int, np.floating, np.integer)) or isinstance(cell, bool):
            raise SchemaError(f"{spec.name!r} expects a number, got {cell!r}")
        if not math.isfinite(cell):
            raise SchemaError(f"{spec.name!r} has a non-finite value")


@dataclass(frozen=True)
class Dataset:
    relation: str
    schema: tuple[AttributeSpec, ...]
    class_index: int
    instances: tuple[Instance, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "instances", tuple(self.instances))
        seen = set()
        for spec in self.schema:
            key = spec.name.lower()
            if key in seen:
                raise SchemaError(f"duplicate attribute name {spec.name!r}")
            seen.add(key)
        if not 0 <= self.class_index < len(self.schema):
            raise SchemaError(f"class index {self.class_index} out of range")
        if not self.schema[self.class_index].is_nominal:
            raise SchemaError("class attribute must be nominal")
        m = len(self.schema)
        for i, inst in enumerate(self.instances):
            if len(inst.cells) != m:
                raise SchemaError(f"instance {i} has {len(inst.cells)} cells, expected {m}")
            for spec, cell in zip(self.schema, inst.cells):
                _check_cell(spec, cell)
            if inst.cells[self.class_index] is None:
                raise SchemaError(f"instance {i} has a missing class value")

    def __len__(self):
        return len(self.instances)

    @property
    def class_attribute(self) -> AttributeSpec:
        return self.schema[self.class_index]

    @property
    def class_values(self) -> tuple[str, ...]:
        return self.class_attribute.values

    @property
    def n_classes(self) -> int:
        return self.class_attribute.cardinality

    @property
    def total_weight(self) -> float:
        return float(sum(inst.weight for inst in self.instances))

    def attribute_index(self, name: str) -> int:
        for i, spec in enumerate(self.schema):
            if spec.name.lower() == name.lower():
                return i
        raise SchemaError(f"no attribute named {name!r}")

    @cached_property
    def arrays(self):
        """``(X, y, w)``: float matrix with NaN for missing, class codes, weights."""
        n, m = len(self.instances), len(self.schema)
        X = np.full((n, m), np.nan)
        for i, inst in enumerate(self.instances):
            for j, cell in enumerate(inst.cells):
                if cell is not None:
                    X[i, j] = cell
        y = np.array([inst.cells[self.class_index] for inst in self.instances], dtype=np.int64)
        w = np.array([inst.weight for inst in self.instances], dtype=np.float64)
        return X, y, w

    def with_instances(self, instances: Iterable[Instance]) -> "Dataset":
        return Dataset(self.relation, self.schema, self.class_index, tuple(instances))

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return self.with_instances(self.instances[i] for i in indices)

    def with_class_index(self, class_index: int) -> "Dataset":
        return Dataset(self.relation, self.schema, class_index, self.instances)

    def decode(self, attr: int, cell) -> str:
        if cell is None:
            return "?"
        spec = self.schema[attr]
        return spec.values[cell] if spec.is_nominal else _format_number(cell)


def partition(d: Dataset, attr: int, outcome) -> Dataset:
    """Instances of ``d`` whose ``attr`` cell satisfies ``outcome``.

    Instances with a missing value never match.
    """
    if attr == d.class_index:
        raise SchemaError("cannot partition on the class attribute")
    spec = d.schema[attr]
    if isinstance(outcome, (Equals, InSubset)):
        if not spec.is_nominal:
            raise SchemaError(f"{type(outcome).__name__} needs a nominal attribute")
        vals = (outcome.value,) if isinstance(outcome, Equals) else outcome.values
        for v in vals:
            _check_cell(spec, v)
    elif isinstance(outcome, (LE, GT)):
        if spec.is_nominal:
            raise SchemaError(f"{type(outcome).__name__} needs a numeric attribute")
    else:
        raise SchemaError(f"unknown outcome {outcome!r}")
    return d.with_instances(i for i in d.instances if outcome.matches(i.cells[attr]))


# ---------------------------------------------------------------------------
# ARFF reading

_SPECIAL = set(" \t,{}'\"%")


class _Line:
    """Cursor over a single source line with 1-based column reporting."""

    def __init__(self, text, lineno):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, msg, pos=None):
        return ArffError(msg, self.lineno, (self.pos if pos is None else pos) + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def token(self, stops=",{}"):
        """Read a bare or quoted token; returns ``(text, quoted, start)``."""
        self.skip_ws()
        start = self.pos
        if start >= len(self.text):
            raise self.error("unexpected end of line")
        q = self.text[start]
        if q in "'\"":
            out = []
            i = start + 1
            while i < len(self.text):
                ch = self.text[i]
                if ch == "\\" and i + 1 < len(self.text):
                    out.append(self.text[i + 1])
                    i += 2
                    continue
                if ch == q:
                    self.pos = i + 1
                    return "".join(out), True, start
                out.append(ch)
                i += 1
            raise self.error("unterminated quoted value", start)
        i = start
        while i < len(self.text) and self.text[i] not in stops:
            i += 1
        self.pos = i
        tok = self.text[start:i].rstrip(" \t")
        if not tok:
            raise self.error("empty value", start)
        return tok, False, start

    def word(self):
        self.skip_ws()
        start = self.pos
        if self.peek() in ("'", '"'):
            return self.token()[0], start
        i = start
        while i < len(self.text) and self.text[i] not in " \t{":
            i += 1
        self.pos = i
        if i == start:
            raise self.error("expected a name")
        return self.text[start:i], start


def _parse_attribute(line: _Line) -> AttributeSpec:
    name, _ = line.word()
    if line.peek() == "{":
        line.expect("{")
        values = []
        if line.peek() == "}":
            raise line.error("nominal attribute has no values")
        while True:
            tok, _, start = line.token()
            if tok in values:
                raise line.error(f"duplicate nominal value {tok!r}", start)
            values.append(tok)
            ch = line.peek()
            if ch == ",":
                line.pos += 1
            elif ch == "}":
                line.pos += 1
                break
            else:
                raise line.error("expected ',' or '}' in nominal value list")
        if not line.at_end():
            raise line.error("trailing characters after attribute declaration")
        return AttributeSpec(name, tuple(values))
    type_start = line.pos
    kind, _ = line.word()
    if kind.lower() not in NUMERIC_TYPES:
        raise line.error(f"unsupported attribute type {kind!r}", type_start)
    if not line.at_end():
        raise line.error("trailing characters after attribute declaration")
    return AttributeSpec(name, None)


def _parse_row(line: _Line, schema) -> Instance:
    cells = []
    weight = 1.0
    while True:
        if line.peek() == "{":
            wstart = line.pos
            line.expect("{")
            tok, _, _ = line.token(stops="}")
            line.expect("}")
            try:
                weight = float(tok)
            except ValueError:
                raise line.error(f"bad instance weight {tok!r}", wstart) from None
            if not (weight > 0 and math.isfinite(weight)):
                raise line.error("instance weight must be positive", wstart)
            if not line.at_end():
                raise line.error("weight must be the last field")
            break
        tok, quoted, start = line.token()
        if len(cells) >= len(schema):
            raise line.error(f"too many values: expected {len(schema)}", start)
        spec = schema[len(cells)]
        if tok == "?" and not quoted:
            cells.append(None)
        elif spec.is_nominal:
            try:
                cells.append(spec.values.index(tok))
            except ValueError:
                raise line.error(
                    f"unknown nominal value {tok!r} for attribute {spec.name!r}", start
                ) from None
        else:
            try:
                x = float(tok)
            except ValueError:
                raise line.error(f"bad numeric value {tok!r} for {spec.name!r}", start) from None
            if not math.isfinite(x):
                raise line.error(f"non-finite numeric value for {spec.name!r}", start)
            cells.append(x)
        if line.at_end():
            break
        line.expect(",")
    if len(cells) != len(schema):
        raise line.error(f"expected {len(schema)} values, got {len(cells)}")
    return Instance(tuple(cells), weight)


def parse_arff(source: str, class_index: int | str | None = None) -> Dataset:
    """Parse ARFF text. The last attribute is the class unless ``class_index``
    (an index, negative index, or attribute name) says otherwise."""
    relation = None
    schema: list[AttributeSpec] = []
    names: set[str] = set()
    rows: list[Instance] = []
    in_data = False
    for lineno, raw in enumerate(source.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        line = _Line(raw.rstrip("\r"), lineno)
        if in_data:
            rows.append(_parse_row(line, schema))
            continue
        if not stripped.startswith("@"):
            raise line.error("expected a declaration", raw.index(stripped[0]))
        line.skip_ws()
        kw, kw_start = line.word()
        kw = kw.lower()
        if kw == "@relation":
            if relation is not None:
                raise line.error("duplicate @relation", kw_start)
            relation, _ = line.word()
            if not line.at_end():
                raise line.error("trailing characters after @relation")
        elif kw == "@attribute":
            if relation is None:
                raise line.error("@attribute before @relation", kw_start)
            spec = _parse_attribute(line)
            if spec.name.lower() in names:
                raise ArffError(f"duplicate attribute name {spec.name!r}", lineno)
            names.add(spec.name.lower())
            schema.append(spec)
        elif kw == "@data":
            if not schema:
                raise line.error("@data before any @attribute", kw_start)
            if not line.at_end():
                raise line.error("trailing characters after @data")
            in_data = True
        else:
            raise line.error(f"unknown declaration {kw!r}", kw_start)
    if relation is None:
        raise ArffError("missing @relation")
    if not in_data:
        raise ArffError("missing @data section")
    if class_index is None:
        ci = len(schema) - 1
    elif isinstance(class_index, str):
        matches = [i for i, s in enumerate(schema) if s.name.lower() == class_index.lower()]
        if not matches:
            raise ArffError(f"no attribute named {class_index!r}")
        ci = matches[0]
    else:
        ci = class_index + len(schema) if class_index < 0 else class_index
    if not 0 <= ci < len(schema):
        raise ArffError(f"class index {class_index} out of range")
    if not schema[ci].is_nominal:
        raise ArffError(f"class attribute {schema[ci].name!r} must be nominal")
    for i, inst in enumerate(rows):
        if inst.cells[ci] is None:
            raise ArffError(f"data row {i + 1} has a missing class value")
    return Dataset(relation, tuple(schema), ci, tuple(rows))


def read_arff(path, class_index=None) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_arff(fh.read(), class_index)


# ---------------------------------------------------------------------------
# ARFF writing


def _quote(text: str) -> str:
    if text and text != "?" and not any(ch in _SPECIAL for ch in text) and text.strip() == text:
        return text
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _format_number(x) -> str:
    return repr(float(x))


def serialize_arff(d: Dataset) -> str:
    lines = [f"@relation {_quote(d.relation)}", ""]
    for spec in d.schema:
        if spec.is_nominal:
            lines.append(f"@attribute {_quote(spec.name)} {{{','.join(map(_quote, spec.values))}}}")
        else:
            lines.append(f"@attribute {_quote(spec.name)} numeric")
    lines += ["", "@data"]
    for inst in d.instances:
        fields = []
        for spec, cell in zip(d.schema, inst.cells):
            if cell is None:
                fields.append("?")
            elif spec.is_nominal:
                fields.append(_quote(spec.values[cell]))
            else:
                fields.append(_format_number(cell))
        if inst.weight != 1.0:
            fields.append("{" + repr(float(inst.weight)) + "}")
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def write_arff(d: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_arff(d))


# ---------------------------------------------------------------------------
# Student-record helpers

GRADES = ("O", "A", "B", "C", "D", "E", "F")
RESULTS = ("Pass", "Promoted", "Fail")
_QUAL = ("no-education", "elementary", "secondary", "UG", "PG", "Ph.D.", "NA")

STUDENT_SCHEMA = (
    nominal("Branch", "CS", "IT", "ME"),
    nominal("Sex", "Male", "Female"),
    nominal("Cat", "Unreserved", "OBC", "SC", "ST"),
    nominal("HSG", *GRADES),
    nominal("SSG", *GRADES),
    nominal("Atype", "UPSEE", "Direct"),
    nominal("Med", "Hindi", "English"),
    nominal("LLoc", "Village", "Town", "Tahseel", "District"),
    nominal("Hos", "Yes", "No"),
    nominal("FSize", "1", "2", "3", ">3"),
    nominal("FStat", "Joint", "Individual"),
    nominal("FAIn", "BPL", "poor", "medium", "high"),
    nominal("FQual", *_QUAL),
    nominal("MQual", *_QUAL),
    nominal("FOcc", "Service", "Business", "Agriculture", "Retired", "NA"),
    nominal("MOcc", "House-wife", "Service", "Retired", "NA"),
    nominal("Result", *RESULTS),
)


def bin_grade(percentage: float) -> str:
    """Map a percentage mark to its grade band; fractional marks are floored."""
    if not (isinstance(percentage, (int, float, np.number)) and math.isfinite(percentage)):
        raise ValueError(f"percentage must be a finite number, got {percentage!r}")
    if not 0 <= percentage <= 100:
        raise ValueError(f"percentage {percentage} outside [0, 100]")
    p = math.floor(percentage)
    if p >= 90:
        return "O"
    if p < 40:
        return "F"
    return GRADES[9 - p // 10]


def derive_result(failed_theory: int, failed_practical: int) -> str:
    if failed_theory < 0 or failed_practical < 0:
        raise ValueError("failure counts must be non-negative")
    if failed_theory == 0 and failed_practical == 0:
        return "Pass"
    if failed_theory <= 3 and failed_practical <= 2:
        return "Promoted"
    return "Fail"


def bin_numeric_attributes(d: Dataset, names: Sequence[str] | None = None) -> Dataset:
    """Replace numeric mark columns by nominal grade attributes."""
    if names is None:
        targets = [i for i, s in enumerate(d.schema) if not s.is_nominal]
    else:
        targets = [d.attribute_index(n) for n in names]
        for i in targets:
            if d.schema[i].is_nominal:
                raise SchemaError(f"attribute {d.schema[i].name!r} is not numeric")
    schema = list(d.schema)
    for i in targets:
        schema[i] = AttributeSpec(schema[i].name, GRADES)
    instances = []
    for inst in d.instances:
        cells = list(inst.cells)
        for i in targets:
            if cells[i] is not None:
                try:
                    cells[i] = GRADES.index(bin_grade(cells[i]))
                except ValueError as exc:
                    raise SchemaError(f"{d.schema[i].name}: {exc}") from None
        instances.append(Instance(tuple(cells), inst.weight))
    return Dataset(d.relation, tuple(schema), d.class_index, tuple(instances))


# Marginal frequencies for the synthetic cohort; the grade distributions lean
# towards the middle bands.
_MARGINALS = {
    "Branch": (0.4, 0.35, 0.25),
    "Sex": (0.7, 0.3),
    "Cat": (0.45, 0.35, 0.15, 0.05),
    "HSG": (0.08, 0.22, 0.3, 0.22, 0.1, 0.05, 0.03),
    "SSG": (0.06, 0.2, 0.3, 0.24, 0.12, 0.05, 0.03),
    "Atype": (0.7, 0.3),
    "Med": (0.55, 0.45),
    "LLoc": (0.35, 0.3, 0.15, 0.2),
    "Hos": (0.4, 0.6),
    "FSize": (0.05, 0.2, 0.35, 0.4),
    "FStat": (0.55, 0.45),
    "FAIn": (0.15, 0.3, 0.4, 0.15),
    "FQual": (0.08, 0.15, 0.25, 0.27, 0.15, 0.03, 0.07),
    "MQual": (0.2, 0.25, 0.25, 0.17, 0.08, 0.02, 0.03),
    "FOcc": (0.35, 0.3, 0.25, 0.05, 0.05),
    "MOcc": (0.7, 0.2, 0.05, 0.05),
}


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def generate_synthetic(seed: int, n: int) -> Dataset:
    """Seeded synthetic cohort over the 17 student attributes.

    Results come from simulated theory/practical failure counts whose rates
    rise with weaker school grades, Direct admission, low income and
    Hindi-medium teaching.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    names = [s.name for s in STUDENT_SCHEMA]
    cols = {}
    for name in names[:-1]:
        p = np.asarray(_MARGINALS[name], dtype=float)
        cols[name] = rng.choice(len(p), size=n, p=p / p.sum())
    risk = (
        0.9 * cols["SSG"]
        + 0.4 * cols["HSG"]
        + 0.8 * (cols["Atype"] == 1)
        + 0.6 * (cols["FAIn"] <= 1)
        - 0.5 * (cols["Med"] == 1)
        + rng.normal(0.0, 0.3, size=n)
    )
    theory = rng.binomial(6, _sigmoid(2.5 * (risk - 4.5)))
    practical = rng.binomial(4, _sigmoid(2.5 * (risk - 5.0)))
    result = np.array([RESULTS.index(derive_result(int(t), int(p))) for t, p in zip(theory, practical)])
    instances = []
    for i in range(n):
        cells = tuple(int(cols[name][i]) for name in names[:-1]) + (int(result[i]),)
        instances.append(Instance(cells))
    return Dataset("engg", STUDENT_SCHEMA, len(STUDENT_SCHEMA) - 1, tuple(instances))
