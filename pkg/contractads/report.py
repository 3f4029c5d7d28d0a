"""
Contractads Report - Command results as tables, JSON or CSV, and schema validation of reports.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

# Try to import jsonschema, fall back to structural checks if not available
try:
    import jsonschema
    HAS_JSONSCHEMA = True
except ImportError:
    HAS_JSONSCHEMA = False

SCHEMA_DIR = Path(__file__).parent / "schema"
REPORT_SCHEMA_VERSION = "1"
STATUSES = ("OK", "PASS", "FAIL")


@dataclass
class ValidationError:
    """A single validation error."""
    path: str
    message: str
    severity: str = "error"  # "error" or "warning"


@dataclass
class ValidationResult:
    """Result of validating a document against its schema."""
    valid: bool
    kind: str = "document"
    errors: List[ValidationError] = field(default_factory=list)
    warnings: List[ValidationError] = field(default_factory=list)

    def __str__(self) -> str:
        if self.valid:
            return f"✓ Valid {self.kind}"
        error_msgs = [f"  - {e.path or '<root>'}: {e.message}" for e in self.errors]
        return f"✗ Invalid {self.kind}:\n" + "\n".join(error_msgs)


class SchemaValidator:
    """Validate dictionaries against one JSON schema, collecting every error."""

    schema_name = ""
    kind = "document"
    required: List[str] = []

    def __init__(self, schema_dir: Optional[Union[str, Path]] = None):
        self.schema_dir = Path(schema_dir) if schema_dir else SCHEMA_DIR
        self.schema: Optional[Dict[str, Any]] = None
        path = self.schema_dir / self.schema_name
        if path.exists():
            with open(path, "r", encoding="utf-8") as f:
                self.schema = json.load(f)

    def _schema_errors(self, data: Any) -> List[ValidationError]:
        errors = []
        validator = jsonschema.Draft202012Validator(self.schema)
        for error in sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.path]):
            path_parts = [str(p) for p in error.path]
            if error.validator == "required" and "'" in error.message:
                path_parts.append(error.message.split("'")[1])
            errors.append(ValidationError(path=".".join(path_parts), message=error.message))
        return errors

    def _fallback_errors(self, data: Any) -> List[ValidationError]:
        if not isinstance(data, dict):
            return [ValidationError(path="", message="expected a mapping at the top level")]
        return [
            ValidationError(path=key, message=f"Required field '{key}' is missing")
            for key in self.required if key not in data
        ]

    def check(self, data: Any) -> List[ValidationError]:
        """Semantic checks beyond the schema; subclasses extend."""
        return []

    def validate(self, data: Any) -> ValidationResult:
        if HAS_JSONSCHEMA and self.schema:
            errors = self._schema_errors(data)
        else:
            errors = self._fallback_errors(data)
        if not errors:
            errors = self.check(data)
        return ValidationResult(valid=not errors, kind=self.kind, errors=errors)

    def validate_file(self, path: Union[str, Path]) -> ValidationResult:
        """Validate a JSON or YAML file."""
        import yaml

        path = Path(path)
        if not path.exists():
            return ValidationResult(False, self.kind, [ValidationError(str(path), "File not found")])
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            return ValidationResult(False, self.kind, [ValidationError(str(path), f"parse error: {e}")])
        return self.validate(data)


class ReportValidator(SchemaValidator):
    """Validate CLI reports against report.schema.json."""

    schema_name = "report.schema.json"
    kind = "contractads report"
    required = ["schema", "command", "inputs", "results", "certificates", "status"]

    def check(self, data: Any) -> List[ValidationError]:
        errors = []
        if data.get("status") not in STATUSES:
            errors.append(ValidationError("status", f"status must be one of {', '.join(STATUSES)}"))
        if not all(isinstance(row, dict) for row in data.get("results", [])):
            errors.append(ValidationError("results", "every result row must be a mapping"))
        return errors


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    if value is None:
        return "-"
    return str(value)


@dataclass
class Report:
    """The outcome of one CLI command."""
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: List[Dict[str, Any]] = field(default_factory=list)
    certificates: Dict[str, Any] = field(default_factory=dict)
    status: str = "OK"
    schema: str = REPORT_SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.status != "FAIL"

    def add_row(self, **row: Any) -> None:
        self.results.append(row)

    def columns(self) -> List[str]:
        seen: List[str] = []
        for row in self.results:
            for key in row:
                if key not in seen:
                    seen.append(key)
        return seen

    def to_dict(self) -> Dict[str, Any]:
        return json.loads(self.to_json())

    def to_json(self) -> str:
        payload = {
            "schema": self.schema,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "certificates": self.certificates,
            "status": self.status,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)

    def to_table(self) -> str:
        columns = self.columns()
        lines = [f"{self.command}: " + ", ".join(f"{k}={_cell(v)}" for k, v in sorted(self.inputs.items()))]
        if columns:
            cells = [[_cell(row.get(c)) for c in columns] for row in self.results]
            widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c) for i, c in enumerate(columns)]
            lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
            lines.append("  ".join("-" * w for w in widths))
            for r in cells:
                lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        for key, value in sorted(self.certificates.items()):
            lines.append(f"{key}: {_cell(value)}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        columns = self.columns()
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in self.results:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buffer.getvalue()

    def render(self, fmt: str = "table") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_table()
