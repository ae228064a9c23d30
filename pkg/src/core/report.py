"""
Command reports.

The report body is deterministic: sorted keys, no timestamps. The generation
time is written to a sidecar ``meta`` document next to the report file.
"""
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .constants import ExitCode
from ..utils.codec import file_digest

logger = logging.getLogger(__name__)

@dataclass
class Report:
    """Result of one command."""
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    exit_code: ExitCode = ExitCode.SUCCESS
    error: Optional[Dict[str, Any]] = None
    exact: bool = True

    def add_input(self, label: str, path: Union[str, Path]) -> None:
        """Record an input file by its SHA-256 digest, or a bundled name as is."""
        candidate = Path(path)
        self.inputs[label] = f"sha256:{file_digest(candidate)}" if candidate.exists() else f"bundled:{path}"

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def fail(self, error: Exception, exit_code: ExitCode) -> None:
        self.exit_code = exit_code
        self.error = {"type": type(error).__name__, "message": str(error)}
        for attr in ("order", "hypothesis", "generator", "shape"):
            value = getattr(error, attr, None)
            if value is not None:
                self.error[attr] = list(value) if isinstance(value, tuple) else value
        residual = getattr(error, "residual", None) or getattr(error, "form", None)
        if residual is not None:
            self.error["residual"] = str(residual)

    def body(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
            "exit_code": int(self.exit_code),
            "error": self.error,
            "exact_arithmetic": self.exact,
        }

    def to_json(self) -> str:
        """Deterministic JSON body."""
        return json.dumps(self.body(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def meta(self) -> Dict[str, Any]:
        return {"meta": {"generated_at": datetime.now(timezone.utc).isoformat(), "command": self.command}}

    def write(self, path: Union[str, Path]) -> Path:
        """Write the body to ``path`` and the sidecar to ``<path>.meta.json``."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")
        sidecar = path.with_name(path.name + ".meta.json")
        sidecar.write_text(json.dumps(self.meta(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
        logger.info(f"Report written to {path}")
        return sidecar

    def to_text(self) -> str:
        """Short human-readable summary."""
        lines = [f"deformae {self.command}: exit {int(self.exit_code)} ({self.exit_code.name.lower()})"]
        for label, digest in sorted(self.inputs.items()):
            lines.append(f"  {label}: {digest}")
        if self.error:
            lines.append(f"  error: {self.error['type']}: {self.error['message']}")
            if "residual" in self.error:
                lines.append(f"  residual: {self.error['residual']}")
        for warning in self.warnings:
            lines.append(f"  warning: {warning}")
        lines.extend(_summarize(self.results, indent=2))
        return "\n".join(lines) + "\n"

def _summarize(data: Any, indent: int) -> List[str]:
    pad = " " * indent
    out = []
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)) and value:
                out.append(f"{pad}{key}:")
                out.extend(_summarize(value, indent + 2))
            else:
                out.append(f"{pad}{key}: {value}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)):
                out.append(f"{pad}-")
                out.extend(_summarize(item, indent + 2))
            else:
                out.append(f"{pad}- {item}")
    return out
