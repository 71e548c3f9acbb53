"""
Run manifests written beside every CLI artifact.

A manifest records the subcommand, its resolved parameters, the numeric
configuration and content digests of inputs and outputs, enough to re-run
the command and compare outputs byte for byte.
"""

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

from jsonschema import ValidationError, validate

from .. import __version__
from ..config import get_default_config
from ..errors import ParseError
from ..network.loader import text_digest

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "spec" / "manifest.schema.json"


@lru_cache(maxsize=1)
def manifest_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text())


def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    subcommand: str
    params: Dict[str, Any]
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    config: Dict[str, Any] = field(default_factory=lambda: asdict(get_default_config()))
    tool_version: str = __version__
    started: str = field(default_factory=now)
    finished: str = ""
    metrics: Optional[Dict[str, Any]] = None
    manifest_version: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def write(self, artifact: Union[str, Path]) -> Path:
        """Write <artifact>.manifest.json and return its path."""
        self.finished = self.finished or now()
        doc = self.to_dict()
        validate(instance=doc, schema=manifest_schema())
        path = Path(f"{artifact}.manifest.json")
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return path


def file_digest(path: Union[str, Path]) -> str:
    return text_digest(Path(path).read_text())


def load_manifest(path: Union[str, Path]) -> RunManifest:
    """Read and schema-check a manifest.

    Raises:
        ParseError: E001 for malformed JSON, E004 for a schema violation
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("E001", f"invalid JSON: {e.msg}", loc=(e.lineno, e.colno)) from e
    try:
        validate(instance=doc, schema=manifest_schema())
    except ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ParseError("E004", f"manifest field {where}: {e.message}") from e
    return RunManifest(**doc)
