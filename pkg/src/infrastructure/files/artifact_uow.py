import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

from pydantic import ValidationError

from src.domain.exceptions import InvalidInput
from src.domain.schemas import (
    DEFAULT_TOLERANCES,
    ClassPayload,
    CongruenceClass,
    Tolerances,
    Triangle,
    TrianglePayload,
)
from src.domain.utils import dumps_json, format_float

logger = logging.getLogger(__name__)


class ArtifactUnitOfWork:
    """
    Reads input payloads and writes result artifacts (JSON reports, CSV tables).

    Output goes to ``out`` when a path is given, otherwise to the text stream supplied by the
    caller (stdout for the CLI). Floats are written with 17 significant digits and CSV rows
    end in LF so repeated runs give byte-identical files.
    """

    def __init__(self, out: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
        """
        Args:
            out: Destination file. Parent directories are created on first write.
            stream: Fallback text stream when ``out`` is None.
        """
        self.out = Path(out) if out else None
        self.stream = stream

    # ---- Reading ---- #

    @staticmethod
    def read_json(path: str) -> Any:
        """
        Load a JSON document.

        Raises:
            InvalidInput: If the file is missing, empty or not valid JSON.
        """
        try:
            content = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise InvalidInput(f"Input file not found: {path}") from e
        if content.strip() == "":
            raise InvalidInput(f"Empty input file: {path}")
        try:
            return json.loads(content)
        except json.JSONDecodeError as e:
            raise InvalidInput(
                f"Invalid JSON in input file '{path}' at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from e

    def read_triangle(self, path: str, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Triangle:
        """Parse ``{"vertices": [[x0, x1, x2], ...]}`` into a validated triangle."""
        data = self.read_json(path)
        try:
            payload = TrianglePayload.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]["msg"]
            raise InvalidInput(f"Triangle file '{path}' is malformed: {first}") from e
        return payload.to_triangle(tolerances)

    def read_class(self, path: str) -> CongruenceClass:
        """Parse ``{"d": [d0, d1, d2]}`` into a congruence class."""
        data = self.read_json(path)
        try:
            payload = ClassPayload.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]["msg"]
            raise InvalidInput(f"Class file '{path}' is malformed: {first}") from e
        return payload.to_class()

    # ---- Writing ---- #

    def _emit(self, text: str) -> None:
        if self.out is None:
            if self.stream is None:
                raise InvalidInput("no output path or stream configured")
            self.stream.write(text)
            return
        self.out.parent.mkdir(parents=True, exist_ok=True)
        with open(self.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("artifact written", extra={"path": str(self.out), "chars": len(text)})

    def write_json(self, value: Any) -> None:
        self._emit(dumps_json(value))

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        """Write a header row and data rows; floats formatted, ``None`` as an empty field."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([self._cell(v) for v in row])
        self._emit(buffer.getvalue())

    @staticmethod
    def _cell(value: Any) -> str:
        if value is None:
            return ""
        if isinstance(value, float):
            return format_float(value)
        return str(value)
