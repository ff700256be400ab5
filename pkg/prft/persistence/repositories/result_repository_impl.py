import csv
import math
import os
from typing import List, Optional, Sequence

import msgspec
import numpy as np

from prft.repositories.exceptions import FileAccessError, InputNotFoundError
from prft.repositories.result_repository import ResultRepository
from prft.schemas.scenario import RunManifest


def format_cell(value) -> str:
    """Shortest round-trip text for numbers, plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


def _encode_hook(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise NotImplementedError(f"cannot encode {type(value).__name__}")


def _finite(value):
    """Non-finite floats become strings; JSON has no inf / nan."""
    if isinstance(value, dict):
        return {str(key): _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    if isinstance(value, np.ndarray):
        return _finite(value.tolist())
    if isinstance(value, (float, np.floating)) and not math.isfinite(float(value)):
        return repr(float(value))
    return value


def encode_json(document) -> bytes:
    raw = msgspec.json.encode(_finite(document), enc_hook=_encode_hook, order="sorted")
    return msgspec.json.format(raw, indent=2) + b"\n"


class ResultRepositoryImpl(ResultRepository):
    """CSV tables and JSON documents inside the bound run directory."""

    def __init__(self):
        self.directory: Optional[str] = None
        self._written: List[str] = []

    def bind(self, directory: str) -> None:
        self.directory = directory
        self._written = []

    def _target(self, name: str) -> str:
        if self.directory is None:
            raise FileAccessError("Result repository is not bound to a run directory")
        return os.path.join(self.directory, name)

    def _record(self, name: str) -> str:
        if name not in self._written:
            self._written.append(name)
        return name

    def write_table(self, name: str, header: Sequence[str], rows) -> str:
        try:
            with open(self._target(name), "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(list(header))
                for row in rows:
                    writer.writerow([format_cell(cell) for cell in row])
        except OSError as e:
            raise FileAccessError(f"Failed to write {name}: {str(e)}", path=self._target(name))
        return self._record(name)

    def _write_json(self, name: str, document) -> str:
        try:
            with open(self._target(name), "wb") as handle:
                handle.write(encode_json(document))
        except OSError as e:
            raise FileAccessError(f"Failed to write {name}: {str(e)}", path=self._target(name))
        return self._record(name)

    def write_summary(self, summary: dict) -> str:
        return self._write_json("summary.json", summary)

    def write_manifest(self, manifest: RunManifest) -> str:
        return self._write_json("manifest.json", msgspec.structs.asdict(manifest))

    def read_table(self, path: str) -> dict:
        if not os.path.isfile(path):
            raise InputNotFoundError(f"Table '{path}' not found", path=path)
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, [])
            rows = [[_parse_cell(cell) for cell in row] for row in reader]
        return {"header": header, "rows": rows}

    def read_summary(self, path: str) -> dict:
        if not os.path.isfile(path):
            raise InputNotFoundError(f"Document '{path}' not found", path=path)
        with open(path, "rb") as handle:
            try:
                return msgspec.json.decode(handle.read())
            except msgspec.DecodeError as e:
                raise FileAccessError(f"Document '{path}' does not parse: {str(e)}", path=path)

    def written(self) -> List[str]:
        return list(self._written)
