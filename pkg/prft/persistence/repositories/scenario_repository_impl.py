import logging
from importlib import resources
from pathlib import Path
from typing import List

import msgspec
import tomli

from prft.repositories.exceptions import FileAccessError, InputNotFoundError
from prft.repositories.scenario_repository import ScenarioDocument, ScenarioRepository

logger = logging.getLogger(__name__)

BUNDLE_PACKAGE = "prft.scenarios"


class ScenarioRepositoryImpl(ScenarioRepository):
    """Bundled JSON scenarios plus arbitrary JSON / TOML files on disk."""

    def __init__(self, package: str = BUNDLE_PACKAGE):
        self.package = package

    def _bundle(self):
        return resources.files(self.package)

    def list_names(self) -> List[str]:
        return sorted(
            entry.name[: -len(".json")]
            for entry in self._bundle().iterdir()
            if entry.name.endswith(".json")
        )

    def get(self, key: str) -> ScenarioDocument:
        path = Path(key)
        if path.suffix in (".json", ".toml") or path.exists():
            if not path.is_file():
                raise InputNotFoundError(f"Scenario file '{key}' not found", path=str(path))
            return ScenarioDocument(path.stem, self._parse(path.read_bytes(), path.suffix, key), str(path))

        entry = self._bundle().joinpath(f"{key}.json")
        if not entry.is_file():
            raise InputNotFoundError(
                f"No scenario file or bundled scenario named '{key}' "
                f"(bundled: {', '.join(self.list_names())})"
            )
        logger.debug("loading bundled scenario %s", key)
        return ScenarioDocument(key, self._parse(entry.read_bytes(), ".json", key), f"bundled:{key}")

    def describe(self, name: str) -> str:
        return str(self.get(name).data.get("description", ""))

    @staticmethod
    def _parse(payload: bytes, suffix: str, key: str) -> dict:
        try:
            if suffix == ".toml":
                return tomli.loads(payload.decode("utf-8"))
            return msgspec.json.decode(payload)
        except (msgspec.DecodeError, UnicodeDecodeError, tomli.TOMLDecodeError) as e:
            raise FileAccessError(f"Scenario '{key}' does not parse: {str(e)}", path=key)
