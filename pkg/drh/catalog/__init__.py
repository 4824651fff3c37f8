import re
from collections.abc import Callable
from pathlib import Path

from drh import UnknownCohFT
from drh.catalog.builtins import ALIASES, BUILTINS, i2
from drh.catalog.cohft import CohFTSpec
from drh.catalog.manifest import load_manifest
from drh.config import default_caps
from drh.models.caps import ComputationCaps

Builder = Callable[[ComputationCaps], CohFTSpec]

_I2 = re.compile(r"^i2-(\d+)$")


class CohFTCatalog(dict[str, Builder]):
    def __init__(self, builders: dict[str, Builder], aliases: dict[str, str]):
        super().__init__(builders)
        self.aliases = dict(aliases)

    def resolve(self, name: str) -> str:
        return self.aliases.get(name, name)

    def get_by_name(self, name: str, caps: ComputationCaps | None = None) -> CohFTSpec:
        caps = caps or default_caps()
        key = self.resolve(name)
        if key in self:
            return self[key](caps)
        match = _I2.match(key)
        if match:
            return i2(int(match.group(1)), caps)
        raise UnknownCohFT(f"{name=} não existe no catálogo.")

    def names(self) -> list[str]:
        return sorted(self) + ["i2-<k>"]


CATALOG = CohFTCatalog(BUILTINS, ALIASES)


def get_cohft(name_or_path: str, caps: ComputationCaps | None = None) -> CohFTSpec:
    """Teoria embutida pelo nome ou manifesto JSON pelo caminho."""
    path = Path(name_or_path)
    if path.suffix == ".json" or path.is_file():
        return load_manifest(path, caps or default_caps())
    return CATALOG.get_by_name(name_or_path, caps)
