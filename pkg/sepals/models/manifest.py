from __future__ import annotations

from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from sepals import __version__

__all__ = ["RunManifest"]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every result file."""

    command: str
    params: dict[str, Any]
    seed: int | None = None
    version: str = __version__
    timestamp: str = field(default_factory=_now)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @staticmethod
    def path_for(output: Path) -> Path:
        return output.with_name(output.name + ".manifest.json")
