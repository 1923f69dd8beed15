"""Run manifests: a JSON record written for every batch command.

A manifest pins everything needed to reproduce or audit a run — the
command, tool version, seed, a hash of the effective configuration,
input/output paths, and all counters. Wall time is the only field
allowed to differ between two runs of the same command.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import FormatError, IOFailure

__all__ = ["RunManifest", "manifest_path"]


def manifest_path(output_path) -> str:
    return str(output_path) + ".manifest.json"


@dataclass
class RunManifest:
    command: str
    version: str
    seed: int | None = None
    config_hash: str | None = None
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_json_obj(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "counts": self.counts,
            "wall_time_s": self.wall_time_s,
        }

    def write(self, path) -> None:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                json.dump(self.to_json_obj(), f, ensure_ascii=False, indent=2, sort_keys=True)
                f.write("\n")
        except OSError as e:
            raise IOFailure(f"cannot write manifest {path}: {e}") from e

    @classmethod
    def read(cls, path) -> "RunManifest":
        try:
            with open(path, encoding="utf-8") as f:
                obj = json.load(f)
        except OSError as e:
            raise IOFailure(f"cannot read manifest {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise FormatError(f"bad manifest JSON: {e.msg}", str(path), e.lineno) from e
        return cls(
            command=obj["command"],
            version=obj["version"],
            seed=obj.get("seed"),
            config_hash=obj.get("config_hash"),
            inputs=obj.get("inputs", []),
            outputs=obj.get("outputs", []),
            counts=obj.get("counts", {}),
            wall_time_s=obj.get("wall_time_s", 0.0),
        )

    def same_run(self, other: "RunManifest") -> bool:
        """Equality modulo wall time."""
        a = self.to_json_obj()
        b = other.to_json_obj()
        a.pop("wall_time_s")
        b.pop("wall_time_s")
        return a == b
