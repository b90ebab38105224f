"""On-disk layout for levels, obstruction sets and the run manifest.

    {out}/k{K}/level_{i}.g6           sorted canonical graph6 lines
    {out}/k{K}/level_{i}.meta         JSON: k, i, count, sha256, canon_cutoff
    {out}/k{K}/obs_{kind}_n{N}.g6     kind in induced|subgraph|minor
    {out}/k{K}/obs_summary.tsv        k, n, |induced|, |subgraph|, |minor|
    {out}/k{K}/manifest.json          digests and completion times per stage

Every file is written to a temporary name and renamed into place, so an
interrupted run never leaves a truncated stage behind.
"""

from __future__ import annotations

import json
import os
import time
from pathlib import Path
from typing import Iterable, Iterator

from . import __version__
from .enumeration import IntegrityError, LevelSet, digest_lines

OBS_KINDS = ("induced", "subgraph", "minor")


def run_dir(out: Path, k: int) -> Path:
    return Path(out) / f"k{k}"


def level_path(out: Path, k: int, i: int) -> Path:
    return run_dir(out, k) / f"level_{i}.g6"


def meta_path(out: Path, k: int, i: int) -> Path:
    return run_dir(out, k) / f"level_{i}.meta"


def obs_path(out: Path, k: int, kind: str, n: int) -> Path:
    return run_dir(out, k) / f"obs_{kind}_n{n}.g6"


def summary_path(out: Path, k: int) -> Path:
    return run_dir(out, k) / "obs_summary.tsv"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_lines(path: Path, lines: Iterable[bytes]) -> str:
    lines = list(lines)
    _atomic_write(path, b"".join(line + b"\n" for line in lines))
    return digest_lines(lines)


def read_lines(path: Path) -> list[bytes]:
    with open(path, "rb") as fh:
        return [line.rstrip(b"\r\n") for line in fh if line.strip()]


def stream_lines(path: Path) -> Iterator[bytes]:
    with open(path, "rb") as fh:
        for line in fh:
            line = line.rstrip(b"\r\n")
            if line:
                yield line


def file_digest(path: Path) -> str:
    return digest_lines(stream_lines(path))


# levels ----------------------------------------------------------------------


def write_level(out: Path, level: LevelSet, cutoff: int) -> str:
    digest = write_lines(level_path(out, level.k, level.i), level.members)
    meta = {
        "k": level.k,
        "i": level.i,
        "count": len(level.members),
        "sha256": digest,
        "canon_cutoff": cutoff,
    }
    _atomic_write(meta_path(out, level.k, level.i), (json.dumps(meta, sort_keys=True) + "\n").encode())
    return digest


def level_meta(out: Path, k: int, i: int) -> dict | None:
    """Sidecar metadata, or ``None`` if the level was never completed."""
    path = meta_path(out, k, i)
    if not path.exists() or not level_path(out, k, i).exists():
        return None
    return json.loads(path.read_text())


def check_level(out: Path, k: int, i: int, cutoff: int) -> dict | None:
    """Verify a completed level against its sidecar; ``None`` if absent.

    Raises ``IntegrityError`` naming the stage on any mismatch.
    """
    meta = level_meta(out, k, i)
    if meta is None:
        return None
    stage = f"level k={k} i={i} ({level_path(out, k, i)})"
    if meta.get("canon_cutoff") != cutoff:
        raise IntegrityError(f"{stage}: built with canon cutoff {meta.get('canon_cutoff')}, run uses {cutoff}")
    if file_digest(level_path(out, k, i)) != meta["sha256"]:
        raise IntegrityError(f"{stage}: content digest does not match its .meta sidecar")
    return meta


def read_level(out: Path, k: int, i: int, cutoff: int) -> LevelSet:
    meta = check_level(out, k, i, cutoff)
    if meta is None:
        raise FileNotFoundError(f"level k={k} i={i} has not been computed")
    level = LevelSet(k, i, read_lines(level_path(out, k, i)), meta["sha256"])
    level.verify()
    return level


# obstructions ----------------------------------------------------------------


def write_summary(out: Path, k: int, rows: list[tuple[int, int, int, int]]) -> None:
    lines = ["k\tn\tinduced\tsubgraph\tminor"]
    for n, a, b, c in rows:
        lines.append(f"{k}\t{n}\t{a}\t{b}\t{c}")
    totals = [sum(r[j] for r in rows) for j in (1, 2, 3)]
    lines.append(f"{k}\ttotal\t{totals[0]}\t{totals[1]}\t{totals[2]}")
    _atomic_write(summary_path(out, k), ("\n".join(lines) + "\n").encode())


def read_summary(out: Path, k: int) -> list[dict[str, str]]:
    text = summary_path(out, k).read_text().splitlines()
    header = text[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in text[1:]]


# manifest ---------------------------------------------------------------------


class Manifest:
    """Digest of every completed stage; the source of truth for resume."""

    def __init__(self, out: Path, k: int) -> None:
        self.path = run_dir(out, k) / "manifest.json"
        if self.path.exists():
            self.data = json.loads(self.path.read_text())
        else:
            self.data = {"k": k, "levels": {}, "obstructions": {}}
        self.data["tool_version"] = __version__

    def record_level(self, i: int, count: int, digest: str) -> None:
        self.data["levels"][str(i)] = {"count": count, "sha256": digest, "completed_at": _now()}
        self.save()

    def record_obstructions(self, n: int, digests: dict[str, str], counts: dict[str, int]) -> None:
        self.data["obstructions"][str(n)] = {
            "sha256": digests,
            "counts": counts,
            "completed_at": _now(),
        }
        self.save()

    def obstruction_entry(self, n: int) -> dict | None:
        return self.data["obstructions"].get(str(n))

    def save(self) -> None:
        _atomic_write(self.path, (json.dumps(self.data, indent=2, sort_keys=True) + "\n").encode())


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
