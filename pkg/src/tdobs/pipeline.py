"""Stage orchestration: levels, obstruction passes, resume and oracle checks."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import storage
from .canon import DEFAULT_CUTOFF, CanonicalForm, canonical_form
from .enumeration import IntegrityError, LevelSet, initial_level, next_level_from
from .graph import MAX_VERTICES, from_graph6
from .obstruction import Mode, induced_obstructions_from, minor_filter, subgraph_filter
from .oracle import ORACLE_MAX_N, oracle_level, oracle_obstructions

log = logging.getLogger(__name__)


class UsageError(ValueError):
    """Bad configuration or stages requested out of order."""


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TDOBS_WORKERS", "1")))
    except ValueError:
        raise UsageError("TDOBS_WORKERS must be an integer") from None


@dataclass
class RunConfig:
    k: int
    n_max: int
    out_dir: Path
    mode: Mode = Mode.LOOKUP
    workers: int = field(default_factory=default_workers)
    canon_cutoff: int = DEFAULT_CUTOFF
    resume: bool = False

    def __post_init__(self) -> None:
        self.out_dir = Path(self.out_dir)
        self.mode = Mode(self.mode)
        if self.k < 1:
            raise UsageError("k must be at least 1")
        if not self.k + 1 <= self.n_max <= MAX_VERTICES:
            raise UsageError(f"n_max must lie in [k+1, {MAX_VERTICES}]")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")


def run_levels(cfg: RunConfig) -> storage.Manifest:
    """Compute and persist G_k^(i) for i = 1 .. n_max - 1."""
    k, out = cfg.k, cfg.out_dir
    manifest = storage.Manifest(out, k)
    prev: LevelSet | None = None
    for i in range(1, cfg.n_max):
        if cfg.resume:
            meta = storage.check_level(out, k, i, cfg.canon_cutoff)
            if meta is not None:
                log.info("level %d: complete (%d graphs), skipping", i, meta["count"])
                prev = None
                if str(i) not in manifest.data["levels"]:
                    manifest.record_level(i, meta["count"], meta["sha256"])
                continue
        if i == 1:
            level = initial_level(k)
        else:
            parents = prev.members if prev is not None else storage.stream_lines(storage.level_path(out, k, i - 1))
            if prev is None:
                # resumed from disk: make sure the parent level is intact first
                storage.check_level(out, k, i - 1, cfg.canon_cutoff)
            level = next_level_from(parents, k, i, cfg.workers, cfg.canon_cutoff)
        digest = storage.write_level(out, level, cfg.canon_cutoff)
        manifest.record_level(i, len(level), digest)
        log.info("level %d: %d graphs", i, len(level))
        prev = level
    return manifest


def _require_level(cfg: RunConfig, i: int) -> dict:
    meta = storage.check_level(cfg.out_dir, cfg.k, i, cfg.canon_cutoff)
    if meta is None:
        raise UsageError(
            f"level k={cfg.k} i={i} missing in {cfg.out_dir}; run "
            f"`tdobs levels --k {cfg.k} --n-max {cfg.n_max} --out {cfg.out_dir}` first"
        )
    return meta


def _load_obstructions(cfg: RunConfig, n: int, entry: dict) -> dict[str, list[CanonicalForm]] | None:
    sets = {}
    for kind in storage.OBS_KINDS:
        path = storage.obs_path(cfg.out_dir, cfg.k, kind, n)
        if not path.exists():
            return None
        if storage.file_digest(path) != entry["sha256"][kind]:
            raise IntegrityError(f"obstructions k={cfg.k} n={n} ({path}): digest mismatch")
        sets[kind] = storage.read_lines(path)
    return sets


def run_obstructions(cfg: RunConfig) -> storage.Manifest:
    """Compute all three obstruction sets for n = k+1 .. n_max and the summary table."""
    k, out = cfg.k, cfg.out_dir
    for i in range(1, cfg.n_max):
        _require_level(cfg, i)
    manifest = storage.Manifest(out, k)
    rows = []
    induced_prev: list[CanonicalForm] = []
    for n in range(k + 1, cfg.n_max + 1):
        sets = None
        entry = manifest.obstruction_entry(n)
        if cfg.resume and entry is not None:
            sets = _load_obstructions(cfg, n, entry)
        if sets is None:
            sets = _obstructions_for(cfg, n, induced_prev)
            digests = {
                kind: storage.write_lines(storage.obs_path(out, k, kind, n), sets[kind])
                for kind in storage.OBS_KINDS
            }
            manifest.record_obstructions(n, digests, {kind: len(sets[kind]) for kind in storage.OBS_KINDS})
        else:
            log.info("obstructions n=%d: complete, skipping", n)
        rows.append((n, len(sets["induced"]), len(sets["subgraph"]), len(sets["minor"])))
        log.info("obstructions n=%d: %d / %d / %d", *rows[-1])
        induced_prev = sets["induced"]
    storage.write_summary(out, k, rows)
    return manifest


def _obstructions_for(cfg: RunConfig, n: int, induced_prev: list[CanonicalForm]) -> dict[str, list[CanonicalForm]]:
    k, out = cfg.k, cfg.out_dir
    path = storage.level_path(out, k, n - 1)
    meta = _require_level(cfg, n - 1)
    if cfg.mode is Mode.LOOKUP:
        level = storage.read_level(out, k, n - 1, cfg.canon_cutoff)
        induced = induced_obstructions_from(
            level.members, k, Mode.LOOKUP, level.members, cfg.workers, cfg.canon_cutoff
        )
    else:
        # stream parents; nothing from the level is retained
        induced = induced_obstructions_from(
            storage.stream_lines(path), k, Mode.RECOMPUTE, None, cfg.workers, cfg.canon_cutoff
        )
        if storage.file_digest(path) != meta["sha256"]:
            raise IntegrityError(f"level k={k} i={n - 1} changed while being read")
    subgraph = subgraph_filter(induced, cfg.canon_cutoff)
    minor = minor_filter(subgraph, induced_prev, cfg.canon_cutoff)
    return {"induced": induced, "subgraph": subgraph, "minor": minor}


def read_obstructions(out: Path, k: int, kind: str, n_values: list[int]) -> list[CanonicalForm]:
    forms: list[CanonicalForm] = []
    for n in n_values:
        forms.extend(storage.read_lines(storage.obs_path(out, k, kind, n)))
    return forms


# verification -------------------------------------------------------------------


def oracle_check(cfg: RunConfig, scope: str, n_limit: int, exhaustive: bool = False) -> list[str]:
    """Diff stored pipeline outputs against the definitional oracle; one line per discrepancy.

    With ``exhaustive`` the obstruction oracle tests every proper subgraph
    and minor instead of the one-step reductions.
    """
    if n_limit > ORACLE_MAX_N:
        raise UsageError(f"oracle supports n_limit <= {ORACLE_MAX_N}")
    k, out = cfg.k, cfg.out_dir
    problems: list[str] = []
    if scope == "levels":
        for i in range(1, n_limit + 1):
            if storage.level_meta(out, k, i) is None:
                raise UsageError(f"level k={k} i={i} missing in {out}")
            got = set(storage.read_level(out, k, i, cfg.canon_cutoff).members)
            problems += _diff(f"level i={i}", got, oracle_level(k, i, cfg.canon_cutoff))
    elif scope == "obstructions":
        manifest = storage.Manifest(out, k)
        for n in range(k + 1, n_limit + 1):
            if manifest.obstruction_entry(n) is None:
                raise UsageError(f"obstructions k={k} n={n} missing in {out}")
            want = oracle_obstructions(k, n, cfg.canon_cutoff, exhaustive)
            for kind in storage.OBS_KINDS:
                got = set(storage.read_lines(storage.obs_path(out, k, kind, n)))
                problems += _diff(f"{kind} n={n}", got, want[kind])
    else:
        raise UsageError(f"unknown scope {scope!r}")
    return problems


def _diff(stage: str, got: set[bytes], want: set[bytes]) -> list[str]:
    lines = [f"{stage}: missing {f.decode()}" for f in sorted(want - got)]
    lines += [f"{stage}: unexpected {f.decode()}" for f in sorted(got - want)]
    return lines


def compare_with_prior(
    found: list[CanonicalForm], prior: list[bytes], cutoff: int = DEFAULT_CUTOFF
) -> dict[str, list[CanonicalForm]]:
    """Split a computed obstruction list against a previously published one.

    ``prior`` may use any labeling; it is canonized before comparing.
    """
    found_set = set(found)
    prior_set = {canonical_form(from_graph6(line), cutoff) for line in prior}
    return {
        "new": sorted(found_set - prior_set),
        "not_reproduced": sorted(prior_set - found_set),
    }
