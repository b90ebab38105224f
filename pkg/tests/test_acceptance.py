"""End-to-end acceptance criteria.

Each test prints one ``criterion N: PASS|FAIL`` line (also repeated in the
terminal summary).  The k=4 runs take several minutes on one core.
"""

import os
import random
import shutil
import signal
import subprocess
import sys
import time
from itertools import permutations
from pathlib import Path

import pytest

from conftest import ACCEPTANCE, random_graph, random_perm
from tdobs import storage
from tdobs.canon import brute_force_form, canonical_form
from tdobs.enumeration import levels
from tdobs.graph import MAX_VERTICES, Graph, from_graph6, is_connected, to_graph6
from tdobs.obstruction import membership_certificate
from tdobs.oracle import graph_classes, oracle_level, td_by_definition
from tdobs.pipeline import compare_with_prior
from tdobs.treedepth import TreedepthSolver, verify_forest

PRIOR_K3 = Path(os.environ.get("TDOBS_PRIOR_K3", Path(__file__).parent / "data" / "prior_k3_induced.g6"))


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE.append(line)
    print(line)


def tdobs(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "tdobs.cli", *args], capture_output=True, text=True)


def full_run(out: Path, k: int, n_max: int, *extra: str, mode: str = "lookup") -> None:
    for stage in ("levels", "obstructions"):
        args = [stage, "--k", str(k), "--n-max", str(n_max), "--out", str(out), *extra]
        if stage == "obstructions":
            args += ["--mode", mode]
        r = tdobs(*args)
        assert r.returncode == 0, r.stderr


def interrupted(out: Path, stage: str, k: int, n_max: int, trigger: Path, *extra: str) -> int:
    """Start a stage, send SIGINT once ``trigger`` exists, return the exit code."""
    cmd = [sys.executable, "-m", "tdobs.cli", stage, "--k", str(k), "--n-max", str(n_max), "--out", str(out), *extra]
    proc = subprocess.Popen(cmd, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)
    while proc.poll() is None and not trigger.exists():
        time.sleep(0.005)
    proc.send_signal(signal.SIGINT)
    proc.wait()
    return proc.returncode


def interrupt_resume_run(out: Path, k: int, n_max: int, level_trigger: int, obs_trigger: int, *extra: str) -> list[int]:
    run = storage.run_dir(out, k)
    codes = [interrupted(out, "levels", k, n_max, run / f"level_{level_trigger}.meta", *extra)]
    full_levels = ["levels", "--k", str(k), "--n-max", str(n_max), "--out", str(out), "--resume", *extra]
    assert tdobs(*full_levels).returncode == 0
    codes.append(interrupted(out, "obstructions", k, n_max, run / f"obs_minor_n{obs_trigger}.g6", *extra))
    r = tdobs("obstructions", "--k", str(k), "--n-max", str(n_max), "--out", str(out), "--resume", *extra)
    assert r.returncode == 0, r.stderr
    return codes


def outputs(out: Path, k: int) -> dict[str, bytes]:
    run = storage.run_dir(out, k)
    return {p.name: p.read_bytes() for p in sorted(run.iterdir()) if p.suffix in (".g6", ".tsv", ".meta")}


def totals(out: Path, k: int) -> dict[str, str]:
    return storage.read_summary(out, k)[-1]


def forms(out: Path, k: int, kind: str, n_values) -> list[bytes]:
    return [f for n in n_values for f in storage.read_lines(storage.obs_path(out, k, kind, n))]


# shared runs ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def k3(tmp_path_factory):
    base = tmp_path_factory.mktemp("k3")
    full_run(base / "w1", 3, 10, "--workers", "1")
    full_run(base / "w4", 3, 10, "--workers", "4")
    codes = interrupt_resume_run(base / "resumed", 3, 10, 5, 8, "--workers", "1")
    return base, codes


@pytest.fixture(scope="module")
def k4(tmp_path_factory):
    base = tmp_path_factory.mktemp("k4")
    full_run(base / "lookup", 4, 10, "--workers", "1")
    # recompute mode on a copy of the same levels
    shutil.copytree(base / "lookup", base / "recompute")
    for p in storage.run_dir(base / "recompute", 4).glob("obs_*"):
        p.unlink()
    r = tdobs("obstructions", "--k", "4", "--n-max", "10", "--out", str(base / "recompute"), "--mode", "recompute")
    assert r.returncode == 0, r.stderr
    codes = interrupt_resume_run(base / "w4_resumed", 4, 10, 8, 9, "--workers", "4")
    return base, codes


# criteria -------------------------------------------------------------------------


def test_criterion_1_k3_reproduction(k3):
    base, _ = k3
    row = totals(base / "w1", 3)
    got = (int(row["induced"]), int(row["subgraph"]), int(row["minor"]))
    tail = [r for r in storage.read_summary(base / "w1", 3) if r["n"] in ("9", "10")]
    zeros = all(r["induced"] == r["subgraph"] == r["minor"] == "0" for r in tail) and len(tail) == 2
    ok = got == (30, 14, 12) and zeros
    report(1, ok, f"k=3 totals induced/subgraph/minor = {got[0]}/{got[1]}/{got[2]} (want 30/14/12), n=9,10 empty: {zeros}")
    assert ok


def test_criterion_2_k3_correction(k3):
    base, _ = k3
    found = forms(base / "w1", 3, "induced", range(4, 11))
    if not PRIOR_K3.exists():
        detail = (
            f"computed {len(found)} induced obstructions (29 + 1 expected); the 29-graph prior list "
            f"is not part of the inputs, so the new member cannot be singled out. Supply it as graph6 "
            f"lines at {PRIOR_K3} or $TDOBS_PRIOR_K3 and run `tdobs compare`. Computed set: "
            + " ".join(f.decode() for f in found)
        )
        report(2, False, detail)
        pytest.fail(detail)
    diff = compare_with_prior(found, storage.read_lines(PRIOR_K3))
    ok = len(found) == 30 and len(diff["new"]) == 1 and not diff["not_reproduced"]
    new = " ".join(f.decode() for f in diff["new"])
    report(2, ok, f"new relative to prior list: {new}; not reproduced: {len(diff['not_reproduced'])}")
    assert ok


def test_criterion_3_small_k_oracle(tmp_path):
    problems = []
    for k in (1, 2):
        out = str(tmp_path)
        assert tdobs("levels", "--k", str(k), "--n-max", "7", "--out", out).returncode == 0
        assert tdobs("obstructions", "--k", str(k), "--n-max", "6", "--out", out).returncode == 0
        for scope in ("levels", "obstructions"):
            r = tdobs("oracle", "--scope", scope, "--k", str(k), "--n-limit", "6", "--out", out, "--exhaustive")
            assert r.returncode == 0, r.stderr
            problems += r.stdout.splitlines()[:-1]
    ok = not problems
    report(3, ok, f"k in {{1,2}}, n <= 6: {len(problems)} discrepancies against the exhaustive definitional oracle")
    assert ok, problems


def test_criterion_4_enumeration_completeness():
    bad = []
    for k in range(1, 5):
        for level in levels(k, 7):
            if set(level.members) != oracle_level(k, level.i):
                bad.append((k, level.i))
    ok = not bad
    report(4, ok, f"k <= 4, i <= 7: level sets equal the labeled-graph oracle (mismatches: {bad})")
    assert ok


def test_criterion_5_solver():
    solver = TreedepthSolver()
    checked = wrong = bad_cert = 0
    for n in range(1, 8):
        for g in graph_classes(n):
            if not is_connected(g):
                continue
            res = solver.treedepth(g)
            checked += 1
            wrong += res.value != td_by_definition(g, memo=False)
            bad_cert += not (verify_forest(g, res.certificate) and res.certificate.height() == res.value)
    ok = wrong == 0 and bad_cert == 0
    report(5, ok, f"{checked} connected graphs n <= 7: {wrong} value mismatches, {bad_cert} bad certificates")
    assert ok


def test_criterion_6_canonicalization():
    # every labeled graph on n <= 6 vertices, reached as the orbit of a class representative
    labeled = mismatches = 0
    for n in range(1, 7):
        for rep in graph_classes(n):
            orbit = {rep.relabel(p) for p in permutations(range(n))}
            want = min(to_graph6(h).encode() for h in orbit)
            assert want == brute_force_form(rep)
            labeled += len(orbit)
            mismatches += sum(canonical_form(h) != want for h in orbit)
    covered = labeled == sum(2 ** (n * (n - 1) // 2) for n in range(1, 7))
    rng = random.Random(2024)
    variant = 0
    for _ in range(10_000):
        n = rng.randint(1, MAX_VERTICES)
        g = random_graph(rng, n)
        variant += canonical_form(g.relabel(random_perm(rng, n))) != canonical_form(g)
    ok = covered and mismatches == 0 and variant == 0
    report(
        6,
        ok,
        f"{labeled} labeled graphs n <= 6 (all: {covered}), {mismatches} lexmin mismatches; "
        f"10000 random (G, pi) pairs n <= 18, {variant} invariance failures",
    )
    assert ok


def test_criterion_7_k4_partial(k4):
    base, _ = k4
    lookup, recompute = base / "lookup", base / "recompute"
    chain = all(
        set(forms(lookup, 4, "minor", [n])) <= set(forms(lookup, 4, "subgraph", [n])) <= set(forms(lookup, 4, "induced", [n]))
        for n in range(5, 11)
    )
    induced = forms(lookup, 4, "induced", range(5, 11))
    solver = TreedepthSolver(memo_cap=0)
    certified = sum(membership_certificate(f, 4, solver) for f in induced)
    same = {k: v for k, v in outputs(lookup, 4).items() if k.startswith("obs_")} == {
        k: v for k, v in outputs(recompute, 4).items() if k.startswith("obs_")
    }
    row = totals(lookup, 4)
    ok = chain and certified == len(induced) and same
    report(
        7,
        ok,
        f"k=4 n <= 10 totals {row['induced']}/{row['subgraph']}/{row['minor']}; chain holds: {chain}; "
        f"{certified}/{len(induced)} induced members certified; lookup == recompute bytes: {same}",
    )
    assert ok


def test_criterion_8_determinism(k3, k4):
    base3, codes3 = k3
    base4, codes4 = k4
    ref3 = outputs(base3 / "w1", 3)
    ref4 = outputs(base4 / "lookup", 4)
    w4 = outputs(base3 / "w4", 3) == ref3
    res3 = outputs(base3 / "resumed", 3) == ref3
    res4 = outputs(base4 / "w4_resumed", 4) == ref4
    interrupted_runs = sum(c == 130 for c in codes3 + codes4)
    ok = w4 and res3 and res4 and interrupted_runs == 4
    report(
        8,
        ok,
        f"k=3 workers 1 vs 4 identical: {w4}; k=3 interrupt/resume identical: {res3}; "
        f"k=4 workers 4 with interrupt/resume identical to workers 1: {res4}; "
        f"{interrupted_runs}/4 stage runs actually interrupted (exit codes {codes3 + codes4})",
    )
    assert ok
