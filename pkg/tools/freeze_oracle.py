"""Regenerate tests/data/oracle_expected.json from the definitional oracle.

Run once; the tests compare against the frozen file so that a change in
the oracle itself shows up as a diff rather than silently moving targets.
"""

import json
import sys
from pathlib import Path

from tdobs.oracle import graph_classes, oracle_level, oracle_obstructions

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracle_expected.json"


def main() -> None:
    data = {
        "class_counts": {n: len(graph_classes(n)) for n in range(1, 8)},
        "levels": {
            k: {i: sorted(f.decode() for f in oracle_level(k, i)) for i in range(1, 8)}
            for k in range(1, 5)
        },
        "obstructions": {},
    }
    for k, n_limit in ((1, 6), (2, 6), (3, 7)):
        data["obstructions"][k] = {
            n: {kind: sorted(f.decode() for f in forms) for kind, forms in oracle_obstructions(k, n).items()}
            for n in range(k + 1, n_limit + 1)
        }
        print(f"k={k} done", file=sys.stderr)
    OUT.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
