"""Emit fixtures/special_hauptmoduls.json: explicit hauptmodul expressions.

Each row: label, level, terms (list of {coeff, factors}), and where the
expression arises as a coset trace, the traced function f and the coset
representatives, so loaders can recompute the sum and cross-check.

The "c" labels are the mirror groups: conjugates by diag(-1, 1).
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from modcurve.exactalg import CyclotomicNumber as Cyc

OUT = Path(__file__).resolve().parent.parent / "src" / "modcurve" / "fixtures" / "special_hauptmoduls.json"


def z(n, k):
    return Cyc.zeta(n, k)


def one():
    return Cyc.of(1)


# level 12, index 24: two products of twelve functions each
H_12F = [
    (one(), [(3, 11), (3, 8), (6, 5), (6, 1), (3, 7), (3, 4),
             (1, 8), (1, 5), (5, 4), (5, 1), (2, 1), (2, 7)]),
    (z(24, 3), [(5, 2), (1, 3), (1, 6), (5, 11), (4, 3), (4, 7),
                (4, 9), (4, 1), (5, 3), (5, 6), (1, 7), (1, 10)]),
]

# level 10, index 30: three terms, each a ratio of four by four
H_10E = [
    (one(), [(1, 4), (5, 2), (5, 4), (3, 2),
             (1, 3, -1), (3, 9, -1), (1, 5, -1), (3, 5, -1)]),
    (z(10, 3), [(1, 7), (1, 1), (3, 1), (3, 3),
                (0, 1, -1), (2, 3, -1), (4, 1, -1), (0, 3, -1)]),
    (z(10, 2), [(2, 5), (4, 5), (2, 1), (4, 7),
                (1, 2, -1), (1, 6, -1), (3, 6, -1), (3, 8, -1)]),
]

ALT14 = z(14, 5) - z(14, 4) + z(14, 3) - z(14, 2) + z(14, 1) - 1

SPECIALS = [
    {
        "label": "12F0", "level": 12, "terms": H_12F,
        "f": None, "reps": None,
    },
    {
        "label": "10E0", "level": 10, "terms": H_10E,
        "f": None, "reps": None,
    },
    {
        "label": "14A0", "level": 14,
        "terms": [
            (one(), [(0, 2), (2, 8), (2, 12), (4, 0), (4, 6), (4, 12)]),
            (-z(14, 4), [(0, 4), (2, 2), (2, 4), (2, 6), (6, 2), (6, 8)]),
            (z(14, 1), [(0, 6), (4, 8), (4, 10), (6, 0), (6, 6), (6, 10)]),
            (ALT14, [(2, 0), (2, 10), (4, 2), (4, 4), (6, 4), (6, 12)]),
        ],
        "f": (ALT14, [(2, 0), (2, 10), (4, 2), (4, 4), (6, 4), (6, 12)]),
        "reps": [[1, 0, 0, 1], [0, 5, 11, 7], [0, 1, 13, 13], [0, 3, 9, 13]],
    },
    {
        "label": "14A0c", "level": 14,
        "terms": [
            (-one(), [(0, 2), (2, 6), (2, 2), (4, 0), (4, 8), (4, 2)]),
            (one(), [(0, 4), (2, 12), (2, 10), (2, 8), (6, 12), (6, 6)]),
            (z(14, 2), [(0, 6), (4, 6), (4, 4), (6, 0), (6, 8), (6, 4)]),
            (-z(14, 3), [(2, 0), (2, 4), (4, 12), (4, 10), (6, 10), (6, 2)]),
        ],
        # the traced function carries -zeta: +zeta gives exactly -h
        "f": (-z(14, 3), [(2, 0), (2, 4), (4, 12), (4, 10), (6, 10), (6, 2)]),
        "reps": [[1, 0, 0, 1], [0, -5, -11, 7], [0, -1, -13, 13],
                 [0, -3, -9, 13]],
    },
    {
        "label": "15A0", "level": 15,
        "terms": [
            (one(), [(0, 3), (0, 6), (3, 12), (6, 9)]),
            (-z(15, 2), [(3, 6), (3, 3), (6, 12), (6, 6)]),
            (z(15, 5) + 1, [(3, 9), (3, 0), (6, 0), (6, 3)]),
        ],
        "f": (one(), [(0, 3), (0, 6), (3, 12), (6, 9)]),
        "reps": [[1, 0, 0, 1], [0, 1, 14, 14], [1, 1, 14, 0]],
    },
    {
        "label": "15A0c", "level": 15,
        "terms": [
            (one(), [(0, 3), (0, 6), (3, 3), (6, 6)]),
            (z(15, 1), [(3, 9), (3, 12), (6, 9), (6, 3)]),
            (-z(15, 5), [(3, 6), (3, 0), (6, 0), (6, 12)]),
        ],
        "f": (one(), [(0, 3), (0, 6), (3, 3), (6, 6)]),
        "reps": [[1, 0, 0, 1], [0, -1, -14, 14], [1, -1, -14, 0]],
    },
    {
        "label": "21A0", "level": 21,
        "terms": [
            (-one(), [(0, 3), (3, 15), (6, 15), (6, 18), (6, 0), (6, 3),
                      (9, 18), (9, 9)]),
            (one(), [(0, 6), (3, 18), (3, 3), (3, 9), (3, 12), (6, 9),
                     (6, 12), (9, 0)]),
            (-z(21, 6), [(0, 9), (3, 0), (3, 6), (6, 6), (9, 12), (9, 15),
                         (9, 3), (9, 6)]),
        ],
        "f": (one(), [(0, 6), (3, 18), (3, 3), (3, 9), (3, 12), (6, 9),
                      (6, 12), (9, 0)]),
        "reps": [[1, 0, 0, 1], [0, 1, 20, 6], [0, 2, 10, 15]],
    },
    {
        "label": "21A0c", "level": 21,
        "terms": [
            (one(), [(0, 3), (3, 6), (6, 6), (6, 3), (6, 0), (6, 18),
                     (9, 3), (9, 12)]),
            (-z(21, 11) - z(21, 4), [(0, 6), (3, 3), (3, 18), (3, 12),
                                     (3, 9), (6, 12), (6, 9), (9, 0)]),
            (z(21, 11) - z(21, 9) + z(21, 8) - z(21, 6) + z(21, 4)
             - z(21, 3) + z(21, 1) - 1,
             [(0, 9), (3, 0), (3, 15), (6, 15), (9, 9), (9, 6), (9, 18),
              (9, 15)]),
        ],
        "f": (-z(21, 11) - z(21, 4), [(0, 6), (3, 3), (3, 18), (3, 12),
                                      (3, 9), (6, 12), (6, 9), (9, 0)]),
        "reps": [[1, 0, 0, 1], [0, -1, -20, 6], [0, -2, -10, 15]],
    },
]


def term_json(coeff, factors):
    out = []
    for fac in factors:
        if len(fac) == 2:
            k, l = fac
            m = 1
        else:
            k, l, m = fac
        out.append([k, l, m])
    return {"coeff": coeff.reduce().to_json(), "factors": out}


def main():
    rows = []
    for s in SPECIALS:
        row = {
            "label": s["label"],
            "level": s["level"],
            "terms": [term_json(c, fac) for c, fac in s["terms"]],
            "trace_f": term_json(*s["f"]) if s["f"] else None,
            "trace_reps": s["reps"],
        }
        rows.append(row)
    OUT.write_text(json.dumps(rows, indent=1) + "\n")
    print(f"wrote {len(rows)} expressions to {OUT}")


if __name__ == "__main__":
    main()
