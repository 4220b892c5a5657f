"""Enumerate genus-0 congruence subgroup classes (containing -I) per level.

Subgroups of SL2(Z/N) containing -I correspond to subgroups of the quotient
PSL2(Z/N); those are enumerated by breadth-first closure over a multiplication
table, filtered to exact level N and genus 0, and grouped into conjugacy
classes under <SL2(Z/N), diag(-1,1)> (integer GL2 conjugation reduced mod N).

Writes raw class data to notes scratch for the later letter-calibration pass.
Run:  python3 tools/enumerate_groups.py 2 3 4 5 6 7 8 9 10 11 12
"""

import json
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from modcurve.congruence import (CongruenceSubgroup, close_subgroup,
                                 sl2_elements, _mm)
from modcurve.exactalg import Mat2, sl2_lift

OUT_DIR = "/root/notes/scratch"


def psl_setup(n):
    """Element list of SL2(Z/n)/{+-I}, multiplication table, index lookup."""
    neg = lambda m: tuple((-x) % n for x in m)
    canon = lambda m: min(m, neg(m))
    elems = sorted({canon(m) for m in sl2_elements(n)})
    idx = {}
    for i, e in enumerate(elems):
        idx[e] = i
        idx[neg(e)] = i
    table = [[idx[_mm(a, b, n)] for b in elems] for a in elems]
    ident = idx[(1 % n, 0, 0, 1 % n)]
    return elems, idx, table, ident


def span(gens, table, ident):
    """Subgroup generated by the given element indices (word closure)."""
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(table, ident):
    """Every subgroup, found by extending known ones a generator at a time."""
    size = len(table)
    subs = {}
    frontier = []
    triv = frozenset([ident])
    subs[triv] = ()
    for g in range(size):
        s = span((g,), table, ident)
        if s not in subs:
            subs[s] = (g,)
            frontier.append(s)
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) == size:
                continue
            base = subs[s]
            for g in range(size):
                if g in s:
                    continue
                gens = base + (g,)
                grown = span(gens, table, ident)
                if grown not in subs:
                    subs[grown] = gens
                    nxt.append(grown)
        frontier = nxt
        print(f"    layer done, {len(subs)} subgroups so far", flush=True)
    return subs


def conj_classes(subs, elems, idx, table, ident, n):
    """Group subgroups under conjugation by SL2(Z/n) and diag(-1,1)."""
    size = len(elems)
    gens = []
    for m in ((0, 1, (-1) % n, 0), (1, 1, 0, 1)):
        gi = idx[m]
        inv = next(j for j in range(size) if table[gi][j] == ident)
        gens.append([table[table[gi][x]][inv] for x in range(size)])

    def flip_conj(x):
        a, b, c, d = elems[x]
        return idx[(a, (-b) % n, (-c) % n, d)]

    gens.append([flip_conj(x) for x in range(size)])

    classes = []
    seen = set()
    for s in sorted(subs, key=lambda s: (len(s), sorted(s))):
        if s in seen:
            continue
        orbit = {s}
        queue = [s]
        while queue:
            cur = queue.pop()
            for perm in gens:
                img = frozenset(perm[x] for x in cur)
                if img not in orbit:
                    orbit.add(img)
                    queue.append(img)
        seen |= orbit
        rep = min(orbit, key=lambda o: sorted(o))
        classes.append((rep, len(orbit)))
    return classes


def greedy_generators(members, n):
    """Small generating set (as residues) for a subgroup given by members."""
    target = frozenset(members)
    gens = []
    cur = close_subgroup([(1 % n, 0, 0, 1 % n)], n)
    for m in sorted(members):
        if m not in cur:
            gens.append(m)
            cur = close_subgroup(gens, n)
            if cur == target:
                break
    assert cur == target
    return gens


def run_level(n):
    t0 = time.time()
    elems, idx, table, ident = psl_setup(n)
    print(f"level {n}: PSL order {len(elems)}", flush=True)
    subs = all_subgroups(table, ident)
    print(f"  subgroups: {len(subs)}  ({time.time()-t0:.1f}s)", flush=True)
    classes = conj_classes(subs, elems, idx, table, ident, n)
    print(f"  conjugacy classes: {len(classes)}", flush=True)
    rows = []
    for rep, class_size in classes:
        members = set()
        for x in rep:
            m = elems[x]
            members.add(m)
            members.add(tuple((-v) % n for v in m))
        gens = greedy_generators(members, n)
        try:
            grp = CongruenceSubgroup(f"tmp{n}", n, gens)
        except AssertionError as e:
            if "level is" in str(e):
                continue  # true level is smaller; found in its own run
            raise
        if grp.genus() != 0:
            continue
        cusps = grp.cusps()
        lifts = [sl2_lift(Mat2(n, *g)) for g in gens]
        for lift, g in zip(lifts, gens):
            assert tuple(x % n for x in
                         (lift[0][0], lift[0][1], lift[1][0], lift[1][1])) == g
        rows.append({
            "level": n,
            "index": grp.psl_index,
            "n_cusps": len(cusps),
            "widths": sorted(c.width for c in cusps),
            "e2": grp.elliptic_counts()[0],
            "e3": grp.elliptic_counts()[1],
            "class_size": class_size,
            "generators": [[l[0][0], l[0][1], l[1][0], l[1][1]] for l in lifts],
        })
    rows.sort(key=lambda r: (r["index"], r["n_cusps"], r["widths"], r["e2"], r["e3"]))
    print(f"  genus-0 classes of exact level {n}: {len(rows)}  "
          f"indexes {[r['index'] for r in rows]}", flush=True)
    with open(os.path.join(OUT_DIR, f"raw_level_{n}.json"), "w") as fh:
        json.dump(rows, fh, indent=1)
    print(f"  total {time.time()-t0:.1f}s", flush=True)


if __name__ == "__main__":
    for arg in sys.argv[1:]:
        run_level(int(arg))
