#!/usr/bin/env python3
"""Solve an SDPA sparse problem with cvxpy and write the optimum as JSON.

    min c^T y  subject to  sum_i y_i F_i - F_0 >= 0 (blockwise)

Usage: solve_sdpa.py problem.dat-s output.json
"""

import argparse
import json
import re
import sys

import cvxpy as cp
import numpy as np


def read_sdpa(path):
    lines = []
    with open(path) as f:
        for line in f:
            s = line.strip()
            if not s or s[0] in '*"':
                continue
            lines.append(re.sub(r"[,{}()]", " ", s))
    m = int(lines[0].split()[0])
    nblocks = int(lines[1].split()[0])
    rest = " ".join(lines[2:]).split()
    sizes = [int(x) for x in rest[:nblocks]]
    c = np.array([float(x) for x in rest[nblocks:nblocks + m]])
    entries = rest[nblocks + m:]
    mats = [[np.zeros((abs(s), abs(s))) for s in sizes] for _ in range(m + 1)]
    for k in range(0, len(entries), 5):
        matno, blk, i, j = (int(x) for x in entries[k:k + 4])
        v = float(entries[k + 4])
        a = mats[matno][blk - 1]
        a[i - 1, j - 1] = v
        a[j - 1, i - 1] = v
    return m, sizes, c, mats


def solve(path):
    m, sizes, c, mats = read_sdpa(path)
    y = cp.Variable(m)
    constraints = []
    for b, s in enumerate(sizes):
        expr = -mats[0][b]
        for i in range(m):
            if np.any(mats[i + 1][b]):
                expr = expr + y[i] * mats[i + 1][b]
        z = cp.Variable((s, s), symmetric=True)
        constraints += [z == expr, z >> 0]
    prob = cp.Problem(cp.Minimize(c @ y), constraints)
    prob.solve(solver=cp.CLARABEL if "CLARABEL" in cp.installed_solvers() else cp.SCS)
    return {
        "problem": path.split("/")[-1],
        "status": prob.status,
        "optimum": float(prob.value) if prob.value is not None else None,
        "y": [float(v) for v in y.value] if y.value is not None else None,
        "solver": prob.solver_stats.solver_name,
        "cvxpy": cp.__version__,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("problem")
    ap.add_argument("output")
    args = ap.parse_args()
    result = solve(args.problem)
    with open(args.output, "w") as f:
        json.dump(result, f, indent=2)
        f.write("\n")
    return 0 if result["status"] == "optimal" else 1


if __name__ == "__main__":
    sys.exit(main())
