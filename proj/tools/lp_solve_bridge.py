#!/usr/bin/env python3
"""Solve an LP-format MILP with scipy's HiGHS backend.

Usage: lp_solve_bridge.py model.lp solution.sol

Reads the CPLEX-LP subset written by the cutplan exporter (Minimize /
Subject To / Bounds / Binaries / Generals / End) and writes a solution file
with an objective header, a status header, and one line per nonzero
variable.
"""

import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def tokenize_expression(text):
    """Yields (coefficient, name) pairs from '+ 3 x - y + 2.5 z'."""
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            sign, coef = 1.0, None
        elif tok == "-":
            sign, coef = -1.0, None
        else:
            try:
                value = float(tok)
                coef = value
            except ValueError:
                yield (sign * (1.0 if coef is None else coef), tok)
                sign, coef = 1.0, None


def parse_lp(text):
    text = re.sub(r"\\[^\n]*", "", text)  # strip comments
    sections = re.split(
        r"(?mi)^\s*(Minimize|Maximize|Subject To|Bounds|Binaries|Generals|End)\s*$", text
    )
    blocks = {}
    for k in range(1, len(sections) - 1, 2):
        blocks[sections[k].lower()] = sections[k + 1]

    objective = {}
    obj_constant = 0.0
    sense = 1.0 if "minimize" in blocks else -1.0
    obj_text = blocks.get("minimize", blocks.get("maximize", ""))
    obj_text = re.sub(r"^\s*\w+\s*:", "", obj_text.strip())
    for coef, name in tokenize_expression(obj_text):
        objective[name] = objective.get(name, 0.0) + coef

    rows = []
    for line in blocks.get("subject to", "").splitlines():
        line = line.strip()
        if not line:
            continue
        line = re.sub(r"^\s*\w+\s*:", "", line)
        match = re.search(r"(<=|>=|=)", line)
        lhs, op, rhs = line[: match.start()], match.group(1), float(line[match.end():])
        terms = {}
        for coef, name in tokenize_expression(lhs):
            terms[name] = terms.get(name, 0.0) + coef
        rows.append((terms, op, rhs))

    bounds = {}
    for line in blocks.get("bounds", "").splitlines():
        line = line.strip()
        if not line:
            continue
        m = re.match(r"^([-\d.eE+]+)\s*<=\s*(\S+)\s*<=\s*([-\d.eE+]+)$", line)
        if m:
            bounds[m.group(2)] = (float(m.group(1)), float(m.group(3)))
            continue
        m = re.match(r"^(\S+)\s*=\s*([-\d.eE+]+)$", line)
        if m:
            bounds[m.group(1)] = (float(m.group(2)), float(m.group(2)))
            continue
        m = re.match(r"^(\S+)\s*>=\s*([-\d.eE+]+)$", line)
        if m:
            bounds[m.group(1)] = (float(m.group(2)), np.inf)
            continue
        raise ValueError(f"bad bounds line: {line}")

    binaries = set(blocks.get("binaries", "").split())
    generals = set(blocks.get("generals", "").split())
    return objective, obj_constant, rows, bounds, binaries, generals, sense


def main():
    lp_path, sol_path = sys.argv[1], sys.argv[2]
    with open(lp_path) as handle:
        objective, constant, rows, bounds, binaries, generals, sense = parse_lp(handle.read())

    names = set(objective)
    for terms, _, _ in rows:
        names.update(terms)
    names.update(bounds)
    names.update(binaries)
    names.update(generals)
    order = sorted(names)
    index = {name: k for k, name in enumerate(order)}
    n = len(order)

    c = np.zeros(n)
    for name, coef in objective.items():
        c[index[name]] = sense * coef

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    for name in binaries:
        lo[index[name]], hi[index[name]] = 0.0, 1.0
    for name, (blo, bhi) in bounds.items():
        lo[index[name]], hi[index[name]] = blo, bhi

    integrality = np.zeros(n)
    for name in binaries | generals:
        integrality[index[name]] = 1

    a = np.zeros((len(rows), n))
    row_lo = np.full(len(rows), -np.inf)
    row_hi = np.full(len(rows), np.inf)
    for r, (terms, op, rhs) in enumerate(rows):
        for name, coef in terms.items():
            a[r, index[name]] = coef
        if op in ("<=", "="):
            row_hi[r] = rhs
        if op in (">=", "="):
            row_lo[r] = rhs

    res = milp(
        c=c,
        constraints=LinearConstraint(a, row_lo, row_hi),
        bounds=Bounds(lo, hi),
        integrality=integrality,
        options={"mip_rel_gap": 0.0},
    )

    with open(sol_path, "w") as out:
        if res.status == 0:
            value = sense * (res.fun + constant)
            out.write(f"# status optimal\n# objective {float(value)!r}\n")
            for name, k in index.items():
                if abs(res.x[k]) > 1e-9:
                    out.write(f"{name} {float(res.x[k])!r}\n")
        elif res.status == 2:
            out.write("# status infeasible\n")
        else:
            out.write("# status limit\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
