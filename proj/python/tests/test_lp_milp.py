"""Solve exported LP models with HiGHS and compare against the exact search."""

import random
import re

import numpy as np
import pytest

import paintshop as ps

scipy_optimize = pytest.importorskip("scipy.optimize")
scipy_sparse = pytest.importorskip("scipy.sparse")

TERM = re.compile(r"([+-])\s*(\d+(?:\.\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def parse_lp(text):
    sections = {"obj": [], "rows": [], "bounds": [], "binaries": [], "generals": []}
    current = None
    headers = {
        "Minimize": "obj",
        "Subject To": "rows",
        "Bounds": "bounds",
        "Binaries": "binaries",
        "Generals": "generals",
    }
    for line in text.splitlines():
        if line.startswith("\\") or not line.strip():
            continue
        if line in headers:
            current = headers[line]
            continue
        if line == "End":
            break
        body = line.strip()
        if current in ("obj", "rows"):
            if re.match(r"^[A-Za-z_][A-Za-z0-9_]*:", body):
                sections[current].append(body)
            else:
                sections[current][-1] += " " + body
        elif current == "bounds":
            sections["bounds"].append(body)
        else:
            sections[current].extend(body.split())
    return sections


def linear(expr):
    expr = expr.strip()
    if not expr.startswith(("+", "-")):
        expr = "+ " + expr
    out = {}
    for sign, coef, var in TERM.findall(expr):
        value = float(coef) if coef else 1.0
        out[var] = out.get(var, 0.0) + (value if sign == "+" else -value)
    return out


def build(sections):
    names = []
    index = {}

    def var(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    objective = linear(sections["obj"][0].split(":", 1)[1])
    rows = []
    for row in sections["rows"]:
        _, body = row.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+(?:\.\d+)?)\s*$", body)
        assert m, row
        rows.append((linear(m.group(1)), m.group(2), float(m.group(3))))
    for coeffs, _, _ in rows:
        for name in coeffs:
            var(name)
    for name in objective:
        var(name)
    lower = {}
    upper = {}
    for b in sections["bounds"]:
        lo, name, hi = re.match(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)", b).groups()
        lower[name], upper[name] = float(lo), float(hi)
    for name in sections["binaries"]:
        lower[name], upper[name] = 0.0, 1.0
    for name in sections["binaries"] + sections["generals"]:
        var(name)

    n = len(names)
    c = np.zeros(n)
    for name, coef in objective.items():
        c[index[name]] = coef
    A = scipy_sparse.lil_matrix((len(rows), n))
    lb = np.empty(len(rows))
    ub = np.empty(len(rows))
    for i, (coeffs, sense, rhs) in enumerate(rows):
        for name, coef in coeffs.items():
            A[i, index[name]] = coef
        lb[i] = rhs if sense in (">=", "=") else -np.inf
        ub[i] = rhs if sense in ("<=", "=") else np.inf
    integral = set(sections["binaries"]) | set(sections["generals"])
    integrality = np.array([1 if name in integral else 0 for name in names])
    bounds = scipy_optimize.Bounds(
        np.array([lower.get(name, 0.0) for name in names]),
        np.array([upper.get(name, np.inf) for name in names]),
    )
    return c, scipy_optimize.LinearConstraint(A.tocsr(), lb, ub), integrality, bounds


def solve_lp(text):
    c, constraints, integrality, bounds = build(parse_lp(text))
    res = scipy_optimize.milp(c, constraints=constraints, integrality=integrality, bounds=bounds)
    assert res.success, res.message
    return round(res.fun)


def tiny_instances():
    rng = random.Random(17)
    out = [ps.Instance(2, 1, 1, [1, 2]), ps.Instance(3, 2, 2, [1, 3, 1, 2])]
    while len(out) < 6:
        colors = rng.randint(2, 3)
        n = rng.randint(3, 5)
        out.append(ps.Instance(colors, rng.randint(1, 2), rng.randint(1, 2), [rng.randint(1, colors) for _ in range(n)]))
    return out


@pytest.mark.parametrize("inst", tiny_instances(), ids=lambda i: "-".join(map(str, i.upstream)))
def test_aligned_model_optimum_matches_exact(inst):
    sol, proven = ps.solve_exact(inst)
    assert proven
    assert solve_lp(ps.export_ilp(inst, aligned=True)) == sol.color_changes


def test_raw_model_counts_first_car():
    inst = ps.Instance(3, 2, 1, [1, 2, 1])
    sol, _ = ps.solve_exact(inst)
    assert solve_lp(ps.export_ilp(inst)) == sol.color_changes + 1
