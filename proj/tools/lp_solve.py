#!/usr/bin/env python3
# Copyright 2026 The essp authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference external MILP solver: CPLEX LP file in, `name value` lines out.

Built on scipy.optimize.milp (HiGHS). Exit codes follow the file-exchange
backend contract:

  0  solved to optimality, solution written to --out
  2  proven infeasible
  3  limit hit, best incumbent written to --out
  4  limit hit, no incumbent
  1  anything else (parse error, unbounded, solver failure)
"""

import argparse
import json
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


class ParseError(Exception):
    pass


_SECTION_STARTS = {
    "minimize": "objective",
    "maximize": "objective",
    "subject": "constraints",
    "st": "constraints",
    "bounds": "bounds",
    "binaries": "binaries",
    "binary": "binaries",
    "bin": "binaries",
    "generals": "generals",
    "general": "generals",
    "gen": "generals",
    "end": "end",
}

_NUM_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _is_number(tok):
    return bool(_NUM_RE.match(tok))


class Model:
    def __init__(self):
        self.maximize = False
        self.var_index = {}
        self.names = []
        self.objective = {}  # index -> coeff
        self.constraints = []  # (name, {index: coeff}, sense, rhs)
        self.lower = []
        self.upper = []
        self.integral = []

    def var(self, name):
        if name not in self.var_index:
            self.var_index[name] = len(self.names)
            self.names.append(name)
            self.lower.append(0.0)
            self.upper.append(np.inf)
            self.integral.append(False)
        return self.var_index[name]


def _split_sections(text):
    """Returns {section: [logical tokens]} keeping token order."""
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("\\"):
            continue
        stripped = line.strip()
        first = stripped.split()[0].lower()
        key = first.rstrip(":")
        # `Subject To` spans two words; match on the first.
        if key in _SECTION_STARTS and not line.startswith(" "):
            current = _SECTION_STARTS[key]
            sections.setdefault(current, [])
            if current == "objective":
                sections["maximize"] = [str(key == "maximize")]
            rest = stripped.split(None, 1)
            if current == "constraints" and len(rest) > 1:
                second = rest[1].split()[0].lower()
                remainder = rest[1].split(None, 1)
                if second == "to" and len(remainder) > 1:
                    sections[current].extend(remainder[1].split())
                elif second != "to":
                    sections[current].extend(rest[1].split())
            elif current not in ("constraints",) and len(rest) > 1:
                sections[current].extend(rest[1].split())
            continue
        if current is None:
            raise ParseError("tokens before any section: %s" % stripped)
        sections[current].extend(stripped.split())
    if "end" not in sections:
        raise ParseError("missing End line")
    return sections


def _parse_expr_tokens(tokens, model, context):
    """`[+|-] [coeff] name ...` into {index: coeff}. Consumes all tokens."""
    expr = {}
    sign = 1.0
    coeff = None
    for tok in tokens:
        if tok == "+":
            if coeff is not None:
                raise ParseError("%s: dangling coefficient before '+'" % context)
            sign = 1.0
        elif tok == "-":
            if coeff is not None:
                raise ParseError("%s: dangling coefficient before '-'" % context)
            sign = -1.0
        elif _is_number(tok):
            if coeff is not None:
                raise ParseError("%s: two coefficients in a row" % context)
            coeff = float(tok)
        else:
            idx = model.var(tok)
            value = sign * (1.0 if coeff is None else coeff)
            expr[idx] = expr.get(idx, 0.0) + value
            sign = 1.0
            coeff = None
    if coeff is not None:
        raise ParseError("%s: trailing coefficient" % context)
    return expr


def _parse_objective(tokens, model):
    if tokens and tokens[0].lower().startswith("obj") and tokens[0].endswith(":"):
        tokens = tokens[1:]
    elif tokens and tokens[0].lower() in ("obj:", "obj"):
        tokens = tokens[1:]
    model.objective = _parse_expr_tokens(tokens, model, "objective")


def _parse_constraints(tokens, model):
    # Split the token stream at relation operators; each row is
    # `name: expr (<=|>=|=) rhs`.
    i = 0
    while i < len(tokens):
        row = []
        sense = None
        while i < len(tokens):
            tok = tokens[i]
            if tok in ("<=", ">=", "=", "<", ">"):
                sense = {"<": "<=", ">": ">="}.get(tok, tok)
                i += 1
                break
            row.append(tok)
            i += 1
        if sense is None:
            if row:
                raise ParseError("constraint without relation: %s" % " ".join(row))
            break
        if i >= len(tokens) or not _is_number(tokens[i]):
            raise ParseError("constraint missing numeric rhs")
        rhs = float(tokens[i])
        i += 1
        if not row or not row[0].endswith(":"):
            raise ParseError("constraint missing 'name:' prefix: %s" % " ".join(row))
        name = row[0][:-1]
        expr = _parse_expr_tokens(row[1:], model, name)
        model.constraints.append((name, expr, sense, rhs))


def _parse_bounds(tokens, model):
    # Recognized row shapes, one per variable mention:
    #   lo <= x <= hi | x <= hi | x >= lo | x = v | x free
    i = 0
    while i < len(tokens):
        # A row starts either with a number (lo <= x ...) or a name.
        if _is_number(tokens[i]):
            lo = float(tokens[i])
            if tokens[i + 1] != "<=":
                raise ParseError("bad bounds row near %s" % tokens[i])
            idx = model.var(tokens[i + 2])
            model.lower[idx] = lo
            i += 3
            if i < len(tokens) and tokens[i] == "<=":
                model.upper[idx] = float(tokens[i + 1])
                i += 2
            continue
        idx = model.var(tokens[i])
        if i + 1 < len(tokens) and tokens[i + 1].lower() == "free":
            model.lower[idx] = -np.inf
            model.upper[idx] = np.inf
            i += 2
            continue
        if i + 2 >= len(tokens):
            raise ParseError("truncated bounds row at %s" % tokens[i])
        op, value = tokens[i + 1], float(tokens[i + 2])
        if op == "<=":
            model.upper[idx] = value
        elif op == ">=":
            model.lower[idx] = value
        elif op == "=":
            model.lower[idx] = value
            model.upper[idx] = value
        else:
            raise ParseError("bad bounds operator %s" % op)
        i += 3


def parse_lp(text):
    sections = _split_sections(text)
    model = Model()
    model.maximize = sections.get("maximize", ["False"])[0] == "True"
    if "objective" not in sections:
        raise ParseError("missing objective section")
    if "constraints" not in sections:
        raise ParseError("missing Subject To section")
    _parse_objective(sections["objective"], model)
    _parse_constraints(sections["constraints"], model)
    # Binaries first so explicit Bounds rows can pin or widen them after.
    for name in sections.get("binaries", []):
        idx = model.var(name)
        model.integral[idx] = True
        model.lower[idx] = max(model.lower[idx], 0.0)
        model.upper[idx] = min(model.upper[idx], 1.0)
    if "bounds" in sections:
        _parse_bounds(sections["bounds"], model)
    for name in sections.get("generals", []):
        model.integral[model.var(name)] = True
    return model


def solve(model, time_limit):
    n = len(model.names)
    c = np.zeros(n)
    for idx, coeff in model.objective.items():
        c[idx] = coeff
    if model.maximize:
        c = -c

    constraints = []
    for _, expr, sense, rhs in model.constraints:
        row = np.zeros(n)
        for idx, coeff in expr.items():
            row[idx] = coeff
        if sense == "<=":
            constraints.append(LinearConstraint(row[None, :], -np.inf, rhs))
        elif sense == ">=":
            constraints.append(LinearConstraint(row[None, :], rhs, np.inf))
        else:
            constraints.append(LinearConstraint(row[None, :], rhs, rhs))

    options = {"mip_rel_gap": 0.0}
    if time_limit and time_limit > 0:
        options["time_limit"] = time_limit
    res = milp(
        c,
        constraints=constraints,
        integrality=np.array([1 if f else 0 for f in model.integral]),
        bounds=Bounds(np.array(model.lower), np.array(model.upper)),
        options=options,
    )
    return res


def write_solution(path, model, x):
    lines = []
    for name, value in zip(model.names, x):
        v = float(value)
        if abs(v - round(v)) < 1e-9:
            v = float(round(v))
        lines.append("%s %.12g" % (name, v))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lp", required=True, help="CPLEX LP input file")
    ap.add_argument("--out", help="solution output file (name value lines)")
    ap.add_argument("--time-limit", type=float, default=0.0,
                    help="seconds; 0 disables the limit")
    ap.add_argument("--parse-only", action="store_true",
                    help="parse, print a model summary as JSON, and exit")
    args = ap.parse_args()

    with open(args.lp) as f:
        text = f.read()
    try:
        model = parse_lp(text)
    except (ParseError, IndexError, ValueError) as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 1

    if args.parse_only:
        summary = {
            "variables": len(model.names),
            "integral": sum(model.integral),
            "constraints": len(model.constraints),
            "objective_terms": len(model.objective),
            "maximize": model.maximize,
        }
        print(json.dumps(summary, sort_keys=True))
        return 0

    if not args.out:
        print("--out is required unless --parse-only", file=sys.stderr)
        return 1

    res = solve(model, args.time_limit)
    if res.status == 0:
        write_solution(args.out, model, res.x)
        return 0
    if res.status == 2:
        return 2
    if res.status == 1:  # iteration or time limit
        if res.x is not None:
            write_solution(args.out, model, res.x)
            return 3
        return 4
    print("solver status %s: %s" % (res.status, res.message), file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
