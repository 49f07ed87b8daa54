#!/usr/bin/env python3
# Copyright 2026 The eqprove Authors
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

"""Generates the bundled expression corpora.

Writes provable.txt, nonprovable.txt, nearmiss.txt and blowup.txt into the
output directory (default: corpus/ next to this script's parent). The random
stream is seeded from CAVIAR_SEED (default 1).

Every instance is checked before it is written: provable and near-miss lines
must evaluate to one fixed boolean on all sampled assignments, non-provable
lines must take both values.
"""

import argparse
import itertools
import os
import random
import re
import sys

VARS = ["x", "y", "z", "v0", "v1", "a", "b", "n"]

# ---------------------------------------------------------------------------
# Oracle: floor division, x / 0 = 0, x % 0 = 0.

TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z0-9_]*|<=|>=|==|!=|&&|\|\||[-+*/%<>!(),])")


def tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m:
            raise ValueError("bad input at %d: %r" % (pos, text))
        out.append(m.group(1))
        pos = m.end()
    return out


class Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if want is not None and tok != want:
            raise ValueError("expected %s got %s" % (want, tok))
        self.i += 1
        return tok

    def parse(self):
        e = self.or_()
        if self.peek() is not None:
            raise ValueError("trailing input")
        return e

    def or_(self):
        e = self.and_()
        while self.peek() == "||":
            self.take()
            e = ("||", e, self.and_())
        return e

    def and_(self):
        e = self.not_()
        while self.peek() == "&&":
            self.take()
            e = ("&&", e, self.not_())
        return e

    def not_(self):
        if self.peek() == "!":
            self.take()
            return ("!", self.not_())
        return self.cmp()

    def cmp(self):
        e = self.sum()
        if self.peek() in ("<", "<=", ">", ">=", "==", "!="):
            op = self.take()
            e = (op, e, self.sum())
        return e

    def sum(self):
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            e = (op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek() in ("*", "/", "%"):
            op = self.take()
            e = (op, e, self.unary())
        return e

    def unary(self):
        if self.peek() == "-":
            self.take()
            if self.peek() is not None and self.peek().isdigit():
                return ("int", -int(self.take()))
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return ("int", int(tok))
        if tok in ("true", "false"):
            return ("bool", tok == "true")
        if tok in ("min", "max"):
            self.take("(")
            a = self.or_()
            self.take(",")
            b = self.or_()
            self.take(")")
            return (tok, a, b)
        if tok == "(":
            e = self.or_()
            self.take(")")
            return e
        return ("var", tok)


def fdiv(a, b):
    return 0 if b == 0 else a // b


def fmod(a, b):
    return 0 if b == 0 else a % b


BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": fdiv,
    "%": fmod,
    "min": min,
    "max": max,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "&&": lambda a, b: a and b,
    "||": lambda a, b: a or b,
}


def evaluate(e, env):
    tag = e[0]
    if tag == "int" or tag == "bool":
        return e[1]
    if tag == "var":
        return env[e[1]]
    if tag == "neg":
        return -evaluate(e[1], env)
    if tag == "!":
        return not evaluate(e[1], env)
    return BINOPS[tag](evaluate(e[1], env), evaluate(e[2], env))


def free_vars(e, out=None):
    out = set() if out is None else out
    if e[0] == "var":
        out.add(e[1])
    elif e[0] not in ("int", "bool"):
        for child in e[1:]:
            free_vars(child, out)
    return out


def truth_values(text, rng, trials=2000):
    tree = Parser(text).parse()
    names = sorted(free_vars(tree))
    seen = set()
    for small in itertools.product(range(-9, 10), repeat=min(len(names), 2)):
        env = {n: small[i] if i < len(small) else rng.randint(-50, 50) for i, n in enumerate(names)}
        seen.add(bool(evaluate(tree, env)))
    for _ in range(trials):
        env = {n: rng.randint(-1000, 1000) for n in names}
        seen.add(bool(evaluate(tree, env)))
    return seen


# ---------------------------------------------------------------------------
# Families. Each returns an infix string; constants come from `rng`.


def two_vars(rng):
    return rng.sample(VARS, 2)


def provable_family(rng):
    x, y = two_vars(rng)
    c = rng.randint(2, 16)
    k = rng.randint(1, 40)
    c1 = rng.randint(-20, 20)
    c2 = rng.randint(-20, 20)
    lo, hi = sorted((c1, c2))
    return [
        f"({x} + {c1}) - {c1} == {x}",
        f"{x} * {c + 1} - {x} * {c} == {x}",
        f"min({x}, {y}) <= max({x}, {y})",
        f"{x} % {c} < {c}",
        f"({x} * {c}) / {c} == {x}",
        f"max({x}, {y}) >= {x}",
        f"!({x} < {y} && {y} < {x})",
        f"({x} + {k} * {c}) / {c} == {x} / {c} + {k}",
        f"{x} + {k} <= {x}",
        f"{x} % {c} >= {c}",
        f"(({x} + -1) / 2) <= (((((({x} + 1) / 2) - {y}) / 2) * 2) + {y})",
        f"(({x} - {y}) / {c} + {k}) <= max((({x} - {y}) + {k * c + 1}) / {c}, 0)",
        f"({x} + {y}) - {y} == {x}",
        f"{x} * 2 == {x} + {x}",
        f"min({x}, {lo}) <= {hi}",
        f"max({x} + {c1}, {x} + {c2}) == {x} + {max(c1, c2)}",
        f"({x} / {c}) * {c} <= {x}",
        f"{x} < {x} + {k}",
        f"{x} + {y} == {y} + {x}",
        f"{x} * 0 + {y} < {y} + {k}",
        f"{c - 1 + rng.randint(0, 5)} < {x} % {c}",
        f"{x} / {c} <= {x} / {c} + 1",
        f"({x} + {c}) % {c} == {x} % {c}",
        f"{x} - {x} != 0",
        f"min({x}, {y}) + {k} <= {y} + {k}",
        f"({x} + {y}) * {c} == {x} * {c} + {y} * {c}",
        f"{x} < {y} || {y} <= {x}",
        f"max({x}, {y}) < min({x}, {y})",
    ]


def nonprovable_family(rng):
    x = rng.choice(VARS)
    b = rng.randint(3, 16)
    c = rng.randint(-30, 30)
    d = rng.randint(1, 9)
    return [
        f"{x} != {c}",
        f"{x} + {d} != {c}",
        f"{rng.randint(0, b - 2)} < {x} % {b}",
        f"{x} % {b} < {rng.randint(1, b - 1)}",
        f"{rng.randint(-b + 1, -1)} < {x} % -{b}",
        f"{x} == {c}",
        f"{c} < {x}",
        f"{x} > {c}",
        f"{c} <= {x}",
        f"!({x} == {c})",
    ]


def nearmiss_family(rng):
    x = rng.choice(VARS)
    b = rng.randint(2, 16)
    d = rng.randint(1, 9)
    return [
        f"{b - 1 + rng.randint(0, 5)} < {x} % {b}",
        f"{x} % {b} < {-rng.randint(0, 5)}",
        f"{x} - {x} != 0",
        f"{x} + {d} != {x} + {d}",
        f"{rng.randint(0, 5)} < {x} % -{b}",
        f"{x} % -{b} < {-b + 1 - rng.randint(0, 3)}",
        f"{x} == {x} + {d}",
        f"{x} + {d} < {x}",
        f"{x} % {b} >= {b + rng.randint(0, 3)}",
        f"{x} * 0 != 0",
    ]


def blowup_family(rng):
    x, y = two_vars(rng)
    c1, c2, c3 = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
    return [
        f"({x} + {c1}) * ({x} + {c2}) == {x} * {x} + {c1 + c2} * {x} + {c1 * c2}",
        f"({x} + {c1}) * ({x} + {c2}) * ({x} + {c3}) == ({x} * {x} + {c1 + c2} * {x} + {c1 * c2}) * ({x} + {c3})",
        f"({x} + {y}) * ({x} + {c1}) * ({y} + {c2}) - ({x} * {x} + {c1} * {x} + {y} * {x} + {c1} * {y}) * ({y} + {c2}) == 0",
        f"({x} + {c1}) * ({y} + {c2}) == {x} * {y} + {c2} * {x} + {c1} * {y} + {c1 * c2}",
    ]


def pick(rng, family, count, want):
    out, seen = [], set()
    while len(out) < count:
        options = family(rng)
        for i, text in enumerate(options):
            if len(out) >= count:
                break
            if text in seen:
                continue
            values = truth_values(text, rng)
            if want == "const" and len(values) != 1:
                continue
            if want == "false" and values != {False}:
                continue
            if want == "both" and values != {False, True}:
                continue
            seen.add(text)
            out.append(text)
    return out


def write(path, header, lines):
    with open(path, "w") as f:
        f.write(header)
        for line in lines:
            f.write(line + "\n")


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(here, "..", "corpus"))
    ap.add_argument("--check", metavar="FILE", help="print the oracle truth set of each line")
    args = ap.parse_args()

    seed = int(os.environ.get("CAVIAR_SEED", "1"))
    rng = random.Random(seed)

    if args.check:
        with open(args.check) as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith("#"):
                    print(sorted(truth_values(line, rng)), line)
        return 0

    os.makedirs(args.out, exist_ok=True)
    banner = "# Generated by tools/gen_corpus.py with CAVIAR_SEED=%d.\n" % seed
    write(os.path.join(args.out, "provable.txt"),
          banner + "# Valid or unsatisfiable identities and inequalities.\n",
          pick(rng, provable_family, 112, "const"))
    write(os.path.join(args.out, "nonprovable.txt"),
          banner + "# Contingent instances of the five non-provable patterns.\n",
          pick(rng, nonprovable_family, 30, "both"))
    write(os.path.join(args.out, "nearmiss.txt"),
          banner + "# Pattern look-alikes whose conditions fail; all are false.\n",
          pick(rng, nearmiss_family, 20, "false"))
    write(os.path.join(args.out, "blowup.txt"),
          banner + "# Distributivity chains that grow the e-graph quickly.\n",
          pick(rng, blowup_family, 16, "const"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
