#!/usr/bin/env python3
"""Regenerate the sample section families in this directory.

Numbers are written with 17 significant digits, matching the library's writer.
"""

import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def num(v):
    return format(v, ".17g")


def matrix(rows):
    return "[\n" + ",\n".join("    [" + ", ".join(num(v) for v in r) + "]" for r in rows) + "\n  ]"


def grid(M, S, t0, t1):
    return {"M": M, "S": S, "T_minus": t0, "T_plus": t1}


def s_at(g, k):
    return g["T_plus"] if k == g["S"] - 1 else g["T_minus"] + (g["T_plus"] - g["T_minus"]) / (g["S"] - 1) * k


def theta(g, j):
    return 2.0 * math.pi * j / g["M"]


def bump(s, centre, radius):
    u = (s - centre) / radius
    return math.exp(1.0 - 1.0 / (1.0 - u * u)) if abs(u) < 1.0 else 0.0


def write(name, g, fields):
    head = '{\n  "grid": {"M": %d, "S": %d, "T_minus": %s, "T_plus": %s}' % (
        g["M"], g["S"], num(g["T_minus"]), num(g["T_plus"]))
    body = "".join(',\n  "%s": %s' % (k, matrix(v)) for k, v in fields)
    with open(os.path.join(HERE, name), "w") as f:
        f.write(head + body + "\n}\n")


def drift():
    # c(s) = 0.02 bump(s); p > 0 so the total variation of z0 equals |c|
    g = grid(512, 200, 0.0, 10.0)
    rows = []
    for k in range(g["S"]):
        b = bump(s_at(g, k), 5.0, 4.0)
        rows.append([b * 0.02 / (2.0 * math.pi) * (1.0 + 0.5 * math.cos(theta(g, j))) for j in range(g["M"])])
    write("drift.json", g, [("p", rows)])


def zero():
    g = grid(64, 11, 0.0, 1.0)
    write("zero.json", g, [("p", [[0.0] * g["M"] for _ in range(g["S"])])])


def bisection():
    # p_t = g'(t) sin(theta) with g' an interior bump of total mass A, so the
    # surface is a zero-section at both ends but h(T_+) = A sin(theta) != 0 and
    # flatten_pt has to extend; p_theta is a small drift bump
    g = grid(128, 41, 0.0, 4.0)
    A = 0.02
    ts = [s_at(g, k) for k in range(g["S"])]
    w = [bump(t, 2.0, 1.5) for t in ts]
    dt = ts[1] - ts[0]
    mass = sum(0.5 * dt * (w[k] + w[k + 1]) for k in range(g["S"] - 1))
    pt, ptheta = [], []
    for k in range(g["S"]):
        gp = A * w[k] / mass
        b = bump(ts[k], 2.0, 1.5)
        pt.append([gp * math.sin(theta(g, j)) for j in range(g["M"])])
        ptheta.append([b * 0.004 * (1.0 + 0.5 * math.cos(theta(g, j))) for j in range(g["M"])])
    write("bisection.json", g, [("pt", pt), ("ptheta", ptheta)])


if __name__ == "__main__":
    drift()
    zero()
    bisection()
