#!/usr/bin/env python3
"""Regenerates fixtures/ortho_oracle.json.

Reference values for the orthotropic-cylinder boundary operator, evaluated
from the closed-form entries with mpmath at 50 digits and rounded to the
nearest double. Independent of the C++ implementation.
"""
import json
import mpmath as mp

mp.mp.dps = 50


def ortho_operator(rho, a11, a12, a13, a55, a66, r):
    rho, a11, a12, a13, a55, a66, r = map(mp.mpf, (rho, a11, a12, a13, a55, a66, r))
    s11, s55, s66 = mp.sqrt(a11 / rho), mp.sqrt(a55 / rho), mp.sqrt(a66 / rho)
    zero = [[mp.mpf(0)] * 3 for _ in range(3)]

    def mat(diag=None, entries=()):
        m = [row[:] for row in zero]
        if diag is not None:
            for k in range(3):
                m[k][k] = diag[k]
        for (i, j, v) in entries:
            m[i][j] = v
        return m

    p1 = mat(diag=[-1 / s11, -1 / s66, -1 / s55])
    p_alg = mat(diag=[-1 / (2 * r)] * 3)
    q_theta = mat(entries=[
        (0, 1, -(a12 + a66) / ((mp.sqrt(a11 * a66) + a11) * r)),
        (1, 0, -(a12 + a66) / ((mp.sqrt(a11 * a66) + a66) * r)),
    ])
    q_z = mat(entries=[
        (0, 2, -(a13 + a55) / (mp.sqrt(a11 * a55) + a11)),
        (2, 0, -(a13 + a55) / (mp.sqrt(a11 * a55) + a55)),
    ])
    resolved_p1 = mat(diag=[-s11, -s66, -s55])
    resolved_p_alg = mat(diag=[s11 / (2 * r), s66 / (2 * r), s55 / (2 * r)])
    rq_t = (a12 + a66) / ((mp.sqrt(a11) + mp.sqrt(a66)) * mp.sqrt(rho) * r)
    rq_z = (a13 + a55) / ((mp.sqrt(a11) + mp.sqrt(a55)) * mp.sqrt(rho))
    resolved_q_theta = mat(entries=[(0, 1, rq_t), (1, 0, rq_t)])
    resolved_q_z = mat(entries=[(0, 2, rq_z), (2, 0, rq_z)])
    to_f = lambda m: [[float(v) for v in row] for row in m]
    return {
        "p1": to_f(p1), "p_alg": to_f(p_alg),
        "q_theta": to_f(q_theta), "q_z": to_f(q_z),
        "resolved_p1": to_f(resolved_p1), "resolved_p_alg": to_f(resolved_p_alg),
        "resolved_q_theta": to_f(resolved_q_theta), "resolved_q_z": to_f(resolved_q_z),
    }


SETS = [
    {"name": "unit-radius reference", "rho": 1.0, "a11": 4.0, "a12": 1.0, "a13": 1.0,
     "a22": 4.0, "a23": 1.0, "a33": 4.0, "a44": 1.0, "a55": 1.0, "a66": 1.0,
     "r": 1.0, "vti": False},
    {"name": "transversely isotropic", "rho": 2.0, "a11": 13.0, "a12": 5.0, "a13": 2.5,
     "a22": 13.0, "a23": 2.5, "a33": 11.0, "a44": 3.0, "a55": 3.0, "a66": 4.0,
     "r": 2.0, "vti": True},
    {"name": "fully orthotropic", "rho": 1.5, "a11": 9.0, "a12": 0.5, "a13": 1.2,
     "a22": 8.0, "a23": 1.0, "a33": 7.0, "a44": 4.0, "a55": 5.0, "a66": 2.0,
     "r": 0.7, "vti": False},
]

doc = {"schema_version": 1, "suite": "ortho_oracle", "sets": []}
for s in SETS:
    entry = {"name": s["name"],
             "model": {k: v for k, v in s.items() if k != "name"},
             "expected": ortho_operator(s["rho"], s["a11"], s["a12"], s["a13"],
                                        s["a55"], s["a66"], s["r"])}
    doc["sets"].append(entry)

with open("fixtures/ortho_oracle.json", "w") as f:
    json.dump(doc, f, indent=2)
    f.write("\n")
print("wrote fixtures/ortho_oracle.json")
