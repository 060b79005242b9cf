"""Reference values computed independently of the C++ library.

Run:  python3 tests/oracles/oracles.py > tests/oracles/frozen.json
Exact rationals via sympy where possible; numpy for the randomized cases.
"""
import json

import numpy as np
import sympy as sp


def flt(x):
    return float(sp.N(x, 30))


def mat(a):
    return [[flt(v) for v in row] for row in sp.Matrix(a).tolist()]


def vec(v):
    return [flt(x) for x in v]


out = {}

# raise index, alternation
g = sp.diag(2, 2)
out["raise_diag"] = mat(g.inv() * sp.diag(2, 4))
t = sp.Matrix([[0, 1], [3, 0]])
out["alternate_example"] = mat((t - t.T) / 2)

# foci, harmonic normalization, mu, det h
lam = sp.diag(1, 2, 4)
mean = lam.trace() / 3
h = lam - mean * sp.eye(3)
mu = (h * h).trace() / 3
out["diag124"] = {
    "foci": vec(sorted(lam.eigenvals().keys())),
    "lambda_mean": flt(mean),
    "h": mat(h),
    "det_h": flt(h.det()),
    "mu": flt(mu),
}
out["swap_foci"] = vec(sorted(sp.Matrix([[0, 1], [1, 0]]).eigenvals().keys()))

# H affinor
nu = 0
H = h * h + sp.Rational(nu, 2) / mu * h - mu * sp.eye(3)
out["H_n5"] = mat(H)
h4 = sp.diag(1, -1)
out["H_n4"] = mat(h4 * h4 + sp.Rational(4, 2) / 1 * h4 - sp.eye(2))

# screen objects
mu_a = sp.Matrix([1, 0, 0])
nu_a = sp.Matrix([0, 1, 0])
M = h * mu_a + 0 * mu_a - nu_a / 2
N = h * nu_a / 2 - mu * mu_a
Hi = H.inv()
out["MNPQ"] = {"M": vec(M), "N": vec(N), "P": vec(Hi * M), "Q": vec(Hi * N / mu), "H_inv": mat(Hi)}

# invariant point
for name, tab in (("tau_diag", sp.diag(1, 2)), ("tau_skew", sp.Matrix([[0, 1], [-1, 0]]))):
    ev = [complex(sp.N(-z)) for z in tab.eigenvals(multiple=True)]
    ev.sort(key=lambda z: (z.real, z.imag))
    out[name] = {"tau": flt(tab.trace() / 2), "z": [[z.real, z.imag] for z in ev]}


# normalizing forms: stacked dense solve of the four coefficient relations
def solve_forms(gm, hm, mu, nu, C11a, C1ab, Cab, C1_11a, C1_1ab, nu_ab, rho_a, rho_ab):
    m = gm.shape[0]
    K = hm.T  # K[a][c] = h_a^c with hm = g^{-1} h (upper index row)
    sa = sp.Matrix(sp.symbols(f"sa0:{m}"))
    ta = sp.Matrix(sp.symbols(f"ta0:{m}"))
    S = sp.Matrix(m, m, sp.symbols(f"s0:{m*m}"))
    T = sp.Matrix(m, m, sp.symbols(f"t0:{m*m}"))
    I = sp.eye(m)
    eqs = list(-K * sa - mu * ta + 2 * C11a)
    eqs += list(2 * mu * sa - (2 * mu * K + nu * I) * ta - rho_a + 4 * mu * C1_11a)
    eqs += list(-K * S - mu * T - C1ab - nu_ab)
    eqs += list(2 * mu * S - (2 * mu * K + nu * I) * T - rho_ab - 2 * mu * C1_1ab)
    sol = sp.solve(eqs, list(sa) + list(ta) + list(S) + list(T), dict=True)[0]
    return {
        "sigma_a": vec(sa.subs(sol)),
        "tau_a": vec(ta.subs(sol)),
        "sigma_ab": mat(S.subs(sol)),
        "tau_ab": mat(T.subs(sol)),
    }


Z2 = sp.zeros(2, 2)
z2 = sp.zeros(2, 1)
out["forms_n4"] = solve_forms(sp.eye(2), sp.diag(1, -1), 1, 0, z2, Z2, Z2, z2, Z2, sp.eye(2), z2, Z2)

R = sp.Rational
g3 = sp.Matrix([[2, R(1, 2), 0], [R(1, 2), 1, R(1, 4)], [0, R(1, 4), R(3, 2)]])
lam3 = sp.Matrix([[1, R(1, 3), 0], [R(1, 3), -R(1, 2), R(1, 5)], [0, R(1, 5), R(2, 7)]])
lam3 = lam3 - (g3.inv() * lam3).trace() / 3 * g3
hm3 = g3.inv() * lam3
mu3 = (hm3 * hm3).trace() / 3
case = {
    "g": g3, "lambda": lam3, "nu": R(3, 4),
    "C_11a": sp.Matrix([R(1, 2), -1, R(1, 3)]),
    "C_1ab": sp.Matrix([[0, 1, R(1, 2)], [R(1, 4), 0, -1], [R(2, 3), R(1, 5), 1]]),
    "C1_11a": sp.Matrix([1, 0, -R(1, 2)]),
    "C1_1ab": sp.Matrix([[0, R(1, 3), -1], [-R(1, 3), 0, R(1, 2)], [1, -R(1, 2), 0]]),
    "nu_ab": sp.Matrix([[1, R(1, 2), 0], [R(1, 2), 2, R(1, 3)], [0, R(1, 3), -1]]),
    "rho_a": sp.Matrix([R(1, 3), R(1, 2), -1]),
    "rho_ab": sp.Matrix([[R(1, 2), 0, 1], [0, -1, R(1, 4)], [1, R(1, 4), 2]]),
}
res = solve_forms(g3, hm3, mu3, case["nu"], case["C_11a"], case["C_1ab"], None, case["C1_11a"],
                  case["C1_1ab"], case["nu_ab"], case["rho_a"], case["rho_ab"])
out["forms_m3"] = {"input": {k: (mat(v) if isinstance(v, sp.Matrix) and v.shape[1] > 1 else
                                 vec(v) if isinstance(v, sp.Matrix) else flt(v))
                             for k, v in case.items()},
                   "mu": flt(mu3), **res}

# pencil roots of a random m=5 pair via the characteristic polynomial
rng = np.random.default_rng(20261019)
A = rng.standard_normal((5, 5))
G = A @ A.T / 5 + np.eye(5)
B = rng.standard_normal((5, 5))
L = (B + B.T) / 2
coeffs = np.poly(np.linalg.solve(G, L))
roots = np.roots(coeffs)
out["pencil_m5"] = {"g": G.tolist(), "lambda": L.tolist(),
                    "roots": sorted(roots.real.tolist()), "max_imag": float(np.max(np.abs(roots.imag)))}

# ellipsoid null-normal congruence foci, symbolic second derivatives
u1, u2 = sp.symbols("u1 u2")
ax = [sp.Integer(1), R(3, 2), R(11, 5)]
th = sp.Matrix([sp.cos(u1), sp.sin(u1) * sp.cos(u2), sp.sin(u1) * sp.sin(u2)])
y = sp.Matrix([ax[i] * th[i] for i in range(3)])
n0 = sp.Matrix([th[i] / ax[i] for i in range(3)])
nu_s = n0 / sp.sqrt(n0.dot(n0))
yu = [y.diff(u1), y.diff(u2)]
pt = {u1: R(9, 10), u2: R(2, 5)}
I1 = sp.Matrix(2, 2, lambda a, b: yu[a].dot(yu[b])).subs(pt)
II = sp.Matrix(2, 2, lambda a, b: y.diff([u1, u2][a]).diff([u1, u2][b]).dot(nu_s)).subs(pt)
kap = np.linalg.eigvals(np.linalg.solve(np.array(I1, dtype=float), -np.array(II, dtype=float)))
r = 0.3
out["ellipsoid_foci"] = {"axes": [flt(a) for a in ax], "u": [0.9, 0.4], "r": r,
                         "s": sorted((kap / (1 + r * kap)).real.tolist())}
out["sphere_focus"] = {"R": 2.0, "r": 0.5, "s": 1.0 / 2.5}

out["cartan_Q"] = {str(n): (n - 1) * (n - 2) // 2 for n in range(4, 13)}

print(json.dumps(out, indent=1, sort_keys=True))
