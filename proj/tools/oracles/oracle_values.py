"""Independent reference values for the unit tests (mpmath / numpy / scipy).

Run: python3 tools/oracles/oracle_values.py
"""
from fractions import Fraction
from itertools import combinations
import math

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

mp.mp.dps = 50


def lb(n, k):
    if n == -1 and k == -1:
        return mp.mpf(0)
    return mp.log(mp.binomial(n, k), 2)


def micro(E, W, Eb, Wb):
    return (mp.log(E + 1, 2) + mp.log(W - E + 1, 2) + lb(E, Eb) + lb(Wb - 1, Eb - 1)
            + lb(W - Wb - 1, E - Eb - 1))


def geometric(E, W, Eb, Wb):
    return (mp.log(E + 1, 2) + mp.log(Wb + 1, 2) + mp.log(W - Wb + 1, 2) + lb(E, Eb)
            + lb(Wb, Eb) + lb(W - Wb, E - Eb))


def lf(n):
    return mp.log(mp.factorial(n), 2)


def poisson(E, W, Eb, Wb, lam, weights):
    Er, Wr = E - Eb, W - Wb
    return (mp.log(E + 1, 2) + lb(E, Eb) - 2 * mp.log(lam, 2) + (Wb + 1) * mp.log(Eb + lam, 2) - lf(Wb)
            + (Wr + 1) * mp.log(Er + lam, 2) - lf(Wr) + sum(lf(w) for w in weights))


def exponential(E, W, Eb, Wb, lam):
    Er, Wr = E - Eb, mp.mpf(W) - Wb
    return (mp.log(E + 1, 2) + lb(E, Eb) - 2 * mp.log(lam, 2) + (Eb + 1) * mp.log(Wb + lam, 2) - lf(Eb)
            + (Er + 1) * mp.log(Wr + lam, 2) - lf(Er))


def show(name, v):
    print(f"{name:55s} {mp.nstr(v, 17)}")


show("micro(4,8,1,5)", micro(4, 8, 1, 5))
show("micro(4,8,0,0)", micro(4, 8, 0, 0))
show("micro(4,8,3,3)", micro(4, 8, 3, 3))
show("micro(2,4,1,3)", micro(2, 4, 1, 3))
show("micro(4,8,4,8)", micro(4, 8, 4, 8))
show("prior lb(9,8)", lb(9, 8))
show("two stars local", 2 * micro(4, 8, 1, 5) + lb(9, 8))
show("geom(4,8,1,5)", geometric(4, 8, 1, 5))
show("geom(2,2,0,0)", geometric(2, 2, 0, 0))
show("geom(4,8,0,0)", geometric(4, 8, 0, 0))
show("exp(2,3,0,0,1)", exponential(2, 3, 0, 0, 1))
show("exp(3,5.5,1,4.0,0.5)", exponential(3, mp.mpf('5.5'), 1, mp.mpf(4), mp.mpf('0.5')))
show("pois(4,8,1,5,1,[5,1,1,1])", poisson(4, 8, 1, 5, 1, [5, 1, 1, 1]))
show("pois(4,8,0,0,1,[5,1,1,1])", poisson(4, 8, 0, 0, 1, [5, 1, 1, 1]))
show("pois(4,8,1,5,2.5,[5,1,1,1])", poisson(4, 8, 1, 5, mp.mpf('2.5'), [5, 1, 1, 1]))
show("delta micro(4,8,1,5)", micro(4, 8, 1, 6) - micro(4, 8, 1, 5))
show("delta micro(4,10,2,6)", micro(4, 10, 2, 7) - micro(4, 10, 2, 6))
show("delta geom(4,10,2,6)", geometric(4, 10, 2, 7) - geometric(4, 10, 2, 6))
show("delta pois(4,10,2,6,1)", poisson(4, 10, 2, 7, 1, []) - poisson(4, 10, 2, 6, 1, []))
show("delta exp(4,10.5,2,6.25,1)", exponential(4, mp.mpf('10.5'), 2, mp.mpf('7.25'), 1)
     - exponential(4, mp.mpf('10.5'), 2, mp.mpf('6.25'), 1))
show("eta star global", micro(4, 8, 1, 5) / max(micro(4, 8, 0, 0), micro(4, 8, 0, 0) + lb(5 + 8 - 4 - 1, 4)))
show("star local empty N=5", micro(4, 8, 0, 0) + lb(5 + 8 - 4 - 1, 4))
show("hellinger p=(1/2,1/2) q=(1,0)", mp.sqrt(mp.mpf(1) / 2 * ((mp.sqrt(0.5) - 1) ** 2 + 0.5)))

# Closed-form normalization sum of the microcanonical model for tiny (E, W).
for E in range(1, 4):
    for W in range(E, 7):
        total = Fraction(0)
        states = 0
        for Eb in range(0, E + 1):
            for Wb in range(0, W + 1):
                if Eb == 0 and Wb != 0:
                    continue
                if Eb == E and Wb != W:
                    continue
                if 0 < Eb < E and not (Eb <= Wb <= W - (E - Eb)):
                    continue
                states += 1
                total += Fraction(1, (E + 1) * (W - E + 1))
        print(f"normalization E={E} W={W}: {total} = {float(total):.15f}")


# Non-backtracking spectral radius by dense eigen-decomposition.
def nb_radius(edges, weights, p):
    half = []
    for (a, b), w in zip(edges, weights):
        half.append((a, b, w))
        half.append((b, a, w))
    n = len(half)
    B = np.zeros((n, n))
    for e, (i, j, w) in enumerate(half):
        phi = 1 - (1 - p) ** w
        for f, (k, l, _) in enumerate(half):
            if k == j and l != i:
                B[e, f] = phi
    return max(abs(np.linalg.eigvals(B)))


k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
k4m = k4[1:]
print("K4 minus edge p_c", repr(brentq(lambda p: nb_radius(k4m, [1] * 5, p) - 1, 0.3, 1, xtol=1e-15)))
print("K4 minus edge lambda(0.7)", repr(nb_radius(k4m, [1] * 5, 0.7)))
w = [1, 2, 3, 1, 2, 3]
print("K4 weights 1,2,3,1,2,3 lambda(0.3)", repr(nb_radius(k4, w, 0.3)))
print("K4 weights 1,2,3,1,2,3 p_c", repr(brentq(lambda p: nb_radius(k4, w, p) - 1, 1e-6, 1, xtol=1e-15)))
# Bowtie: two triangles sharing node 0, plus a pendant path.
bow = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (4, 5)]
print("bowtie lambda(1)", repr(nb_radius(bow, [1] * 7, 1.0)))
print("bowtie p_c", repr(brentq(lambda p: nb_radius(bow, [1] * 7, p) - 1, 1e-6, 1, xtol=1e-15)))


# Message passing fixed point on K4 minus an edge at p=0.9 by plain iteration in high precision.
def mp_fixed(edges, weights, p, n):
    half = []
    for (a, b), w in zip(edges, weights):
        half.append((a, b, w))
        half.append((b, a, w))
    u = [mp.mpf('0.5')] * len(half)
    for _ in range(2000):
        new = []
        for (i, j, w) in half:
            phi = 1 - (1 - mp.mpf(p)) ** w
            prod = mp.mpf(1)
            for f, (k, l, _) in enumerate(half):
                if k == j and l != i:
                    prod *= u[f]
            new.append(1 - phi + phi * prod)
        u = new
    S = mp.mpf(0)
    for v in range(n):
        prod = mp.mpf(1)
        for f, (k, l, _) in enumerate(half):
            if k == v:
                prod *= u[f]
        S += 1 - prod
    return S / n


show("S K4 minus edge p=0.9", mp_fixed(k4m, [1] * 5, '0.9', 4))

# Brute-force greedy/oracle examples on the star {5,1,1,1}.
ws = [5, 1, 1, 1]
best = min((micro(4, 8, len(c), sum(ws[i] for i in c)), len(c), c)
           for r in range(5) for c in combinations(range(4), r))
print("star oracle", mp.nstr(best[0], 17), best[2])
ws = [2, 2, 2, 2]
vals = sorted((micro(4, 8, len(c), sum(ws[i] for i in c)), len(c)) for r in range(5)
              for c in combinations(range(4), r))
print("flat oracle", mp.nstr(vals[0][0], 17), vals[0][1])
