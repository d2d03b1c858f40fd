"""Independent reference computations for values frozen into the C++ tests.

Run with `python3 tests/oracles/reference_values.py`. Nothing here imports
the library; every number is computed from first principles with numpy.
"""
import itertools
import math

import numpy as np


def asng_step(theta, s, gamma, delta, samples, alpha=1.5, delta_init=1.0):
    d = len(theta)
    tmin, tmax = 1.0 / d, 1.0 - 1.0 / d
    lam = len(samples)
    g = sum(u * (np.asarray(x, float) - theta) for x, u in samples) / lam
    fis = theta * (1 - theta)
    gnorm = math.sqrt(float(np.sum(g * g / fis)))
    new_theta = np.clip(theta + delta / gnorm * g, tmin, tmax)
    beta = delta / math.sqrt(d)
    s = (1 - beta) * s + math.sqrt(beta * (2 - beta)) * (g / np.sqrt(fis)) / gnorm
    gamma = (1 - beta) ** 2 * gamma + beta * (2 - beta)
    delta = min(delta * math.exp(beta * (float(s @ s) / alpha - gamma)), delta_init)
    return new_theta, s, gamma, delta


def walsh_design(d, order):
    subsets = [()]
    for k in range(1, order + 1):
        subsets += list(itertools.combinations(range(d), k))
    pts = list(itertools.product([0, 1], repeat=d))
    phi = np.array([[(-1) ** sum(x[i] for i in sub) for sub in subsets] for x in pts], float)
    return pts, phi


def constrained_optimum(d, objective, safety):
    best, arg = -math.inf, None
    for x in itertools.product([0, 1], repeat=d):
        if safety(x) >= 0 and objective(x) > best:
            best, arg = objective(x), x
    return best, arg


def conflicting(x):
    d = len(x)
    return d // 8 - sum(x[d - i] for i in range(1, d // 4 + 1))


def compatible(x):
    d = len(x)
    return sum(x[d // 2:]) - d // 4


def leading_ones(x):
    n = 0
    for b in x:
        if not b:
            break
        n += 1
    return n


def main():
    theta, s, gamma, delta = asng_step(np.full(4, 0.5), np.zeros(4), 0.0, 1.0,
                                       [((1, 1, 0, 0), 1.0), ((0, 0, 0, 0), -1.0)])
    print("asng d=4 theta", theta.tolist())
    print("asng d=4 s", s.tolist(), "gamma", gamma, "delta", repr(delta))

    print("inflate half", repr(10 ** 0.5))

    _, phi = walsh_design(3, 1)
    y = np.array([sum(x) for x in itertools.product([0, 1], repeat=3)], float)
    w = np.linalg.solve(phi.T @ phi, phi.T @ y)
    print("onemax d=3 R=1 coefficients", w.tolist())

    print("onemax d=10 conflicting", constrained_optimum(10, sum, conflicting))
    print("leadingones d=10 conflicting", constrained_optimum(10, leading_ones, conflicting))
    binval = lambda x: sum(2 ** i * b for i, b in enumerate(x))
    print("binval d=10 compatible", constrained_optimum(10, binval, compatible))

    p00 = 0.1 * 0.9
    print("projection r", 0.9 * 0.9 - p00, 0.1 * 0.1 - p00)


if __name__ == "__main__":
    main()
