"""Independent oracle for the jet and compatibility formulas on axisymmetric data.

Sphere calculus is done symbolically in theta (no spectral transforms);
the results at a few colatitudes are printed at 20 digits and frozen into
tests/test_expansion.py. Run with sympy installed.
"""

import sympy as sp

th = sp.symbols("theta")


def lap(u):
    return sp.diff(sp.sin(th) * sp.diff(u, th), th) / sp.sin(th)


def gd(u, v):
    return sp.diff(u, th) * sp.diff(v, th)


def jets(f, H0):
    h2 = H0**-2
    f1 = -(h2 + gd(f, f)) / 2
    Ls = -h2 * (lap(f) + gd(H0, f) / H0)
    f2 = -Ls / 2 - gd(f1, f)
    Lss = (
        -sp.Rational(9, 2) * H0**2 * Ls**2
        - 4 * (Ls * lap(f) + h2 * lap(f1))
        + 2 * gd(Ls, f)
        + 2 * gd(h2, f1)
        + 4 * h2 * f1
    )
    f3 = -Lss / 2 - gd(f2, f) - gd(f1, f1) - f1**2
    res = (
        sp.Rational(5, 2) * Lss * lap(f)
        + sp.Rational(3, 4) * H0**4 * Ls**3
        - 4 * Ls * lap(f1)
        - 2 * h2 * lap(f2)
        + 6 * Ls * f1
        + gd(Lss, f)
        + 2 * gd(Ls, f1)
        + sp.Rational(9, 2) * gd(H0, f) * Lss / H0
        + gd(h2, f2)
    )
    return f1, f2, f3, res


def Y(l):
    return sp.sqrt((2 * l + 1) / (4 * sp.pi)) * sp.legendre(l, sp.cos(th))


CASES = {
    "const_H": (sp.Rational(3, 10) * Y(2) + sp.Rational(1, 5) * Y(1), sp.Integer(1)),
    "var_H": (sp.Rational(3, 10) * Y(2), 1 + sp.cos(th) / 10),
}
THETAS = ("0.3", "1.0", "2.0")

if __name__ == "__main__":
    for name, (f, H0) in CASES.items():
        f1, f2, f3, res = jets(f, H0)
        for t in THETAS:
            vals = [sp.N(e.subs(th, sp.Rational(t)), 20) for e in (f1, f2, f3, res)]
            print(name, t, [str(v) for v in vals])
