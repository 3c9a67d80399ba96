#!/usr/bin/env python3
"""High-precision reference values for the special functions and detector
matrix elements. Everything here is computed with mpmath at >= 60 digits,
straight from the defining formulas (no shared code with the Rust side).

    python3 scripts/oracle.py            # rewrites crates/core/tests/data/*.csv
"""
import os
from mpmath import mp, mpf, mpc, erfc, erf, exp, sqrt, pi, quad, im, re, nstr, sin, conj

mp.dps = 80
OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "data")


def dawson(x):
    x = mpf(x)
    # D(x) = sqrt(pi)/2 * exp(-x^2) * erfi(x), erfi(x) = -i erf(ix)
    return sqrt(pi) / 2 * exp(-x * x) * im(erf(mpc(0, x)))


def faddeeva(z):
    z = mpc(z)
    return exp(-z * z) * erfc(-1j * z)


def fmt(v):
    return nstr(v, 25, min_fixed=-1, max_fixed=-1) if v != 0 else "0"


def special_rows():
    rows = []
    for x in [-6, -3, -1, -0.46875, -0.3, 0, 1e-8, 0.1, 0.46875, 0.5, 1, 2,
              3.9, 4, 4.1, 5, 10, 15, 20, 26]:
        rows.append(("erfc", x, 0, erfc(mpf(x)), 0))
    for x in [1e-10, 1e-3, 0.1, 0.19, 0.2, 0.21, 0.5, 1, 1.5, 2, 3, 5, 7, 10,
              20, 29, 31, 50, 100, 1e4, -1, -3]:
        rows.append(("dawson", x, 0, dawson(x), 0))
    wpts = [
        (0, 0), (0, 1), (1e-4, 1), (2e-4, 0.3), (1e-4, 1e-4), (4e-4, 2.5),
        (1, 1), (2, 0.5), (3, 2), (0.5, 0.05), (5, 0.01), (5.9, 0.1),
        (1, 4.9), (1, 5.1), (2, 6.9), (0.3, 6.5), (4, 1e-6),
        (1, 0), (3, 0), (5.5, 0), (9, 0), (15, 0), (27, 0), (30, 0),
        (6.0000001, 0.1000001), (6.0000001, 0.0999999), (7.9999, 1e-9),
        (8.0001, 1e-9), (8.0001, 1e-11), (12, 1e-11), (12, 1e-9),
        (27.9, 1e-12), (28.1, 1e-12), (1, 7.0000001), (1, 6.9999999),
        (10, 10), (3, 8), (0, 20), (50, 1), (100, 0.5), (2000, 3000),
        (1, -1), (2, -0.5), (0.5, -3), (-3, -1),
        (-2, 1), (-7, 0.5), (-1e-4, 0.2), (-12, 1e-11),
    ]
    for x, y in wpts:
        v = faddeeva(mpc(x, y))
        rows.append(("w", x, y, re(v), im(v)))
    epts = [
        (1, 1), (0, 1), (0.5, -2), (-1.5, 0.3), (3, 3), (0.05, 0.005),
        (0.001, 1.5), (2, 0), (1e-3, 0.5), (-0.07, 0.002), (4.5, -1.2),
        (0.3, 5.8), (-2.5, -2.5), (1e-5, 1e-5),
    ]
    for x, y in epts:
        v = erf(mpc(x, y))
        rows.append(("erf", x, y, re(v), im(v)))
    return rows


LAMBDA = mpf("0.1")


def p_exact(omega):
    o = mpf(omega)
    return LAMBDA**2 / (4 * pi) * (exp(-o * o) - sqrt(pi) * o * erfc(o))


def c_exact(omega, length):
    # erf(omega + iL/2) grows like e^{L^2/4}; the bracket cancels to O(1/L),
    # so carry enough digits to absorb that loss.
    with mp.workdps(80 + int(length**2 / 4 / 2.3)):
        return +_c_exact(mpf(omega), mpf(length))


def _c_exact(o, l):
    pref = LAMBDA**2 / (4 * sqrt(pi) * l) * exp(-l * l / 4)
    return pref * (im(exp(1j * o * l) * erf(mpc(o, l / 2))) - sin(o * l))


def x_exact(omega, length):
    with mp.workdps(80 + int(length**2 / 4 / 2.3)):
        return +_x_exact(mpf(omega), mpf(length))


def _x_exact(o, l):
    return 1j * LAMBDA**2 / (4 * sqrt(pi) * l) * exp(-o * o - l * l / 4) * (1 + erf(mpc(0, l / 2)))


def detector_rows():
    rows = []
    for o in [-2, -1, 0, 0.5, 1, 2, 3, 5, 10]:
        rows.append(("P", o, 0, p_exact(o), 0))
    for o, l in [(2, 4), (0, 1), (0, 7), (1, 0.1), (1, 3), (-1, 2), (-2, 5),
                 (3, 0.5), (3.5, 7), (5, 12), (0.5, 20), (-0.5, 15), (2, 40)]:
        rows.append(("C", o, l, c_exact(o, l), 0))
    for o, l in [(0, 2), (0, 20), (2, 4), (-1, 0.5), (3, 10), (1, 1e-4)]:
        v = x_exact(o, l)
        rows.append(("X", o, l, re(v), im(v)))
    return rows


def write(name, header, rows):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write(header + "\n")
        for kind, a, b, vr, vi in rows:
            f.write(f"{kind},{a!r},{b!r},{fmt(vr)},{fmt(vi)}\n")
    print(f"wrote {len(rows)} rows to {os.path.normpath(path)}")


if __name__ == "__main__":
    write("special_oracle.csv", "func,x,y,re,im", special_rows())
    write("detector_oracle.csv", "quantity,gap,length,re,im", detector_rows())
