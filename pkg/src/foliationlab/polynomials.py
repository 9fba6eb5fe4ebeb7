"""Sparse bivariate polynomials as exponent-to-coefficient maps.

Coefficients may be ints, Fractions, floats or complex numbers.  The chart
changes used elsewhere only relabel exponents and take differences of
coefficients, so exact input coefficients stay exact until a root finder or
an ODE solver touches them.
"""

from __future__ import annotations

import numpy as np

Coeffs = dict  # {(i, j): coefficient}


def clean(coeffs: Coeffs) -> Coeffs:
    """Drop exactly-zero terms."""
    return {k: c for k, c in coeffs.items() if c != 0}


def total_degree(coeffs: Coeffs) -> int:
    """Total degree, or -1 for the zero polynomial."""
    nz = clean(coeffs)
    if not nz:
        return -1
    return max(i + j for i, j in nz)


def poly_add(a: Coeffs, b: Coeffs) -> Coeffs:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return clean(out)


def poly_scale(a: Coeffs, s) -> Coeffs:
    return clean({k: s * c for k, c in a.items()})


def poly_mul(a: Coeffs, b: Coeffs) -> Coeffs:
    out = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + c * d
    return clean(out)


def poly_eval(coeffs: Coeffs, x: complex, y: complex) -> complex:
    acc = 0j
    for (i, j), c in coeffs.items():
        acc += c * x**i * y**j
    return acc


def poly_diff(coeffs: Coeffs, var: int) -> Coeffs:
    """Partial derivative; var 0 = first variable, 1 = second."""
    out = {}
    for (i, j), c in coeffs.items():
        e = (i, j)[var]
        if e == 0:
            continue
        key = (i - 1, j) if var == 0 else (i, j - 1)
        out[key] = out.get(key, 0) + e * c
    return out


def univariate_coeffs(coeffs: Coeffs, var: int) -> np.ndarray:
    """Ascending coefficient array for a polynomial constant in the other variable.

    Raises ValueError if any term involves the other variable.
    """
    other = 1 - var
    deg = -1
    for (i, j) in clean(coeffs):
        if (i, j)[other] != 0:
            raise ValueError("polynomial is not univariate in the requested variable")
        deg = max(deg, (i, j)[var])
    out = np.zeros(deg + 1 if deg >= 0 else 1, dtype=complex)
    for (i, j), c in coeffs.items():
        out[(i, j)[var]] += complex(c)
    return out


def univariate_eval(c: np.ndarray, z: complex) -> complex:
    """Horner evaluation of an ascending coefficient array."""
    acc = 0j
    for a in c[::-1]:
        acc = acc * z + a
    return acc


def univariate_diff(c: np.ndarray) -> np.ndarray:
    if len(c) <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c))


def univariate_roots(c: np.ndarray, polish_steps: int = 5) -> np.ndarray:
    """Roots of an ascending-coefficient polynomial.

    Companion-matrix eigenvalues (numpy.roots) followed by a few Newton
    polishing steps for reproducible accuracy.
    """
    c = np.trim_zeros(np.asarray(c, dtype=complex), "b")
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    dc = univariate_diff(c)
    for _ in range(polish_steps):
        vals = np.array([univariate_eval(c, r) for r in roots])
        ders = np.array([univariate_eval(dc, r) for r in roots])
        ok = np.abs(ders) > 1e-300
        roots[ok] = roots[ok] - vals[ok] / ders[ok]
    return roots
