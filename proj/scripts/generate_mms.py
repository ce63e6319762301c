#!/usr/bin/env python3
"""Generates the closed-form manufactured-solution sources in src/mms.cpp.

The manufactured fields are the Taylor-Green-like pair used by the
convergence cases:

    c = (1 + cos(pi x) cos(pi y) sin(t)) / 2
    u = 2 sin(pi x) cos(pi y) sin(t)
    v = -2 cos(pi x) sin(pi y) sin(t)
    w = 0
    p = 2 sin(pi x) sin(pi y) cos(t)

The source of each equation is the strong-form residual of the governing
system evaluated on these fields. Run this script and paste the printed
bodies into src/mms.cpp when the fields or the model change.
"""

import sympy as sp
from sympy.printing.cxx import CXX17CodePrinter

x, y, t = sp.symbols("x y t", real=True)
rho1, rho2, eta1, eta2, sigma, eps, m0, rc2 = sp.symbols(
    "rho1 rho2 eta1 eta2 sigma eps m0 rc2", positive=True
)

c = (1 + sp.cos(sp.pi * x) * sp.cos(sp.pi * y) * sp.sin(t)) / 2
u = 2 * sp.sin(sp.pi * x) * sp.cos(sp.pi * y) * sp.sin(t)
v = -2 * sp.cos(sp.pi * x) * sp.sin(sp.pi * y) * sp.sin(t)
p = 2 * sp.sin(sp.pi * x) * sp.sin(sp.pi * y) * sp.cos(t)

rho = rho1 * c + rho2 * (1 - c)
eta = eta1 * c + eta2 * (1 - c)
sq = sp.sqrt(rho)

f0p = (12 * sigma / eps) * (2 * c - 6 * c**2 + 4 * c**3)
lap_c = sp.diff(c, x, 2) + sp.diff(c, y, 2)
mu = f0p - sp.Rational(3, 2) * sigma * eps * lap_c
lap_mu = sp.diff(mu, x, 2) + sp.diff(mu, y, 2)

s11 = sp.diff(u, x)
s12 = (sp.diff(u, y) + sp.diff(v, x)) / 2
s22 = sp.diff(v, y)

src_c = sp.diff(c, t) + sp.diff(c * u, x) + sp.diff(c * v, y) - m0 * lap_mu
src_mx = (
    sq * sp.diff(sq * u, t)
    + sp.diff(rho * u * u / 2 + p, x)
    + sp.diff(rho * u * v / 2, y)
    + (rho / 2) * (u * sp.diff(u, x) + v * sp.diff(u, y))
    + c * sp.diff(mu, x)
    - sp.diff(2 * eta * s11, x)
    - sp.diff(2 * eta * s12, y)
)
src_my = (
    sq * sp.diff(sq * v, t)
    + sp.diff(rho * u * v / 2, x)
    + sp.diff(rho * v * v / 2 + p, y)
    + (rho / 2) * (u * sp.diff(v, x) + v * sp.diff(v, y))
    + c * sp.diff(mu, y)
    - sp.diff(2 * eta * s12, x)
    - sp.diff(2 * eta * s22, y)
)
src_p = sp.diff(p, t) + rc2 * (sp.diff(u, x) + sp.diff(v, y))

rate = [sp.diff(c, t), sp.diff(sq * u, t), sp.diff(sq * v, t), sp.S(0), sp.diff(p, t)]

printer = CXX17CodePrinter()


def emit(name, expr):
    expr = sp.simplify(expr) if expr.count_ops() < 400 else sp.cancel(expr)
    print(f"// {name}")
    print(printer.doprint(expr, assign_to=name))
    print()


for name, expr in [
    ("src[0]", src_c),
    ("src[1]", src_mx),
    ("src[2]", src_my),
    ("src[4]", src_p),
    ("rate[0]", rate[0]),
    ("rate[1]", rate[1]),
    ("rate[2]", rate[2]),
    ("rate[4]", rate[4]),
    ("mu_exact", mu),
]:
    emit(name, expr)
