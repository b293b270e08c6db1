"""Frozen forced-vs-printed differences and the discrepancy ledger.

Every expression here was computed by the engine and then independently
verified (two assembly routes, matrix-trace oracle, Gamma-moment oracle,
contour quadrature at random atom values) before being frozen.  The test
suite re-checks each one; the report embeds the ledger so every
"diff (ledgered)" verdict is auditable.
"""

from __future__ import annotations

from .clifford import CliffordElement
from .scalars import (
    ScalarExpr,
    f_pow,
    fh_pow,
    h_pow,
    omega4,
    pi_atom,
    sc,
)
from .symbols import SymbolExpr, xim_norm


def _c_of_d(u: ScalarExpr) -> CliffordElement:
    return CliffordElement.covector([u.derive_x(j) for j in range(1, 7)])


def _grad_dot(u: ScalarExpr, v: ScalarExpr) -> ScalarExpr:
    out = ScalarExpr.zero()
    for j in range(1, 7):
        out = out + u.derive_x(j) * v.derive_x(j)
    return out


def _lap(u: ScalarExpr) -> ScalarExpr:
    out = ScalarExpr.zero()
    for j in range(1, 7):
        out = out + u.derive_x(j).derive_x(j)
    return out


def sigma6_diff() -> SymbolExpr:
    """Forced minus printed order -6 expansion, in composite form.

    Eight composite classes; the last one (second-derivative Clifford
    content) is absent from the printed expansion altogether.
    """
    from .tables import (
        _contracted_scalar,
        _dfh,
        _dh,
        _second_deriv_line,
        _st,
        _xi_cliff,
        _xim,
        _xixi_scalar,
    )

    f = f_pow(1)
    out = SymbolExpr.zero()
    # printed 44, forced 48
    out = out + _xixi_scalar(fh_pow(-6) * f * sc(4), _dh, _dfh, -4)
    # printed -42, forced -48
    out = out + _xixi_scalar(fh_pow(-6) * sc(-6), _dfh, _dfh, -4)
    # printed +2, forced -4
    out = out + _second_deriv_line(
        fh_pow(-2) * sc(-6),
        lambda j, l: fh_pow(-2).derive_x(j).derive_x(l), -4)
    # printed 14, forced 12
    out = out + _xi_cliff(fh_pow(-6) * f * sc(-2), _dh, -4)
    # printed -28, forced -24
    out = out + _xi_cliff(fh_pow(-6) * sc(4), _dfh, -4)
    # printed -4, forced -3
    cdhf = _c_of_d(fh_pow(1))
    cxi = SymbolExpr.xi_covector()
    piece = cxi.cliff_lmul(cdhf)
    out = out + piece.mul(piece).scale(fh_pow(-6)).mul(
        _st(xim_norm(-4), ScalarExpr.one()))
    # printed -10, forced -12
    out = out + _contracted_scalar(fh_pow(-6) * f * sc(-2), _dh, _dfh, -3)
    # class missing from the printed expansion
    for mu in range(1, 7):
        cd = _c_of_d(fh_pow(1).derive_x(mu))
        out = out + cxi.cliff_lmul(cd).scale(fh_pow(-5) * sc(6)).mul(
            _st(_xim([(mu, 1)], -4), ScalarExpr.one()))
    return out


def density_diff() -> ScalarExpr:
    """Forced density minus the printed assembled density (pi^3 units)."""
    f, h, fh = f_pow(1), h_pow(1), fh_pow(1)
    return (fh_pow(-6) * f * sc(-1) * _grad_dot(h, fh)
            + fh_pow(-6) * h * sc(-12) * _grad_dot(f, fh)
            + fh_pow(-6) * _grad_dot(fh, fh)
            + fh_pow(-5) * sc(-1) * _lap(fh)) * sc(8) * pi_atom(3)


def boundary_case_correction() -> ScalarExpr:
    """Forced minus printed value of the order (-2,-3) boundary case.

    The normal-derivative content of the order -3 symbol survives the
    tangential parity argument; its contribution is this exact multiple of
    pi Omega_4, and the mirrored case carries the opposite sign so the two
    cancel in the total.
    """
    return (fh_pow(-5) * sc(-1, 2)
            * (f_pow(1) * h_pow(1).derive_x(6)
               + sc(3) * h_pow(1) * f_pow(1).derive_x(6))
            * pi_atom() * omega4())


def forced_boundary_value(case: str) -> ScalarExpr:
    from .tables import printed_boundary_value

    base = printed_boundary_value(case)
    if case == "b":
        return base + boundary_case_correction()
    if case == "c":
        return base - boundary_case_correction()
    return base


def normal_derivative_order2_printed() -> str:
    return "d[6][(fh)^-2]/(1+xin^2) + ((fh)^-2*wp)/(1+xin^2)^2"


def normal_derivative_order2_forced() -> str:
    return "d[6][(fh)^-2]/(1+xin^2) - ((fh)^-2*wp)/(1+xin^2)^2"


def ledger_entries() -> list[dict]:
    """Machine-readable list of printed values contradicted by the algebra."""
    entries = [
        {
            "location": "qinv/order-4/second-derivative-term",
            "printed": "+8*(fh)^-3*f*|xi|^-6*sum_jl d[j]d[l](fh)*xi_j*xi_l",
            "forced": "+8*(fh)^-3*|xi|^-6*sum_jl d[j]d[l](fh)*xi_j*xi_l",
            "note": ("the printed factor f breaks the scaling weight of the "
                     "order -4 inverse symbol and is not produced by the "
                     "recursion; the assembled order -6 expansion uses the "
                     "corrected coefficient"),
        },
        {
            "location": "sigma6/line-04",
            "printed": "coefficient 44 on (fh)^-6*f*d[j]h*d[l](fh)*xi_j*xi_l*|xi|^-8",
            "forced": "coefficient 48",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/line-05",
            "printed": "coefficient -10 on (fh)^-6*f*sum_j d[j]h*d[j](fh)*|xi|^-6",
            "forced": "coefficient -12",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/line-11",
            "printed": "coefficient 14 on (fh)^-6*f*d[j]h*xi_j*c(d(hf))c(xi)*|xi|^-8",
            "forced": "coefficient 12",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/line-12",
            "printed": "coefficient -28 on (fh)^-6*d[j](fh)*xi_j*c(d(hf))c(xi)*|xi|^-8",
            "forced": "coefficient -24",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/line-13",
            "printed": "coefficient -4 on (fh)^-6*[c(d(hf))c(xi)]^2*|xi|^-8",
            "forced": "coefficient -3",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/line-17",
            "printed": "coefficient +2 on (fh)^-2*d[j]d[l][(fh)^-2]*xi_j*xi_l*|xi|^-8",
            "forced": "coefficient -4",
            "note": ("the reduced assembly formula itself carries -4; the "
                     "sphere-integral item uses -4 as well, so the printed "
                     "+2 does not propagate to the printed density"),
        },
        {
            "location": "sigma6/line-18",
            "printed": "coefficient -42 on (fh)^-6*d[j](fh)*d[l](fh)*xi_j*xi_l*|xi|^-8",
            "forced": "coefficient -48",
            "note": "forced by both assembly routes",
        },
        {
            "location": "sigma6/missing-second-derivative-clifford-class",
            "printed": "absent",
            "forced": "+6*(fh)^-5*|xi|^-8*sum_mu c(d(d[mu](fh)))c(xi)*xi_mu",
            "note": ("three times the corresponding order -4 term; dropped "
                     "from the printed expansion"),
        },
        {
            "location": "interior/term-08",
            "printed": "4*(fh)^-2*f*g(grad[(fh)^-3],grad[h]) * tr[id] * area(S_6)",
            "forced": "4*(fh)^-2*g(grad[(fh)^-3],grad[fh]) * tr[id] * area(S_6)",
            "note": ("the printed grouping replaces grad(fh) by f*grad(h), "
                     "losing the h*grad(f) half of the product rule"),
        },
        {
            "location": "interior/term-13",
            "printed": "-2/3*(fh)^-6*|grad[fh]|^2 * tr[id] * area(S_6)",
            "forced": "+8/3*(fh)^-6*|grad[fh]|^2 * tr[id] * area(S_6)",
            "note": ("the printed trace step drops the -4(fh)^-6 prefactor "
                     "and the |u|^2|xi|^2 part of the four-generator trace"),
        },
        {
            "location": "interior/term-17",
            "printed": "-2/3*(fh)^-2*lap[(fh)^-2] * tr[id] * area(S_6)",
            "forced": "+1/3*(fh)^-2*lap[(fh)^-2] * tr[id] * area(S_6)",
            "note": ("forced integral of the printed expansion line (+2); "
                     "the printed item value is consistent with the reduced "
                     "assembly coefficient -4 instead"),
        },
        {
            "location": "interior/theorem-density",
            "printed": "the assembled reference density",
            "forced": ("printed + 8*pi^3*[ -(fh)^-6*f*g(grad[h],grad[fh]) "
                       "- 12*(fh)^-6*h*g(grad[f],grad[fh]) "
                       "+ (fh)^-6*|grad[fh]|^2 - (fh)^-5*lap[fh] ]"),
            "note": ("net effect of the ledgered expansion and item "
                     "discrepancies; vanishes when fh is constant, in "
                     "particular for f = h = 1"),
        },
        {
            "location": "boundary/normal-derivative-order-2",
            "printed": normal_derivative_order2_printed(),
            "forced": normal_derivative_order2_forced(),
            "note": ("chain rule on |xi|^-2 with d_n|xi|^2 = w'(0)|xi'|^2 "
                     "forces the minus sign"),
        },
        {
            "location": "boundary/pi-plus-second-order",
            "printed": "pi+[1/(1+xin^2)^2] = +(2+i*xin)/(4*(xin-i)^2)",
            "forced": "pi+[1/(1+xin^2)^2] = -(2+i*xin)/(4*(xin-i)^2)",
            "note": ("principal part at +i; this sign and the "
                     "normal-derivative sign cancel, so the printed "
                     "projected normal derivative and the printed second "
                     "case value are both reproduced exactly"),
        },
        {
            "location": "boundary/case-b",
            "printed": "-15/8*(fh)^-4*wp*pi*Om4",
            "forced": ("-15/8*(fh)^-4*wp*pi*Om4 "
                       "- 1/2*(fh)^-5*(f*d[6]h + 3*h*d[6]f)*pi*Om4"),
            "note": ("the normal-derivative terms of the order -3 symbol "
                     "are even in the tangential variables and survive the "
                     "parity argument used to drop them"),
        },
        {
            "location": "boundary/case-c",
            "printed": "+15/8*(fh)^-4*wp*pi*Om4",
            "forced": ("+15/8*(fh)^-4*wp*pi*Om4 "
                       "+ 1/2*(fh)^-5*(f*d[6]h + 3*h*d[6]f)*pi*Om4"),
            "note": ("mirror of case b; the two corrections cancel, so the "
                     "vanishing of the total boundary term is unaffected"),
        },
    ]
    return entries
