"""Thermodynamic-limit XX chain and the (kT, B) entanglement region.

The infinite XX chain has a closed-form free energy as one integral over
the Brillouin zone. With K = J/kT and C = B/kT the dimensionless
dispersion is

    f(w) = sqrt(2K^2 + 2K^2 cos 2w - 4CK cos w + C^2) = |2K cos w - C|

and, per site,

    lnZ = (1/pi) int_0^pi ln(2 cosh f) dw
    U   = -(kT/pi) int_0^pi f tanh(f) dw
    M   = (1/pi) int_0^pi tanh(f) (C - 2K cos w) / f dw.

The magnetization above is the lnZ field-derivative and simplifies to
-(1/pi) int tanh(2K cos w - C) dw. A differently printed variant,
-(1/pi) int (4K^2 cos^2 w / f) tanh(f) dw, is kept behind ``as_printed``
for side-by-side reporting only: it is nonzero at B = 0 and even in B, so
it cannot be the physical magnetization (see README).

The witness W = |U + B*M| / |J| (per site) collapses to a single smooth
integral,

    W = (2/pi) | int_0^pi cos(w) tanh(2K cos w - C) dw |,

whose T -> 0 limit is (4/pi) sqrt(1 - (B/2J)^2) for |B| < 2|J| and 0
beyond. Hence the entangled region touches kT = 0 out to the critical
field B_c = 2 sqrt(1 - pi^2/16) |J| and B = 0 up to kT_c of order |J|.

U is exactly even in both K and C, and M even in K and odd in C; all
integrals are evaluated at (|K|, |C|) with M's sign restored afterwards,
which makes W(J,B) = W(-J,B) = W(J,-B) hold bit-for-bit.

The ferromagnetic XXX chain's low-temperature closed forms
(lowtemp_ferro_*) also live here; they exhibit W -> 1 from below as
N -> infinity, i.e. the witness never fires on the ferromagnet.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .model import SpecError, ThermalPoint, to_dimensionless
from .quadrature import (
    DEFAULT_ABS_TOL,
    QuadratureError,
    adaptive_quadrature,
    adaptive_quadrature_split,
)
from .witness import (
    SOURCE_LOWTEMP_APPROX,
    WitnessReport,
    per_site_witness_report,
    witness_value,
)

MAGNETIZATION_LNZ_DERIVATIVE = "lnz-derivative"
MAGNETIZATION_AS_PRINTED = "as-printed"

DEFAULT_BISECTION_RESIDUAL = 1e-6


def dispersion_f(coupling_over_kt, field_over_kt, omega):
    """Dimensionless dispersion f(K, C, w), literal square-root form.

    Algebraically equal to |2K cos w - C|; the radicand is clipped at zero
    to absorb roundoff near that kink.
    """
    k, c = float(coupling_over_kt), float(field_over_kt)
    omega = np.asarray(omega, dtype=float)
    radicand = (2.0 * k * k + 2.0 * k * k * np.cos(2.0 * omega)
                - 4.0 * c * k * np.cos(omega) + c * c)
    return np.sqrt(np.clip(radicand, 0.0, None))


def _ln_2cosh(x):
    """ln(2 cosh x), overflow-safe: |x| + log1p(exp(-2|x|))."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


def _tanh_over(f):
    """tanh(f)/f for f >= 0, with the f -> 0 limit value 1 (error < 1e-16)."""
    f = np.asarray(f, dtype=float)
    safe = np.where(f > 1e-8, f, 1.0)
    return np.where(f > 1e-8, np.tanh(safe) / safe, 1.0)


def _kink_splits(k: float, c: float):
    """Interior zeros of 2K cos w - C on (0, pi), where f has its kink."""
    if k != 0.0 and abs(c) <= 2.0 * abs(k):
        return (math.acos(c / (2.0 * k)),)
    return ()


def xx_log_partition_density(coupling_over_kt, field_over_kt,
                             abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """lnZ per site: (1/pi) int_0^pi ln(2 cosh f) dw.

    lnZ is exactly even in both K and C (substitute w -> pi - w), so the
    integral is taken at (|K|, |C|).
    """
    k, c = abs(float(coupling_over_kt)), abs(float(field_over_kt))

    def integrand(omega):
        return _ln_2cosh(2.0 * k * np.cos(omega) - c)

    value = adaptive_quadrature_split(integrand, 0.0, math.pi, _kink_splits(k, c),
                                      abs_tol=abs_tol)
    return value / math.pi


def xx_internal_energy(kt, b, j, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """U per site: -(kT/pi) int_0^pi f tanh(f) dw.

    The integrand x tanh(x) with x = 2K cos w - C is even in x, hence
    smooth through the f-kink, and U is even in both J and B.
    """
    point = to_dimensionless(j, b, kt)
    k, c = abs(point.coupling_over_kt), abs(point.field_over_kt)

    def integrand(omega):
        x = 2.0 * k * np.cos(omega) - c
        return x * np.tanh(x)

    value = adaptive_quadrature(integrand, 0.0, math.pi, abs_tol=abs_tol)
    return -float(kt) * value / math.pi


def xx_magnetization(kt, b, j, abs_tol: float = DEFAULT_ABS_TOL,
                     as_printed: bool = False) -> float:
    """M per site in [-1, 1], from the lnZ field-derivative.

    The integrand tanh(f) (C - 2K cos w)/f is split at the f-kink
    w* = arccos(C/2K) for robustness. M is even in J and odd in B; the
    integral runs at (|K|, |C|) and the sign of B is restored, so B = 0
    returns exactly 0.

    ``as_printed=True`` instead evaluates the literal variant
    -(1/pi) int (4K^2 cos^2 w / f) tanh(f) dw at the given (K, C) with no
    symmetrization. It fails M(B=0) = 0 and the lnZ-derivative check and
    exists only so the discrepancy can be reported, never silently patched.
    """
    point = to_dimensionless(j, b, kt)
    if as_printed:
        k, c = point.coupling_over_kt, point.field_over_kt

        def printed_integrand(omega):
            f = np.abs(2.0 * k * np.cos(omega) - c)
            cos2 = np.cos(omega) ** 2
            return -4.0 * k * k * cos2 * _tanh_over(f)

        value = adaptive_quadrature_split(printed_integrand, 0.0, math.pi,
                                          _kink_splits(k, c), abs_tol=abs_tol)
        return value / math.pi

    k, c = abs(point.coupling_over_kt), abs(point.field_over_kt)

    def integrand(omega):
        x = 2.0 * k * np.cos(omega) - c
        f = np.abs(x)
        return _tanh_over(f) * (-x)

    value = adaptive_quadrature_split(integrand, 0.0, math.pi, _kink_splits(k, c),
                                      abs_tol=abs_tol)
    sign = math.copysign(1.0, point.field_over_kt) if point.field_over_kt != 0.0 else 0.0
    return sign * value / math.pi


def xx_witness(kt, b, j, abs_tol: float = DEFAULT_ABS_TOL,
               as_printed: bool = False) -> WitnessReport:
    """Thermodynamic-limit witness W = |U + B*M| / |J| per site."""
    u = xx_internal_energy(kt, b, j, abs_tol=abs_tol)
    m = xx_magnetization(kt, b, j, abs_tol=abs_tol, as_printed=as_printed)
    return per_site_witness_report(u, m, b, j)


def xx_witness_single_integral(kt, b, j, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """W via the one-integral simplification (2/pi)|int cos w tanh(2K cos w - C) dw|.

    Must agree with the two-integral route to well below 1e-8; both are
    exposed so that agreement is a checkable property rather than an
    assumption.
    """
    point = to_dimensionless(j, b, kt)
    k, c = abs(point.coupling_over_kt), abs(point.field_over_kt)

    def integrand(omega):
        return np.cos(omega) * np.tanh(2.0 * k * np.cos(omega) - c)

    value = adaptive_quadrature(integrand, 0.0, math.pi, abs_tol=abs_tol)
    return abs(2.0 * value / math.pi)


# ---------------------------------------------------------------------------
# Region scan and boundary trace (the figure-1 plane)


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Witness surface sampled over a (kT/|J|, B/|J|) grid.

    ``w`` and ``entangled`` are indexed [b_index, kt_index]. Cells whose
    quadrature failed carry W = NaN, entangled False, and an entry in
    ``cell_errors`` (b_index, kt_index, message).
    """

    kt_over_j: np.ndarray
    b_over_j: np.ndarray
    w: np.ndarray
    entangled: np.ndarray
    cell_errors: tuple[tuple[int, int, str], ...]
    abs_tol: float
    magnetization_form: str

    def to_csv(self) -> str:
        """CSV rows, row-major in B then kT; byte-stable for a given grid."""
        lines = ["kT_over_J,B_over_J,W,entangled"]
        for ib, b in enumerate(self.b_over_j):
            for ik, kt in enumerate(self.kt_over_j):
                flag = "true" if bool(self.entangled[ib, ik]) else "false"
                lines.append(f"{float(kt)!r},{float(b)!r},{float(self.w[ib, ik])!r},{flag}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "kind": "region-grid",
            "kT_over_J": [float(x) for x in self.kt_over_j],
            "B_over_J": [float(x) for x in self.b_over_j],
            "W": [[float(x) for x in row] for row in self.w],
            "entangled": [[bool(x) for x in row] for row in self.entangled],
            "cell_errors": [list(e) for e in self.cell_errors],
            "metadata": {
                "abs_tol": self.abs_tol,
                "magnetization_form": self.magnetization_form,
                "threshold": 1.0,
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            },
        }, indent=2) + "\n"


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """The W = 1 contour kT_c(B), traced by bisection at fixed B.

    ``points`` holds (B/|J|, kT_c/|J|) pairs sorted by B; B values whose
    kT window never brackets W = 1 land in ``no_crossing``. The two
    analytic endpoints travel with the curve as metadata.
    """

    points: tuple[tuple[float, float], ...]
    no_crossing: tuple[float, ...]
    residual_tol: float
    kt_window: tuple[float, float]
    zero_field_ktc: float
    zero_temperature_bc: float

    def to_csv(self) -> str:
        lines = [
            f"# zero-field endpoint: kTc_over_J = {self.zero_field_ktc!r} (root of W(kT, 0) = 1)",
            f"# zero-temperature endpoint: Bc_over_J = {self.zero_temperature_bc!r} "
            "(closed form 2*sqrt(1 - pi^2/16))",
        ]
        for b in self.no_crossing:
            lines.append(f"# no crossing: B_over_J = {float(b)!r} "
                         f"(searched kT_over_J in [{self.kt_window[0]!r}, {self.kt_window[1]!r}])")
        lines.append("B_over_J,kTc_over_J")
        for b, ktc in self.points:
            lines.append(f"{float(b)!r},{float(ktc)!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "kind": "boundary-curve",
            "points": [{"B_over_J": float(b), "kTc_over_J": float(t)} for b, t in self.points],
            "no_crossing": [float(b) for b in self.no_crossing],
            "metadata": {
                "residual_tol": self.residual_tol,
                "kt_window": list(self.kt_window),
                "zero_field_ktc": self.zero_field_ktc,
                "zero_temperature_bc": self.zero_temperature_bc,
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            },
        }, indent=2) + "\n"


def _witness_w(kt_over_j, b_over_j, abs_tol, as_printed=False) -> float:
    """W at reduced coordinates (the witness only depends on them)."""
    return xx_witness(kt_over_j, b_over_j, 1.0, abs_tol=abs_tol,
                      as_printed=as_printed).value


def region_scan(kt_over_j_values, b_over_j_values, workers: int | None = None,
                abs_tol: float = DEFAULT_ABS_TOL, as_printed: bool = False) -> RegionGrid:
    """Evaluate the witness on the full (kT/|J|, B/|J|) grid.

    Cells are independent pure integrals, so any worker count produces
    bit-identical output: the grid is assembled in enumeration order
    (row-major in B then kT), never completion order. Per-cell quadrature
    failures are recorded, not raised.
    """
    kt_values = np.asarray(kt_over_j_values, dtype=float)
    b_values = np.asarray(b_over_j_values, dtype=float)
    if kt_values.ndim != 1 or b_values.ndim != 1 or kt_values.size == 0 or b_values.size == 0:
        raise SpecError("grid axes must be non-empty 1-D arrays")
    if np.any(kt_values <= 0.0):
        raise SpecError("kT/|J| axis must be strictly positive")

    cells = [(ib, ik, float(kt), float(b))
             for ib, b in enumerate(b_values) for ik, kt in enumerate(kt_values)]

    def evaluate(cell):
        ib, ik, kt, b = cell
        try:
            return ib, ik, _witness_w(kt, b, abs_tol, as_printed), None
        except QuadratureError as exc:
            return ib, ik, float("nan"), str(exc)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            results = list(pool.map(evaluate, cells))
    else:
        results = [evaluate(cell) for cell in cells]

    w = np.empty((b_values.size, kt_values.size))
    errors = []
    for ib, ik, value, message in results:
        w[ib, ik] = value
        if message is not None:
            errors.append((ib, ik, message))
    entangled = np.where(np.isnan(w), False, w > 1.0)
    form = MAGNETIZATION_AS_PRINTED if as_printed else MAGNETIZATION_LNZ_DERIVATIVE
    return RegionGrid(kt_over_j=kt_values, b_over_j=b_values, w=w, entangled=entangled,
                      cell_errors=tuple(errors), abs_tol=abs_tol, magnetization_form=form)


def _bisect_to_residual(g, lo: float, hi: float, residual_tol: float,
                        max_iter: int = 200) -> float | None:
    """Root of g by bisection, stopping at |g(mid)| < residual_tol.

    Returns None when [lo, hi] does not bracket a sign change.
    """
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if math.copysign(1.0, g_lo) == math.copysign(1.0, g_hi):
        return None
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) < residual_tol:
            return mid
        if math.copysign(1.0, g_mid) == math.copysign(1.0, g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    raise QuadratureError(
        f"bisection did not reach residual {residual_tol:g} in {max_iter} steps")


def critical_field_zero_temperature(j: float = 1.0) -> float:
    """Closed-form T -> 0 critical field: 2 sqrt(1 - pi^2/16) |J| ~ 1.238 |J|.

    At T = 0 the witness is (4/pi) sqrt(1 - (B/2J)^2) up to B = 2|J|;
    setting it to 1 gives this field, beyond which no entanglement is
    detected at any temperature.
    """
    return 2.0 * abs(float(j)) * math.sqrt(1.0 - math.pi ** 2 / 16.0)


def critical_temperature_zero_field(j: float = 1.0,
                                    residual_tol: float = DEFAULT_BISECTION_RESIDUAL,
                                    abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """kT_c at B = 0: the root of W(kT, 0) = 1, of order |J| (~1.367 |J|)."""
    root = _bisect_to_residual(lambda t: _witness_w(t, 0.0, abs_tol) - 1.0,
                               1e-3, 5.0, residual_tol)
    if root is None:
        raise QuadratureError("W(kT, 0) = 1 not bracketed in kT/|J| within [1e-3, 5]")
    return root * abs(float(j))


def critical_field_low_temperature(kt_over_j: float = 1e-3, j: float = 1.0,
                                   residual_tol: float = DEFAULT_BISECTION_RESIDUAL,
                                   abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """Field where W crosses 1 at a small fixed kT (T -> 0 is approached).

    Converges to :func:`critical_field_zero_temperature` as kt_over_j -> 0.
    """
    root = _bisect_to_residual(lambda b: _witness_w(float(kt_over_j), b, abs_tol) - 1.0,
                               0.0, 2.0, residual_tol)
    if root is None:
        raise QuadratureError(f"W = 1 not bracketed in B/|J| at kT/|J| = {kt_over_j}")
    return root * abs(float(j))


def boundary_trace(b_over_j_values, kt_min: float = 1e-3, kt_max: float = 5.0,
                   residual_tol: float = DEFAULT_BISECTION_RESIDUAL,
                   abs_tol: float = DEFAULT_ABS_TOL) -> BoundaryCurve:
    """Trace kT_c(B) by bisection at each requested field.

    Fields where [kt_min, kt_max] does not bracket W = 1 (above the
    critical field, or kT_c below kt_min) are reported as no-crossing
    entries rather than errors.
    """
    if not (0.0 < kt_min < kt_max):
        raise SpecError(f"need 0 < kt_min < kt_max, got [{kt_min}, {kt_max}]")
    points = []
    no_crossing = []
    for b in sorted(float(b) for b in np.atleast_1d(np.asarray(b_over_j_values, dtype=float))):
        root = _bisect_to_residual(lambda t: _witness_w(t, b, abs_tol) - 1.0,
                                   kt_min, kt_max, residual_tol)
        if root is None:
            no_crossing.append(b)
        else:
            points.append((b, root))
    zero_field = _bisect_to_residual(lambda t: _witness_w(t, 0.0, abs_tol) - 1.0,
                                     kt_min, kt_max, residual_tol)
    return BoundaryCurve(points=tuple(points), no_crossing=tuple(no_crossing),
                         residual_tol=residual_tol, kt_window=(kt_min, kt_max),
                         zero_field_ktc=float("nan") if zero_field is None else zero_field,
                         zero_temperature_bc=critical_field_zero_temperature(1.0))


# ---------------------------------------------------------------------------
# Ferromagnetic XXX chain at low temperature


def _expit(x: float) -> float:
    """Logistic function 1/(1 + e^-x), stable for large |x|."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _lowtemp_args(n_sites, kt, b, j):
    n = int(n_sites)
    if n < 1:
        raise SpecError(f"n_sites must be >= 1, got {n_sites}")
    beta = ThermalPoint(float(kt)).beta
    b, j = float(b), float(j)
    if j <= 0.0:
        raise SpecError("the low-temperature form needs a ferromagnetic coupling J > 0")
    if b <= 0.0:
        raise SpecError("the low-temperature form needs a field B > 0")
    return n, beta, b, j


def lowtemp_ferro_log_partition(n_sites, kt, b, j,
                                printed_exponent: bool = False) -> float:
    """Low-temperature lnZ of the ferromagnetic XXX ring in a field B > 0.

    lnZ = N beta (J + B) + ln(1 + h) with h = N exp(-2 beta B)/sqrt(8 pi
    beta J): the fully aligned ground state at energy -N(J+B) plus the
    one-magnon band integrated in the quadratic-dispersion approximation.
    h is handled in log space (h = e^{ln h}) so huge N or tiny kT cannot
    overflow. Validity wants kT << J; this is advisory, not enforced.

    ``printed_exponent=True`` swaps the leading term for B beta (J + B), a
    variant reading kept only for comparison: it loses the extensive
    ground-state energy and with it the W -> 1 conclusion.
    """
    n, beta, b, j = _lowtemp_args(n_sites, kt, b, j)
    ln_h = math.log(n) - 2.0 * beta * b - 0.5 * math.log(8.0 * math.pi * beta * j)
    leading = (b if printed_exponent else n) * beta * (j + b)
    return leading + float(np.logaddexp(0.0, ln_h))


def lowtemp_ferro_witness(n_sites, kt, b, j,
                          printed_exponent: bool = False) -> WitnessReport:
    """Witness of the low-temperature ferromagnet, from exact lnZ derivatives.

    With sigma = h/(1+h), U = -N(J+B) + sigma (2B + 1/(2 beta)) and
    M = N - 2 sigma, so U + B M = -N J + sigma/(2 beta): W = 1 -
    sigma/(2 N beta J) < 1, approaching 1 from below as N grows -- the
    witness never fires on the ferromagnet. The ``printed_exponent``
    variant instead yields U + B M = B^2 + sigma/(2 beta), i.e. W -> 0 for
    large N, contradicting the W = 1 conclusion; it is reported for
    comparison only.
    """
    n, beta, b, j = _lowtemp_args(n_sites, kt, b, j)
    ln_h = math.log(n) - 2.0 * beta * b - 0.5 * math.log(8.0 * math.pi * beta * j)
    sigma = _expit(ln_h)
    band = sigma * (2.0 * b + 0.5 / beta)
    if printed_exponent:
        u = -b * (j + b) + band
        m = (j + 2.0 * b) - 2.0 * sigma
    else:
        u = -n * (j + b) + band
        m = n - 2.0 * sigma
    return witness_value(u, m, b, j, n, source=SOURCE_LOWTEMP_APPROX)
