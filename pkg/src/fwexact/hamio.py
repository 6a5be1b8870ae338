"""Assembly of the block-diagonal Hamiltonians and the classical comparison.

All Hamiltonians are :class:`HamiltonianSeries`: the rest energy ``m c^2`` is
carried apart and everything else is an :class:`OpSeries` in ``1/c``.
Quantum series are assembled in recursion grading (compact ``(sigma.pi)^k``
atoms), then expanded into the pi-basis and regraded before any comparison
with closed forms or the classical Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .fps import FPS
from .fwsolve import (
    PHYSICAL,
    RECURSION,
    SIGMA_B,
    SIGMA_E,
    OpSeries,
    SeriesDiff,
    compare_series,
    regrade,
    series_mul,
    solve_dirac,
    solve_pauli,
)
from .opalg import (
    PHI,
    SIGMA_PI,
    Field,
    OpExpr,
    OpMonomial,
    commutator_phi,
    dagger,
    expand_sigma_pi,
    format_latex,
    format_text,
    is_hermitian,
)
from .sequences import coeff
from .scalars import DIM_ENERGY, DIM_NONE, Coefficient, ExactScalar, Units, dimension_of

__all__ = [
    "HamiltonianSeries",
    "xdag_x",
    "assemble_h_dirac",
    "assemble_h_pauli",
    "assemble_h_full",
    "closed_form_h",
    "classical_h",
    "compare_hamiltonians",
    "compare_quantum_classical",
    "hermiticity_residues",
    "pauli_antihermitian_breakdown",
    "binomial_half",
    "gamma_series",
    "dimension_failures",
    "energy_dimension_failures",
    "dimensionless_failures",
    "quantum_h",
    "HamiltonianDiff",
    "REST",
]

REST = Coefficient.of(1, m=1, c=2)


@dataclass(frozen=True)
class HamiltonianSeries:
    series: OpSeries
    rest_energy: Coefficient | None = REST
    # highest order known to be complete; regrading never lowers a grade, so
    # physical orders up to this one are complete too
    order: int | None = None

    @property
    def grading(self) -> str:
        return self.series.grading

    def __add__(self, other: "HamiltonianSeries") -> "HamiltonianSeries":
        if self.rest_energy is not None and other.rest_energy is not None:
            raise ValueError("both operands carry the rest energy")
        orders = [o for o in (self.order, other.order) if o is not None]
        return HamiltonianSeries(
            self.series + other.series,
            self.rest_energy or other.rest_energy,
            min(orders) if orders else None,
        )

    def physical(self) -> "HamiltonianSeries":
        """Expanded pi-basis in physical grading."""
        if self.grading == PHYSICAL:
            return self
        series = regrade(self.series.map(expand_sigma_pi))
        if self.order is not None:
            series = series.truncate(self.order)
        return HamiltonianSeries(series, self.rest_energy, self.order)

    def truncate(self, n: int) -> "HamiltonianSeries":
        order = n if self.order is None else min(n, self.order)
        return HamiltonianSeries(self.series.truncate(n), self.rest_energy, order)

    def to_text(self, name: str = "H") -> str:
        lines = [f"{name}: rest energy m c^2"] if self.rest_energy is not None else []
        for k, expr in sorted(self.series.terms.items()):
            if expr:
                lines.append(f"{name}[c^-{k}] = {format_text(expr)}")
        return "\n".join(lines)

    def to_latex(self, name: str = "H") -> str:
        lines = [r"&mc^{2}"] if self.rest_energy is not None else []
        for k, expr in sorted(self.series.terms.items()):
            if expr:
                lines.append(rf"&+ \frac{{1}}{{c^{{{k}}}}}\Big[{format_latex(expr)}\Big]")
        return "\\begin{align*}\n" + name + " =" + " \\\\\n".join(lines) + "\n\\end{align*}"

    def to_json(self) -> dict:
        rest = None
        if self.rest_energy is not None:
            rest = {"coeff": self.rest_energy.scalar.to_json(), "units": self.rest_energy.units.to_json()}
        return {"rest_energy": rest, "order": self.order, "series": self.series.to_json()}


# ---------------------------------------------------------------------------
# building blocks

def binomial_half(n: int, e: Fraction = Fraction(1, 2)) -> Fraction:
    """Generalised binomial coefficient C(e, n)."""
    out = Fraction(1)
    for k in range(n):
        out = out * (e - k) / (k + 1)
    return out


def xdag_x(X: OpSeries, N: int) -> OpSeries:
    return series_mul(X.map(dagger), X, N)


def _binomial_of(A: OpSeries, e: Fraction, N: int) -> OpSeries:
    """(1 + A)^e for a series A starting at order >= 1."""
    one = OpSeries(A.grading, {0: OpExpr.term(1)})
    out = one
    power = one
    n = 1
    while True:
        power = series_mul(power, A, N)
        if power.is_zero():
            break
        out = out + power.map(lambda x, k=binomial_half(n, e): x.scale(k))
        n += 1
    return out


def _sp_times(X: OpSeries) -> OpSeries:
    """c sigma.pi X as a recursion-graded series."""
    return X.map(lambda x: SIGMA_PI * x).shift(-1)


def _q_phi() -> OpSeries:
    return OpSeries(RECURSION, {0: PHI.scale(1, q=1)})


def _conjugate(X: OpSeries, inner: OpSeries, N: int, phi_sign: int) -> OpSeries:
    """sqrt(1+A) (q phi + inner) / sqrt(1+A) with A = X^dagger X."""
    A = xdag_x(X, N)
    S = _binomial_of(A, Fraction(1, 2), N)
    S_inv = _binomial_of(A, Fraction(-1, 2), N)
    # S q phi S^-1 = q phi - q [phi, S] S^-1
    comm = S.map(lambda x: commutator_phi(x, phi_sign).scale(-1, q=1))
    phi_part = _q_phi() + series_mul(comm, S_inv, N)
    return phi_part + series_mul(series_mul(S, inner, N), S_inv, N)


def assemble_h_dirac(
    X: OpSeries, N: int, route: str = "conjugation", phi_sign: int = -1
) -> HamiltonianSeries:
    """Block-diagonal Dirac Hamiltonian through order ``c^-N`` (X needs order N+1)."""
    if max(X.orders) < N + 1:
        raise ValueError("X must be solved to order N+1")
    K = _sp_times(X).truncate(N)
    if route == "conjugation":
        series = _conjugate(X, K, N, phi_sign)
    elif route == "commutator":
        # q phi - [q phi, A] / (2 (1 + A)) + c sigma.pi X
        A = xdag_x(X, N)
        inv = _binomial_of(A, Fraction(-1), N)
        comm = A.map(lambda x: commutator_phi(x, phi_sign).scale(Fraction(-1, 2), q=1))
        series = _q_phi() + series_mul(comm, inv, N) + K
    else:
        raise ValueError(f"unknown route {route!r}")
    return HamiltonianSeries(series.truncate(N), order=N)


def _pauli_inner(X: OpSeries, Xp: OpSeries, N: int) -> OpSeries:
    """c sigma.pi X' - mu' sigma.B + i mu' sigma.E X, with mu' = mupp / c."""
    mu = dict(mupp=1, c=-1)
    out = _sp_times(Xp).truncate(N)
    out = out + OpSeries(RECURSION, {0: SIGMA_B.scale(-1, **mu)})
    out = out + X.map(lambda x: (SIGMA_E * x).scale(ExactScalar(0, 1), **mu)).truncate(N)
    return out


def assemble_h_pauli(X: OpSeries, Xp: OpSeries, N: int) -> HamiltonianSeries:
    """The anomalous-moment part H' to first order in the fields."""
    return HamiltonianSeries(_pauli_inner(X, Xp, N), rest_energy=None, order=N)


def assemble_h_full(X: OpSeries, Xp: OpSeries, N: int, phi_sign: int = -1) -> HamiltonianSeries:
    """Direct conjugation with the full X + X', independent of the H + H' split."""
    cal_X = X + Xp
    inner = _pauli_inner(cal_X, cal_X, N)
    return HamiltonianSeries(_conjugate(cal_X, inner, N, phi_sign).truncate(N), order=N)


# ---------------------------------------------------------------------------
# closed forms in x = |pi| / (m c)

def gamma_series(order: int) -> FPS:
    """gamma = sqrt(1 + x^2) from the binomial sum, exact through ``x**order``."""
    cs = [Fraction(0)] * (order + 1)
    for n in range(order // 2 + 1):
        cs[2 * n] = binomial_half(n)
    return FPS(cs, order)


def _emit(fps: FPS, monomial: Callable[[int], OpMonomial], scalar, units: Units) -> OpExpr:
    """sum_k f_k x^k * scalar * units * monomial(pi^k), with x^k = pi^k / (m c)^k."""
    out = []
    s = ExactScalar.coerce(scalar)
    for k, f in enumerate(fps.coeffs):
        if f == 0:
            continue
        if k % 2:
            raise ValueError("structure functions must be even in x")
        out.append((Coefficient(s * f, units + Units(m=-k, c=-k)), monomial(k)))
    return OpExpr(out)


def _pi_pow(field: Field, sp: int = 0) -> Callable[[int], OpMonomial]:
    return lambda k: OpMonomial(field, sp, k)


def _as_hamiltonian(expr: OpExpr, N: int, rest: Coefficient | None) -> HamiltonianSeries:
    return HamiltonianSeries(regrade(OpSeries(RECURSION, {0: expr})).truncate(N), rest, N)


def closed_form_h(kind: str, N: int) -> HamiltonianSeries:
    """Taylor expansion of the resummed Hamiltonians to physical order ``N``.

    ``kind`` is ``dirac`` (charge part), ``pauli`` (anomalous-moment part) or
    ``total``.
    """
    if N < 2:
        raise ValueError("order must be >= 2")
    order = N + 4
    gamma = FPS.x(order, 2).sqrt_of_one_plus()
    inv_g = gamma.reciprocal()
    inv_1g = (gamma + 1).reciprocal()
    so = inv_g - inv_1g  # 1/gamma - 1/(1 + gamma)
    qh = dict(q=1, hbar=1)
    mu = dict(mupp=1, c=-1)  # mu' = mupp / c; pi-dependent terms carry the extra c
    dirac = (
        PHI.scale(1, q=1)
        # m c^2 (gamma - 1)
        + _emit(gamma - 1, _pi_pow(Field.NONE), 1, Units(m=1, c=2))
        # -(q hbar / 2 m c) (1/gamma) sigma.B
        + _emit(inv_g, _pi_pow(Field.SIGMA_B), Fraction(-1, 2), Units(m=-1, c=-1, **qh))
        # (q hbar / 2 m c)(1/gamma - 1/(1+gamma)) sigma.(pi/mc x E), sigma.(pi x E) = -(E x pi).sigma
        + _emit(so, _pi_pow(Field.EXPI_SIGMA), Fraction(-1, 2), Units(m=-2, c=-2, **qh))
    )
    pauli = (
        # mu' (1/gamma - 1/(1+gamma)) (sigma.pi)(pi.B) / (m c)^2
        _emit(so, _pi_pow(Field.B_DOT_PI, 1), 1, Units(mupp=1, m=-2, c=-3))
        # mu' (1/gamma) sigma.(pi x E) / (m c)
        + _emit(inv_g, _pi_pow(Field.EXPI_SIGMA), -1, Units(mupp=1, m=-1, c=-2))
        - SIGMA_B.scale(1, **mu)
    )
    if kind == "dirac":
        return _as_hamiltonian(dirac, N, REST)
    if kind == "pauli":
        return _as_hamiltonian(pauli, N, None)
    if kind == "total":
        return _as_hamiltonian(dirac + pauli, N, REST)
    raise ValueError(f"unknown kind {kind!r}")


def classical_h(N: int, anomalous: Fraction | int = 1) -> HamiltonianSeries:
    """Orbital plus spin Hamiltonian with s = (hbar/2) sigma.

    The anomalous gyromagnetic ratio is ``gamma'_m = anomalous * 2 mu' / hbar``;
    ``anomalous = 0`` gives the pure Dirac moment.
    """
    if N < 2:
        raise ValueError("order must be >= 2")
    order = N + 4
    gamma = gamma_series(order)
    inv_g = gamma.reciprocal()
    inv_g1g = (gamma * (gamma + 1)).reciprocal()  # 1 / (gamma (1 + gamma))

    # sqrt(m^2 c^4 + c^2 pi^2) = m c^2 gamma; the constant is the rest energy
    if gamma[0] != 1:
        raise AssertionError("gamma must start at 1")
    orbit = _emit(gamma - 1, _pi_pow(Field.NONE), 1, Units(m=1, c=2)) + PHI.scale(1, q=1)

    s = Coefficient.of(Fraction(1, 2), hbar=1)  # s = (hbar/2) sigma
    g_anom = Coefficient.of(2 * Fraction(anomalous), mupp=1, c=-1, hbar=-1)  # 2 mu'/hbar
    g_q = Coefficient.of(1, q=1, m=-1, c=-1)  # q / (m c)

    def term(fps: FPS, coef: Coefficient, mono_fn, extra: Units, sign: int) -> OpExpr:
        c = s * coef
        return _emit(fps, mono_fn, sign * c.scalar, c.units + extra)

    one = FPS.constant(1, order)
    spin = (
        # -s.B (gamma'_m + (q/mc)/gamma)
        term(one, g_anom, _pi_pow(Field.SIGMA_B), Units(), -1)
        + term(inv_g, g_q, _pi_pow(Field.SIGMA_B), Units(), -1)
        # + gamma'_m / (gamma (1 + gamma)) (pi.B)(s.pi) / (m c)^2
        + term(inv_g1g, g_anom, _pi_pow(Field.B_DOT_PI, 1), Units(m=-2, c=-2), 1)
        # + (gamma'_m / gamma + (q/mc) / (gamma (1+gamma))) s.(pi x E) / (m c)
        + term(inv_g, g_anom, _pi_pow(Field.EXPI_SIGMA), Units(m=-1, c=-1), -1)
        + term(inv_g1g, g_q, _pi_pow(Field.EXPI_SIGMA), Units(m=-1, c=-1), -1)
    )
    return _as_hamiltonian(orbit + spin, N, REST)


# ---------------------------------------------------------------------------
# comparisons and checks

@dataclass
class HamiltonianDiff:
    rest_match: bool
    diff: SeriesDiff

    @property
    def passed(self) -> bool:
        return self.rest_match and self.diff.passed

    def first_failure(self) -> dict | None:
        if not self.rest_match:
            return {"order": -2, "structure": "rest-energy", "monomial": "1", "lhs": "", "rhs": ""}
        return self.diff.first_failure()


def compare_hamiltonians(h1: HamiltonianSeries, h2: HamiltonianSeries, N: int) -> HamiltonianDiff:
    a, b = h1.physical().truncate(N), h2.physical().truncate(N)
    return HamiltonianDiff(a.rest_energy == b.rest_energy, compare_series(a.series, b.series, N))


def quantum_h(theory: str, N: int, phi_sign: int = -1, X: OpSeries | None = None) -> HamiltonianSeries:
    """Assembled quantum Hamiltonian in recursion grading through ``c^-N``."""
    if X is None:
        X = solve_dirac(N + 2, phi_sign)
    H = assemble_h_dirac(X, N, "conjugation", phi_sign)
    if theory == "dirac":
        return H
    if theory == "dirac-pauli":
        Xp = solve_pauli(N + 2, X, phi_sign)
        return H + assemble_h_pauli(X, Xp, N)
    raise ValueError(f"unknown theory {theory!r}")


def compare_quantum_classical(
    N: int, theory: str = "dirac-pauli", phi_sign: int = -1, anomalous: Fraction | int = 1
) -> HamiltonianDiff:
    q = quantum_h(theory, N, phi_sign)
    cl = classical_h(N, anomalous if theory == "dirac-pauli" else 0)
    return compare_hamiltonians(q, cl, N)


def hermiticity_residues(h: HamiltonianSeries, expanded: bool = True) -> dict[int, OpExpr]:
    """Nonzero antihermitian residues (A - A^dagger)/2 by physical order.

    Residues are only meaningful per physical order: in recursion grading a
    ``mu'' c^-1`` term at order k cancels against order k+1.
    """
    s = h.series
    if s.grading != PHYSICAL:
        s = regrade(s.map(expand_sigma_pi) if expanded else s)
    out = {}
    for k, expr in s.terms.items():
        ok, res = is_hermitian(expr)
        if not ok:
            out[k] = res
    return out


def _split_pauli(X: OpSeries, Xp: OpSeries, N: int) -> tuple[OpSeries, OpSeries]:
    mu = dict(mupp=1, c=-1)
    t1 = _sp_times(Xp).truncate(N)
    t2 = X.map(lambda x: (SIGMA_E * x).scale(ExactScalar(0, 1), **mu)).truncate(N)
    return regrade(t1), regrade(t2)


def pauli_antihermitian_breakdown(N: int, phi_sign: int = -1) -> list[dict]:
    """Per-order (E.pi) content of H' split by origin.

    Each entry normalises the coefficient of ``pi^2j (E.pi)`` by
    ``-i mu' (-1)^j / (2 m c)^(2j+1)`` and reports the integer contributed by
    ``c sigma.pi X'`` and by ``i mu' sigma.E X``; hermiticity needs their sum
    to vanish.
    """
    X = solve_dirac(N + 2, phi_sign)
    Xp = solve_pauli(N + 2, X, phi_sign)
    t1, t2 = _split_pauli(X, Xp, N)
    rows = []
    j = 0
    while 2 * j + 2 <= N:
        g = 2 * j + 2  # mu' c^-(2j+1) = mupp c^-(2j+2)
        m = OpMonomial(Field.E_DOT_PI, 0, 2 * j)
        u = Units(mupp=1, m=-(2 * j + 1))
        norm = ExactScalar(0, -((-1) ** j)) / (2 ** (2 * j + 1))
        from_xp = t1[g].coefficient(m, u) / norm
        from_x = t2[g].coefficient(m, u) / norm
        rows.append(
            {
                "j": j,
                "from_sigma_pi_Xp": from_xp,
                "from_sigma_E_X": from_x,
                "sum": from_xp + from_x,
                # the printed combination b_{j+1} - d_{j+1} + a_j for comparison
                "printed": coeff("b", j + 1) - coeff("d", j + 1) + coeff("a", j),
                "b_minus_d": coeff("b", j + 1) - coeff("d", j + 1),
                "a": coeff("a", j),
            }
        )
        j += 1
    return rows


def dimension_failures(series: OpSeries, target) -> list[tuple[int, OpMonomial, Units]]:
    """Terms whose physical dimension differs from ``target``."""
    bad = []
    for k, expr in series.terms.items():
        for (m, u), _ in expr.items():
            if dimension_of(Coefficient(ExactScalar(1), u), m, k) != target:
                bad.append((k, m, u))
    return bad


def energy_dimension_failures(h: HamiltonianSeries):
    bad = dimension_failures(h.series, DIM_ENERGY)
    if h.rest_energy is not None and dimension_of(h.rest_energy, OpMonomial(), 0) != DIM_ENERGY:
        bad.append((-2, OpMonomial(), h.rest_energy.units))
    return bad


def dimensionless_failures(X: OpSeries):
    return dimension_failures(X, DIM_NONE)
