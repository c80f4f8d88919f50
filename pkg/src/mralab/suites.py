"""Named verification suites.

Every check is a function ``(params) -> list[Record]`` registered under a suite;
record ids start with the check id so reports sort stably.
"""

from __future__ import annotations

import cmath
import math
import os
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bwm_quantum as bwm
from . import cuntz_rep as cz
from . import frames as fr
from . import markov_chain as mc
from . import mra_filters as mf
from . import q_calculus as qc
from . import special_functions as sf
from . import transforms as tr
from .errors import DomainError, TruncationWarning
from .report import Record, Report, assertion, check, reported

SUITES = ("bessel", "qcalc", "transforms", "mra", "cuntz", "frames", "markov", "bwm")
Q_SWEEP = (0.3, 0.5, 0.7)
NU_SWEEP = (1, 2, 3)

DEFAULTS = {
    "seed": 7,
    "q": 0.5,
    "N": 3,
    "m": 1,
    "nu": 1,
    "steps": 100_000,
    "start": 0,
    "grid_size": 64,
    "n_random": 20,
}
_INT_KEYS = {"seed", "N", "m", "nu", "steps", "start", "grid_size", "n_random"}


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    params: dict = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}; expected one of {SUITES + ('all',)}")
        self.params = resolve_params(self.params)


def default_params() -> dict:
    p = dict(DEFAULTS)
    env = os.environ.get("MRALAB_SEED")
    if env is not None:
        try:
            p["seed"] = int(env)
        except ValueError:
            raise ConfigError(f"MRALAB_SEED must be an integer, got {env!r}") from None
    return p


def resolve_params(overrides: dict) -> dict:
    """Defaults, then MRALAB_SEED, then ``overrides``; unknown keys are rejected."""
    p = default_params()
    for k, v in overrides.items():
        if k not in DEFAULTS:
            raise ConfigError(f"unknown parameter {k!r}; known: {sorted(DEFAULTS)}")
        try:
            if k in _INT_KEYS:
                fv = float(v)
                if not fv.is_integer():
                    raise ValueError
                p[k] = int(fv)
            else:
                p[k] = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"parameter {k} has bad value {v!r}") from None
    if not 0 < p["q"] < 1:
        raise ConfigError("q must lie in (0, 1)")
    if p["N"] < 2 or p["m"] < 1 or p["nu"] < 1:
        raise ConfigError("need N >= 2, m >= 1, nu >= 1")
    if p["steps"] < 0 or p["grid_size"] < 1 or p["n_random"] < 0 or p["seed"] < 0:
        raise ConfigError("steps, grid_size, n_random and seed must be non-negative")
    if not 0 <= p["start"] < p["N"]:
        raise ConfigError("start must lie in 0..N-1")
    return p


_REGISTRY: dict[str, list[tuple[str, Callable]]] = {s: [] for s in SUITES}


def register(suite: str, check_id: str):
    def deco(fn):
        _REGISTRY[suite].append((check_id, fn))
        return fn

    return deco


def list_checks(suite: str) -> list[str]:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in _REGISTRY for n in names):
        raise ConfigError(f"unknown suite {suite!r}")
    return sorted(cid for n in names for cid, _ in _REGISTRY[n])


def _qtag(q: float) -> str:
    return f"q{q:g}"


# -- bessel ----------------------------------------------------------------------


@register("bessel", "bessel.addition")
def _bessel_addition(p):
    grid = np.linspace(0.0, 2.0, 5)
    out = []
    for n in range(4):
        worst = max(sf.addition_formula_residual(n, x, y, 40) for x in grid for y in grid)
        out.append(check(f"bessel.addition.n{n}", {"n": n, "grid": grid, "K": 40}, worst, 1e-10))
    return out


@register("bessel", "bessel.phase")
def _bessel_phase(p):
    zs = (0.5, 1.0 + 0.5j, 2.5, 4.0 - 1.0j)
    out = []
    for nu in range(4):
        worst = 0.0
        for k in range(-2, 3):
            for z in zs:
                ref = sf.bessel_j(nu, z * cmath.exp(1j * math.pi * k))
                got = sf.half_turn_phase(nu, k, z)
                worst = max(worst, abs(got - ref) / abs(ref))
        out.append(check(f"bessel.phase.nu{nu}", {"nu": nu, "k": [-2, 2], "z": zs}, worst, 1e-12))
    return out


@register("bessel", "bessel.series_vs_library")
def _bessel_library(p):
    from scipy import special

    z = np.linspace(0.0, 8.0, 81)
    out = []
    for a in (0.0, 0.5, 1.0, 2.5):
        err = float(np.max(np.abs(sf.bessel_j_array(a, z).real - special.jv(a, z))))
        out.append(check(f"bessel.series_vs_library.alpha{a:g}", {"alpha": a, "z": [0, 8]}, err, 1e-12))
    return out


@register("bessel", "bessel.gamma")
def _bessel_gamma(p):
    err = abs(sf.gamma(0.5) - math.sqrt(math.pi)) + abs(sf.gamma(5.0) - 24.0)
    return [check("bessel.gamma", {"x": [0.5, 5.0]}, err, 1e-14)]


# -- q-calculus ------------------------------------------------------------------


@register("qcalc", "qcalc.euler_pentagonal")
def _q_pentagonal(p):
    out = []
    for q in Q_SWEEP + (0.9,):
        lhs = qc.q_pochhammer(q, q).real
        rhs = math.fsum((-1) ** k * q ** (k * (3 * k - 1) / 2) for k in range(-60, 61))
        out.append(check(f"qcalc.euler_pentagonal.{_qtag(q)}", {"q": q}, abs(lhs - rhs), 1e-13))
    return out


@register("qcalc", "qcalc.jackson_moment")
def _q_moment(p):
    out = []
    for q in Q_SWEEP:
        lat = qc.QLattice(0, 400)
        worst = 0.0
        for s in range(4):
            got = qc.q_integral(lambda x, s=s: x**s, q, lat).real
            worst = max(worst, abs(got - (1 - q) / (1 - q ** (s + 1))))
        out.append(check(f"qcalc.jackson_moment.{_qtag(q)}", {"q": q, "s": [0, 3]}, worst, 1e-14))
    return out


@register("qcalc", "qcalc.lattice_bessel")
def _q_lattice(p):
    # symmetric lattice form against the defining series where the latter is still accurate
    out = []
    for q in Q_SWEEP:
        worst = 0.0
        # the series loses about log10(x) digits to cancellation; keep x <= 12
        js = [j for j in range(-4, 0) if q**j <= 12.0]
        for a in (0.0, 1.0):
            for j in js:
                ref = qc.q_bessel_j(a, q**j, q * q).real
                got = qc.q_bessel_j_lattice(a, j, q)
                worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
        out.append(check(f"qcalc.lattice_bessel.{_qtag(q)}", {"q": q, "alpha": [0, 1], "j": js},
                         worst, 1e-10))
    return out


# -- transforms ------------------------------------------------------------------


def _test_functions(alpha):
    R = tr.QuadratureParams().cutoff

    def bump(x):
        x = np.asarray(x, dtype=float)
        s = np.clip(x / R, 0.0, 1.0 - 1e-15)
        return x**alpha * np.where(x < R, math.e * np.exp(-1.0 / (1.0 - s * s)), 0.0)

    return {
        "gauss": lambda x: x**alpha * np.exp(-x * x / 2),
        "gauss2": lambda x: x**alpha * np.exp(-x * x),
        "bump": bump,
    }


@register("transforms", "transforms.roundtrip")
def _tr_roundtrip(p):
    qp = tr.QuadratureParams()
    out = []
    for a in (0, 1, 2):
        for name, f in _test_functions(a).items():
            err = tr.hankel_roundtrip_error(f, a, qp)
            out.append(check(f"transforms.roundtrip.alpha{a}.{name}",
                             {"alpha": a, "f": name, "panels": qp.panels, "cutoff": qp.cutoff}, err, 1e-5))
    return out


@register("transforms", "transforms.plancherel")
def _tr_plancherel(p):
    qp = tr.QuadratureParams()
    out = []
    for a in (0, 1, 2):
        fs = _test_functions(a)
        names = list(fs)
        for i, n1 in enumerate(names):
            n2 = names[(i + 1) % len(names)]
            f, g = fs[n1], fs[n2]
            x, w, _ = tr._rule(qp.rule, qp.panels, float(qp.cutoff), qp.order)
            scale = math.sqrt(np.sum(w * x * np.abs(f(x)) ** 2) * np.sum(w * x * np.abs(g(x)) ** 2))
            err = tr.plancherel_residual(f, g, a, qp) / scale
            out.append(check(f"transforms.plancherel.alpha{a}.{n1}-{n2}", {"alpha": a, "f": n1, "g": n2},
                             err, 1e-5))
    return out


@register("transforms", "transforms.q_orthogonality")
def _tr_qorth(p):
    out = []
    for q in Q_SWEEP:
        for a in (0, 1):
            worst = 0.0
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TruncationWarning)
                for m in range(-3, 4):
                    for n in range(-3, 4):
                        v = tr.q_orthogonality_check(m, n, a, q)
                        worst = max(worst, abs(v - (1.0 if m == n else 0.0)))
            out.append(check(f"transforms.q_orthogonality.{_qtag(q)}.alpha{a}",
                             {"q": q, "alpha": a, "mn": [-3, 3]}, worst, 1e-8))
    return out


@register("transforms", "transforms.q_to_classical")
def _tr_qlimit(p):
    f = lambda x: np.exp(-x * x / 2)  # noqa: E731
    e1 = tr.q_to_classical_error(f, 0, 0.9)
    e2 = tr.q_to_classical_error(f, 0, 0.99)
    return [
        assertion("transforms.q_to_classical.monotone", {"q": [0.9, 0.99], "f": "gauss", "alpha": 0},
                  e2 < e1, {"q0.9": e1, "q0.99": e2}),
    ]


@register("transforms", "transforms.q_roundtrip")
def _tr_qroundtrip(p):
    q = p["q"]
    f = lambda x: np.exp(-x * x / 2)  # noqa: E731
    return [reported(f"transforms.q_roundtrip.{_qtag(q)}", {"q": q, "alpha": 0, "f": "gauss"},
                     tr.q_hankel_roundtrip_error(f, 0, q))]


# -- filter banks ----------------------------------------------------------------


def _bank(variant, nu, q, size):
    grid = mf.default_grid(variant, nu, size)
    qq = None if variant == "root" else q
    m0 = mf.normalize_on_orbits(cz.default_profile, variant, grid, nu, qq)
    return mf.complete_filter_bank(m0, variant, grid, nu, qq)


@register("mra", "mra.completion")
def _mra_completion(p):
    out = []
    for variant in mf.VARIANTS:
        for nu in NU_SWEEP:
            bank = _bank(variant, nu, p["q"], p["grid_size"])
            inputs = {"variant": variant, "nu": nu, "q": bank.q, "grid": p["grid_size"]}
            out.append(check(f"mra.completion.unitarity.{variant}.nu{nu}", inputs,
                             mf.unitarity_residual(bank), 1e-12))
            res = mf.orbit_normalization_residual(bank.filters[0], variant, bank.grid, nu, bank.q)
            out.append(check(f"mra.completion.normalization.{variant}.nu{nu}", inputs, res, 1e-10))
    return out


@register("mra", "mra.sector_inner")
def _mra_sector(p):
    worst = 0.0
    for m in (2, 3, 4):
        for N in range(m + 1):
            for nu in NU_SWEEP:
                for k in (0, 1):
                    worst = max(worst, abs(mf.sector_inner(k, N, nu, m) - mf.sector_inner_quadrature(k, N, nu, m)))
    return [check("mra.sector_inner", {"m": [2, 4], "nu": list(NU_SWEEP)}, worst, 1e-12)]


@register("mra", "mra.normalization_constants")
def _mra_constants(p):
    nu, q = p["nu"], p["q"]
    vals = {v: mf.normalization_constant(v, nu, None if v == "root" else q).value for v in mf.VARIANTS}
    return [reported(f"mra.normalization_constants.nu{nu}.{_qtag(q)}", {"nu": nu, "q": q}, vals)]


# -- Cuntz relations and the PVM -------------------------------------------------


def _system(variant, nu, q):
    return cz.CuntzSystem(variant, nu, None if variant == "root" else q)


@register("cuntz", "cuntz.relations")
def _cuntz_relations(p):
    out = []
    for variant in mf.VARIANTS:
        for nu in NU_SWEEP:
            sys_ = _system(variant, nu, p["q"])
            r = cz.cuntz_residuals(sys_, n_random=p["n_random"], seed=p["seed"])
            inputs = {"variant": variant, "nu": nu, "q": sys_.q, "seed": p["seed"]}
            out.append(check(f"cuntz.relations.isometry.{variant}.nu{nu}", inputs, r["isometry"], 1e-10))
            out.append(check(f"cuntz.relations.completeness.{variant}.nu{nu}", inputs, r["completeness"], 1e-10))
    return out


@register("cuntz", "cuntz.dense")
def _cuntz_dense(p):
    out = []
    for variant in mf.VARIANTS:
        r = cz.dense_cuntz_residuals(_system(variant, 1, p["q"]))
        out.append(check(f"cuntz.dense.{variant}", {"variant": variant, "nu": 1},
                         max(r.values()), 1e-10))
    return out


@register("cuntz", "cuntz.pvm")
def _cuntz_pvm(p):
    out = []
    L = 3
    for variant in mf.VARIANTS:
        for nu in NU_SWEEP:
            sys_ = _system(variant, nu, p["q"])
            f = sys_.random(np.random.default_rng(p["seed"]), level=L)
            N = sys_.N
            mu = {(): 1.0}
            for k in range(1, L + 1):
                for w in cz.all_words(N, k):
                    mu[w.letters] = cz.pvm_measure(f, w, sys_)
            refine = max(abs(sum(mu[a + (b,)] for b in range(N)) - mu[a])
                         for a in mu if len(a) < L)
            unity = max(abs(math.fsum(v for a, v in mu.items() if len(a) == k) - 1.0) for k in range(1, L + 1))
            inputs = {"variant": variant, "nu": nu, "max_length": L, "seed": p["seed"]}
            out.append(check(f"cuntz.pvm.refinement.{variant}.nu{nu}", inputs, refine, 1e-10))
            out.append(check(f"cuntz.pvm.unity.{variant}.nu{nu}", inputs, unity, 1e-10))
    return out


@register("cuntz", "cuntz.pvm_vs_chain")
def _cuntz_pvm_chain(p):
    """Length-one masses against 1/[N]_q^2 readings, and digit transitions against P."""
    nu, q = p["nu"], p["q"]
    N = nu + 1
    sys_ = _system("qradial", nu, q)
    f = sys_.random(np.random.default_rng(p["seed"]), level=2)
    mu1 = [cz.pvm_measure(f, cz.NAdicWord((a,), N), sys_) for a in range(N)]
    mu2 = [[cz.pvm_measure(f, cz.NAdicWord((a, b), N), sys_) for b in range(N)] for a in range(N)]
    cond = [[mu2[a][b] / mu1[a] for b in range(N)] for a in range(N)]
    value = {
        "mu_length1": mu1,
        "sum_mu_length1": math.fsum(mu1),
        "inv_qnumber_squared": 1.0 / qc.q_number(N, q) ** 2,
        "inv_qnumber_q2": 1.0 / qc.q_number(N, q, base_exponent=2),
        "digit_transition": cond,
        "chain_P": mc.build_transition(N, q).P,
    }
    return [reported(f"cuntz.pvm_vs_chain.nu{nu}.{_qtag(q)}", {"nu": nu, "q": q, "seed": p["seed"]}, value)]


@register("cuntz", "cuntz.partition_interval")
def _cuntz_partition(p):
    ok = True
    for N in (2, 3, 4):
        for k in range(1, 4):
            ivs = sorted(cz.partition_interval(w) for w in cz.all_words(N, k))
            ok &= ivs[0][0] == 0 and ivs[-1][1] == 1
            ok &= all(a[1] == b[0] for a, b in zip(ivs, ivs[1:]))
            ok &= all(isinstance(x, Fraction) for iv in ivs for x in iv)
    return [assertion("cuntz.partition_interval", {"N": [2, 4], "length": [1, 3]}, bool(ok))]


@register("cuntz", "cuntz.cyclic_fourier")
def _cuntz_cyclic(p):
    out = []
    for variant in ("root", "qroot"):
        for nu in NU_SWEEP:
            bank = _bank(variant, nu, p["q"], 16)
            A = cz.cyclic_fourier(bank)
            err = float(np.max(np.abs(cz.cyclic_fourier_inverse(A, bank) - bank.filters)))
            out.append(check(f"cuntz.cyclic_fourier.{variant}.nu{nu}", {"variant": variant, "nu": nu}, err, 1e-10))
    return out


# -- frames ----------------------------------------------------------------------


def _frame_tests(system, trunc, seed, count=4):
    rng = np.random.default_rng(seed)
    return [system.random(rng, level=trunc.scales) for _ in range(count)]


@register("frames", "frames.tight")
def _frames_tight(p):
    trunc = fr.FrameTruncation(scales=2)
    out = []
    for variant in mf.VARIANTS:
        sys_ = _system(variant, p["nu"], p["q"])
        b = fr.frame_bounds_estimate(sys_, _frame_tests(sys_, trunc, p["seed"]), trunc)
        out.append(check(f"frames.tight.{variant}", {"variant": variant, "nu": p["nu"], "scales": 2},
                         max(abs(b.A - 1.0), abs(b.B - 1.0)), 1e-10))
    return out


def _bessel_spec(q=None):
    return fr.BesselFilterSpec({0: 1 / math.sqrt(2)}, 1, q)


@register("frames", "frames.constraints")
def _frames_constraints(p):
    rng = np.random.default_rng(p["seed"])
    b = fr.solve_diagonal({0: 1.0, 1: 0.5 - 0.25j, 2: 0.125}, 2)
    diag = fr.residue_diagonal_residual(fr.BesselFilterSpec(b, 2))
    c = fr.null_cross_correlation(b, [-1, 0, 1], 8, rng)
    cross = max(abs(fr.offdiagonal_residual(b, c, n)) for n in (-1, 0, 1))
    return [
        check("frames.constraints.diagonal", {"nu": 2}, diag, 1e-14),
        check("frames.constraints.null_cross", {"ns": [-1, 0, 1], "support": 8}, cross, 1e-12),
    ]


@register("frames", "frames.bessel")
def _frames_bessel(p):
    spec = _bessel_spec()
    t = mf.default_grid("root", 1, 16)
    out = [reported("frames.bessel.unitarity.literal_orbits", {"b": {0: "1/sqrt2"}, "nu": 1},
                    fr.bessel_unitarity_residual(spec, t))]
    trunc = fr.FrameTruncation(scales=2)
    for name, s in (("classical", spec), ("deformed", _bessel_spec(p["q"]))):
        sys_ = fr.bessel_system(s)
        b = fr.frame_bounds_estimate(sys_, _frame_tests(sys_, trunc, p["seed"]), trunc)
        unit = mf.unitarity_residual(sys_.bank(0))
        out.append(reported(f"frames.bessel.bounds.{name}", {"nu": 1, "q": s.deformed, "scales": 2},
                            {"A": b.A, "B": b.B, "tight": b.is_tight(), "bank_unitarity": unit}))
    return out


# -- Markov chain ----------------------------------------------------------------


@register("markov", "markov.doubly_stochastic")
def _mk_ds(p):
    out = []
    for N in range(2, 8):
        for q in Q_SWEEP:
            T = mc.build_transition(N, q)
            dev = max(np.max(np.abs(T.row_sums - 1)), np.max(np.abs(T.col_sums - 1)))
            out.append(check(f"markov.doubly_stochastic.N{N}.{_qtag(q)}", {"N": N, "q": q}, dev, 1e-14))
    return out


@register("markov", "markov.stationary")
def _mk_stat(p):
    out = []
    for N in range(2, 8):
        for q in Q_SWEEP:
            pi = mc.stationary(mc.build_transition(N, q))
            out.append(check(f"markov.stationary.N{N}.{_qtag(q)}", {"N": N, "q": q},
                             np.max(np.abs(pi - 1.0 / N)), 1e-12))
    return out


def simulation_record(N, q, seed, steps, start=0):
    """(record, path): max z-score of the state frequencies against uniform, limit 3.

    The z-score uses the chain's own frequency standard deviation; the i.i.d.
    value is reported alongside.
    """
    T = mc.build_transition(N, q)
    path = mc.simulate(T, start, steps, seed)
    freq = path.frequencies(N)
    n = path.states.size
    sigma = mc.frequency_sigma(T, steps)
    z = float(np.max(np.abs(freq - 1.0 / N) / sigma))
    z_iid = float(np.max(np.abs(freq - 1.0 / N)) / math.sqrt((1.0 / N) * (1 - 1.0 / N) / n))
    inputs = {"N": N, "q": q, "seed": seed, "steps": steps, "start": start, "rng": mc.RNG_ALGORITHM}
    rec = Record(f"markov.simulation.N{N}.{_qtag(q)}.seed{seed}", inputs,
                 {"max_z": z, "max_z_iid": z_iid, "sigma": sigma, "empirical_freq": freq},
                 "pass" if z < 3.0 else "fail", 3.0)
    return rec, path


@register("markov", "markov.simulation")
def _mk_sim(p):
    rec, path = simulation_record(p["N"], p["q"], p["seed"], p["steps"], p["start"])
    rec.path = path.states.tolist()
    return [rec]


@register("markov", "markov.normalization")
def _mk_norm(p):
    N, q = p["N"], p["q"]
    T = mc.build_transition(N, q, "qnumber")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pi = mc.stationary(T)
    return [reported(f"markov.normalization.qnumber.N{N}.{_qtag(q)}", {"N": N, "q": q},
                     {"row_sums": T.row_sums, "col_sums": T.col_sums, "stationary_rescaled": pi})]


@register("markov", "markov.exponents")
def _mk_exp(p):
    N = p["N"]
    ok = all(
        mc.exponent_sigma(s, r, n) == mc.exponent_sigma(0, (r - s) % n, n)
        for n in range(2, 8) for s in range(n) for r in range(n)
    )
    return [
        assertion("markov.exponents.shift_invariance", {"N": [2, 7]}, ok),
        reported(f"markov.exponents.table.N{N}", {"N": N}, mc.exponent_table(N)),
    ]


@register("markov", "markov.trace_link")
def _mk_link(p):
    N, q = p["N"], p["q"]
    T = mc.build_transition(N, q)
    link = [[mc.trace_link(N, q, i, j) for j in range(N)] for i in range(N)]
    return [reported(f"markov.trace_link.N{N}.{_qtag(q)}", {"N": N, "q": q, "odd_N": N % 2 == 1},
                     {"trace_link": link, "transition": T.P})]


@register("markov", "markov.summary")
def _mk_summary(p):
    T = mc.build_transition(p["N"], p["q"])
    return [reported(f"markov.summary.N{p['N']}.{_qtag(p['q'])}", {"N": p["N"], "q": p["q"]},
                     mc.chain_summary(T))]


# -- BWM -------------------------------------------------------------------------


@register("bwm", "bwm.e_squared")
def _bwm_e2(p):
    out = []
    for m in (1, 2, 3):
        for q in Q_SWEEP:
            E = bwm.build_E_direct(m, q)
            x = bwm.x_value(m, q)
            inputs = {"m": m, "q": q, "x": x}
            res = bwm.e_squared_check(E, m, q)
            out.append(check(f"bwm.e_squared.m{m}.{_qtag(q)}", inputs, res, 1e-12))
            rel = res / (x * float(np.max(np.abs(E.entries))))
            out.append(reported(f"bwm.e_squared_relative.m{m}.{_qtag(q)}", inputs, rel))
            out.append(check(f"bwm.trace_E.m{m}.{_qtag(q)}", inputs, abs(np.trace(E.entries) - x), 1e-12))
            w = bwm.markov_trace(m, q) * bwm.quantum_dimension(m, q)
            out.append(check(f"bwm.markov_trace.m{m}.{_qtag(q)}", {"m": m, "q": q}, abs(w - q ** (2 * m)), 1e-15))
    return out


def _ybe_grid(p):
    ms = sorted({1, 2, p["m"]})
    qs = sorted(set(Q_SWEEP) | {p["q"]})
    return ms, qs


@register("bwm", "bwm.ybe")
def _bwm_ybe(p):
    out = []
    ms, qs = _ybe_grid(p)
    for m in ms:
        for q in qs:
            for v in bwm.DOCUMENTED_VARIANTS:
                G = bwm.build_G(m, q, v)
                a, b = bwm.ybe_routes(G)
                tag = "literal" if v == bwm.LITERAL else v.name
                base = f"bwm.ybe.m{m}.{_qtag(q)}.{tag}"
                inputs = {"m": m, "q": q, "variant": v.name}
                scale = max(1.0, a, b)
                out.append(Record(base + ".routes", inputs, {"kron": a, "contraction": b},
                                  "pass" if abs(a - b) <= bwm.ROUTE_TOL * scale else "fail",
                                  bwm.ROUTE_TOL * scale))
                out.append(reported(base + ".residual", inputs, a, 1e-10))
    return out


@register("bwm", "bwm.spectrum")
def _bwm_spec(p):
    m, q = p["m"], p["q"]
    out = []
    for v in bwm.DOCUMENTED_VARIANTS:
        tag = "literal" if v == bwm.LITERAL else v.name
        out.append(reported(f"bwm.spectrum.m{m}.{_qtag(q)}.{tag}", {"m": m, "q": q, "variant": v.name},
                            spectrum_diagnostics(m, q, v)))
    return out


def spectrum_diagnostics(m, q, variant=bwm.LITERAL) -> dict:
    """Eigenvalues of G, the p candidates and the relation residuals at each candidate."""
    G = bwm.build_G(m, q, variant)
    est = bwm.estimate_p(G, q)
    x = bwm.x_value(m, q)
    cands = {"p_spectral": est["p_spectral"]}
    for i, r in enumerate(est["p_from_x"]):
        cands[f"p_from_x_{i}"] = r
    details = {}
    E_direct = bwm.build_E_direct(m, q)
    for name, pv in cands.items():
        if pv is None:
            continue
        details[name] = {
            "p": pv,
            "cubic": bwm.cubic_residual(G, q, pv),
            "bwm": bwm.bwm_residuals(G, E_direct, pv),
            "x_implied": 1 + (pv - 1 / pv) / (q - 1 / q),
        }
    est = dict(est)
    est["x"] = x
    est["candidates"] = details
    return est


@register("bwm", "bwm.E_from_G")
def _bwm_efg(p):
    out = []
    for m in (1, 2):
        for q in (0.3, 0.7):
            G = bwm.build_G(m, q)
            E, cond = bwm.build_E_from_G(G, q)
            diff = float(np.max(np.abs(E - bwm.build_E_direct(m, q).entries)))
            out.append(reported(f"bwm.E_from_G.m{m}.{_qtag(q)}.literal", {"m": m, "q": q},
                                {"max_diff": diff, "cond_G": cond}))
    return out


@register("bwm", "bwm.J_tau")
def _bwm_j(p):
    out = []
    for m in (1, 2, 3):
        q = p["q"]
        d = bwm.build_J_and_tau(m, q)
        N = 2 * m + 1
        J = d["J"]
        anti = all(J[i, j] == 0 for i in range(N) for j in range(N) if j != N - 1 - i)
        det_err = abs(abs(d["det"]) - q ** (sum(range(1, N + 1)) / 2))
        out.append(assertion(f"bwm.J_tau.m{m}.{_qtag(q)}", {"m": m, "q": q},
                             anti and det_err < 1e-14 and d["tau_norm2"] > 0,
                             {"anti_diagonal": anti, "det_error": det_err, "tau_norm2": d["tau_norm2"]}))
    return out


@register("bwm", "bwm.quantum_dimension")
def _bwm_qdim(p):
    d = bwm.quantum_dimension(1, 0.999)
    return [check("bwm.quantum_dimension.limit", {"m": 1, "q": 0.999}, abs(d - 3.0), 0.01),
            check("bwm.quantum_dimension.m1.q0.5", {"m": 1, "q": 0.5},
                  abs(bwm.quantum_dimension(1, 0.5) - 1.3125), 1e-15, cmp="<=")]


# -- runner ----------------------------------------------------------------------

def run_suite(config: SuiteConfig) -> Report:
    """Run every check of the configured suite(s); records are sorted on output."""
    names = SUITES if config.suite == "all" else (config.suite,)
    rep = Report(config.suite, dict(config.params))
    t0 = time.perf_counter()
    for name in names:
        for cid, fn in _REGISTRY[name]:
            rep.records.extend(fn(config.params))
    rep.paths = {r.id: r.path for r in rep.records if r.path is not None}
    rep.wall_time = time.perf_counter() - t0
    ids = [r.id for r in rep.records]
    if len(ids) != len(set(ids)):
        raise DomainError("duplicate record ids")
    return rep
