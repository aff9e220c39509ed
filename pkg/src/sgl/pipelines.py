"""Config-driven pipelines behind the CLI and the HTTP service.

Each subcommand maps a typed config to one run function returning a
``PipelineResult``: a one-line summary, a deterministically named CSV
artifact, and an exit code.  Exit codes follow the front-end contract:
0 success, 2 when a result was produced but its claim did not certify
(uncertified flattening, failed frame claim, containment violation,
block budget exhaustion), 1 for input errors (raised as ConfigError or
ValueError and mapped by the caller).
"""

from dataclasses import dataclass

import numpy as np

from . import blocks as blocks_mod
from . import uniqueness
from .config import REQUIRED, apply_schema, config_hash
from .errors import BudgetExceeded, ConfigError, ContainmentViolation
from .exponentials import FrequencySet, frame_report
from .flatten import (
    choose_steps,
    flattening_poly,
    interpolator_kernel,
    least_norm_interpolant,
    neumann_interpolate,
    neumann_problem,
    progression_gamma,
    property_c_anchors,
    window_pair,
)
from .periodize import (
    PiecewiseConstantTransform,
    fejer_signal,
    periodized_coefficients,
    poisson_gap_series,
    tent_signal,
)
from .randspec import (
    build_interpolation_spectrum,
    find_progressions,
    mc_hit_probability,
    sample_gamma,
)
from .spectra import format_spectrum_literal, gap_report, project


@dataclass(frozen=True)
class PipelineResult:
    summary: str
    artifact_name: str
    artifact_text: str
    exit_code: int
    payload: dict


def _fmt(x):
    return repr(float(x))


def _lattice(rng, scale):
    lo, hi = rng
    return FrequencySet.from_points(scale * np.arange(lo, hi + 1))


def _signal(cfg):
    if cfg["kind"] == "fejer":
        return fejer_signal()
    if cfg["kind"] == "tent":
        return tent_signal(cfg["lo"], cfg["hi"])
    raise ConfigError(f"unknown signal kind {cfg['kind']!r}")


# --- spectra ---------------------------------------------------------------

def _run_project(cfg):
    P = project(cfg["spectrum"], cfg["a"])
    rows = "\n".join(f"{iv.lo!r},{iv.hi!r}" for iv in P.intervals)
    text = "lo,hi\n" + (rows + "\n" if rows else "")
    summary = (
        f"project: {len(P.intervals)} intervals, measure {P.measure!r}, "
        f"period {cfg['a']!r}"
    )
    payload = {"measure": P.measure, "literal": format_spectrum_literal(P)}
    return summary, text, 0, payload


def _run_gaps(cfg):
    rep = gap_report(cfg["spectrum"], cfg["a"])
    text = (
        "period,weak,strong,complement_measure\n"
        f"{rep.period!r},{str(rep.weak).lower()},{str(rep.strong).lower()},"
        f"{rep.complement_measure!r}\n"
    )
    summary = (
        f"gaps: period {rep.period!r} weak={rep.weak} strong={rep.strong} "
        f"complement measure {rep.complement_measure!r}"
    )
    payload = {
        "weak": rep.weak,
        "strong": rep.strong,
        "complement_measure": rep.complement_measure,
        "witness": format_spectrum_literal(rep.witness),
    }
    return summary, text, 0, payload


# --- residual-driven approximation blocks ---------------------------------

_BLOCK_HDR = "k,n_lo,n_hi,m,residual,eps_k\n"


def _run_blocks(cfg):
    sched = blocks_mod.BlockSchedule.dyadic(cfg["k_max"])
    try:
        build = blocks_mod.build_blocks(
            cfg["spectrum"], sched, cfg["k_max"], cfg["n_cap"]
        )
    except BudgetExceeded as exc:
        text = _BLOCK_HDR
        summary = f"blocks: budget exhausted ({exc})"
        return summary, text, 2, {"error": str(exc), "best": exc.best}
    text = _BLOCK_HDR + "".join(r.csv_row() + "\n" for r in build.rows)
    last = build.blocks[-1]
    summary = (
        f"blocks: {len(build.blocks)} blocks up to k={build.k_max}, "
        f"last edge n={last.n_hi}"
    )
    payload = {"edges": [b.n_hi for b in build.blocks]}
    return summary, text, 0, payload


def _run_lambda(cfg):
    sched = blocks_mod.BlockSchedule.dyadic(cfg["k_max"])
    build = blocks_mod.build_blocks(
        cfg["spectrum"], sched, cfg["k_max"], cfg["n_cap"]
    )
    part = blocks_mod.partition_blocks(build.blocks, cfg["j"], cfg["rule"])
    alphas = uniqueness.vdc_alphas(cfg["j"])
    lam = uniqueness.build_lambda(part, alphas, cfg["j"], cfg["window"])
    text = "lambda\n" + "".join(f"{p!r}\n" for p in lam.points)
    summary = (
        f"lambda: {len(lam.points)} points, separation "
        f"{lam.points.separation!r}, uniformly discrete "
        f"{lam.is_uniformly_discrete}"
    )
    payload = {
        "n": len(lam.points),
        "separation": lam.points.separation,
        "uniformly_discrete": lam.is_uniformly_discrete,
    }
    return summary, text, 0, payload


# --- periodization and Poisson --------------------------------------------

def _run_periodize(cfg):
    values = cfg["values"]
    ivs = cfg["spectrum"].intervals
    if len(values) != len(ivs):
        raise ConfigError(
            f"{len(values)} values for {len(ivs)} spectrum intervals"
        )
    F = PiecewiseConstantTransform(cfg["spectrum"], values)
    rep = periodized_coefficients(F, cfg["v"], cfg["n_range"])
    lines = [
        f"{n},{c.real!r},{c.imag!r},{s.real!r},{s.imag!r},{abs(c - s)!r}"
        for n, c, s in zip(rep.n_values, rep.coeffs, rep.samples)
    ]
    text = (
        "n,coeff_re,coeff_im,sample_re,sample_im,abs_diff\n"
        + "".join(line + "\n" for line in lines)
    )
    summary = (
        f"periodize: |n| <= {cfg['n_range']}, max |c_n - f(n+v)| = "
        f"{rep.max_abs_diff!r}"
    )
    return summary, text, 0, {"max_abs_diff": rep.max_abs_diff}


def _run_poisson(cfg):
    val = poisson_gap_series(_signal(cfg), cfg["x"], cfg["t"], cfg["n"])
    text = (
        "x,t,N,value_re,value_im,tail_bound,inconclusive\n"
        f"{_fmt(cfg['x'])},{_fmt(cfg['t'])},{cfg['n']},"
        f"{val.value.real!r},{val.value.imag!r},{val.tail_bound!r},"
        f"{str(val.inconclusive).lower()}\n"
    )
    summary = (
        f"poisson: |sum| = {abs(val.value)!r}, tail bound "
        f"{val.tail_bound!r}, inconclusive {val.inconclusive}"
    )
    payload = {
        "abs_value": abs(val.value),
        "tail_bound": val.tail_bound,
        "inconclusive": val.inconclusive,
    }
    return summary, text, 0, payload


# --- flattening chain ------------------------------------------------------

def _flatten_cert(cfg, threads):
    steps = choose_steps(cfg["m"], (cfg["step_lo"], cfg["step_hi"]))
    anchors = [cfg["anchor_spacing"] * (j + 1) for j in range(cfg["m"])]
    gamma = progression_gamma(steps, anchors, cfg["length"])
    pc = property_c_anchors(gamma, steps, anchors, cfg["length"])
    step = cfg["grid_step"] if cfg["grid_step"] > 0 else None
    return flattening_poly(
        gamma, pc, cfg["eps"], cfg["n_budget"], grid_step=step, threads=threads
    )


def _run_flatten(cfg, threads=None):
    try:
        cert = _flatten_cert(cfg, threads)
        code = 0 if cert.certified else 2
    except BudgetExceeded as exc:
        cert = exc.best
        code = 2
    summary = (
        f"flatten: n={cert.n}, observed {cert.observed_max!r}, slack "
        f"{cert.bernstein_slack!r}, certified {cert.certified}"
    )
    payload = {
        "n": cert.n,
        "observed_max": cert.observed_max,
        "certified": cert.certified,
    }
    return summary, cert.csv(), code, payload


def _run_frame(cfg):
    lam = _lattice(cfg["lam_range"], cfg["lam_scale"])
    rep = frame_report(lam, cfg["spectrum"], cfg["claimed"])
    text = "n,min_eig,claimed,certified\n" + rep.csv_row() + "\n"
    code = 0 if (cfg["claimed"] is None or rep.certified) else 2
    summary = (
        f"frame: n={rep.n}, min_eig {rep.min_eigenvalue!r}, certified "
        f"{rep.certified}"
    )
    payload = {"min_eig": rep.min_eigenvalue, "certified": rep.certified}
    return summary, text, code, payload


def _unit_data(lam, index):
    c = np.zeros(len(lam))
    c[index if index >= 0 else len(lam) // 2] = 1.0
    return c


def _run_interpolate(cfg, threads=None):
    try:
        cert = _flatten_cert(cfg, threads)
    except BudgetExceeded as exc:
        cert = exc.best
    lam = _lattice(cfg["lam_range"], cfg["lam_scale"])
    kernel = interpolator_kernel(cert, window_pair(), lam)
    if not cert.certified or kernel.frame_bound is None:
        text = (
            "offdiag_max,frame_bound,certified\n"
            f"{kernel.offdiag_max!r},,false\n"
        )
        summary = (
            f"interpolate: no certificate (flatten certified "
            f"{cert.certified}, off-diagonal {kernel.offdiag_max!r})"
        )
        return summary, text, 2, {"offdiag_max": kernel.offdiag_max}
    data = cfg["data"] if cfg["data"] else _unit_data(lam, cfg["data_index"])
    res = least_norm_interpolant(lam, kernel.S_delta, data)
    rows = "".join(
        f"{p!r},{b.real!r},{b.imag!r}\n"
        for p, b in zip(lam, res.coefficients)
    )
    text = "lambda,coeff_re,coeff_im\n" + rows
    summary = (
        f"interpolate: n={len(lam)}, residual {res.residual!r}, min_eig "
        f"{res.min_eigenvalue!r}, offdiag {kernel.offdiag_max!r}"
    )
    payload = {
        "residual": res.residual,
        "min_eig": res.min_eigenvalue,
        "offdiag_max": kernel.offdiag_max,
        "frame_bound": kernel.frame_bound,
    }
    return summary, text, 0, payload


def _run_neumann(cfg):
    lam = _lattice(cfg["lam_range"], cfg["lam_scale"])
    rate = cfg["rate"]

    def profile(u):
        return np.exp(-rate * np.abs(u))

    data = cfg["data"] if cfg["data"] else _unit_data(lam, cfg["data_index"])
    prob = neumann_problem(lam, profile, data)
    res = neumann_interpolate(prob, tol=cfg["tol"], max_iter=cfg["max_iter"])
    rows = "".join(
        f"{i + 1},{u!r}\n" for i, u in enumerate(res.update_norms)
    )
    text = "iteration,update_norm\n" + rows
    summary = (
        f"neumann: contraction {prob.contraction_norm!r}, "
        f"{res.iterations} iterations, residual {res.residual!r}"
    )
    payload = {
        "contraction_norm": prob.contraction_norm,
        "iterations": res.iterations,
        "residual": res.residual,
    }
    return summary, text, 0, payload


# --- random spectra --------------------------------------------------------

def _run_random_mc(cfg):
    rep = mc_hit_probability(
        cfg["q"], cfg["n"], cfg["j"], cfg["trials"], cfg["seed"]
    )
    text = "q,N,J,trials,freq,stderr,seed\n" + rep.csv_row() + "\n"
    summary = (
        f"random-mc: freq {rep.freq!r} +- {rep.stderr!r} "
        f"({rep.trials} trials)"
    )
    payload = {"freq": rep.freq, "stderr": rep.stderr}
    return summary, text, 0, payload


_PIPE_HDR = "points,blocks,measure,contained,min_eig,claimed,certified\n"


def _run_random_pipeline(cfg):
    steps = choose_steps(cfg["m"], (cfg["step_lo"], cfg["step_hi"]))
    g = sample_gamma(cfg["seed"], cfg["j"])
    hits = []
    for q in steps:
        hits.extend(find_progressions(g, q, cfg["length"]))
    try:
        spec = build_interpolation_spectrum(g, hits, cfg["m"])
    except ContainmentViolation as exc:
        text = _PIPE_HDR + ",,,false,,,false\n"
        return f"random-pipeline: {exc}", text, 2, {"error": str(exc)}
    lam = _lattice(cfg["lam_range"], cfg["lam_scale"])
    rep = frame_report(lam, spec.S_delta, cfg["claimed"])
    claimed = "" if cfg["claimed"] is None else repr(cfg["claimed"])
    measure = spec.S_delta.measure
    text = _PIPE_HDR + (
        f"{len(spec.gamma_star)},{len(spec.S_delta.intervals)},{measure!r},"
        f"{str(spec.contained).lower()},{rep.min_eigenvalue!r},{claimed},"
        f"{str(rep.certified).lower()}\n"
    )
    code = 0 if (cfg["claimed"] is None or rep.certified) else 2
    summary = (
        f"random-pipeline: {len(spec.gamma_star)} ideal points, contained "
        f"{spec.contained}, min_eig {rep.min_eigenvalue!r}, certified "
        f"{rep.certified}"
    )
    payload = {
        "points": len(spec.gamma_star),
        "contained": spec.contained,
        "min_eig": rep.min_eigenvalue,
        "certified": rep.certified,
    }
    return summary, text, code, payload


# --- dispatch --------------------------------------------------------------

_FLATTEN_KEYS = {
    "eps": ("float", REQUIRED),
    "m": ("int", REQUIRED),
    "step_lo": ("float", REQUIRED),
    "step_hi": ("float", REQUIRED),
    "anchor_spacing": ("float", 6.0),
    "length": ("int", REQUIRED),
    "n_budget": ("int", REQUIRED),
    "grid_step": ("float", 0.0),
}

_LAT_KEYS = {
    "lam_range": ("intrange", REQUIRED),
    "lam_scale": ("float", 1.0),
}

_DATA_KEYS = {
    "data": ("floats", ()),
    "data_index": ("int", -1),
}

SCHEMAS = {
    "project": {"spectrum": ("spectrum", REQUIRED), "a": ("float", REQUIRED)},
    "gaps": {"spectrum": ("spectrum", REQUIRED), "a": ("float", REQUIRED)},
    "blocks": {
        "spectrum": ("spectrum", REQUIRED),
        "k_max": ("int", REQUIRED),
        "n_cap": ("int", REQUIRED),
    },
    "lambda": {
        "spectrum": ("spectrum", REQUIRED),
        "k_max": ("int", REQUIRED),
        "n_cap": ("int", REQUIRED),
        "j": ("int", REQUIRED),
        "window": ("int", REQUIRED),
        "rule": ("str", "round_robin"),
    },
    "periodize": {
        "spectrum": ("spectrum", REQUIRED),
        "values": ("floats", REQUIRED),
        "v": ("float", REQUIRED),
        "n_range": ("int", REQUIRED),
    },
    "poisson": {
        "kind": ("str", "fejer"),
        "lo": ("float", -0.5),
        "hi": ("float", 0.5),
        "x": ("float", REQUIRED),
        "t": ("float", REQUIRED),
        "n": ("int", REQUIRED),
    },
    "flatten": dict(_FLATTEN_KEYS),
    "frame": {
        "spectrum": ("spectrum", REQUIRED),
        "claimed": ("float", None),
        **_LAT_KEYS,
    },
    "interpolate": {**_FLATTEN_KEYS, **_LAT_KEYS, **_DATA_KEYS},
    "neumann": {
        **_LAT_KEYS,
        **_DATA_KEYS,
        "rate": ("float", 2.0),
        "tol": ("float", 1e-12),
        "max_iter": ("int", 1000),
    },
    "random-mc": {
        "q": ("float", REQUIRED),
        "n": ("int", REQUIRED),
        "j": ("int", REQUIRED),
        "trials": ("int", REQUIRED),
        "seed": ("int", 0),
    },
    "random-pipeline": {
        "seed": ("int", REQUIRED),
        "j": ("int", REQUIRED),
        "m": ("int", REQUIRED),
        "step_lo": ("float", 3.0),
        "step_hi": ("float", 4.0),
        "length": ("int", REQUIRED),
        "claimed": ("float", None),
        **_LAT_KEYS,
    },
}

_RUNNERS = {
    "project": _run_project,
    "gaps": _run_gaps,
    "blocks": _run_blocks,
    "lambda": _run_lambda,
    "periodize": _run_periodize,
    "poisson": _run_poisson,
    "flatten": _run_flatten,
    "frame": _run_frame,
    "interpolate": _run_interpolate,
    "neumann": _run_neumann,
    "random-mc": _run_random_mc,
    "random-pipeline": _run_random_pipeline,
}

SUBCOMMANDS = tuple(sorted(_RUNNERS))

_THREADED = {"flatten", "interpolate"}


def run(subcommand, entries, threads=None):
    """Dispatch coerced config to a pipeline; artifacts named by config hash."""
    if subcommand not in _RUNNERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    cfg = apply_schema(entries, SCHEMAS[subcommand])
    if subcommand in _THREADED:
        summary, text, code, payload = _RUNNERS[subcommand](cfg, threads)
    else:
        summary, text, code, payload = _RUNNERS[subcommand](cfg)
    name = f"{subcommand}-{config_hash(subcommand, entries)}.csv"
    return PipelineResult(summary, name, text, code, payload)
