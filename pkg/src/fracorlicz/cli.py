"""Experiment driver: JSON config in, CSV/JSON artifacts out.

Every subcommand reads one config file, writes its tables into the output
directory and finishes with a ``manifest.json`` recording the toolkit
version, the config echo and hash, the effective seed, the quadrature
policy and the kernel backend.  Reruns with the same config produce byte
identical CSV bodies: no timestamps, sorted JSON keys, repr-formatted
floats.

Exit codes: 0 success, 2 config validation failure, 3 numerical
divergence, 4 non-convergence.  FRAC_ORLICZ_SEED overrides the config
seed; ``--set a.b=value`` patches the config before validation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from ._backend import backend_name
from .domain import Domain, GridFunction, QuadratureRule, make_test_function
from .errors import (ConfigError, DivergenceError, NonConvergenceError,
                     ToolkitError, exit_code_for, EXIT_DIVERGENCE,
                     EXIT_NONCONVERGENCE)
from .fracspace import FracParams, frac_norm, gagliardo_seminorm, orlicz_gagliardo_seminorm
from .nfunction import NFunction
from .operator import apply_pv_field
from .orlicz import luxemburg_norm, orlicz_norm_amemiya
from .solver import DirichletProblem, SolverConfig, interior_indices, solve
from .verify import (bump_family, compact_embedding_evidence, embedding_ratio,
                     lipschitz_composition, mollifier_convergence,
                     norm_equivalence, poincare_ratio, ws1_embedding)
from .wsp import wsp_seminorm

__all__ = ["main"]


# ---------------------------------------------------------------------------
# config plumbing

def _fmt_cell(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(c) for c in row) + "\n")


def _reject_unknown(cfg, path, allowed):
    extra = sorted(set(cfg) - set(allowed))
    if extra:
        raise ConfigError("%s: unknown keys %s (allowed: %s)"
                          % (path, extra, sorted(allowed)))


def _need(cfg, key, path):
    if key not in cfg:
        raise ConfigError("%s.%s: required key missing" % (path, key))
    return cfg[key]


def _as_obj(v, path):
    if not isinstance(v, dict):
        raise ConfigError("%s: expected an object" % path)
    return v


def _as_number(v, path, lo=None, hi=None, open_lo=False, open_hi=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("%s: expected a number, got %r" % (path, v))
    v = float(v)
    if lo is not None and (v < lo or (open_lo and v == lo)):
        raise ConfigError("%s: must be %s %g, got %g"
                          % (path, ">" if open_lo else ">=", lo, v))
    if hi is not None and (v > hi or (open_hi and v == hi)):
        raise ConfigError("%s: must be %s %g, got %g"
                          % (path, "<" if open_hi else "<=", hi, v))
    return v


def _as_int(v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError("%s: expected an integer, got %r" % (path, v))
    if lo is not None and v < lo:
        raise ConfigError("%s: must be >= %d, got %d" % (path, lo, v))
    return v


def _as_choice(v, path, choices):
    if v not in choices:
        raise ConfigError("%s: expected one of %s, got %r"
                          % (path, sorted(choices), v))
    return v


def _parse_quadrature(cfg, path="quadrature"):
    if cfg is None:
        return None
    cfg = _as_obj(cfg, path)
    _reject_unknown(cfg, path, {"scheme", "diagonal", "band_multiple", "ladder_depth"})
    kwargs = {}
    if "scheme" in cfg:
        kwargs["scheme"] = _as_choice(cfg["scheme"], path + ".scheme",
                                      {"trapezoid", "simpson"})
    if "diagonal" in cfg:
        kwargs["diagonal"] = _as_choice(cfg["diagonal"], path + ".diagonal",
                                        {"exclude_band", "pv_pair"})
    if "band_multiple" in cfg:
        kwargs["band_multiple"] = _as_int(cfg["band_multiple"],
                                          path + ".band_multiple", lo=1)
    if "ladder_depth" in cfg:
        kwargs["ladder_depth"] = _as_int(cfg["ladder_depth"],
                                         path + ".ladder_depth", lo=1)
    return QuadratureRule(**kwargs)


def _parse_domain(cfg, path="domain"):
    cfg = _as_obj(cfg, path)
    _reject_unknown(cfg, path, {"bounds", "shape", "halo"})
    bounds = _need(cfg, "bounds", path)
    shape = _need(cfg, "shape", path)
    if not isinstance(bounds, list) or not all(
            isinstance(b, list) and len(b) == 2 for b in bounds):
        raise ConfigError("%s.bounds: expected a list of [lo, hi] pairs" % path)
    if not isinstance(shape, list) or not all(isinstance(n, int) for n in shape):
        raise ConfigError("%s.shape: expected a list of integers" % path)
    for k, (lo, hi) in enumerate(bounds):
        _as_number(lo, "%s.bounds[%d]" % (path, k))
        _as_number(hi, "%s.bounds[%d]" % (path, k))
        if not hi > lo:
            raise ConfigError("%s.bounds[%d]: upper bound must exceed lower" % (path, k))
    halo = cfg.get("halo")
    if halo is not None:
        halo = _as_number(halo, path + ".halo", lo=0.0, open_lo=True)
    try:
        return Domain(tuple(tuple(b) for b in bounds), tuple(shape), halo=halo)
    except ToolkitError as err:
        raise ConfigError("%s: %s" % (path, err))


def _parse_nfunction(cfg, path="nfunction"):
    return NFunction.from_config(_as_obj(cfg, path), path=path)


_FUNCTION_KINDS = {"bump", "hat", "random", "linear", "constant", "csv"}


def _parse_function(cfg, dom, seed, path="function"):
    cfg = _as_obj(cfg, path)
    kind = _as_choice(_need(cfg, "kind", path), path + ".kind", _FUNCTION_KINDS)
    allowed = {
        "bump": {"kind", "seed", "center", "width", "amplitude", "scale"},
        "hat": {"kind", "seed", "center", "width", "amplitude", "scale"},
        "random": {"kind", "seed", "smoothness", "scale"},
        "linear": {"kind", "a", "b", "scale"},
        "constant": {"kind", "value", "scale"},
        "csv": {"kind", "path", "extension", "scale"},
    }[kind]
    _reject_unknown(cfg, path, allowed)
    scale = _as_number(cfg.get("scale", 1.0), path + ".scale")
    if kind == "csv":
        src = _need(cfg, "path", path)
        ext = _as_choice(cfg.get("extension", "undefined"), path + ".extension",
                         {"zero", "undefined"})
        try:
            u = GridFunction.from_csv(src, dom, extension=ext)
        except OSError as err:
            raise ConfigError("%s.path: %s" % (path, err))
    else:
        params = {k: v for k, v in cfg.items() if k not in ("kind", "seed", "scale")}
        fn_seed = cfg.get("seed", seed)
        try:
            u = make_test_function(dom, kind=kind, seed=fn_seed, **params)
        except ToolkitError as err:
            raise ConfigError("%s: %s" % (path, err))
    if scale != 1.0:
        u = u * scale
    return u


def _parse_solver(cfg, path="solver"):
    if cfg is None:
        return SolverConfig()
    cfg = _as_obj(cfg, path)
    _reject_unknown(cfg, path, {"grad_tol", "max_iter", "contraction",
                                "sufficient_decrease", "probe_exponent"})
    kwargs = {}
    if "grad_tol" in cfg:
        kwargs["grad_tol"] = _as_number(cfg["grad_tol"], path + ".grad_tol",
                                        lo=0.0, open_lo=True)
    if "max_iter" in cfg:
        kwargs["max_iter"] = _as_int(cfg["max_iter"], path + ".max_iter", lo=1)
    if "contraction" in cfg:
        kwargs["contraction"] = _as_number(cfg["contraction"], path + ".contraction",
                                           lo=0.0, hi=1.0, open_lo=True, open_hi=True)
    if "sufficient_decrease" in cfg:
        kwargs["sufficient_decrease"] = _as_number(
            cfg["sufficient_decrease"], path + ".sufficient_decrease",
            lo=0.0, hi=1.0, open_lo=True, open_hi=True)
    if "probe_exponent" in cfg:
        kwargs["probe_exponent"] = _as_number(cfg["probe_exponent"],
                                              path + ".probe_exponent")
    return SolverConfig(**kwargs)


def _parse_s(cfg, path="s"):
    return _as_number(cfg, path, lo=0.0, hi=1.0, open_lo=True, open_hi=True)


def _set_override(cfg, spec):
    if "=" not in spec:
        raise ConfigError("--set expects key=value, got %r" % spec)
    key, raw = spec.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = cfg
    parts = key.split(".")
    for part in parts[:-1]:
        nxt = node.get(part)
        if nxt is None:
            nxt = {}
            node[part] = nxt
        if not isinstance(nxt, dict):
            raise ConfigError("--set %s: %r is not an object" % (key, part))
        node = nxt
    node[parts[-1]] = value


def _effective_seed(cfg):
    seed = cfg.get("seed", 0)
    env = os.environ.get("FRAC_ORLICZ_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError("FRAC_ORLICZ_SEED: expected an integer, got %r" % env)
    return _as_int(seed, "seed")


def _coord_header(dom):
    return ["x%d" % a for a in range(dom.ndim)]


# ---------------------------------------------------------------------------
# subcommands

def _run_nfun(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "nfunction", "grid", "tables",
                                      "delta2", "sobolev"})
    mfun = _parse_nfunction(_need(cfg, "nfunction", "<config>"))
    grid_cfg = _as_obj(cfg.get("grid", {}), "grid")
    _reject_unknown(grid_cfg, "grid", {"lo", "hi", "count", "log"})
    lo = _as_number(grid_cfg.get("lo", 1e-3), "grid.lo", lo=0.0, open_lo=True)
    hi = _as_number(grid_cfg.get("hi", 10.0), "grid.hi", lo=lo, open_lo=True)
    count = _as_int(grid_cfg.get("count", 201), "grid.count", lo=2)
    logspaced = bool(grid_cfg.get("log", True))
    hi = min(hi, mfun.domain_cap)
    ts = np.geomspace(lo, hi, count) if logspaced else np.linspace(lo, hi, count)

    tables = cfg.get("tables", ["values"])
    if not isinstance(tables, list):
        raise ConfigError("tables: expected a list")
    for name in tables:
        _as_choice(name, "tables", {"values", "conjugate", "delta2",
                                    "sobolev_conjugate"})

    artifacts, extras = [], {"family": mfun.family}
    if "values" in tables:
        rows = [(t, mfun.evaluate(t), mfun.density(t),
                 mfun.inverse(min(mfun.evaluate(t), mfun.evaluate(mfun.domain_cap))))
                for t in ts]
        _write_csv(os.path.join(outdir, "values.csv"),
                   ["t", "value", "density", "inverse_at_value"], rows)
        artifacts.append("values.csv")
    if "conjugate" in tables:
        conj = mfun.conjugate()
        ss = np.geomspace(max(lo, 1e-6), min(hi, conj.domain_cap), count)
        rows = [(t, conj.evaluate(t), conj.density(t)) for t in ss]
        _write_csv(os.path.join(outdir, "conjugate.csv"),
                   ["t", "conjugate", "conjugate_density"], rows)
        artifacts.append("conjugate.csv")
    if "delta2" in tables:
        d2cfg = _as_obj(cfg.get("delta2", {}), "delta2")
        _reject_unknown(d2cfg, "delta2", {"t0", "T"})
        t0 = _as_number(d2cfg.get("t0", 1e-3), "delta2.t0", lo=0.0, open_lo=True)
        T = _as_number(d2cfg.get("T", min(10.0, mfun.domain_cap / 2)), "delta2.T",
                       lo=t0, open_lo=True)
        const = mfun.delta2_constant(t0, T)
        probe = np.geomspace(t0, T, 65)
        rows = [(t, mfun.evaluate(2 * t) / mfun.evaluate(t)) for t in probe]
        _write_csv(os.path.join(outdir, "delta2.csv"), ["t", "doubling_ratio"], rows)
        artifacts.append("delta2.csv")
        extras["delta2_constant"] = const
    if "sobolev_conjugate" in tables:
        sob = _as_obj(_need(cfg, "sobolev", "<config>"), "sobolev")
        _reject_unknown(sob, "sobolev", {"N", "s"})
        N = _as_int(_need(sob, "N", "sobolev"), "sobolev.N", lo=1)
        s = _parse_s(_need(sob, "s", "sobolev"), "sobolev.s")
        mstar = mfun.sobolev_conjugate(N, s)
        args = mstar.info["arg"]
        tgrid = np.geomspace(args[0] * 4.0, args[-1] / 4.0, 129)
        rows = [(t, mstar.evaluate(t)) for t in tgrid]
        _write_csv(os.path.join(outdir, "sobolev_conjugate.csv"),
                   ["t", "value"], rows)
        artifacts.append("sobolev_conjugate.csv")
        mid = tgrid[32:-32]
        slope = float(np.polyfit(np.log(mid),
                                 np.log([mstar.evaluate(t) for t in mid]), 1)[0])
        extras["sobolev_slope"] = slope
        if mfun.family == "power":
            p = mfun.params[0]
            extras["sobolev_slope_expected"] = N * p / (N - s * p)
    return extras, artifacts, 0


def _norm_table(u, mfun, params):
    lux = luxemburg_norm(u, mfun, params.rule)
    ame = orlicz_norm_amemiya(u, mfun, params.rule)
    gauge = gagliardo_seminorm(u, params)
    inf_form = orlicz_gagliardo_seminorm(u, params)
    return {
        "luxemburg": lux,
        "amemiya": ame,
        "gagliardo_gauge": gauge,
        "gagliardo_infimum": inf_form,
        "frac_norm": lux + gauge,
    }


def _run_norm(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "nfunction", "domain", "s",
                                      "quadrature", "function"})
    seed = _effective_seed(cfg)
    mfun = _parse_nfunction(_need(cfg, "nfunction", "<config>"))
    dom = _parse_domain(_need(cfg, "domain", "<config>"))
    s = _parse_s(_need(cfg, "s", "<config>"))
    rule = _parse_quadrature(cfg.get("quadrature"))
    params = FracParams(s=s, mfun=mfun, rule=rule)
    u = _parse_function(_need(cfg, "function", "<config>"), dom, seed)
    table = _norm_table(u, mfun, params)
    header = sorted(table)
    _write_csv(os.path.join(outdir, "norms.csv"), header,
               [tuple(table[k] for k in header)])
    return {"norms": table}, ["norms.csv"], 0


def _run_apply(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "nfunction", "domain", "s",
                                      "quadrature", "function"})
    seed = _effective_seed(cfg)
    mfun = _parse_nfunction(_need(cfg, "nfunction", "<config>"))
    dom = _parse_domain(_need(cfg, "domain", "<config>"))
    s = _parse_s(_need(cfg, "s", "<config>"))
    rule = _parse_quadrature(cfg.get("quadrature"))
    params = FracParams(s=s, mfun=mfun, rule=rule)
    u = _parse_function(_need(cfg, "function", "<config>"), dom, seed)
    if u.extension != "zero":
        raise ConfigError("function.kind: the operator needs a zero-extended "
                          "function (bump, hat, random, or csv with extension zero)")
    rep = apply_pv_field(u, params)
    coords = dom.node_coords(extended=False)
    vals = rep.field.values.ravel()
    finest = rep.finest.values.ravel()
    conv = rep.converged.ravel()
    rows = [(k,) + tuple(coords[k]) + (vals[k], finest[k], bool(conv[k]))
            for k in range(len(vals))]
    _write_csv(os.path.join(outdir, "field.csv"),
               ["index"] + _coord_header(dom) + ["value", "finest", "converged"],
               rows)
    extras = {
        "non_converged": int(np.sum(~conv)),
        "band_widths": list(rep.band_widths),
    }
    code = 0
    if not np.all(np.isfinite(vals)):
        extras["divergence"] = "operator field contains non-finite values"
        code = EXIT_DIVERGENCE
    return extras, ["field.csv"], code


def _parse_rhs(cfg, dom, seed, path="rhs"):
    return _parse_function(cfg, dom, seed, path=path)


def _run_solve(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "nfunction", "domain", "s",
                                      "quadrature", "rhs", "solver", "start"})
    seed = _effective_seed(cfg)
    mfun = _parse_nfunction(_need(cfg, "nfunction", "<config>"))
    dom = _parse_domain(_need(cfg, "domain", "<config>"))
    s = _parse_s(_need(cfg, "s", "<config>"))
    rule = _parse_quadrature(cfg.get("quadrature"))
    params = FracParams(s=s, mfun=mfun, rule=rule)
    f = _parse_rhs(_need(cfg, "rhs", "<config>"), dom, seed)
    scfg = _parse_solver(cfg.get("solver"))

    start = None
    start_cfg = cfg.get("start")
    if start_cfg is not None:
        start_cfg = _as_obj(start_cfg, "start")
        _reject_unknown(start_cfg, "start", {"kind", "scale"})
        skind = _as_choice(_need(start_cfg, "kind", "start"), "start.kind",
                           {"zero", "random"})
        if skind == "random":
            scale = _as_number(start_cfg.get("scale", 0.1), "start.scale")
            rng = np.random.default_rng(seed)
            start = scale * rng.standard_normal(len(interior_indices(dom)))

    prob = DirichletProblem(dom, f, params)
    extras = {}
    code = 0
    try:
        res = solve(prob, scfg, start=start)
    except NonConvergenceError as err:
        extras["error"] = str(err)
        return extras, [], EXIT_NONCONVERGENCE

    coords = dom.node_coords(extended=False)
    vals = res.u.values.ravel()
    rows = [(k,) + tuple(coords[k]) + (vals[k],) for k in range(len(vals))]
    _write_csv(os.path.join(outdir, "solution.csv"),
               ["index"] + _coord_header(dom) + ["value"], rows)
    _write_csv(os.path.join(outdir, "trace.csv"),
               ["iteration", "energy", "residual"],
               [(k, e, r) for k, (e, r) in
                enumerate(zip(res.energy_trace, res.residual_trace))])
    extras["report"] = {
        "converged": bool(res.converged),
        "iterations": res.iterations,
        "residual": res.residual,
        "delta2": res.delta2,
        "message": res.message,
    }
    if not res.converged:
        code = EXIT_NONCONVERGENCE
    return extras, ["solution.csv", "trace.csv"], code


_VERIFY_CHECKS = ("poincare", "embedding", "sandwich", "ws1", "lipschitz",
                  "mollifier", "compact")


def _run_verify(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "nfunction", "domain", "s",
                                      "quadrature", "checks", "family",
                                      "embedding_dim", "mollifier"})
    seed = _effective_seed(cfg)
    mfun = _parse_nfunction(_need(cfg, "nfunction", "<config>"))
    dom = _parse_domain(_need(cfg, "domain", "<config>"))
    s = _parse_s(_need(cfg, "s", "<config>"))
    rule = _parse_quadrature(cfg.get("quadrature"))
    params = FracParams(s=s, mfun=mfun, rule=rule)

    checks = cfg.get("checks", "all")
    if checks == "all":
        checks = list(_VERIFY_CHECKS)
    if not isinstance(checks, list):
        raise ConfigError("checks: expected a list or \"all\"")
    for name in checks:
        _as_choice(name, "checks", set(_VERIFY_CHECKS))

    fam_cfg = _as_obj(cfg.get("family", {}), "family")
    _reject_unknown(fam_cfg, "family", {"count"})
    count = _as_int(fam_cfg.get("count", 20), "family.count", lo=1)
    family = bump_family(dom, count, seed=seed)

    def run_check(name):
        if name == "poincare":
            rep = poincare_ratio(family, params)
            rows = [(r["index"], r["norm"], r["seminorm"], r["ratio"])
                    for r in rep.rows]
            return name, ["index", "norm", "seminorm", "ratio"], rows, \
                {"max_ratio": rep.max_ratio, "skipped": len(rep.skipped)}
        if name == "embedding":
            N = _as_int(cfg.get("embedding_dim", dom.ndim), "embedding_dim", lo=1)
            rep = embedding_ratio(family, params, N)
            rows = [(r["index"], r["target_norm"], r["frac_norm"], r["ratio"])
                    for r in rep.rows]
            return name, ["index", "target_norm", "frac_norm", "ratio"], rows, \
                {"max_ratio": rep.max_ratio, "skipped": len(rep.skipped)}
        if name == "sandwich":
            rows = []
            for k, u in enumerate(family):
                r1, r2 = norm_equivalence(u, params)
                rows.append((k, r1, r2))
            rmax = max(max(r[1], r[2]) for r in rows)
            rmin = min(min(r[1], r[2]) for r in rows)
            return name, ["index", "seminorm_ratio", "norm_ratio"], rows, \
                {"min": rmin, "max": rmax}
        if name == "ws1":
            rows = []
            worst = np.inf
            for k, u in enumerate(family):
                d = ws1_embedding(u, params, detail=True)
                worst = min(worst, d["gap"])
                rows.append((k, d["gap"], d["constant"], d["c_prime"],
                             d["unit_norm"], d["lhs"], d["orlicz_norm"]))
            return name, ["index", "gap", "constant", "c_prime", "unit_norm",
                          "direct_norm", "orlicz_norm"], rows, {"min_gap": worst}
        if name == "lipschitz":
            rows = []
            ok = True
            for k, u in enumerate(family):
                cut = 0.5 * u.sup_norm()
                before, after = lipschitz_composition(u, cut, params)
                ok = ok and after <= before + 1e-12
                rows.append((k, cut, before, after))
            return name, ["index", "cutoff", "before", "after"], rows, \
                {"all_contracted": ok}
        if name == "mollifier":
            mcfg = _as_obj(cfg.get("mollifier", {}), "mollifier")
            _reject_unknown(mcfg, "mollifier", {"eps", "function"})
            ladder = mcfg.get("eps", [0.2, 0.1, 0.05, 0.025])
            if not isinstance(ladder, list) or not ladder:
                raise ConfigError("mollifier.eps: expected a nonempty list")
            if "function" in mcfg:
                u = _parse_function(mcfg["function"], dom, seed, path="mollifier.function")
            else:
                u = make_test_function(dom, kind="bump", seed=seed,
                                       center=tuple(0.5 * (lo + hi) for lo, hi in dom.bounds),
                                       width=tuple(0.45 * (hi - lo) for lo, hi in dom.bounds),
                                       amplitude=0.5)
            rep = mollifier_convergence(u, params, ladder)
            rows = [(r["eps"], r["norm"], r["seminorm"]) for r in rep.rows]
            return name, ["eps", "norm", "seminorm"], rows, \
                {"skipped": len(rep.skipped)}
        if name == "compact":
            unit = []
            for u in family:
                nn = frac_norm(u, params)
                if nn > 0:
                    unit.append(u * (1.0 / nn))
            target = NFunction.power(2.0)
            rep = compact_embedding_evidence(unit, params, target, N=dom.ndim)
            rows = [(r["eps"], r["max_drift"], r["diameter"]) for r in rep.rows]
            return name, ["eps", "max_drift", "diameter"], rows, \
                {"precondition_ok": rep.precondition_ok}
        raise ConfigError("checks: unknown check %r" % name)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_check, checks))
    else:
        results = [run_check(name) for name in checks]

    artifacts = []
    summaries = {}
    for name, header, rows, summary in results:
        fname = name + ".csv"
        _write_csv(os.path.join(outdir, fname), header, rows)
        artifacts.append(fname)
        summaries[name] = summary
    return {"summaries": summaries}, artifacts, 0


def _run_reduce_p(cfg, outdir, threads):
    _reject_unknown(cfg, "<config>", {"seed", "domain", "quadrature",
                                      "p_values", "s_values", "coeff",
                                      "function"})
    seed = _effective_seed(cfg)
    dom = _parse_domain(_need(cfg, "domain", "<config>"))
    rule = _parse_quadrature(cfg.get("quadrature"))
    p_values = _need(cfg, "p_values", "<config>")
    s_values = _need(cfg, "s_values", "<config>")
    if not isinstance(p_values, list) or not p_values:
        raise ConfigError("p_values: expected a nonempty list")
    if not isinstance(s_values, list) or not s_values:
        raise ConfigError("s_values: expected a nonempty list")
    ps = [_as_number(p, "p_values", lo=1.0, open_lo=True) for p in p_values]
    ss = [_parse_s(s, "s_values") for s in s_values]
    coeff = _as_number(cfg.get("coeff", 1.0), "coeff", lo=0.0, open_lo=True)
    if "function" in cfg:
        u = _parse_function(cfg["function"], dom, seed)
    else:
        u = make_test_function(dom, kind="bump", seed=seed)

    cases = [(p, s) for p in ps for s in ss]

    def run_case(case):
        p, s = case
        params = FracParams(s=s, mfun=NFunction.power(p, coeff), rule=rule)
        orl = gagliardo_seminorm(u, params)
        # for M = c t^p the kernel gains c^{1/p} and the gauge another
        # c^{1/p}, so the classical seminorm picks up c^{2/p} in comparison
        direct = coeff ** (2.0 / p) * wsp_seminorm(u, s, p, params.rule)
        rel = abs(orl - direct) / direct if direct > 0 else float("nan")
        return p, s, orl, direct, rel

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_case, cases))
    else:
        rows = [run_case(c) for c in cases]
    _write_csv(os.path.join(outdir, "reduction.csv"),
               ["p", "s", "orlicz_seminorm", "direct_seminorm", "rel_diff"],
               rows)
    finite = [r[4] for r in rows if np.isfinite(r[4])]
    return {"max_rel_diff": max(finite) if finite else float("nan")}, \
        ["reduction.csv"], 0


_RUNNERS = {
    "nfun": _run_nfun,
    "norm": _run_norm,
    "apply": _run_apply,
    "solve": _run_solve,
    "verify": _run_verify,
    "reduce-p": _run_reduce_p,
}


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracorlicz",
        description="Fractional Orlicz-Sobolev toolkit experiment driver.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("nfun", "Young-function tables: values, conjugate, doubling, "
                     "Sobolev conjugate"),
            ("norm", "Orlicz and fractional norms of a declared grid function"),
            ("apply", "nonlocal operator field over the grid"),
            ("solve", "Dirichlet problem via descent"),
            ("verify", "inequality check suites"),
            ("reduce-p", "power-family cross-validation against the direct "
                         "fractional seminorm")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default="fracorlicz-out",
                       help="output directory (default: fracorlicz-out)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap for independent sub-tasks")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (dotted path, JSON value)")
    return parser


def _config_hash(cfg):
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads: must be at least 1")
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as err:
            raise ConfigError("--config: %s" % err)
        except json.JSONDecodeError as err:
            raise ConfigError("--config: invalid JSON (%s)" % err)
        if not isinstance(cfg, dict):
            raise ConfigError("--config: top level must be an object")
        for spec in args.set:
            _set_override(cfg, spec)

        os.makedirs(args.out, exist_ok=True)
        extras, artifacts, code = _RUNNERS[args.command](cfg, args.out, args.threads)

        manifest = {
            "version": __version__,
            "subcommand": args.command,
            "config": cfg,
            "config_hash": _config_hash(cfg),
            "seed": _effective_seed(cfg),
            "backend": backend_name(),
            "threads": args.threads,
            "artifacts": artifacts,
        }
        manifest.update(extras)
        with open(os.path.join(args.out, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
        return code
    except ConfigError as err:
        print("config error: %s" % err, file=sys.stderr)
        return exit_code_for(err)
    except DivergenceError as err:
        print("divergence: %s" % err, file=sys.stderr)
        return exit_code_for(err)
    except NonConvergenceError as err:
        print("non-convergence: %s" % err, file=sys.stderr)
        return exit_code_for(err)
    except ToolkitError as err:
        print("error: %s" % err, file=sys.stderr)
        return exit_code_for(err)


if __name__ == "__main__":
    sys.exit(main())
