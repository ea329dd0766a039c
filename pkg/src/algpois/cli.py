"""Command-line front end: validation reports, trajectory export, action
compatibility, loop and star-group verification suites.

Subcommands: validate | flow | frame | compat | loop | stargroup | catalog.
Exit codes: 0 pass, 2 residual failure, 3 configuration error.  The env var
ALGPOIS_SEED overrides any configured seed.
"""

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import hamilton as hm
from . import liealg as la
from . import loopext as lp
from . import poisson as ps
from . import stargroup as sg
from .actions import catalog, catalog_names, equivariance_residual
from .algebroid import Section
from .errors import AlgpoisError, ConfigError, UnknownAction, UnknownAlgebra
from .polyparse import parse_hamiltonian
from .svgplot import svg_curves

RESIDUAL_TOL = 1e-8

_CONFIG_KEYS = {
    "validate": {"action", "samples", "seed", "out"},
    "flow": {"action", "hamiltonian", "init", "t_end", "dt", "out", "svg",
             "seed", "xi_only"},
    "frame": {"action", "hamiltonian", "init_z", "init_xi", "targets",
              "t_end", "dt", "out", "svg", "seed"},
    "compat": {"action", "action2", "k_values", "samples", "seed", "out"},
    "loop": {"algebra", "action", "n_grid", "degree", "trials", "seed", "out"},
    "stargroup": {"action", "points", "eps", "scale", "trials", "seed", "out"},
}


def read_config(path, command):
    """Flat key = value file; '#' comments; unknown keys rejected."""
    cfg = {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if key in cfg:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        cfg[key] = val
    unknown = set(cfg) - _CONFIG_KEYS[command]
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)} for {command}")
    return cfg


def _floats(text):
    try:
        return [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}") from exc


def resolve_seed(flag_value, cfg, required):
    env = os.environ.get("ALGPOIS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"ALGPOIS_SEED must be an integer, got {env!r}") from exc
    if flag_value is not None:
        return int(flag_value)
    if "seed" in cfg:
        try:
            return int(cfg["seed"])
        except ValueError as exc:
            raise ConfigError(f"seed must be an integer, got {cfg['seed']!r}") from exc
    if required:
        raise ConfigError("a seed is mandatory for randomized suites "
                          "(flag --seed, config 'seed =', or ALGPOIS_SEED)")
    return None


def emit(report, out_path):
    text = json.dumps(report, sort_keys=True, indent=2, default=float)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _timestamp():
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _hamiltonian_from_spec(spec_text, p, r):
    spec_text = spec_text.strip()
    if spec_text.startswith("preset:"):
        return hm.preset(spec_text.split(":", 1)[1])
    if spec_text.startswith("poly:"):
        H, n_z, n_xi = parse_hamiltonian(spec_text.split(":", 1)[1])
        if n_z > p or n_xi > r:
            raise ConfigError(
                f"hamiltonian uses z{n_z}/xi{n_xi} but the structure has "
                f"p={p}, r={r}")
        return H
    if spec_text in hm.PRESETS:
        return hm.PRESETS[spec_text]
    raise ConfigError(f"hamiltonian {spec_text!r}: use preset:<name> or poly:<expr>")


def write_trajectory_csv(path, traj, colnames):
    with open(path, "w") as fh:
        fh.write(",".join(["t"] + list(colnames)) + "\n")
        for t, row in zip(traj.times, traj.states):
            vals = ",".join(f"{v:.17g}" for v in row)
            fh.write(f"{t:.17g},{vals}\n")


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------

def cmd_validate(args):
    cfg = read_config(args.config, "validate") if args.config else {}
    name = args.action or cfg.get("action")
    if not name:
        raise ConfigError("validate needs an action (--action or config)")
    samples = int(args.samples or cfg.get("samples", 100))
    seed = resolve_seed(args.seed, cfg, required=True)
    action = catalog(name)
    rng = np.random.default_rng(seed)
    P = ps.assemble(action)
    report = {
        "action": name,
        "samples": samples,
        "seed": seed,
        "timestamp": _timestamp(),
        "jacobi_max": ps.jacobi_residual(P, rng, samples),
        "equivariance_max": None,
        "canonical_max": None,
        "notes": [],
    }
    if action.has_act:
        eq = can = 0.0
        count = 0
        while count < samples:
            g = action.random_group(rng, 0.4)
            z = action.sample(rng)[0]
            w = np.concatenate([z, rng.uniform(-2, 2, action.r)])
            try:
                eq = max(eq, equivariance_residual(action, g, z))
                can = max(can, ps.canonical_action_residual(P, action, g, w))
            except AlgpoisError:
                continue
            count += 1
        report["equivariance_max"] = eq
        report["canonical_max"] = can
    else:
        report["notes"].append(
            "entry carries only its infinitesimal matrix; equivariance and "
            "canonical-action residuals are skipped")
    worst = max(v for v in (report["jacobi_max"], report["equivariance_max"],
                            report["canonical_max"]) if v is not None)
    report["pass"] = bool(worst < RESIDUAL_TOL)
    emit(report, args.out or cfg.get("out"))
    return 0 if report["pass"] else 2


def cmd_flow(args):
    cfg = read_config(args.config, "flow") if args.config else {}
    name = args.action or cfg.get("action")
    if not name:
        raise ConfigError("flow needs an action (--action or config)")
    action = catalog(name)
    xi_only = bool(args.xi_only or str(cfg.get("xi_only", "")).lower() in ("1", "true"))
    P = ps.lie_poisson_structure(action.alg) if xi_only else ps.assemble(action)
    H = _hamiltonian_from_spec(args.hamiltonian or cfg.get("hamiltonian", ""),
                               P.p, P.r)
    init = _floats(args.init or cfg.get("init", ""))
    if len(init) != P.dim:
        raise ConfigError(f"init has {len(init)} entries, structure needs {P.dim}")
    t_end = float(args.t_end or cfg.get("t_end", 5.0))
    dt = float(args.dt or cfg.get("dt", 1e-3))
    traj = hm.flow(P, H, init, t_end, dt)
    cols = [f"z{i+1}" for i in range(P.p)] + [f"xi{i+1}" for i in range(P.r)]
    out = args.out or cfg.get("out")
    if out:
        write_trajectory_csv(out, traj, cols)
    svg = args.svg or cfg.get("svg")
    if svg:
        if P.p >= 2:
            svg_curves(svg, [(traj.states[:, 0], traj.states[:, 1], "z1-z2")],
                       title=f"{name}: orbit projection")
        else:
            svg_curves(svg, [(traj.times, traj.states[:, 0], cols[0])],
                       title=f"{name}: coordinate vs t")
    drift = hm.conserved_monitor(traj, H)
    emit({"action": name, "t_end": t_end, "dt": dt, "xi_only": xi_only,
          "h_drift": drift, "csv": out, "svg": svg, "steps": len(traj.times) - 1,
          "timestamp": _timestamp()}, None if out else None)
    return 0


def cmd_frame(args):
    cfg = read_config(args.config, "frame") if args.config else {}
    name = args.action or cfg.get("action", "sl2-prolonged")
    action = catalog(name)
    H = _hamiltonian_from_spec(args.hamiltonian or cfg.get("hamiltonian", ""),
                               action.p, action.r)
    targets = _floats(args.targets or cfg.get("targets", "0,1,0"))
    init_z = _floats(args.init_z or cfg.get("init_z", ""))
    init_xi = _floats(args.init_xi or cfg.get("init_xi", ""))
    if len(init_z) != action.p or len(init_xi) != action.r:
        raise ConfigError("init_z / init_xi sizes do not match the action")
    t_end = float(args.t_end or cfg.get("t_end", 5.0))
    dt = float(args.dt or cfg.get("dt", 1e-3))
    frame = hm.moving_frame(action, targets)
    sigma0 = frame.sigma(init_z)
    traj = hm.frame_flow(action, H, targets, sigma0, init_xi, t_end, dt)
    n = action.alg.n
    cols = [f"sigma{i+1}{j+1}" for i in range(n) for j in range(n)]
    cols += [f"xi{i+1}" for i in range(action.r)]
    out = args.out or cfg.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(",".join(["t"] + cols + ["u"]) + "\n")
            for t, row in zip(traj.times, traj.states):
                u = -row[1] / row[0]
                vals = ",".join(f"{v:.17g}" for v in row)
                fh.write(f"{t:.17g},{vals},{u:.17g}\n")
    svg = args.svg or cfg.get("svg")
    if svg:
        u_vals = -traj.states[:, 1] / traj.states[:, 0]
        svg_curves(svg, [(traj.times, u_vals, "u(t)")],
                   title=f"{name}: reconstructed coordinate")
    dets = [float(np.linalg.det(w[: n * n].reshape(n, n))) for w in traj.states]
    emit({"action": name, "t_end": t_end, "dt": dt,
          "det_drift": float(np.max(np.abs(np.array(dets) - 1.0))),
          "csv": out, "svg": svg, "timestamp": _timestamp()}, None)
    return 0


def cmd_compat(args):
    cfg = read_config(args.config, "compat") if args.config else {}
    n1 = args.action or cfg.get("action")
    n2 = args.action2 or cfg.get("action2")
    if not (n1 and n2):
        raise ConfigError("compat needs --action and --action2")
    samples = int(args.samples or cfg.get("samples", 50))
    seed = resolve_seed(args.seed, cfg, required=True)
    ks = _floats(args.k_values or cfg.get("k_values", "0,0.5,1"))
    a1, a2 = catalog(n1), catalog(n2)
    rng = np.random.default_rng(seed)
    res = ps.compatibility_residual(a1, a2, rng, samples)
    P1, P2 = ps.assemble(a1), ps.assemble(a2)
    pencil_jac = {str(k): ps.jacobi_residual(ps.pencil(P1, P2, k), rng, 25)
                  for k in ks}
    report = {
        "action": n1, "action2": n2, "samples": samples, "seed": seed,
        "residual": res, "pencil_jacobi": pencil_jac,
        "compatible": bool(res < RESIDUAL_TOL),
        "timestamp": _timestamp(),
    }
    emit(report, args.out or cfg.get("out"))
    return 0


def cmd_loop(args):
    cfg = read_config(args.config, "loop") if args.config else {}
    alg = la.algebra(args.algebra or cfg.get("algebra", "sl2"))
    action = catalog(args.action or cfg.get("action", "sl2-projective"))
    N = int(args.n_grid or cfg.get("n_grid", 256))
    degree = int(args.degree or cfg.get("degree", 4))
    trials = int(args.trials or cfg.get("trials", 5))
    seed = resolve_seed(args.seed, cfg, required=True)
    rng = np.random.default_rng(seed)
    grid = lp.LoopGrid(N)
    beta_anti = cocyc1 = cocyc2 = 0.0
    for _ in range(trials):
        x, y, z = (lp.random_trig_section(grid, alg, rng, degree) for _ in range(3))
        beta_anti = max(beta_anti, abs(lp.cocycle_beta(x, y) + lp.cocycle_beta(y, x)))
        cocyc1 = max(cocyc1, lp.cocycle_residual_first(x, y, z))
        cocyc2 = max(cocyc2, lp.cocycle_residual_second(x, y, z, action=action))
    E = lp.E_field(action, grid)
    rows = lp.rho_hat_rows(action, grid)
    G = lp.gram_matrix(alg)
    e_resid = float(np.max(np.abs(rows - np.einsum("kl,al->ak", G, E.samples))))
    x = lp.random_trig_section(grid, alg, rng, degree)
    dF = lp.random_trig_section(grid, alg, rng, degree)
    state = lp.CentralState(x, r=-1.0)
    red = lp.ham_vf_second(state, dF, action=catalog("sl2-trivial")) \
        if alg.name == "sl2" else None
    reduction = (float(np.max(np.abs(red.samples - lp.ham_vf_first(state, dF).samples)))
                 if red is not None else None)
    tr_act = catalog("translation-scalar")
    tr_alg = tr_act.alg
    Fq = lp.random_quadratic_functional(grid, tr_alg, rng, degree=2)
    Gq = lp.random_quadratic_functional(grid, tr_alg, rng, degree=2)
    Hq = lp.random_quadratic_functional(grid, tr_alg, rng, degree=2)
    x0 = lp.random_trig_section(grid, tr_alg, rng, degree=2, scale=0.5)
    xi0 = lp.LoopSection(grid, tr_alg, np.full((N, 1), 0.7))
    jac0 = lp.jacobi_pencil_residual(0.0, Fq, Gq, Hq, x0, xi0, action=tr_act)
    report = {
        "algebra": alg.name, "action": action.name, "n_grid": N,
        "degree": degree, "trials": trials, "seed": seed,
        "beta_antisymmetry": beta_anti,
        "cocycle_first": cocyc1,
        "cocycle_second": cocyc2,
        "e_field_residual": e_resid,
        "trivial_reduction": reduction,
        "zero_bracket_jacobi": jac0,
        "timestamp": _timestamp(),
    }
    failed = (beta_anti > 1e-10 or cocyc1 > 1e-9 or cocyc2 > RESIDUAL_TOL
              or e_resid > 1e-10 or (reduction or 0.0) > 0.0 or jac0 > 1e-7)
    report["pass"] = not failed
    emit(report, args.out or cfg.get("out"))
    return 0 if report["pass"] else 2


def cmd_stargroup(args):
    cfg = read_config(args.config, "stargroup") if args.config else {}
    action = catalog(args.action or cfg.get("action", "sl2-projective"))
    n_points = int(args.points or cfg.get("points", 20))
    eps = float(args.eps or cfg.get("eps", 1e-3))
    scale = float(args.scale or cfg.get("scale", 0.4))
    trials = int(args.trials or cfg.get("trials", 2))
    seed = resolve_seed(args.seed, cfg, required=True)
    rng = np.random.default_rng(seed)
    alg = action.alg
    pts = action.sample(rng, n_points)

    def trig(scale_):
        amps = rng.uniform(-scale_, scale_, (alg.r, 3))

        def fn(z):
            import algpois.duals as dm
            u = z[0]
            return [amps[k, 0] * dm.sin(u) + amps[k, 1] * dm.cos(u)
                    + 0.5 * amps[k, 2] * dm.sin(2 * u) for k in range(alg.r)]

        return Section(alg, fn)

    unit = assoc = act_prop = inv = conj = 0.0
    for _ in range(trials):
        secs = [trig(scale) for _ in range(3)]
        gsec, hsec, fsec = (sg.exp_section(s, action, 0.15) for s in secs)
        unit = max(unit, sg.unit_law_residual(gsec, pts))
        assoc = max(assoc, sg.associativity_residual(gsec, hsec, fsec, pts))
        act_prop = max(act_prop, sg.action_property_residual(gsec, hsec, pts))
        small = sg.exp_section(trig(0.05), action, 1.0)
        inv = max(inv, sg.inverse_residual(small, pts[:5]))
        conj = max(conj, sg.conjugation_bracket_residual(
            action, secs[0], secs[1], eps, pts[:5]))
    report = {
        "action": action.name, "points": n_points, "eps": eps, "scale": scale,
        "trials": trials, "seed": seed,
        "unit_law": unit, "associativity": assoc, "action_property": act_prop,
        "inverse_residual": inv, "conjugation_vs_bracket": conj,
        "timestamp": _timestamp(),
    }
    report["pass"] = bool(unit < 1e-10 and assoc < 1e-10 and act_prop < 1e-10
                          and inv < 1e-9 and conj < 1e-3)
    emit(report, args.out or cfg.get("out"))
    return 0 if report["pass"] else 2


def cmd_catalog(args):
    emit({
        "actions": catalog_names(),
        "algebras": ["sl2", "so3", "se2", "aff2", "scalar", "translation(r)",
                     "semidirect(sl2,2)", "semidirect(so3,3)"],
        "hamiltonian_presets": sorted(hm.PRESETS),
        "timestamp": _timestamp(),
    }, args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="algpois", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value scenario file")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="write the JSON report or CSV here")

    p = sub.add_parser("validate", help="jacobi/equivariance/canonical residuals")
    common(p)
    p.add_argument("--action")
    p.add_argument("--samples", type=int)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("flow", help="integrate a Hamiltonian flow, export CSV/SVG")
    common(p)
    p.add_argument("--action")
    p.add_argument("--hamiltonian")
    p.add_argument("--init")
    p.add_argument("--t-end", dest="t_end")
    p.add_argument("--dt")
    p.add_argument("--svg")
    p.add_argument("--xi-only", dest="xi_only", action="store_true",
                   help="flow the bare Lie-Poisson structure of the algebra")
    p.set_defaults(fn=cmd_flow)

    p = sub.add_parser("frame", help="moving-frame reduced flow")
    common(p)
    p.add_argument("--action")
    p.add_argument("--hamiltonian")
    p.add_argument("--init-z", dest="init_z")
    p.add_argument("--init-xi", dest="init_xi")
    p.add_argument("--targets")
    p.add_argument("--t-end", dest="t_end")
    p.add_argument("--dt")
    p.add_argument("--svg")
    p.set_defaults(fn=cmd_frame)

    p = sub.add_parser("compat", help="compatibility of two actions")
    common(p)
    p.add_argument("--action")
    p.add_argument("--action2")
    p.add_argument("--k-values", dest="k_values")
    p.add_argument("--samples", type=int)
    p.set_defaults(fn=cmd_compat)

    p = sub.add_parser("loop", help="loop-algebra extension residual suite")
    common(p)
    p.add_argument("--algebra")
    p.add_argument("--action")
    p.add_argument("--N", dest="n_grid", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(fn=cmd_loop)

    p = sub.add_parser("stargroup", help="star-product verification suite")
    common(p)
    p.add_argument("--action")
    p.add_argument("--points", type=int)
    p.add_argument("--eps")
    p.add_argument("--scale")
    p.add_argument("--trials", type=int)
    p.set_defaults(fn=cmd_stargroup)

    p = sub.add_parser("catalog", help="list actions, algebras and presets")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_catalog)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, UnknownAction, UnknownAlgebra) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except AlgpoisError as exc:
        print(f"residual failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
