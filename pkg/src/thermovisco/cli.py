"""
Command-line interface.

    thermovisco run <config>
    thermovisco relax <config>
    thermovisco verify {convexity,symmetrizer,minors} [--samples N] [--seed S] [--model M]

Exit codes: 0 success, 1 configuration error (or a failed verification),
2 inadmissible state or time-step collapse during a run. Usage errors exit
with argparse's code 2.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import closure, config as config_mod, convexity, flux, output, scenarios, solver
from . import tensor, variants
from .errors import CFLCollapse, DomainError, Inadmissible, ParseError, ValidationError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INADMISSIBLE = 2

RELAX_COLUMNS = ("time", "theta", "trC", "norm_S", "sigma", "y_detY")


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser():
    p = argparse.ArgumentParser(
        prog="thermovisco",
        description="Viscoelastic Maxwell-fluid simulator and convexity checks.")
    p.add_argument("--threads", type=_positive_int, default=1,
                   help="worker threads (computation is vectorized; results do not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a 1D simulation")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="override the output directory")

    x = sub.add_parser("relax", help="homogeneous relaxation trajectory")
    x.add_argument("config")
    x.add_argument("--out", default=None, help="override the output directory")

    v = sub.add_parser("verify", help="convexity and symmetrizer verification suites")
    v.add_argument("suite", choices=("convexity", "symmetrizer", "minors"))
    v.add_argument("--samples", type=_positive_int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--model", choices=("maxwell", "kbkz", "all"), default="all")
    v.add_argument("--reduced", action="store_true",
                   help="symmetrizer: leave out the involution-constrained components")
    v.add_argument("--out", default=".", help="directory for the report CSV")
    return p


def _load(path):
    if not os.path.isfile(path):
        raise FileNotFoundError(f"config file not found: {path}")
    return config_mod.load_config(path)


def cmd_run(args):
    cfg = _load(args.config)
    res = solver.run(cfg, out_dir=args.out)
    print(f"completed {res.steps} steps, t = {res.time:.6g}; wrote {len(res.files)} files")
    return EXIT_OK


def relax_trajectory(model, u0, dt_out, t_end):
    """Rows ``(time, theta, tr C, |S|, Sigma, y det Y)`` of a homogeneous relaxation."""
    rows = []
    u = np.asarray(u0, dtype=float)
    n = int(np.ceil(t_end / dt_out - 1e-12))
    t = 0.0
    for k in range(n + 1):
        rows.append((t,) + _relax_row(model, u))
        if k == n:
            break
        h = min(dt_out, t_end - t)
        u = solver.relax_substep(u, model, h)
        t = t_end if k == n - 1 else t + h
    return np.array(rows)


def _relax_row(model, u):
    pv = model.primitive(u)
    mat = model.mat
    if isinstance(model, variants.KBKZModel):
        T = variants.kbkz_stress(pv, model.params, mat)
        trC = pv.trC1 + pv.trC2
        sigma = variants.kbkz_entropy_production(pv, model.params, mat)
        ydet = pv.y1 * tensor.det(pv.Y1)
    else:
        T = closure.cauchy_stress(pv, mat)
        trC = pv.trC
        sigma = closure.entropy_production(pv, mat)
        ydet = pv.y * tensor.det(pv.Y)
    S = T + pv.p[..., None, None] * np.eye(3)
    return (float(pv.theta), float(trC), float(np.sqrt(tensor.frob2(S))), float(sigma),
            float(ydet))


def cmd_relax(args):
    cfg = _load(args.config)
    model = scenarios.build_model(cfg)
    u0 = scenarios.homogeneous_state(cfg, model)
    rows = relax_trajectory(model, u0, cfg.relax_dt, cfg.relax_t_end)
    out_dir = args.out if args.out is not None else cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    path = output.write_table(os.path.join(out_dir, "relax.csv"), RELAX_COLUMNS, rows,
                              cfg.precision)
    print(f"wrote {path}: {len(rows)} rows, final Sigma = {rows[-1, 4]:.3e}")
    return EXIT_OK


def _default_material():
    return config_mod.parse_config("").material()


def verify_minors(n, seed):
    return [convexity.minors_report(n, seed)]


def verify_convexity(n, seed, model):
    reports = []
    for name, rep in convexity.entropy_convexity_report(n, seed).items():
        if model == "all" or name.startswith(model):
            reports.append(rep)
    mat = _default_material()
    if model in ("all", "maxwell"):
        reports.append(convexity.strict_convexity_sample("solvent", mat, n, seed))
        reports.append(convexity.strict_convexity_sample("hookean_trace", mat, n, seed))
    if model in ("all", "kbkz"):
        reports.append(convexity.strict_convexity_sample("kbkz_solvent", mat, n, seed))
    return reports


def verify_symmetrizer(n, seed, model, reduced=False, tol=1e-4):
    mat = _default_material()
    reports = []
    if model in ("all", "maxwell"):
        rep = convexity.VerificationReport("symmetrizer maxwell" + (" reduced" if reduced else ""))
        u = convexity.sample_states(mat, n, seed)
        m, a = flux.symmetrizer_check(u, mat, reduced=reduced)
        for k in range(n):
            rep.records.append(dict(sample=k, min_eig_H=float(m[k]), asym_rel=float(a[k]),
                                    passed=bool(m[k] > 0 and a[k] < tol)))
        reports.append(rep)
    if model in ("all", "kbkz"):
        params = variants.KBKZParams()
        rep = convexity.VerificationReport("symmetrizer kbkz" + (" reduced" if reduced else ""))
        u = convexity.sample_states(mat, n, seed, model="kbkz", params=params)
        for k in range(n):
            m, a = variants.symmetrizer_check(u[k], params, mat, reduced=reduced)
            rep.records.append(dict(sample=k, min_eig_H=float(m), asym_rel=float(a),
                                    passed=bool(m > 0 and a < tol)))
        reports.append(rep)
    return reports


DEFAULT_SAMPLES = {"minors": 100, "convexity": 100, "symmetrizer": 50}


def cmd_verify(args):
    n = args.samples if args.samples is not None else DEFAULT_SAMPLES[args.suite]
    if args.suite == "minors":
        reports = verify_minors(n, args.seed)
    elif args.suite == "convexity":
        reports = verify_convexity(n, args.seed, args.model)
    else:
        reports = verify_symmetrizer(n, args.seed, args.model, args.reduced)
    os.makedirs(args.out, exist_ok=True)
    ok = True
    for rep in reports:
        fname = "report_" + rep.name.replace(" ", "_").replace("+", "_") + ".csv"
        rep.write_csv(os.path.join(args.out, fname))
        print(rep.summary())
        ok = ok and rep.passed
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_CONFIG


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "relax": cmd_relax, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except (ParseError, ValidationError, FileNotFoundError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (Inadmissible, CFLCollapse) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE


if __name__ == "__main__":
    sys.exit(main())
