"""Command-line entry point: ``holoelastic {train,eval,sif,benchmark,cases}``."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import benchmarks
from .cases import CASE_FACTORIES, builtin_cases
from .config import OUTPUT_ENV, build_case, load_config
from .energy import assemble_energy, build_samples, train, write_history_csv
from .errors import ConfigError, HoloElasticError, ModeMismatch, NonFiniteLoss
from .fracture import (mouth_opening, model_provider, near_field_radii, radius_sweep,
                       sif_from_interaction, sif_near_field)
from .network import load_model, save_model
from .oracles import as_numpy, field_metrics, sent_cod, sent_k1

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _fmt(x):
    return f"{x:.17g}"


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _parse_params(pairs):
    params = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def _out_dir(default):
    out = os.environ.get(OUTPUT_ENV) or default
    os.makedirs(out, exist_ok=True)
    return out


# -- reports -------------------------------------------------------------------------

def exact_metrics(model, case, n=2000, seed=12345):
    """Per-field errors against the case oracle on an independent point set."""
    from dataclasses import replace
    from .geometry import sample_interior
    if case.exact is None:
        return None
    pts, _ = sample_interior(case.domain, replace(case.plan, n_interior=n, seed=seed,
                                                  sequence="uniform"))
    return field_metrics(as_numpy(model.fields(pts, case.material)), case.exact(pts))


def crack_report(model, case, radius=None, n=256):
    tips = []
    provider = model_provider(model, case.material)
    for tip in case.domain.crack.tips:
        inter = sif_from_interaction(model, case, tip, radius, n)
        near = sif_near_field(provider, tip, near_field_radii(case.domain.crack))
        tips.append({"tip": tip.label, "position": [tip.position.real, tip.position.imag],
                     "interaction": inter.as_dict(), "near_field": near.as_dict()})
    sweep = [r.as_dict() for r in radius_sweep(model, case, n=n)]
    doc = {"tips": tips, "radius_sweep": sweep}
    if case.name == "sent":
        p = case.params
        doc["reference"] = {"K_I": sent_k1(p["a0"], p["L"], p["sigma0"]),
                            "COD": sent_cod(p["a0"], p["L"], p["sigma0"], case.material)}
        doc["COD"] = mouth_opening(model, case.material)
    if case.name == "occt":
        from .oracles import OCCT_FEM
        doc["reference"] = OCCT_FEM
    return doc


# -- subcommands ----------------------------------------------------------------------

def cmd_train(args):
    cfg = load_config(args.config)
    out = _out_dir(cfg.output_dir)
    case = cfg.case
    t0 = time.perf_counter()
    samples = build_samples(case)
    model, history = train(case, cfg.network, cfg.train, samples)
    wall = time.perf_counter() - t0
    save_model(model, os.path.join(out, "model.json"))
    write_history_csv(history, os.path.join(out, "history.csv"))
    energy = assemble_energy(model, case, samples, cfg.train.alpha_u)
    report = {
        "config": cfg.resolved(),
        "seed": cfg.train.seed,
        "iterations": cfg.train.iterations,
        "wall_time_s": 0.0 if cfg.train.deterministic else wall,
        "final_energy": {"internal": energy.internal, "external": energy.external,
                         "dirichlet_penalty": energy.dirichlet_penalty, "total": energy.total},
    }
    metrics = exact_metrics(model, case)
    if metrics is not None:
        report["metrics"] = metrics
    if case.domain.crack is not None:
        report["fracture"] = crack_report(model, case)
    _write_json(os.path.join(out, "report.json"), report)
    print(f"trained {case.name}: total energy {energy.total:.6g}, outputs in {out}")
    if metrics is not None:
        for name, m in metrics.items():
            print(f"  rel-L2 {name:>4}: {m['rel_l2']:.3e}")
    return EXIT_OK


FIELD_COLUMNS = ("x", "y", "sxx", "syy", "sxy", "svm", "ux", "uy")


def eval_grid(model, case, nx, ny):
    """Regular grid over the bounding box keeping only evaluable interior points."""
    x0, y0, x1, y1 = case.domain.bbox
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    z = (xs[None, :] + 1j * ys[:, None]).ravel()
    keep = case.domain.contains(z)
    crack = case.domain.crack
    if crack is not None:
        keep &= ~crack.near_cut(z, 1e-12 * crack.length)
        for tip in crack.tip_positions:
            keep &= np.abs(z - tip) > crack.core_radius
    return z[keep]


def cmd_eval(args):
    case = build_case(args.case, _parse_params(args.param))
    model = load_model(args.model)
    z = eval_grid(model, case, args.nx, args.ny)
    out_path = args.output or os.path.join(_out_dir(os.path.dirname(args.model) or "."),
                                           "fields.csv")
    rows = []
    if z.size:
        from .elasticity import von_mises
        f = as_numpy(model.fields(z, case.material))
        cols = (z.real, z.imag, f.sxx, f.syy, f.sxy, von_mises(f), f.ux, f.uy)
        rows = np.column_stack([np.broadcast_to(c, z.shape) for c in cols])
    else:
        print("warning: no grid point lies inside the domain", file=sys.stderr)
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(FIELD_COLUMNS)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    print(f"wrote {len(rows)} points to {out_path}")
    if z.size and case.exact is not None:
        for name, m in field_metrics(f, case.exact(z)).items():
            print(f"  rel-L2 {name:>4}: {m['rel_l2']:.3e}")
    return EXIT_OK


def cmd_sif(args):
    case = build_case(args.case, _parse_params(args.param))
    if case.domain.crack is None:
        raise ModeMismatch("case has no crack")
    model = load_model(args.model)
    doc = crack_report(model, case, args.radius, args.n)
    out_path = args.output or os.path.join(_out_dir(os.path.dirname(args.model) or "."),
                                           "sif.json")
    _write_json(out_path, doc)
    for t in doc["tips"]:
        i = t["interaction"]
        print(f"{t['tip']:>6}: K_I {i['K_I']:.6g}  K_II {i['K_II']:.6g}  (r = {i['radius']:g})")
    return EXIT_OK


def cmd_benchmark(args):
    if args.suite not in benchmarks.SUITES:
        print(f"unknown suite {args.suite!r}; valid suites: {', '.join(benchmarks.SUITES)}",
              file=sys.stderr)
        return EXIT_CONFIG
    results = benchmarks.SUITES[args.suite]()
    print(benchmarks.format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


def cmd_cases(args):
    for case in builtin_cases():
        crack = "crack" if case.domain.crack is not None else "plain"
        print(f"{case.name:<11} {crack:<6} {case.description}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="holoelastic", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a model from a JSON config")
    t.add_argument("config")
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="export fields on a regular grid as CSV")
    e.add_argument("model")
    e.add_argument("case", choices=sorted(CASE_FACTORIES))
    e.add_argument("--nx", type=int, default=50)
    e.add_argument("--ny", type=int, default=50)
    e.add_argument("--param", action="append", help="case parameter key=value")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sif", help="stress intensity factors of a crack-mode model")
    s.add_argument("model")
    s.add_argument("case", choices=sorted(CASE_FACTORIES))
    s.add_argument("--radius", type=float, default=None)
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--param", action="append", help="case parameter key=value")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sif)

    b = sub.add_parser("benchmark", help="run an acceptance suite")
    b.add_argument("suite")
    b.set_defaults(func=cmd_benchmark)

    c = sub.add_parser("cases", help="list built-in cases")
    c.set_defaults(func=cmd_cases)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModeMismatch, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonFiniteLoss, FloatingPointError, HoloElasticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
