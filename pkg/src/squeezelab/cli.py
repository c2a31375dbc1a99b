"""Command-line front end: ``squeezelab {domain-check,scale-run,squeeze}``.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
4 precondition violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PRECONDITION = 0, 2, 3, 4

log = logging.getLogger("squeezelab")


class PreconditionError(ValueError):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="squeezelab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("domain-check", "classify a domain's boundary"),
                        ("scale-run", "run the rescaling pipeline"),
                        ("squeeze", "squeezing-function bounds along a sequence")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", required=True, type=Path)
        s.add_argument("--out", type=Path, default=Path("out"))
        s.add_argument("--seed", type=int, default=None, help="overrides the config seed")
        s.add_argument("--threads", type=int, default=1, help="BLAS/OpenMP thread cap")
        s.add_argument("--verbose", "-v", action="store_true")
    return p


# ---------------------------------------------------------------------------
# commands


def _complex_cols(prefix: str, z) -> dict:
    out = {}
    for j, v in enumerate(z):
        out[f"{prefix}{j + 1}_re"] = complex(v).real
        out[f"{prefix}{j + 1}_im"] = complex(v).imag
    return out


def cmd_domain_check(cfg: dict, out: Path, seed: int) -> int:
    import numpy as np

    from . import boundary, domains, hartogs, io

    dspec = cfg["domain"]
    dom = io.build_domain(dspec)
    summary: dict = {"domain": dspec["type"]}
    tol = cfg.get("tolerances", {})
    sampling = cfg.get("sampling", {})
    if isinstance(dom, hartogs.HartogsSpec):
        z = hartogs.sample_base(dom, sampling.get("interior", 10_000), seed)
        v = hartogs.V(dom, z)
        psh = hartogs.psh_scan(dom, rng=seed)
        p = hartogs.omega_point(dom, np.zeros(dom.n - 1), np.pi)
        sep = hartogs.locally_separating_check(dom, p)
        summary.update(V_min=float(v.min()), V_max=float(v.max()), psh_min=psh.minimum, psh_passed=psh.passed,
                       separating_components=sep.components, grid_points=len(dom.grid), tail=dom.tail)
        io.write_json(out / "summary.json", summary)
        return EXIT_OK
    if isinstance(dom, tuple):
        dom = dom[1]
    violated = []
    if dom.kind in ("egg", "omega"):
        sigma = dom.defining.sigma
        rep = domains.check_sigma_conditions(sigma)
        rows = [{"condition": k, "passed": v, "witness": rep.witnesses.get(k)} for k, v in rep.as_row().items()]
        io.write_csv(out / "sigma.csv", ["condition", "passed", "witness"], rows)
        summary["sigma"] = rep.as_row()
        violated = [k for k, v in list(rep.as_row().items())[:4] if not v]
        omega = domains.unshear(dom) if dom.kind == "egg" else dom
        lev = boundary.levi_dichotomy(omega, zero_tol=tol.get("levi", boundary.LEVI_TOL))
        tube = np.sqrt(np.abs(lev.points[:, 0]) ** 2 + (np.abs(lev.points[:, 1]) - 1.0) ** 2)
        rows = [dict(_complex_cols("z", p), lambda_min=l, tube=t) for p, l, t in zip(lev.points, lev.eigenvalues, tube)]
        io.write_csv(out / "levi.csv", list(rows[0]), rows)
        summary["levi"] = {"zero_set_max_tube": lev.zero_set_max_tube, "min_outside": lev.min_outside,
                           "n_zero": lev.n_zero, "passed": lev.passed}
        if not violated:
            conv = boundary.well_convexifiable_check(dom, domains.weak_locus_point(dom), rng=seed)
            summary["convexifiable"] = {"passed": conv.passed, "failed_part": conv.failed_part}
            io.write_csv(out / "support.csv", ["part", "passed"],
                         [("i", conv.in_weak_locus), ("ii", conv.g_convex),
                          ("iii", conv.local_strict_convexity), ("iv", conv.global_support)])
    else:
        pts = dom.sample_boundary(sampling.get("boundary", 200), np.random.default_rng(seed))
        rows = []
        for p in pts:
            r = boundary.levi_classify(dom, p, tol=tol.get("levi", boundary.LEVI_TOL))
            rows.append(dict(_complex_cols("z", p), lambda_min=r.smallest, classification=r.classification))
        io.write_csv(out / "levi.csv", list(rows[0]), rows)
        classes = sorted({r["classification"] for r in rows})
        summary["levi_classes"] = classes
        q = boundary.project_to_boundary(dom, dom.witness, rng=seed).point.point
        sup = boundary.strict_support_check(dom, q, rng=seed)
        summary["support"] = {"point": q, "passed": sup.passed, "worst_offset": sup.worst_offset}
        io.write_csv(out / "support.csv", ["part", "passed"], [("global", sup.passed)])
    io.write_json(out / "summary.json", summary)
    if violated:
        raise PreconditionError(f"sigma violates profile conditions: {', '.join(violated)}")
    return EXIT_OK


def _sequence(cfg: dict, dom, default_base):
    import numpy as np

    from . import boundary, io

    sq = cfg.get("sequence", {})
    base = io.as_point(sq["base"]) if "base" in sq else default_base
    if "points" in sq:
        pts = np.array([io.as_point(p) for p in sq["points"]])
        return boundary.sequence_from_points(dom, base, pts, float(sq.get("C", 1.0)))
    return boundary.paraboloidal_sequence(dom, base, float(sq.get("C", 1.0)), io.schedule_from(sq))


def cmd_scale_run(cfg: dict, out: Path, seed: int) -> int:
    import numpy as np

    from . import io, scaling

    if cfg["domain"]["type"] != "canonical":
        raise PreconditionError("scale-run needs a canonical domain")
    form, spec = io.build_domain(cfg["domain"])
    seq = _sequence(cfg, spec, np.zeros(2, dtype=np.complex128))
    run = scaling.run_scaling(form, seq, degree=cfg.get("degree"), box=spec.box)
    header = ["nu", "abs_a1", "eps", "delta", "abs_b", "C11", "blowup"]
    io.write_csv(out / "scaling.csv", header, run.rows())
    io.write_json(out / "limit.json", {"schema_version": io.SCHEMA_VERSION, "converged": run.converged,
                                       "limit": run.limit.to_records()})
    summary = {"converged": run.converged, "cauchy": run.diagnostics["cauchy"],
               "blowup_passed": scaling.blowup_check(run).passed}
    if form.m >= 2:
        summary["C11_slope"] = scaling.c11_slope(run)
        summary["b_bound_passed"] = scaling.b_bound_check(run).passed
    io.write_json(out / "summary.json", summary)
    return EXIT_OK if run.converged else EXIT_NUMERIC


def cmd_squeeze(cfg: dict, out: Path, seed: int) -> int:
    import numpy as np

    from . import domains, hartogs, io, squeeze

    mode = cfg.get("mode")
    if mode is None:
        raise PreconditionError("squeeze needs a mode")
    dom = io.build_domain(cfg["domain"])
    sampling = cfg.get("sampling", {})
    sq = cfg.get("sequence", {})
    if mode == "hhr-lower":
        if isinstance(dom, (tuple, hartogs.HartogsSpec)) or not dom.bounded:
            raise PreconditionError("hhr-lower needs a bounded domain")
        if "points" in sq:
            pts = np.array([io.as_point(p) for p in sq["points"]])
        else:
            if dom.kind in ("egg", "omega"):
                base = domains.weak_locus_point(dom)
            else:
                from .boundary import project_to_boundary
                base = project_to_boundary(dom, dom.witness, rng=seed).point.point
            pts = _sequence(cfg, dom, base).points
        prof = squeeze.squeeze_profile("hhr-lower", pts, domain=dom, rng=seed,
                                       n_boundary=sampling.get("boundary", 10_000),
                                       n_domain=sampling.get("interior", 10_000))
    elif mode == "removal-upper":
        if "K" not in cfg or "points" not in sq:
            raise PreconditionError("removal-upper needs K and sequence.points")
        K = squeeze.CompactBall(io.as_point(cfg["K"]["center"]), float(cfg["K"]["radius"]))
        pts = np.array([io.as_point(p) for p in sq["points"]])
        prof = squeeze.squeeze_profile("removal-upper", pts, domain=dom, K=K, rng=seed)
    else:
        if not isinstance(dom, hartogs.HartogsSpec):
            raise PreconditionError("hartogs-upper needs a hartogs domain")
        if "points" in sq:
            pts = np.array([io.as_point(p) for p in sq["points"]])
        else:
            target = hartogs.omega_point(dom, np.zeros(dom.n - 1), np.pi)
            fr = np.asarray(sq.get("schedule", [0.5, 0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.999]), dtype=float)
            pts = np.array([np.concatenate([target[:-1], [f * target[-1]]]) for f in fr])
        samples = hartogs.omega_surface_samples(dom, sampling.get("omega", 4000), rng=seed)
        prof = squeeze.squeeze_profile("hartogs-upper", pts, spec=dom, samples=samples)
    rows = []
    for i, r in enumerate(prof.reports):
        row = {"nu": i}
        row.update(_complex_cols("z", r.point))
        row.update(lower=r.lower, upper=r.upper, diagnostics=";".join(r.diagnostics))
        rows.append(row)
    io.write_csv(out / "bounds.csv", list(rows[0]), rows)
    io.write_json(out / "summary.json", {"mode": mode, "slope": prof.slope, "n": len(rows)})
    return EXIT_OK


COMMANDS = {"domain-check": cmd_domain_check, "scale-run": cmd_scale_run, "squeeze": cmd_squeeze}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    from threadpoolctl import threadpool_limits

    from . import io
    from .scaling import ScalingError
    from .squeeze import ChainVerificationError

    try:
        cfg = io.load_config(args.config)
        if cfg["command"] != args.command:
            raise io.ConfigError(f"config command {cfg['command']!r} does not match {args.command!r}")
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        log.info("running %s with seed %d", args.command, seed)
        with threadpool_limits(limits=max(1, args.threads)):
            return COMMANDS[args.command](cfg, args.out, seed)
    except io.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ScalingError, ChainVerificationError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
