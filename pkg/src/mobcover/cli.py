"""Command-line entry point.

Subcommands: prune, coupling, calibrate, sweep, gen, fit-dim, bench.
Exit codes: 0 success, 2 invalid configuration or flags, 3 I/O failure.
All output is deterministic given identical files, flags, and seeds; the
only exceptions are wall-clock columns/timings, which are labelled as such.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from ._backend import backend_name
from .bounds import BoundParams, cost_model, radius_product_floor, split_budget_bound
from .covering import CouplingClass, PruneConfig, Tier, mob_prune
from .errors import FormatError, MobError
from .formats import load_embeddings, write_mobe, write_selection
from .hausdorff import CalibrationConfig, Metric, calibrate_tau, coupling
from .oracle import fit_effective_dimension
from .synth import GenSpec, Manifold, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

_METRICS = {"normalized": Metric.NORMALIZED_EUCLIDEAN, "raw": Metric.RAW_EUCLIDEAN}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fail_usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# prune
# ---------------------------------------------------------------------------


def _resolve_prune_config(args) -> PruneConfig:
    manual = args.kp is not None or args.fold is not None
    prior = args.eta_prior is not None or args.tier is not None
    if manual and prior:
        raise ValueError("give either --kp/--fold or --eta-prior/--tier, not both")
    if prior:
        if args.eta_prior is None or args.tier is None:
            raise ValueError("--eta-prior and --tier must be given together")
        return PruneConfig.from_prior(
            args.budget, CouplingClass(args.eta_prior), Tier(args.tier)
        )
    if args.kp is None or args.fold is None:
        raise ValueError("give --kp and --fold, or --eta-prior and --tier")
    return PruneConfig(budget_K=args.budget, budget_Kp=args.kp, fold_k=args.fold)


def cmd_prune(args) -> int:
    cfg = _resolve_prune_config(args)
    v = load_embeddings(args.visual)
    p = load_embeddings(args.prompt)
    result = mob_prune(v, p, cfg)
    write_selection(result, args.out)
    print(f"K_p={cfg.budget_Kp} k={cfg.fold_k} heuristic={cfg.heuristic}")
    print(f"eta={_fmt(result.eta)}")
    print(f"eps_p_directed={_fmt(result.eps_p_directed)}")
    print(f"eps_p_symmetric={_fmt(result.eps_p_symmetric)}")
    print(f"eps_v={_fmt(result.eps_v)}")
    print(f"shortfall_reassigned={result.shortfall_reassigned}")
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# coupling / calibrate
# ---------------------------------------------------------------------------


def cmd_coupling(args) -> int:
    v = load_embeddings(args.visual)
    p = load_embeddings(args.prompt)
    calib = CalibrationConfig(tau=args.tau) if args.tau is not None else None
    report = coupling(v, p, _METRICS[args.metric], calib)
    print(f"h_v_to_p={_fmt(report.h_v_to_p)}")
    print(f"h_p_to_v={_fmt(report.h_p_to_v)}")
    print(f"eta={_fmt(report.eta)}")
    print(f"classification={report.classification.value}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    with open(args.etas, "r", encoding="utf-8") as fh:
        values = [float(tok) for tok in fh.read().split()]
    calib = calibrate_tau(values)
    print(f"tau={_fmt(calib.tau)}")
    print(f"source={calib.source}")
    print(f"n_samples={len(values)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen / fit-dim
# ---------------------------------------------------------------------------


def _genspec_from_args(args) -> GenSpec:
    return GenSpec(
        n_v=args.nv,
        n_p=args.n_p,
        ambient_d=args.dim,
        manifold=Manifold(args.manifold),
        eta_target=args.eta,
        seed=args.seed,
        clusters=args.clusters,
    )


def cmd_gen(args) -> int:
    v, p, measured = generate(_genspec_from_args(args))
    write_mobe(v, args.dtype, args.out_visual)
    write_mobe(p, args.dtype, args.out_prompt)
    print(f"measured_eta={_fmt(measured)}")
    print(f"wrote {args.out_visual} ({v.n}x{v.d})")
    print(f"wrote {args.out_prompt} ({p.n}x{p.d})")
    return EXIT_OK


def cmd_fit_dim(args) -> int:
    x = load_embeddings(args.input)
    window = None
    if args.eps_min is not None or args.eps_max is not None:
        if args.eps_min is None or args.eps_max is None:
            raise ValueError("--eps-min and --eps-max must be given together")
        window = (args.eps_min, args.eps_max)
    fit = fit_effective_dimension(x, window=window, n_radii=args.n_radii)
    print(f"d_eff_hat={_fmt(fit.d_eff_hat)}")
    print(f"log_const={_fmt(fit.log_const)}")
    print(f"r2={_fmt(fit.r2)}")
    print(f"window=[{_fmt(fit.radius_window[0])}, {_fmt(fit.radius_window[1])}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def mean_relative_slope(xs, ys) -> float:
    """100/(x_n - x_1) * sum of consecutive relative increments of y."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size < 2:
        raise ValueError("need at least two points")
    if xs[-1] == xs[0]:
        raise ValueError("degenerate x range")
    increments = (ys[1:] - ys[:-1]) / ys[:-1]
    return float(100.0 / (xs[-1] - xs[0]) * increments.sum())


def _parse_int_list(text: str):
    return [int(tok) for tok in text.split(",") if tok]


def _parse_kp_list(text: str):
    out = []
    for tok in text.split(","):
        if not tok:
            continue
        val = float(tok)
        out.append(val if val < 1 else int(val))
    return out


def _parse_constants(text: str) -> BoundParams:
    kv = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        kv[key.strip()] = float(val)
    return BoundParams(
        eta=kv.get("eta", 0.0),
        d_eff=kv["d_eff"],
        a=kv.get("a", 1.0),
        b=kv.get("b", 1.0),
        a_prime=kv.get("a_prime", 1.0),
        b_prime=kv.get("b_prime", 1.0),
        z=kv.get("z", 2.0),
        lipschitz_C=kv.get("C", 1.0),
    )


def _parse_genspec(text: str) -> GenSpec:
    manifold, _, rest = text.partition(":")
    kv = {}
    for item in rest.split(","):
        if not item:
            continue
        key, _, val = item.partition("=")
        kv[key.strip()] = val
    return GenSpec(
        n_v=int(kv["nv"]),
        n_p=int(kv["np"]),
        ambient_d=int(kv["dim"]),
        manifold=Manifold(manifold),
        eta_target=float(kv.get("eta", 1.0)),
        seed=int(kv.get("seed", 0)),
        clusters=int(kv.get("clusters", 4)),
    )


def _sweep_cell(v, p, K, kp_val, k, seed, constants):
    kp = int(np.floor(kp_val * K)) if isinstance(kp_val, float) else kp_val
    cfg = PruneConfig(budget_K=K, budget_Kp=kp, fold_k=k)
    start = time.perf_counter()
    result = mob_prune(v, p, cfg)
    wall_ms = 1000.0 * (time.perf_counter() - start)
    product = result.eps_p_symmetric * result.eps_v
    floor_txt = bound_txt = ""
    if constants is not None:
        params = BoundParams(
            eta=result.eta,
            d_eff=constants.d_eff,
            a=constants.a,
            b=constants.b,
            a_prime=constants.a_prime,
            b_prime=constants.b_prime,
            z=constants.z,
            lipschitz_C=constants.lipschitz_C,
        )
        floor_txt = _fmt(radius_product_floor(K, params)[0])
        kv_budget = len(result.visual_centers)
        if len(result.prompt_centers) >= 1 and kv_budget >= 1:
            bound_txt = _fmt(
                split_budget_bound(params, k, p.n, len(result.prompt_centers), kv_budget)
            )
    return {
        "K": K,
        "K_p": kp,
        "k": k,
        "seed": seed,
        "eta": result.eta,
        "eps_p_directed": result.eps_p_directed,
        "eps_p_symmetric": result.eps_p_symmetric,
        "eps_v": result.eps_v,
        "product": product,
        "floor": floor_txt,
        "bound": bound_txt,
        "wall_ms": wall_ms,
    }


def cmd_sweep(args) -> int:
    budgets = _parse_int_list(args.budgets)
    kp_values = _parse_kp_list(args.kp)
    folds = _parse_int_list(args.folds)
    seeds = _parse_int_list(args.seeds) if args.seeds else [0]
    constants = _parse_constants(args.constants) if args.constants else None
    if not budgets or not kp_values or not folds:
        raise ValueError("--budgets, --kp and --folds must be nonempty")
    for K in budgets:
        for kp_val in kp_values:
            kp = int(np.floor(kp_val * K)) if isinstance(kp_val, float) else kp_val
            if kp > K:
                raise ValueError(f"grid pair K_p={kp} exceeds K={K}")

    inputs = []  # (label, loader(seed) -> (v, p))
    for pair in args.input or []:
        vis_path, _, prompt_path = pair.partition(":")
        if not prompt_path:
            raise ValueError(f"--input needs visual:prompt, got {pair!r}")
        v = load_embeddings(vis_path)
        p = load_embeddings(prompt_path)
        inputs.append((pair, lambda seed, v=v, p=p: (v, p)))
    for spec_text in args.gen or []:
        base = _parse_genspec(spec_text)

        def loader(seed, base=base):
            spec = GenSpec(
                n_v=base.n_v,
                n_p=base.n_p,
                ambient_d=base.ambient_d,
                manifold=base.manifold,
                eta_target=base.eta_target,
                seed=seed,
                clusters=base.clusters,
            )
            v, p, _ = generate(spec)
            return v, p
        inputs.append((spec_text, loader))
    if not inputs:
        raise ValueError("give at least one --input or --gen")

    threads = args.threads or int(os.environ.get("MOB_THREADS", "1"))
    cells = []
    for label, loader in inputs:
        for seed in sorted(set(seeds)):
            v, p = loader(seed)
            for K in sorted(set(budgets)):
                for kp_val in kp_values:
                    for k in sorted(set(folds)):
                        cells.append((label, v, p, K, kp_val, k, seed))
    # Rows come out in lexicographic (input, K, K_p, k, seed) order.
    cells.sort(
        key=lambda c: (
            c[0],
            c[3],
            int(np.floor(c[4] * c[3])) if isinstance(c[4], float) else c[4],
            c[5],
            c[6],
        )
    )

    def run(cell):
        label, v, p, K, kp_val, k, seed = cell
        row = _sweep_cell(v, p, K, kp_val, k, seed, constants)
        return (label, row)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["input", "K", "K_p", "k", "seed", "eta", "eps_p_directed",
         "eps_p_symmetric", "eps_v", "product", "floor", "bound", "wall_ms"]
    )
    table = []
    for label, row in results:
        table.append((label, row))
        writer.writerow(
            [label, row["K"], row["K_p"], row["k"], row["seed"],
             _fmt(row["eta"]), _fmt(row["eps_p_directed"]),
             _fmt(row["eps_p_symmetric"]), _fmt(row["eps_v"]),
             _fmt(row["product"]), row["floor"], row["bound"],
             f"{row['wall_ms']:.3f}"]
        )

    buf.write("# summary\n")
    writer.writerow(["input", "K", "metric", "mean_relative_slope_pct"])
    metrics = ["eps_p_directed", "eps_p_symmetric", "eps_v", "product"]
    seen = []
    for label, row in table:
        if (label, row["K"]) not in seen:
            seen.append((label, row["K"]))
    for label, K in seen:
        group = [r for lbl, r in table if lbl == label and r["K"] == K]
        kps = sorted({r["K_p"] for r in group})
        if len(kps) < 2:
            continue
        for metric in metrics:
            ys = []
            for kp in kps:
                vals = [r[metric] for r in group if r["K_p"] == kp]
                ys.append(float(np.mean(vals)))
            try:
                slope = mean_relative_slope(kps, ys)
                slope_txt = _fmt(slope)
            except (ValueError, ZeroDivisionError, FloatingPointError):
                slope_txt = "nan"
            writer.writerow([label, K, metric, slope_txt])

    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(table)} rows)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _scaling_instance(n: int, L: int, d: int, seed: int):
    rng = np.random.Generator(np.random.PCG64(seed))
    from .core import EmbeddingSet

    v = EmbeddingSet(rng.normal(size=(n, d)))
    p = EmbeddingSet(rng.normal(size=(L, d)))
    return v, p


def cmd_bench(args) -> int:
    if args.cost_model is not None:
        n, L, K, d = args.cost_model
        report = cost_model(n, L, K, d)
        print(f"flops_hausdorff={report.flops_hausdorff} ({report.tflops_hausdorff:.2e} TFLOPs)")
        print(f"flops_mob={report.flops_mob} ({report.tflops_mob:.2e} TFLOPs)")
        return EXIT_OK
    if args.scaling:
        L, K, d = 16, 128, 256
        print(f"backend={backend_name()} L={L} K={K} d={d}")
        prev = None
        for n in (4096, 8192, 16384):
            v, p = _scaling_instance(n, L, d, seed=1234)
            cfg = PruneConfig(budget_K=K, budget_Kp=K // 2, fold_k=4)
            best = min(
                _timed(lambda: mob_prune(v, p, cfg)) for _ in range(3)
            )
            ratio = "" if prev is None else f" ratio={best / prev:.3f}"
            print(f"N={n} wall_s={best:.4f}{ratio}")
            prev = best
        return EXIT_OK
    raise ValueError("give --scaling or --cost-model N L K d")


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mob",
        description="Balanced-covering subset selection over embedding sets",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p_prune = sub.add_parser("prune", help="select a budgeted token subset")
    p_prune.add_argument("--visual", required=True, help="visual embeddings (MOBE or CSV)")
    p_prune.add_argument("--prompt", required=True, help="prompt embeddings (MOBE or CSV)")
    p_prune.add_argument("--budget", required=True, type=int, help="total budget K")
    p_prune.add_argument("--kp", type=int, help="prompt-center budget K_p (with --fold)")
    p_prune.add_argument("--fold", type=int, help="covering fold k (with --kp)")
    p_prune.add_argument("--eta-prior", choices=["strong", "weak"], help="coupling prior")
    p_prune.add_argument("--tier", choices=["high", "mid", "low"], help="pruning tier")
    p_prune.add_argument("--out", required=True, help="selection document path")
    p_prune.set_defaults(fn=cmd_prune)

    p_coup = sub.add_parser("coupling", help="measure prompt-visual coupling")
    p_coup.add_argument("--visual", required=True)
    p_coup.add_argument("--prompt", required=True)
    p_coup.add_argument("--metric", choices=sorted(_METRICS), default="normalized")
    p_coup.add_argument("--tau", type=float, help="classification threshold")
    p_coup.set_defaults(fn=cmd_coupling)

    p_cal = sub.add_parser("calibrate", help="fit a coupling threshold from samples")
    p_cal.add_argument("--etas", required=True, help="text file of coupling values")
    p_cal.set_defaults(fn=cmd_calibrate)

    p_gen = sub.add_parser("gen", help="generate a synthetic visual/prompt pair")
    p_gen.add_argument("--manifold", choices=[m.value for m in Manifold], required=True)
    p_gen.add_argument("--nv", type=int, required=True, help="visual token count")
    p_gen.add_argument("--np", dest="n_p", type=int, required=True, help="prompt token count")
    p_gen.add_argument("--dim", type=int, required=True, help="ambient dimension")
    p_gen.add_argument("--eta", type=float, required=True, help="coupling target")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--clusters", type=int, default=4)
    p_gen.add_argument("--dtype", choices=["f32", "f64"], default="f64")
    p_gen.add_argument("--out-visual", required=True)
    p_gen.add_argument("--out-prompt", required=True)
    p_gen.set_defaults(fn=cmd_gen)

    p_fit = sub.add_parser("fit-dim", help="estimate the effective dimension")
    p_fit.add_argument("--input", required=True, help="embeddings (MOBE or CSV)")
    p_fit.add_argument("--eps-min", type=float)
    p_fit.add_argument("--eps-max", type=float)
    p_fit.add_argument("--n-radii", type=int, default=8)
    p_fit.set_defaults(fn=cmd_fit_dim)

    p_sweep = sub.add_parser("sweep", help="grid-run selection and emit CSV")
    p_sweep.add_argument("--input", action="append", help="visual:prompt path pair")
    p_sweep.add_argument("--gen", action="append", help="manifold:nv=..,np=..,dim=..,eta=..")
    p_sweep.add_argument("--budgets", required=True, help="comma list of K")
    p_sweep.add_argument("--kp", required=True, help="comma list of K_p counts or fractions")
    p_sweep.add_argument("--folds", required=True, help="comma list of folds")
    p_sweep.add_argument("--seeds", default="0", help="comma list of seeds (gen inputs)")
    p_sweep.add_argument("--constants", help="a=..,b=..,a_prime=..,b_prime=..,d_eff=..,z=..,C=..")
    p_sweep.add_argument("--threads", type=int, help="cell parallelism (MOB_THREADS fallback)")
    p_sweep.add_argument("--out", help="CSV path (stdout when omitted)")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_bench = sub.add_parser("bench", help="cost model or scaling measurement")
    group = p_bench.add_mutually_exclusive_group(required=True)
    group.add_argument("--scaling", action="store_true", help="time selection at growing N")
    group.add_argument(
        "--cost-model", nargs=4, type=int, metavar=("N", "L", "K", "D"),
        help="print multiply-accumulate counts",
    )
    p_bench.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MobError, ValueError) as exc:
        return _fail_usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
