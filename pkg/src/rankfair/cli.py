"""Command-line surface: audit ranked-list files, generate fair
rankings, and synthesize realization sets for pipelines."""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .alignment import (
    ClassSpace,
    Mode,
    aggregate_realizations,
    population_estimator,
    project_binary,
    project_binary_probs,
)
from .attention import (
    AttentionModel,
    Family,
    fit_param_to_expected_views,
    param_interval_from_view_bounds,
)
from .audit import AuditConfig, Verdict, scan, scan_aggregate
from .errors import ConfigError, RankFairError
from .exposure import DistanceSpec, EffectiveNBasis, Metric
from .generator import CompositionSpec, generate_fair, synthesize_realizations
from .io import (
    file_digest,
    read_pool_file,
    read_ranked_list_file,
    write_curve_file,
    write_ranked_list_file,
    write_report_file,
)

_FAMILIES = {
    "geometric": Family.GEOMETRIC,
    "logseries": Family.LOG_SERIES,
    "pareto": Family.PARETO,
}

# fallback scan domains (inset from each family's open parameter domain)
_DEFAULT_DOMAIN = {
    Family.GEOMETRIC: (1e-3, 1.0 - 1e-3),
    Family.LOG_SERIES: (1e-3, 1.0 - 1e-3),
    Family.PARETO: (1e-3, 1e3),
}


def _pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'low,high', got {text!r}")
    return float(parts[0]), float(parts[1])


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rankfair",
        description="Audit group fairness of ranked lists under parametric "
        "user-attention models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="scan a ranked-list file for a fair parameterization")
    audit.add_argument("--input", required=True)
    audit.add_argument("--family", choices=sorted(_FAMILIES), default="geometric")
    audit.add_argument("--domain", type=_pair, default=None, metavar="LOW,HIGH")
    audit.add_argument("--views", type=_pair, default=None, metavar="LOW,HIGH",
                       help="expected-views bounds converted to a parameter domain")
    audit.add_argument("--grid", type=int, default=1000)
    audit.add_argument("--delta-max", type=float, default=1.0)
    audit.add_argument("--metric", choices=["z", "chi2", "scalar"], default=None,
                       help="inferred from the file when omitted")
    audit.add_argument("--target-class", default=None)
    audit.add_argument("--effective-n", default="list",
                       help="'list', 'realizations', or an integer")
    audit.add_argument("--p-hat", default="mean", dest="p_hat",
                       help="'mean', 'pool:<path>', or 'fixed:<spec>'")
    audit.add_argument("--small-n-cutoff", type=int, default=7)
    audit.add_argument("--aggregate", action="store_true")
    audit.add_argument("--missing-score", choices=["zero", "renormalize"], default=None)
    audit.add_argument("--out", default=None)
    audit.add_argument("--curve", default=None)
    audit.add_argument("--plot", default=None)
    audit.add_argument("--seed", type=int, default=None)
    audit.add_argument("--no-timestamp", action="store_true")

    gen = sub.add_parser("generate", help="emit a ranking that is fair for a fixed attention model")
    gen.add_argument("--counts", required=True, metavar="LABEL:INT,...")
    gen.add_argument("--family", choices=sorted(_FAMILIES), default="geometric")
    gen.add_argument("--param", type=float, default=None)
    gen.add_argument("--views", type=float, default=None,
                     help="target expected views; fitted to a parameter")
    gen.add_argument("--out", required=True)

    synth = sub.add_parser("synth", help="synthesize a multi-realization file for test pipelines")
    synth.add_argument("--pool-minority", type=float, required=True)
    synth.add_argument("--pool-size", type=int, required=True)
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--k", type=int, required=True)
    synth.add_argument("--policy", default="shuffle", metavar="shuffle|churn:<rate>")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)
    return parser


def _infer_metric(space, explicit):
    if explicit is not None:
        return Metric(explicit)
    if space.mode is Mode.SCALAR:
        return Metric.ABS_SCALAR
    return Metric.BINOMIAL_Z if len(space.labels) == 2 else Metric.CHI_SQUARE


def _resolve_effective_n(flag, n, k):
    if flag == "list":
        return n, EffectiveNBasis.LIST_LENGTH
    if flag == "realizations":
        return k, EffectiveNBasis.REALIZATION_COUNT
    try:
        return int(flag), EffectiveNBasis.EXPLICIT
    except ValueError:
        raise ConfigError(
            f"--effective-n must be 'list', 'realizations', or an integer, got {flag!r}"
        ) from None


def _resolve_p_hat(flag, data, space, missing):
    """p-hat sources: the input's mean, an external pool file, or a fixed spec."""
    if flag == "mean":
        return population_estimator(data.realizations, missing=missing or "zero"), "mean"
    if flag.startswith("pool:"):
        pool_space, rows = read_pool_file(flag[5:])
        if pool_space != space:
            raise ConfigError("pool file class space does not match the input")
        return population_estimator(rows, missing=missing or "zero"), flag
    if flag.startswith("fixed:"):
        spec = flag[6:]
        if space.mode is Mode.SCALAR:
            return float(spec), flag
        shares = {}
        for part in spec.split(","):
            label, _, value = part.partition(":")
            shares[label] = float(value)
        missing_labels = set(space.labels) - set(shares)
        if missing_labels:
            raise ConfigError(f"fixed p-hat is missing classes: {sorted(missing_labels)}")
        return np.array([shares[label] for label in space.labels]), flag
    raise ConfigError(f"unknown --p-hat source {flag!r}")


def _run_audit(args) -> int:
    data = read_ranked_list_file(args.input, missing_score=args.missing_score)
    rs = data.realizations
    space = data.class_space
    if rs.k > 1 and not args.aggregate:
        raise ConfigError(
            f"input holds {rs.k} realizations; pass --aggregate to audit them jointly"
        )

    family = _FAMILIES[args.family]
    if args.domain is not None and args.views is not None:
        raise ConfigError("--domain and --views are mutually exclusive")
    if args.views is not None:
        domain = param_interval_from_view_bounds(family, rs.n, *args.views)
    elif args.domain is not None:
        domain = args.domain
    else:
        domain = _DEFAULT_DOMAIN[family]

    metric = _infer_metric(space, args.metric)
    p_hat, p_hat_source = _resolve_p_hat(args.p_hat, data, space, args.missing_score)
    target = args.target_class
    if target is not None and space.mode is Mode.CATEGORICAL and target not in space.labels:
        raise ConfigError(f"--target-class {target!r} not among {list(space.labels)}")

    L = aggregate_realizations(rs) if args.aggregate else rs.realizations[0]
    if metric is Metric.BINOMIAL_Z:
        if target is None:
            raise ConfigError("--target-class is required for the z metric")
        if len(space.labels) > 2:
            L = project_binary(L, target)
            _, p_hat = project_binary_probs(p_hat, space, target)

    eff_n, basis = _resolve_effective_n(args.effective_n, rs.n, rs.k)
    config = AuditConfig(
        family=family,
        domain=tuple(domain),
        distance=DistanceSpec(metric=metric, effective_n=eff_n, basis=basis),
        grid_points=args.grid,
        delta_max=args.delta_max,
        small_n_cutoff=args.small_n_cutoff,
        target_class=target if metric is not Metric.ABS_SCALAR else None,
        missing_score=args.missing_score or "zero",
    )
    report = scan_aggregate(rs, p_hat, config) if args.aggregate else scan(L, p_hat, config)

    doc = {
        "library": "rankfair",
        "version": __version__,
        "input": {
            "path": args.input,
            "sha256": file_digest(args.input),
            "n": rs.n,
            "k": rs.k,
            "aggregate": bool(args.aggregate),
            "p_hat_source": p_hat_source,
            "p_hat": p_hat.tolist() if isinstance(p_hat, np.ndarray) else p_hat,
        },
        "result": report.to_dict(),
    }
    if args.seed is not None:
        doc["input"]["seed"] = args.seed
    if not args.no_timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat()

    if args.out:
        write_report_file(args.out, doc)
    else:
        print(_json_dumps(doc))
    if args.curve:
        write_curve_file(args.curve, report.curve)
    if args.plot:
        from .plots import plot_distance_curve

        plot_distance_curve(doc, args.plot)
    return 0 if report.verdict in (Verdict.FAIR, Verdict.TRIVIALLY_FAIR_SMALL_N) else 1


def _json_dumps(doc):
    import json

    return json.dumps(doc, indent=2)


def _parse_counts(text):
    counts = {}
    for part in text.split(","):
        label, _, value = part.partition(":")
        if not label or not value:
            raise ConfigError(f"bad --counts entry {part!r}; expected LABEL:INT")
        counts[label] = int(value)
    if sum(counts.values()) < 1:
        raise ConfigError("--counts must include at least one positive count")
    return counts


def _run_generate(args) -> int:
    counts = _parse_counts(args.counts)
    spec = CompositionSpec(counts)
    family = _FAMILIES[args.family]
    if (args.param is None) == (args.views is None):
        raise ConfigError("pass exactly one of --param or --views")
    param = args.param
    if param is None:
        param = fit_param_to_expected_views(family, spec.n, args.views)
    model = AttentionModel(family, (param,), spec.n)
    result = generate_fair(spec, model)
    from .alignment import RealizationSet

    write_ranked_list_file(
        args.out,
        RealizationSet((result.vector,)),
        item_ids=(tuple(f"{label}-{i + 1}" for i, label in enumerate(result.labels)),),
        include_realization_column=False,
    )
    print(f"achieved distance: {result.distance:.12g}", file=sys.stderr)
    return 0


def _run_synth(args) -> int:
    if not 0.0 <= args.pool_minority <= 1.0:
        raise ConfigError("--pool-minority must lie in [0, 1]")
    policy, churn_rate = args.policy, None
    if policy.startswith("churn:"):
        policy, churn_rate = "churn", float(args.policy[6:])
    elif policy == "churn":
        raise ConfigError("churn policy needs a rate: churn:<rate>")
    space = ClassSpace.categorical(["minority", "majority"])
    minority = int(round(args.pool_minority * args.pool_size))
    pool = np.zeros((args.pool_size, 2))
    pool[:minority, 0] = 1.0
    pool[minority:, 1] = 1.0
    rs = synthesize_realizations(
        space, pool, args.n, args.k, policy=policy, churn_rate=churn_rate, seed=args.seed
    )
    write_ranked_list_file(
        args.out,
        rs,
        realization_ids=tuple(f"r{i:04d}" for i in range(args.k)),
        include_realization_column=True,
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "audit":
            return _run_audit(args)
        if args.command == "generate":
            return _run_generate(args)
        return _run_synth(args)
    except RankFairError as exc:
        print(f"rankfair: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"rankfair: error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
