"""Command-line interface: config ingestion, command dispatch, reporting.

Exit codes: 0 all requested checks pass, 1 at least one check failed,
2 input or usage error.
"""

import argparse
import sys
import time

from .algebra import crossed_product, validate_action, validate_algebra
from .config import COMMANDS, load_config, load_fixture
from .crossed import (
    CoinvariantComplex,
    LambdaComplex,
    PropositionComplex,
    conjugacy_decomposition,
    full_pair_check,
    identity_suite,
    theorem_map_f,
    u_complex_equivalence,
)
from .errors import ParseError, ThlError, ValidationError
from .fixtures import fixture_names
from .report import Report, emit_report
from .sequences import DeRhamComplex, g_hochschild, karoubi_sequence, sbi_sequence
from .twisted import HKBicomplex, twisted_cyclic


def _params(cfg, command):
    params = [("max_degree", str(cfg.max_degree))]
    if cfg.twist is not None:
        params.append(("twist", cfg.twist))
    if command in ("hc-lambda", "all"):
        params.append(("lambda_coinvariants", "on" if cfg.lambda_coinvariants else "off"))
    return params


def _cyclic_generator(cfg):
    """Index of a generator if the group is cyclic, preferring the
    configured twist element; None otherwise."""
    grp = cfg.group
    r = grp.order

    def order_of(x):
        n, acc = 1, x
        while acc != grp.identity_index:
            acc = grp.mul(acc, x)
            n += 1
        return n

    candidates = []
    tw = cfg.twist_index()
    if tw is not None:
        candidates.append(tw)
    candidates.extend(x for x in range(r) if x != tw)
    for x in candidates:
        if order_of(x) == r:
            return x
    return None


def _run_validate(cfg, report):
    validate_algebra(cfg.algebra)
    report.add_check("validate:algebra", True)
    validate_action(cfg.algebra, cfg.group)
    report.add_check("validate:action", True)
    crossed_product(cfg.algebra, cfg.group)
    report.add_check("validate:crossed-product", True)


def _run_hc_twisted(cfg, report):
    tw = cfg.twist_index()
    if tw is None:
        raise ValidationError("hc-twisted needs a twist element (--twist)")
    h = twisted_cyclic(cfg.algebra, cfg.group.action[tw], cfg.max_degree)
    report.add_dims(f"hc-twisted[{cfg.twist}]", h.dims)


def _run_hc_crossed(cfg, report):
    _, h = _proposition_cached(cfg)
    report.add_dims("hc-crossed", h.dims)


def _run_hc_coinv(cfg, report):
    h = CoinvariantComplex(cfg.algebra, cfg.group, cfg.max_degree).total_homology()
    report.add_dims("hc-coinv", h.dims)


def _run_hc_lambda(cfg, report):
    h = LambdaComplex(
        cfg.algebra, cfg.group, cfg.max_degree, g_coinvariants=cfg.lambda_coinvariants
    ).homology()
    report.add_dims("hc-lambda", h.dims)


def _run_hh_G(cfg, report):
    h = g_hochschild(cfg.algebra, cfg.group, cfg.max_degree)
    report.add_dims("hh-G", h.dims)


def _run_hdr_G(cfg, report):
    h = DeRhamComplex(cfg.algebra, cfg.group, cfg.max_degree).homology()
    report.add_dims("hdr-G", h.dims)


def _run_verify_identities(cfg, report):
    bound = cfg.max_degree + 1
    for name, ok, detail in identity_suite(cfg.algebra, cfg.group, bound):
        report.add_check(f"identities:{name}", ok, detail or f"p+q<={bound}")
    pair_bound = min(bound, 2)
    for name, ok in full_pair_check(cfg.algebra, cfg.group, pair_bound):
        report.add_check(f"full-pair:{name}", ok, f"p+q<={pair_bound}")


def _run_verify_theorem(cfg, report):
    grp = cfg.group
    deco = conjugacy_decomposition(cfg.algebra, grp, cfg.max_degree)
    stalkH = deco.stalk_homologies()
    coinvH = deco.coinvariant_homology()
    report.add_dims("hc-coinv", coinvH.dims)
    for cls_idx, h in enumerate(stalkH):
        rep = deco.conj.representatives[cls_idx]
        report.add_dims(f"hc-stalk[{grp.name(rep)}]", h.dims)
    sums = [sum(h.dims[n] for h in stalkH) for n in range(cfg.max_degree + 1)]
    report.add_check(
        "theorem:stalk-sum",
        sums == coinvH.dims,
        f"sum={sums} coinv={coinvH.dims}",
    )
    gen = _cyclic_generator(cfg)
    if gen is None:
        report.add_skip("theorem:factor-r", "group is not cyclic")
        report.add_skip("theorem:f-injective", "group is not cyclic")
        report.add_skip("theorem:f-onto-summand", "group is not cyclic")
        report.add_skip("corollary1:powers", "group is not cyclic")
        return
    gname = grp.name(gen)
    twH = twisted_cyclic(cfg.algebra, grp.action[gen], cfg.max_degree)
    report.add_dims(f"hc-twisted[{gname}]", twH.dims)
    r = grp.order
    expected = [r * d for d in twH.dims]
    report.add_check(
        "theorem:factor-r",
        coinvH.dims == expected,
        f"coinv={coinvH.dims} r*twisted={expected}",
    )
    frep = theorem_map_f(cfg.algebra, grp, gen, cfg.max_degree)
    detail = " ".join(
        f"n={d['degree']}:rank={d['rank']}/{d['dim_source']}" for d in frep.degrees
    )
    report.add_check("theorem:f-injective", frep.all_injective(), detail)
    detail = " ".join(
        f"n={d['degree']}:stalk={d['dim_stalk']}" for d in frep.degrees
    )
    report.add_check("theorem:f-onto-summand", frep.all_onto_summand(), detail)
    # powers generating the same cyclic group give the same dims
    from math import gcd

    for k in range(2, r):
        if gcd(k, r) != 1:
            continue
        power = grp.identity_index
        for _ in range(k):
            power = grp.mul(power, gen)
        hk = twisted_cyclic(cfg.algebra, grp.action[power], cfg.max_degree)
        report.add_check(
            f"corollary1:power-{k}",
            hk.dims == twH.dims,
            f"{grp.name(power)}:{hk.dims} vs {gname}:{twH.dims}",
        )


def _run_verify_lemma(cfg, report):
    tw = cfg.twist_index()
    g = cfg.group.action[tw] if tw is not None else cfg.group.action[cfg.group.identity_index]
    gname = cfg.twist if tw is not None else cfg.group.name(cfg.group.identity_index)
    hk = HKBicomplex(cfg.algebra, g, cfg.max_degree)
    rep = u_complex_equivalence(hk.mixed, f"twisted[{gname}]")
    report.add_dims(f"u-complex-twisted[{gname}]", rep.dims_u)
    report.add_dims(f"total-twisted[{gname}]", rep.dims_total)
    report.add_check("lemma:u-equals-total[twisted]", rep.equal)
    if cfg.group.order > 1:
        pc, _ = _proposition_cached(cfg)
        rep = u_complex_equivalence(pc.mixed, "crossed")
        report.add_dims("u-complex-crossed", rep.dims_u)
        report.add_dims("total-crossed", rep.dims_total)
        report.add_check("lemma:u-equals-total[crossed]", rep.equal)


_prop_cache = {}


def _proposition_cached(cfg):
    key = (id(cfg), cfg.max_degree)
    if key not in _prop_cache:
        pc = PropositionComplex(cfg.algebra, cfg.group, cfg.max_degree)
        _prop_cache[key] = (pc, pc.homology())
    return _prop_cache[key]


def _run_verify_sbi(cfg, report):
    rep = sbi_sequence(cfg.algebra, cfg.group, cfg.max_degree)
    for node in rep.nodes:
        detail = (
            f"in={node.incoming} out={node.outgoing} "
            f"im={node.image_dim} ker={node.kernel_dim} comp0={node.composite_zero}"
        )
        report.add_check(f"sbi:exact[{node.label}]", node.exact, detail)
    for note in rep.notes:
        report.add_note(note)


def _run_verify_karoubi(cfg, report):
    rep = karoubi_sequence(cfg.algebra, cfg.group, cfg.max_degree)
    for node in rep.nodes:
        base = f"n={node.degree} hdr={node.hdr_dim} hc={node.hc_dim} hh={node.hh_next_dim}"
        if node.diagnostic:
            base += f" [{node.diagnostic}]"
        report.add_check(f"karoubi:left-injective[{node.degree}]", node.left_injective, base)
        report.add_check(f"karoubi:composite-zero[{node.degree}]", node.composite_zero, base)
        report.add_check(
            f"karoubi:middle-exact[{node.degree}]",
            node.middle_exact,
            f"{base} left-rank={node.left_rank} middle-ker={node.middle_kernel}",
        )


_RUNNERS = {
    "validate": [_run_validate],
    "hc-twisted": [_run_hc_twisted],
    "hc-crossed": [_run_hc_crossed],
    "hc-coinv": [_run_hc_coinv],
    "hc-lambda": [_run_hc_lambda],
    "hh-G": [_run_hh_G],
    "hdr-G": [_run_hdr_G],
    "verify-identities": [_run_verify_identities],
    "verify-theorem": [_run_verify_theorem],
    "verify-lemma": [_run_verify_lemma],
    "verify-sbi": [_run_verify_sbi],
    "verify-karoubi": [_run_verify_karoubi],
}


def run(command, cfg):
    """Execute a command against a validated config; returns the Report."""
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    report = Report(cfg.name, command, _params(cfg, command))
    t0 = time.monotonic()
    _prop_cache.clear()
    if command == "all":
        steps = [
            _run_validate,
            _run_hc_twisted if cfg.twist is not None else None,
            _run_hc_crossed,
            _run_hc_coinv,
            _run_hc_lambda,
            _run_hh_G,
            _run_hdr_G,
            _run_verify_identities,
            _run_verify_theorem,
            _run_verify_lemma,
            _run_verify_sbi,
            _run_verify_karoubi,
        ]
        if cfg.twist is None:
            report.add_skip("hc-twisted", "no twist element configured")
        for step in steps:
            if step is not None:
                step(cfg, report)
    else:
        for step in _RUNNERS[command]:
            step(cfg, report)
    report.timing_seconds = time.monotonic() - t0
    return report



def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="thl",
        description=(
            "Exact-arithmetic twisted and crossed-product cyclic homology "
            "for finite-dimensional Q-algebras."
        ),
    )
    from . import __version__

    parser.add_argument("--version", action="version", version=f"thl {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--config", help="path to a JSON job file")
    src.add_argument(
        "--fixture",
        choices=fixture_names(),
        help="use a built-in example configuration",
    )
    parser.add_argument("--max-degree", type=int, help="report homology through this degree")
    parser.add_argument("--twist", help="group element for the twisted theory")
    parser.add_argument("--lambda-coinv", choices=["on", "off"],
                        help="divide the Connes complex by the group action")
    parser.add_argument("--format", choices=["human", "machine"], dest="fmt")
    args = parser.parse_args(argv)

    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.fixture:
            cfg = load_fixture(args.fixture)
        else:
            parser.error("one of --config or --fixture is required")
        if args.max_degree is not None:
            if args.max_degree < 0:
                raise ValidationError("--max-degree must be nonnegative")
            cfg.max_degree = args.max_degree
        if args.twist is not None:
            cfg.twist = args.twist
            cfg.twist_index()  # validates membership
        if args.lambda_coinv is not None:
            cfg.lambda_coinvariants = args.lambda_coinv == "on"
        if args.fmt is not None:
            cfg.format = args.fmt
        report = run(args.command, cfg)
    except (ParseError, ValidationError) as exc:
        print(f"thl: {exc}", file=sys.stderr)
        return 2
    except ThlError as exc:
        print(f"thl: internal check failed: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(report, cfg.format))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
