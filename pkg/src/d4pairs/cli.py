"""Command-line entry point: ``d4pairs <subcommand> ...``.

Exit codes: 0 success, 1 discrepancy, 2 undecided, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

from .bigarith import PRECISION_CAP_BITS
from .campaign import (
    CHECKPOINT_ENV,
    DEFAULT_A_MAX,
    CampaignConfig,
    KSample,
    UsageError,
    emit_report,
    parse_family,
    pair_records,
    run_campaign,
)
from .dtuples import C_LABELS, DnPair, DnTriple, brute_force_extensions, c_candidates, verify_dn_set
from .families import enumerate_families, instantiate, k_bound
from .linforms import a_bound_pipeline
from .pell import c_label_of, extensions_via_intersections

EXIT_OK, EXIT_DISCREPANCY, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 64


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    # None defaults defer to --config or CampaignConfig; their help text says so
    def _get_help_string(self, action):
        if action.default is None:
            return action.help
        return super()._get_help_string(action)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _k_sample(text: str) -> KSample:
    try:
        return KSample.parse(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _family(text: str) -> tuple[int, int]:
    try:
        return parse_family(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(ns) -> int:
    res = verify_dn_set(ns.n, ns.elements)
    _emit({"elements": [str(x) for x in ns.elements], "n": ns.n, "ok": res.ok,
           "failures": [f"{x}*{y}+{ns.n}" for (x, y), r in res.roots.items() if r is None]})
    return EXIT_OK if res.ok else EXIT_DISCREPANCY


def cmd_extend(ns) -> int:
    if len(ns.triple) != 3:
        raise UsageError("--triple needs three integers")
    tr = DnTriple.of(*ns.triple)
    via_pell = extensions_via_intersections(tr, ns.index_cap)
    brute = brute_force_extensions(tr, ns.limit)
    pell_le = [d for d in via_pell if d <= ns.limit]
    _emit({"triple": [str(x) for x in tr.elements()], "c_label": c_label_of(tr),
           "recurrences": [str(d) for d in via_pell], "brute_force": [str(d) for d in brute],
           "limit": str(ns.limit), "agree": pell_le == brute})
    return EXIT_OK if pell_le == brute else EXIT_DISCREPANCY


def cmd_clist(ns) -> int:
    if len(ns.pair) != 2:
        raise UsageError("--pair needs two integers")
    pair = DnPair.of(*ns.pair)
    _emit({"pair": [str(pair.a), str(pair.b)], "in_scope": pair.in_scope,
           "candidates": [{"label": lab, "c": str(c)} for lab, c in c_candidates(pair, ns.cap)]})
    return EXIT_OK


def cmd_families(ns) -> int:
    cat = enumerate_families()
    if ns.m is None:
        out = {"count": cat.count, "expected": cat.expected, "annotations": cat.annotations,
               "discrepancy": cat.discrepancy_report()}
        if out["discrepancy"]:
            out["discrepancy"] = {k: v for k, v in out["discrepancy"].items() if k != "per_m"}
        if ns.list:
            out["families"] = [{"m": f.m, "t": f.t, "polys": f.pretty()} for f in cat.families]
        _emit(out)
        return EXIT_OK if cat.matches_expected else EXIT_DISCREPANCY
    fam = cat.get(ns.m, ns.t)
    out = {"m": fam.m, "t": fam.t, "polys": fam.pretty(),
           "k_bound": None if (kb := k_bound(fam, ns.a_max)) is None else str(kb)}
    if ns.k is not None:
        got = instantiate(fam, ns.k)
        out["k"] = str(ns.k)
        out["pair"] = [str(got.a), str(got.b)] if got else None
        out["rejected"] = None if got else got.reason
    _emit(out)
    return EXIT_OK


def cmd_bound(ns) -> int:
    rep = a_bound_pipeline()
    _emit({
        "steps": [{"key": s.key, "claim": s.claim, "stated": str(s.stated), "relation": s.relation,
                   "reproduced": [str(float(s.reproduced.lo)), str(float(s.reproduced.hi))],
                   "holds": s.holds, "note": s.note} for s in rep.steps],
        "threshold_upper": str(float(rep.threshold.hi)),
        "a_bound": str(rep.a_bound),
        "corrected_threshold_upper": str(float(rep.corrected_threshold.hi)),
        "corrected_a_bound": str(rep.corrected_a_bound),
        "discrepancies": [s.key for s in rep.discrepancies],
        "notes": list(rep.notes),
    })
    return EXIT_DISCREPANCY if rep.discrepancies else EXIT_OK


def cmd_reduce(ns) -> int:
    if len(ns.triple) != 3:
        raise UsageError("--triple needs three integers")
    tr = DnTriple.of(*ns.triple)
    label = ns.label or c_label_of(tr)
    if label is None:
        raise UsageError("c is not one of c1-, ..., c4- for this pair; pass --label")
    pair = tr.pair
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        recs = [r for r in pair_records(0, 0, 0, pair, [label]) if r.c == tr.c]
    if not recs:
        raise UsageError(f"c = {tr.c} is not the {label} of this pair")
    print(emit_report(recs, "json").decode(), end="")
    if any(r.status == "discrepancy" for r in recs):
        return EXIT_DISCREPANCY
    return EXIT_UNDECIDED if any(r.status == "undecided" for r in recs) else EXIT_OK


def cmd_campaign(ns) -> int:
    data = {}
    if ns.config:
        with open(ns.config) as fh:
            data = json.load(fh)
    for name in ("a_max", "family_filter", "k_sample", "precision_cap_bits", "worker_count",
                 "checkpoint_path", "c_labels"):
        val = getattr(ns, name)
        if val is not None:
            data[name] = val
    if isinstance(data.get("k_sample"), KSample):
        data["k_sample"] = str(data["k_sample"])
    cfg = CampaignConfig.from_mapping(data)

    def progress(batch):
        if ns.progress and batch:
            r = batch[0]
            print(f"family {r.m}:{r.t} k={r.k}: {len(batch)} instances", file=sys.stderr)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rep = run_campaign(cfg, progress)
    blob = emit_report(rep.records, ns.format, rep.config_echo, rep.summary)
    if ns.report:
        with open(ns.report, "wb") as fh:
            fh.write(blob)
        s = rep.summary
        print(f"verified={s['verified']} discrepancy={s['discrepancy']} undecided={s['undecided']}")
    else:
        sys.stdout.write(blob.decode())
    return rep.exit_code


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = _HelpFormatter
    p = _Parser(prog="d4pairs", description="Extensions of gap-restricted D(4)-pairs.",
                formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", help="check that xy+n is a square for all pairs", formatter_class=fmt)
    s.add_argument("--elements", type=_ints, required=True, help="comma-separated set")
    s.add_argument("--n", type=int, default=4, help="the D(n) parameter")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("extend", help="extensions d of a triple, two ways", formatter_class=fmt)
    s.add_argument("--triple", type=_ints, required=True, help="a,b,c")
    s.add_argument("--limit", type=int, default=10 ** 6, help="brute-force search bound for d")
    s.add_argument("--index-cap", type=int, default=50, help="largest recurrence index searched")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("c-list", help="third elements c of a pair", formatter_class=fmt)
    s.add_argument("--pair", type=_ints, required=True, help="a,b")
    s.add_argument("--cap", type=int, default=10 ** 30, help="largest c listed")
    s.set_defaults(func=cmd_clist)

    s = sub.add_parser("families", help="family catalog, instantiation and k bounds", formatter_class=fmt)
    s.add_argument("--m", type=int, default=None, help="family modulus (omit for the catalog summary)")
    s.add_argument("--t", type=int, default=0, help="family residue")
    s.add_argument("--k", type=int, default=None, help="instantiate at this k")
    s.add_argument("--a-max", type=int, default=DEFAULT_A_MAX, help="bound on a for k_bound")
    s.add_argument("--list", action="store_true", help="list every family")
    s.set_defaults(func=cmd_families)

    s = sub.add_parser("bound", help="re-derive the constants behind the bound on a", formatter_class=fmt)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("reduce", help="bound, reduce and finish one triple", formatter_class=fmt)
    s.add_argument("--triple", type=_ints, required=True, help="a,b,c with c one of the c labels")
    s.add_argument("--label", choices=C_LABELS, default=None, help="c label (detected if omitted)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("campaign", help="sampled verification over families", formatter_class=fmt,
                       epilog=f"Default checkpoint directory: ${CHECKPOINT_ENV}.")
    s.add_argument("--config", default=None, help="JSON file with CampaignConfig fields")
    s.add_argument("--a-max", dest="a_max", type=int, default=None,
                   help=f"bound on a (default {DEFAULT_A_MAX})")
    s.add_argument("--family", dest="family_filter", type=_family, action="append", default=None,
                   help="M:T, repeatable (default all families)")
    s.add_argument("--k-sample", dest="k_sample", type=_k_sample, default=None,
                   help="all, stride:N, random:N[:SEED], first:N or list:K1,K2 (default stride:1000)")
    s.add_argument("--precision-cap-bits", dest="precision_cap_bits", type=int, default=None,
                   help=f"(default {PRECISION_CAP_BITS})")
    s.add_argument("--workers", dest="worker_count", type=int, default=None, help="(default 1)")
    s.add_argument("--checkpoint", dest="checkpoint_path", default=None,
                   help=f"JSONL checkpoint (default ${CHECKPOINT_ENV}/campaign.jsonl if set)")
    s.add_argument("--labels", dest="c_labels", type=lambda x: x.split(","), default=None,
                   help="comma-separated c labels (default all seven)")
    s.add_argument("--format", choices=("json", "jsonl", "csv"), default="json", help="report format")
    s.add_argument("--report", default=None, help="write the report here instead of stdout")
    s.add_argument("--progress", action="store_true", help="per-pair progress on stderr")
    s.set_defaults(func=cmd_campaign)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except (UsageError, ValueError) as exc:
        print(f"d4pairs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
