"""Sampled, resumable verification campaigns over family instances and reports."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import random
import time
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .bigarith import PRECISION_CAP_BITS
from .dtuples import C_LABELS, DnPair, DnTriple, campaign_c_list, d_plus_minus, verify_dn_set
from .families import enumerate_families, first_in_scope_k, instantiate, k_bound, ParametricFamily
from .linforms import LinearFormInstance
from .pell import admissible_cases
from .reduction import derive_index_bound, finish_instance, recheck_certificates, reduce_instance

SCHEMA_VERSION = "1"
CHECKPOINT_ENV = "D4PAIRS_CHECKPOINT_DIR"
DEFAULT_A_MAX = 655_000_000_000

VERIFIED, DISCREPANCY, UNDECIDED = "verified", "discrepancy", "undecided"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class KSample:
    """Which k to take per family: all, every n-th, n at random, or an explicit list."""

    mode: str = "stride"
    n: int = 1000
    seed: int = 0
    values: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "KSample":
        parts = text.split(":")
        try:
            if parts[0] == "all" and len(parts) == 1:
                return cls("all")
            if parts[0] == "stride" and len(parts) == 2:
                return cls("stride", int(parts[1]))
            if parts[0] == "random" and len(parts) in (2, 3):
                return cls("random", int(parts[1]), int(parts[2]) if len(parts) == 3 else 0)
            if parts[0] == "first" and len(parts) == 2:
                return cls("first", int(parts[1]))
            if parts[0] == "list" and len(parts) == 2:
                return cls("list", values=tuple(int(v) for v in parts[1].split(",") if v))
        except ValueError as exc:
            raise UsageError(f"bad k sample {text!r}") from exc
        raise UsageError(f"bad k sample {text!r}; use all, stride:N, random:N[:SEED], first:N or list:K1,K2")

    def __str__(self) -> str:
        if self.mode == "all":
            return "all"
        if self.mode == "list":
            return "list:" + ",".join(map(str, self.values))
        if self.mode == "random":
            return f"random:{self.n}:{self.seed}"
        return f"{self.mode}:{self.n}"

    def select(self, family: ParametricFamily, k_lo: int, k_hi: int) -> list[int]:
        if k_hi < k_lo:
            return []
        if self.mode == "all":
            return list(range(k_lo, k_hi + 1))
        if self.mode == "stride":
            return list(range(k_lo, k_hi + 1, max(1, self.n)))
        if self.mode == "first":
            return list(range(k_lo, min(k_hi, k_lo + self.n - 1) + 1))
        if self.mode == "random":
            rng = random.Random(f"{self.seed}:{family.m}:{family.t}")
            span = k_hi - k_lo + 1
            return sorted(k_lo + i for i in rng.sample(range(span), min(self.n, span)))
        return [k for k in self.values if k_lo <= k <= k_hi]


@dataclass
class CampaignConfig:
    a_max: int = DEFAULT_A_MAX
    family_filter: Optional[list] = None          # list of (m, t)
    k_sample: KSample = field(default_factory=KSample)
    precision_cap_bits: int = PRECISION_CAP_BITS
    worker_count: int = 1
    checkpoint_path: Optional[str] = None
    c_labels: tuple = C_LABELS
    record_timing: bool = True

    def echo(self) -> dict:
        return {
            "a_max": str(self.a_max),
            "family_filter": None if self.family_filter is None
            else [f"{m}:{t}" for m, t in self.family_filter],
            "k_sample": str(self.k_sample),
            "precision_cap_bits": str(self.precision_cap_bits),
            "worker_count": str(self.worker_count),
            "checkpoint_path": self.checkpoint_path,
            "c_labels": list(self.c_labels),
        }

    @classmethod
    def from_mapping(cls, data: dict) -> "CampaignConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(data)
        if "a_max" in kw:
            kw["a_max"] = int(kw["a_max"])
        if kw.get("family_filter") is not None:
            kw["family_filter"] = [parse_family(f) if isinstance(f, str) else tuple(map(int, f))
                                   for f in kw["family_filter"]]
        if isinstance(kw.get("k_sample"), str):
            kw["k_sample"] = KSample.parse(kw["k_sample"])
        for name in ("precision_cap_bits", "worker_count"):
            if name in kw:
                kw[name] = int(kw[name])
        if "c_labels" in kw:
            bad = set(kw["c_labels"]) - set(C_LABELS)
            if bad:
                raise UsageError(f"unknown c labels {sorted(bad)}")
            kw["c_labels"] = tuple(kw["c_labels"])
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path: str) -> "CampaignConfig":
        with open(path) as fh:
            return cls.from_mapping(json.load(fh))

    def validate(self) -> None:
        if self.a_max < 1:
            raise UsageError("a_max must be positive")
        if self.worker_count < 1:
            raise UsageError("worker_count must be positive")
        if self.precision_cap_bits < 64:
            raise UsageError("precision_cap_bits must be at least 64")


def parse_family(text: str) -> tuple[int, int]:
    try:
        m, t = text.split(":")
        return int(m), int(t)
    except ValueError as exc:
        raise UsageError(f"bad family {text!r}; use M:T") from exc


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

RECORD_FIELDS = ("m", "t", "k", "a", "b", "c_label", "c", "case_id", "m_initial", "m_source",
                 "reduced_bound", "m_bound", "reduction_status", "extensions", "d_minus", "d_plus",
                 "certificates_ok", "status", "timing_s")


@dataclass
class InstanceRecord:
    m: int
    t: int
    k: int
    a: int
    b: int
    c_label: str
    c: int
    case_id: str
    m_initial: int
    m_source: str
    reduced_bound: Optional[int]
    m_bound: Optional[int]
    reduction_status: str
    extensions: list
    d_minus: int
    d_plus: int
    certificates_ok: bool
    status: str
    timing_s: float = 0.0

    @property
    def key(self) -> tuple:
        return (self.m, self.t, self.k, C_LABELS.index(self.c_label), self.case_id)

    @property
    def key_str(self) -> str:
        return f"{self.m}:{self.t}:{self.k}:{self.c_label}:{self.case_id}"

    def to_dict(self) -> dict:
        out = {}
        for name in RECORD_FIELDS:
            v = getattr(self, name)
            if isinstance(v, bool):
                out[name] = "true" if v else "false"
            elif isinstance(v, int):
                out[name] = str(v)
            elif isinstance(v, float):
                out[name] = f"{v:.6f}"
            elif isinstance(v, list):
                out[name] = [str(x) for x in v]
            else:
                out[name] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceRecord":
        def num(x):
            return None if x in (None, "") else int(x)

        ext = d["extensions"]
        if isinstance(ext, str):
            ext = [e for e in ext.split(" ") if e]
        return cls(
            m=int(d["m"]), t=int(d["t"]), k=int(d["k"]), a=int(d["a"]), b=int(d["b"]),
            c_label=d["c_label"], c=int(d["c"]), case_id=d["case_id"],
            m_initial=int(d["m_initial"]), m_source=d["m_source"],
            reduced_bound=num(d["reduced_bound"]), m_bound=num(d["m_bound"]),
            reduction_status=d["reduction_status"], extensions=[int(e) for e in ext],
            d_minus=int(d["d_minus"]), d_plus=int(d["d_plus"]),
            certificates_ok=d["certificates_ok"] in (True, "true"),
            status=d["status"], timing_s=float(d["timing_s"]),
        )


def classify(extensions: Iterable[int], d_minus: int, d_plus: int, decided: bool) -> str:
    allowed = {d_plus} | ({d_minus} if d_minus > 0 else set())
    if any(d not in allowed for d in extensions):
        return DISCREPANCY
    return VERIFIED if decided else UNDECIDED


def verify_instance(m: int, t: int, k: int, triple: DnTriple, label: str, case,
                    record_timing: bool = True) -> InstanceRecord:
    """Bound, reduce and finish one (triple, case); classify the outcome."""
    t0 = time.perf_counter()
    inst = LinearFormInstance(triple, case)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        initial = derive_index_bound(inst)
    res = reduce_instance(inst, initial)
    d_plus, d_minus = d_plus_minus(triple)
    exts: list[int] = []
    if res.m_bound is not None:
        hits = finish_instance(triple, case, res.m_bound)
        exts = sorted({h.d for h in hits})
    for d in exts:
        if not verify_dn_set(4, (*triple.elements(), d)):
            raise AssertionError(f"intersection gave non-quadruple d={d}")
    certs = recheck_certificates(inst, res)
    decided = res.m_bound is not None and certs
    return InstanceRecord(
        m=m, t=t, k=k, a=triple.a, b=triple.b, c_label=label, c=triple.c, case_id=case.key,
        m_initial=initial.bound, m_source=initial.source, reduced_bound=res.reduced_bound,
        m_bound=res.m_bound, reduction_status=res.status, extensions=exts,
        d_minus=d_minus, d_plus=d_plus, certificates_ok=certs,
        status=classify(exts, d_minus, d_plus, decided),
        timing_s=round(time.perf_counter() - t0, 6) if record_timing else 0.0,
    )


def pair_records(m: int, t: int, k: int, pair: DnPair, labels: Iterable[str],
                 skip: frozenset = frozenset(), record_timing: bool = True) -> list[InstanceRecord]:
    out = []
    wanted = set(labels)
    for label, c in campaign_c_list(pair):
        if label not in wanted:
            continue
        triple = DnTriple.of(pair.a, pair.b, c)
        for case in admissible_cases(triple, label):
            if not case.admissible or f"{m}:{t}:{k}:{label}:{case.key}" in skip:
                continue
            out.append(verify_instance(m, t, k, triple, label, case, record_timing))
    return out


def _work(unit) -> list[InstanceRecord]:
    m, t, k, a, b, r, labels, skip, timing = unit
    return pair_records(m, t, k, DnPair(a, b, r), labels, skip, timing)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

@dataclass
class CampaignReport:
    config_echo: dict
    records: list
    wall_time_s: float = 0.0

    @property
    def summary(self) -> dict:
        counts = {VERIFIED: 0, DISCREPANCY: 0, UNDECIDED: 0}
        for r in self.records:
            counts[r.status] += 1
        sources: dict[str, int] = {}
        for r in self.records:
            sources[r.m_source] = sources.get(r.m_source, 0) + 1
        return {**counts, "m_source": sources, "wall_time_s": self.wall_time_s}

    @property
    def exit_code(self) -> int:
        s = self.summary
        if s[DISCREPANCY]:
            return 1
        if s[UNDECIDED]:
            return 2
        return 0


def selected_units(config: CampaignConfig) -> Iterator[tuple]:
    """(family, k, pair) triples in deterministic order, deduplicated by (a, b)."""
    catalog = enumerate_families()
    fams = catalog.families
    if config.family_filter is not None:
        wanted = {(m, t % m) for m, t in config.family_filter}
        fams = [f for f in fams if (f.m, f.t) in wanted]
    seen: set = set()
    for fam in fams:
        k_hi = k_bound(fam, config.a_max)
        if k_hi is None:
            continue
        k_lo = first_in_scope_k(fam, limit=max(1, k_hi + 1))
        if k_lo is None:
            continue
        for k in config.k_sample.select(fam, k_lo, k_hi):
            pair = instantiate(fam, k)
            if not pair or pair.a > config.a_max or (pair.a, pair.b) in seen:
                continue
            seen.add((pair.a, pair.b))
            yield fam, k, pair


def load_checkpoint(path: Optional[str]) -> dict:
    done = {}
    if path and os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = InstanceRecord.from_dict(json.loads(line))
                except (ValueError, KeyError):
                    continue          # torn last line from an interrupted write
                done[rec.key_str] = rec
    return done


def _ends_with_newline(path: str) -> bool:
    with open(path, "rb") as fh:
        fh.seek(-1, os.SEEK_END)
        return fh.read(1) == b"\n"


def default_checkpoint(config: CampaignConfig) -> Optional[str]:
    if config.checkpoint_path:
        return config.checkpoint_path
    base = os.environ.get(CHECKPOINT_ENV)
    if not base:
        return None
    return str(Path(base) / "campaign.jsonl")


def run_campaign(config: CampaignConfig, progress=None) -> CampaignReport:
    config.validate()
    t0 = time.perf_counter()
    ckpt = default_checkpoint(config)
    done = load_checkpoint(ckpt)
    skip = frozenset(done)
    records = dict(done)
    units = [(f.m, f.t, k, p.a, p.b, p.r, tuple(config.c_labels), skip, config.record_timing)
             for f, k, p in selected_units(config)]
    writer = open(ckpt, "a") if ckpt else None
    if writer and writer.tell() and not _ends_with_newline(ckpt):
        writer.write("\n")          # seal a torn line so the next record starts clean
    try:
        def absorb(batch):
            for rec in batch:
                records[rec.key_str] = rec
                if writer:
                    writer.write(json.dumps(rec.to_dict()) + "\n")
            if writer:
                writer.flush()
                os.fsync(writer.fileno())
            if progress:
                progress(batch)

        if config.worker_count == 1:
            for u in units:
                absorb(_work(u))
        else:
            with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
                futs = [pool.submit(_work, u) for u in units]
                for fut in as_completed(futs):
                    absorb(fut.result())
    finally:
        if writer:
            writer.close()
    ordered = sorted(records.values(), key=lambda r: r.key)
    wall = time.perf_counter() - t0 if config.record_timing else 0.0
    return CampaignReport(config.echo(), ordered, wall)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def emit_report(records: list, fmt: str = "json", config_echo: Optional[dict] = None,
                summary: Optional[dict] = None) -> bytes:
    if fmt == "json":
        if summary is None:
            summary = CampaignReport(config_echo or {}, records).summary
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config_echo": config_echo or {},
            "records": [r.to_dict() for r in records],
            "summary": {k: (v if isinstance(v, dict) else str(v)) for k, v in summary.items()},
        }
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt == "jsonl":
        return "".join(json.dumps({"schema_version": SCHEMA_VERSION, **r.to_dict()}) + "\n"
                       for r in records).encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("schema_version",) + RECORD_FIELDS)
        for r in records:
            d = r.to_dict()
            w.writerow([SCHEMA_VERSION] + [" ".join(d[f]) if f == "extensions" else
                                           ("" if d[f] is None else d[f]) for f in RECORD_FIELDS])
        return buf.getvalue().encode()
    raise UsageError(f"unknown report format {fmt!r}")


def parse_report(data: bytes, fmt: str = "json") -> list:
    text = data.decode()
    if fmt == "json":
        return [InstanceRecord.from_dict(d) for d in json.loads(text)["records"]]
    if fmt == "jsonl":
        return [InstanceRecord.from_dict(json.loads(line)) for line in text.splitlines() if line]
    if fmt == "csv":
        return [InstanceRecord.from_dict(row) for row in csv.DictReader(io.StringIO(text))]
    raise UsageError(f"unknown report format {fmt!r}")
