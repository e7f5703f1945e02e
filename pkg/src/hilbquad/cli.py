"""Command-line interface.

    hilbquad factor N
    hilbquad kfree N --k K
    hilbquad classgroup --disc D
    hilbquad gadget --places inf,2 --epsilon 1/10
    hilbquad fields --curve NAME --sign neg --height-bound B [--verify --m M]
    hilbquad census --form C0,...,Cr --degree r --k 2 --x X [--mod M --a A --b B]
    hilbquad verify --curve NAME --sign neg --m 3 --rank 3 --disc-bound X

Exit status: 0 success, 2 usage or precondition error, 3 capacity exceeded,
4 run stopped before completion (partial output is marked incomplete).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from . import arith
from .arith import factor, kfree_part
from .census import (
    CensusSeries,
    growth_fit,
    merge_shards,
    shard_cores,
    check_census_form,
)
from .classgroup import group_structure, is_fundamental, narrow_group_structure, set_structure_cache
from .classgroup.imaginary import DEFAULT_MAX_DISC
from .errors import CapacityError, DomainError, PreconditionError
from .forms import BinaryForm
from .journal import RunJournal, cache_dir, config_hash, factor_store, structure_store
from .localize import PlaceSet, build_gadget
from .specialize import (
    SpecializationRecord,
    default_bad_primes,
    enumerate_specializations,
    height_for_candidates,
    parse_curve,
    verify_record,
)

log = logging.getLogger("hilbquad")

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_INCOMPLETE = 0, 2, 3, 4
CSV_HEADER = ["checkpoint", "count", "fitted_slope", "fitted_constant", "refuted_fraction"]
RANK_MODULI = (2, 3, 5, 7)


class UsageError(Exception):
    pass


def parse_int(text) -> int:
    """Integers, also written like 1e12 or 10**6."""
    s = str(text).strip().replace("_", "")
    if "**" in s:
        base, _, exp = s.partition("**")
        return parse_int(base) ** parse_int(exp)
    try:
        v = Decimal(s)
    except InvalidOperation:
        raise UsageError(f"not an integer: {text!r}") from None
    if v != v.to_integral_value():
        raise UsageError(f"not an integer: {text!r}")
    return int(v)


def parse_sign(text: str) -> int:
    t = str(text).lower()
    if t in ("neg", "-", "-1", "minus", "imaginary"):
        return -1
    if t in ("pos", "+", "1", "+1", "plus", "real"):
        return 1
    raise UsageError(f"sign must be neg or pos, not {text!r}")


@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    k: int = 2
    disc: int | None = None
    places: str | None = None
    epsilon: str | None = None
    curve: str | None = None
    sign: int | None = None
    height_bound: int | None = None
    bad_primes: str = "auto"
    verify: bool = False
    m: int | None = None
    rank: int | None = None
    disc_bound: int | None = None
    max_disc: int = DEFAULT_MAX_DISC
    form: list[int] | None = None
    degree: int | None = None
    x: int | None = None
    mod: int = 1
    a: int = 0
    b: int = 0
    per_decade: int = 1
    shards: int = 16
    workers: int = 1
    limit: int | None = None
    max_units: int | None = None
    cache_dir: str | None = None
    output: str | None = None
    records: str | None = None
    journal: str | None = None
    factor_budget: int | None = None

    def result_key(self) -> dict:
        """The fields that determine the output; used to match journals."""
        d = asdict(self)
        for k in ("workers", "max_units", "cache_dir", "output", "records", "journal", "factor_budget"):
            d.pop(k, None)
        return d


def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hilbquad", description="Quadratic fields with large class group rank.")
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("--cache-dir", help="cache directory (default: $HILBQUAD_CACHE_DIR)")
    p.add_argument("--quiet", action="store_true", help="log warnings only (accepted anywhere)")
    p.add_argument("--factor-budget", help="rho iterations allowed per factorization")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("factor", help="factor an integer")
    s.add_argument("n")

    s = sub.add_parser("kfree", help="write n = t * z^k with t k-free")
    s.add_argument("n")
    s.add_argument("--k", default=None)

    s = sub.add_parser("classgroup", help="class group of a fundamental discriminant")
    s.add_argument("--disc", default=None)
    s.add_argument("--max-disc", default=None)

    s = sub.add_parser("gadget", help="Moebius gadget for places S and tolerance eps")
    s.add_argument("--places", default=None, help="e.g. inf,2,3")
    s.add_argument("--epsilon", default=None, help="e.g. 1/100")

    for name in ("fields", "verify"):
        s = sub.add_parser(name, help="specialization records" if name == "fields" else "field census CSV")
        s.add_argument("--curve", default=None, help="lsw-genus4, chyp2[:m=M,c=C] or a JSON file")
        s.add_argument("--sign", default=None, help="neg or pos")
        s.add_argument("--height-bound", default=None)
        s.add_argument("--bad-primes", default=None, help="auto, none, or p1,p2,...")
        s.add_argument("--m", default=None)
        s.add_argument("--max-disc", default=None)
        s.add_argument("--output", default=None)
        s.add_argument("--journal", default=None)
        s.add_argument("--max-units", default=None)
        if name == "fields":
            s.add_argument("--verify", action="store_true", default=None)
            s.add_argument("--limit", default=None)
        else:
            s.add_argument("--rank", default=None)
            s.add_argument("--disc-bound", default=None)
            s.add_argument("--records", default=None, help="JSONL file for the per-field records")
            s.add_argument("--per-decade", default=None)

    s = sub.add_parser("census", help="count k-free values of a binary form")
    s.add_argument("--form", default=None, help="coefficients of X^0 Y^r, X^1 Y^(r-1), ..., X^r")
    s.add_argument("--degree", default=None)
    s.add_argument("--k", default=None)
    s.add_argument("--x", default=None)
    s.add_argument("--mod", default=None)
    s.add_argument("--a", default=None)
    s.add_argument("--b", default=None)
    s.add_argument("--per-decade", default=None)
    s.add_argument("--shards", default=None)
    s.add_argument("--workers", default=None)
    s.add_argument("--output", default=None)
    s.add_argument("--journal", default=None)
    s.add_argument("--max-units", default=None)
    return p


_INT_KEYS = {
    "n", "k", "disc", "height_bound", "m", "rank", "disc_bound", "max_disc", "degree", "x",
    "mod", "a", "b", "per_decade", "shards", "workers", "limit", "max_units", "factor_budget",
}


def parse_config(argv: list[str]) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    raw: dict = {}
    if ns.config:
        raw.update(_read_config_file(ns.config))
    for key, value in vars(ns).items():
        if key in ("config", "quiet") or value is None:
            continue
        raw[key] = value
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise UsageError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    vals: dict = {}
    for key, value in raw.items():
        if key in _INT_KEYS:
            vals[key] = parse_int(value)
        elif key == "sign":
            vals[key] = parse_sign(value)
        elif key == "verify":
            vals[key] = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
        elif key == "form":
            try:
                vals[key] = [int(c) for c in str(value).split(",")]
            except ValueError:
                raise UsageError(f"malformed form coefficients {value!r}") from None
        else:
            vals[key] = value
    cfg = RunConfig(**vals)
    _validate(cfg)
    log.info("config %s", json.dumps(asdict(cfg), sort_keys=True))
    return cfg


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.subcommand}: missing --{', --'.join(n.replace('_', '-') for n in missing)}")


def _validate(cfg: RunConfig) -> None:
    sc = cfg.subcommand
    if sc in ("factor", "kfree"):
        _require(cfg, "n")
    elif sc == "classgroup":
        _require(cfg, "disc")
    elif sc == "gadget":
        _require(cfg, "places", "epsilon")
    elif sc == "fields":
        _require(cfg, "curve", "sign", "height_bound")
        if cfg.verify:
            _require(cfg, "m")
    elif sc == "verify":
        _require(cfg, "curve", "sign", "m", "rank", "disc_bound")
    elif sc == "census":
        _require(cfg, "form", "degree", "x")
        if len(cfg.form) != cfg.degree + 1:
            raise UsageError(f"--form has {len(cfg.form)} coefficients but degree {cfg.degree} needs {cfg.degree + 1}")
    for key in ("height_bound", "x", "disc_bound", "mod", "shards", "workers", "per_decade"):
        v = getattr(cfg, key)
        if v is not None and v < 1:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    if cfg.k < 2:
        raise UsageError("--k must be at least 2")


# ---------------------------------------------------------------------------


def _emit(lines: list[str], path: str | None, out) -> None:
    text = "".join(line + "\n" for line in lines)
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


def _cmd_factor(cfg: RunConfig, out) -> int:
    fac = factor(cfg.n)
    out.write(json.dumps({"n": cfg.n, **fac.to_json()}) + "\n")
    return EXIT_OK


def _cmd_kfree(cfg: RunConfig, out) -> int:
    kd = kfree_part(cfg.n, cfg.k)
    out.write(f"t={kd.t} z={kd.z}\n")
    return EXIT_OK


def _cmd_classgroup(cfg: RunConfig, out) -> int:
    d = cfg.disc
    if not is_fundamental(d):
        raise PreconditionError(f"{d} is not a fundamental discriminant")
    if d < 0:
        G = group_structure(d, cfg.max_disc)
        kind = "class"
    else:
        G = narrow_group_structure(d)
        kind = "narrow"
    ranks = {str(m): G.m_rank(m) for m in RANK_MODULI}
    out.write(json.dumps({"d": d, "group": kind, "h": G.order, "divisors": list(G.divisors), "ranks": ranks}) + "\n")
    return EXIT_OK


def _cmd_gadget(cfg: RunConfig, out) -> int:
    g = build_gadget(PlaceSet.parse(cfg.places), Fraction(cfg.epsilon))
    out.write(g.to_json() + "\n")
    return EXIT_OK


def _bad_primes(cfg: RunConfig, curve) -> list[int]:
    text = (cfg.bad_primes or "auto").strip().lower()
    if text == "auto":
        return default_bad_primes(curve.f)
    if text in ("none", "", "empty"):
        return []
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise UsageError(f"malformed --bad-primes {cfg.bad_primes!r}") from None


def _cmd_fields(cfg: RunConfig, out) -> int:
    curve = parse_curve(cfg.curve)
    stream = enumerate_specializations(curve, _bad_primes(cfg, curve), cfg.sign, cfg.height_bound, skip_unfactorable=True)
    for note in stream.notes:
        log.warning("%s", note)
    lines = []
    for rec in stream:
        if cfg.limit is not None and len(lines) >= cfg.limit:
            break
        if cfg.verify:
            rec = verify_record(rec, cfg.m, cfg.max_disc)
        lines.append(rec.to_json())
    _emit(lines, cfg.output, out)
    log.info("summary %s", json.dumps(stream.summary(), sort_keys=True))
    return EXIT_OK


def _fmt(v) -> str:
    return "" if v is None else f"{v:.6f}"


def _csv_text(series: CensusSeries, exponent: float, log_power: int, refuted: float | None, complete: bool) -> str:
    buf = io.StringIO()
    if not complete:
        buf.write("# incomplete\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    pts = series.checkpoints
    for i, (x, c) in enumerate(pts):
        fit = growth_fit(CensusSeries(pts[: i + 1]), exponent, log_power)
        w.writerow([x, c, _fmt(fit.slope), _fmt(fit.constant), _fmt(refuted)])
    return buf.getvalue()


def _checkpoints(x: int, per_decade: int) -> list[int]:
    pts = {x}
    i = 1
    while True:
        v = round(10 ** (i / per_decade))
        if v >= x:
            break
        pts.add(v)
        i += 1
    return sorted(pts)


def _journal_path(cfg: RunConfig, suffix: str) -> Path | None:
    if cfg.journal:
        return Path(cfg.journal)
    if cfg.output:
        return Path(cfg.output + suffix)
    d = cache_dir(cfg.cache_dir)
    if d is not None:
        return d / f"run-{config_hash(cfg.result_key())}{suffix}"
    return None


class _Journal:
    """RunJournal when a path is available, else an in-memory stand-in."""

    def __init__(self, path: Path | None, chash: str):
        self.inner = RunJournal(path, chash) if path is not None else None
        self.mem: dict = {}

    def get(self, unit):
        if self.inner is not None:
            return self.inner.get(unit)
        return self.mem.get(json.dumps(unit))

    def record(self, unit, data):
        if self.inner is not None:
            self.inner.record(unit, data)
        else:
            self.mem[json.dumps(unit)] = data


def _cmd_census(cfg: RunConfig, out) -> int:
    F = BinaryForm(tuple(cfg.form))
    check_census_form(F)
    xs = _checkpoints(cfg.x, cfg.per_decade)
    journal = _Journal(_journal_path(cfg, ".journal"), config_hash(cfg.result_key()))
    parts: list = [None] * cfg.shards
    todo = []
    for i in range(cfg.shards):
        got = journal.get(["shard", i])
        if got is not None:
            parts[i] = {int(t): j for t, j in got}
        else:
            todo.append(i)
    budget = cfg.max_units if cfg.max_units is not None else len(todo)
    run_now, todo = todo[:budget], todo[budget:]
    args = [(F, xs, cfg.k, cfg.mod, cfg.a, cfg.b, i, cfg.shards) for i in run_now]
    if cfg.workers > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_shard_star, args))
    else:
        results = [shard_cores(*a) for a in args]
    # one writer: results are journaled here in shard order
    for i, res in zip(run_now, results):
        parts[i] = res
        journal.record(["shard", i], sorted([t, j] for t, j in res.items()))
    done = [p for p in parts if p is not None]
    counts = merge_shards(done, len(xs))
    complete = not todo
    series = CensusSeries(tuple(zip(xs, counts)))
    r = F.degree
    text = _csv_text(series, 2 / r, 2, None, complete)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        out.write(text)
    if not complete:
        log.warning("stopped with %d of %d shards done; rerun to resume", cfg.shards - len(todo), cfg.shards)
        return EXIT_INCOMPLETE
    return EXIT_OK


def _shard_star(args):
    return shard_cores(*args)


DEFAULT_CANDIDATES = 64


def _cmd_verify(cfg: RunConfig, out) -> int:
    curve = parse_curve(cfg.curve)
    S = _bad_primes(cfg, curve)
    B = cfg.height_bound or height_for_candidates(curve, S, cfg.sign, DEFAULT_CANDIDATES)
    stream = enumerate_specializations(curve, S, cfg.sign, B, skip_unfactorable=True)
    for note in stream.notes:
        log.warning("%s", note)
    max_disc = max(cfg.max_disc, cfg.disc_bound)
    key = cfg.result_key()
    key["height_bound"] = B
    journal = _Journal(_journal_path(cfg, ".journal"), config_hash(key))
    budget = cfg.max_units
    records: list[SpecializationRecord] = []
    complete = True
    for rec in stream:
        if abs(rec.d_field) > cfg.disc_bound:
            continue
        unit = ["field", rec.t]
        got = journal.get(unit)
        if got is not None:
            rec = SpecializationRecord.from_dict(got)
        else:
            if budget is not None and budget <= 0:
                complete = False
                break
            rec = verify_record(rec, cfg.m, max_disc)
            journal.record(unit, rec.to_dict())
            if budget is not None:
                budget -= 1
        records.append(rec)
    log.info("summary %s", json.dumps(stream.summary(), sort_keys=True))
    xs = _checkpoints(cfg.disc_bound, cfg.per_decade)
    good = sorted(abs(r.d_field) for r in records if r.verified_rank >= cfg.rank)
    counts = [sum(1 for d in good if d <= x) for x in xs]
    refuted = sum(r.status == "refuted" for r in records) / len(records) if records else 0.0
    series = CensusSeries(tuple(zip(xs, counts)))
    text = _csv_text(series, 1 / (curve.genus + 1), 2, refuted, complete)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        out.write(text)
    lines = [r.to_json() for r in records]
    if cfg.records:
        _emit(lines, cfg.records, out)
    if not complete:
        log.warning("stopped after the unit budget; rerun to resume")
        return EXIT_INCOMPLETE
    return EXIT_OK


COMMANDS = {
    "factor": _cmd_factor,
    "kfree": _cmd_kfree,
    "classgroup": _cmd_classgroup,
    "gadget": _cmd_gadget,
    "fields": _cmd_fields,
    "census": _cmd_census,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    stores = []
    d = cache_dir(cfg.cache_dir)
    if d is not None:
        fs, ss = factor_store(d / "factor.jsonl"), structure_store(d / "classgroup.jsonl")
        arith.set_cache(fs)
        set_structure_cache(ss)
        stores = [fs, ss]
    saved_budget = arith.RHO_BUDGET
    if cfg.factor_budget is not None:
        arith.RHO_BUDGET = cfg.factor_budget
    try:
        return COMMANDS[cfg.subcommand](cfg, out)
    finally:
        arith.RHO_BUDGET = saved_budget
        if stores:
            arith.set_cache(None)
            set_structure_cache(None)
            for s in stores:
                s.compact()


def main(argv: list[str] | None = None, out=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    argv = sys.argv[1:] if argv is None else argv
    if "--quiet" in argv:
        argv = [a for a in argv if a != "--quiet"]
        logging.getLogger().setLevel(logging.WARNING)
    try:
        cfg = parse_config(argv)
        return run(cfg, out)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (UsageError, PreconditionError, DomainError) as exc:
        print(f"hilbquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"hilbquad: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
