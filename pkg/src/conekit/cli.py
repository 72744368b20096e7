"""Command-line frontend and experiment harness.

Subcommands: membership, copositive, clique, qpbound, gen, bench.  Exit
codes follow a decidedness contract: 0 for a decided outcome, 2 for
inconclusive / not-identified, 1 for errors, so shell pipelines can branch
on whether a run settled its question.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cones, copositivity, instances
from .copositivity import CopoConfig, test_copositive
from .instances import (
    GENERATOR_ID,
    complete_graph,
    gen_gnp_graph,
    gen_planted_qp,
    gen_random_spn,
    load_dimacs,
    max_clique_matrix,
    plant_clique,
    save_dimacs,
    std_qp_matrix,
)
from .linalg import format_matrix, load_matrix

EXIT_DECIDED = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

# user-facing cone flags and their internal family names
CONE_FLAGS = {
    "N": "N",
    "DD": "DD",
    "H": "H",
    "G": "G",
    "F+": "Fplus",
    "F+-": "Fpm",
    "L": "L",
}
_FLAG_OF_FAMILY = {v: k for k, v in CONE_FLAGS.items()}

CSV_FIELDS = (
    "command",
    "input_digest",
    "config",
    "outcome",
    "alpha_star",
    "certificate",
    "iterations",
    "lp_calls",
    "wall_time",
    "seed",
    "generator_id",
)


@dataclass
class RunRecord:
    """One run of one task on one instance; the unit of all emitted tables."""

    command: str
    input_digest: str
    config: dict = field(default_factory=dict)
    outcome: str = ""
    alpha_star: float | None = None
    certificate: list | None = None
    iterations: int = 0
    lp_calls: int = 0
    wall_time: float = 0.0
    seed: str = ""
    generator_id: str = GENERATOR_ID

    def to_obj(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "config": self.config,
            "outcome": self.outcome,
            "alpha_star": self.alpha_star,
            "certificate": self.certificate,
            "iterations": self.iterations,
            "lp_calls": self.lp_calls,
            "wall_time": self.wall_time,
            "seed": self.seed,
            "generator_id": self.generator_id,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "RunRecord":
        return cls(**obj)

    def to_csv_row(self) -> list:
        obj = self.to_obj()
        obj["config"] = json.dumps(self.config, sort_keys=True)
        obj["certificate"] = (
            "" if self.certificate is None else json.dumps(self.certificate)
        )
        obj["alpha_star"] = "" if self.alpha_star is None else repr(self.alpha_star)
        return [obj[k] for k in CSV_FIELDS]

    @classmethod
    def from_csv_row(cls, row: dict) -> "RunRecord":
        return cls(
            command=row["command"],
            input_digest=row["input_digest"],
            config=json.loads(row["config"]),
            outcome=row["outcome"],
            alpha_star=None if row["alpha_star"] == "" else float(row["alpha_star"]),
            certificate=(
                None if row["certificate"] == "" else json.loads(row["certificate"])
            ),
            iterations=int(row["iterations"]),
            lp_calls=int(row["lp_calls"]),
            wall_time=float(row["wall_time"]),
            seed=row["seed"],
            generator_id=row["generator_id"],
        )


def matrix_digest(a: np.ndarray) -> str:
    return hashlib.sha256(format_matrix(a).encode()).hexdigest()[:12]


def write_records(records, fmt: str, out) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow(r.to_csv_row())
    elif fmt == "json":
        for r in records:
            out.write(json.dumps(r.to_obj(), sort_keys=True) + "\n")
    elif fmt == "table":
        for r in records:
            alpha = "" if r.alpha_star is None else f"{r.alpha_star:.6g}"
            out.write(
                f"{r.command:<12} {r.outcome:<16} alpha={alpha:<12} "
                f"iter={r.iterations:<8} lp={r.lp_calls:<8} "
                f"t={r.wall_time:.3f}s seed={r.seed}\n"
            )
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_records_csv(text: str) -> list:
    return [RunRecord.from_csv_row(row) for row in csv.DictReader(io.StringIO(text))]


def read_records_json(text: str) -> list:
    return [
        RunRecord.from_obj(json.loads(line))
        for line in text.splitlines()
        if line.strip()
    ]


def _parse_cones(arg: str) -> list:
    families = []
    for tok in arg.split(","):
        tok = tok.strip()
        if tok not in CONE_FLAGS:
            raise ValueError(
                f"unknown cone {tok!r}; choose from {','.join(CONE_FLAGS)}"
            )
        families.append(CONE_FLAGS[tok])
    return families


def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_membership(args) -> int:
    a = load_matrix(args.matrix)
    families = _parse_cones(args.cone)
    started = time.monotonic()
    verdicts = cones.membership_report(a, cones=families, eps_alpha=args.eps)
    elapsed = time.monotonic() - started
    digest = matrix_digest(a)
    records = []
    for v in verdicts:
        flag = _FLAG_OF_FAMILY.get(v.cone.replace("_hat", ""), v.cone)
        records.append(
            RunRecord(
                command="membership",
                input_digest=digest,
                config={"cone": flag, "eps": args.eps},
                outcome=v.status,
                alpha_star=v.alpha_star,
                wall_time=elapsed / max(1, len(verdicts)),
                seed="",
            )
        )
    out, close = _open_out(args.out)
    try:
        write_records(records, args.format, out)
    finally:
        if close:
            out.close()
    any_member = any(v.is_member for v in verdicts)
    return EXIT_DECIDED if any_member else EXIT_INCONCLUSIVE


def _copositive_record(a, args, command: str, seed: str = "") -> RunRecord:
    cfg = CopoConfig(
        cone_family=CONE_FLAGS[args.cone],
        use_alg2=(args.alg == 2),
        max_iterations=args.max_iter,
        time_limit=args.time_limit,
        eps_alpha=args.eps,
    )
    res = test_copositive(a, cfg)
    return RunRecord(
        command=command,
        input_digest=matrix_digest(a),
        config={
            "cone": args.cone,
            "alg": args.alg,
            "max_iter": args.max_iter,
            "time_limit": args.time_limit,
            "eps": args.eps,
        },
        outcome=res.outcome,
        certificate=None if res.certificate is None else list(res.certificate),
        iterations=res.stats.get("iterations", 0),
        lp_calls=res.stats.get("lp_calls", 0),
        wall_time=res.stats.get("wall_time", 0.0),
        seed=seed,
    )


def cmd_copositive(args) -> int:
    a = load_matrix(args.matrix)
    rec = _copositive_record(a, args, "copositive")
    out, close = _open_out(args.out)
    try:
        write_records([rec], args.format, out)
    finally:
        if close:
            out.close()
    if rec.outcome == copositivity.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_DECIDED


def cmd_clique(args) -> int:
    g = load_dimacs(args.graph)
    cfg = CopoConfig(
        cone_family=CONE_FLAGS[args.cone],
        use_alg2=(args.alg == 2),
        time_limit=args.time_limit,
    )
    omega = instances.clique_number(g, cfg, budget=args.budget)
    if omega is None:
        print("inconclusive: probe budget exhausted")
        return EXIT_INCONCLUSIVE
    print(f"clique_number {omega}")
    return EXIT_DECIDED


def cmd_qpbound(args) -> int:
    q = load_matrix(args.matrix)
    cfg = CopoConfig(
        cone_family=CONE_FLAGS[args.cone],
        use_alg2=(args.alg == 2),
        time_limit=args.time_limit,
    )
    bound = instances.qp_optimum(q, cfg, eta=args.eta, budget=args.budget)
    print(f"interval [{bound.lo!r}, {bound.hi!r}] converged={bound.converged}")
    return EXIT_DECIDED if bound.converged else EXIT_INCONCLUSIVE


def cmd_gen(args) -> int:
    seed = args.seed
    if args.kind == "spn":
        a, _, _ = gen_random_spn(args.n, seed)
        payload = format_matrix(a)
    elif args.kind == "plantedqp":
        inst = gen_planted_qp(args.n, args.support, args.t, seed=seed)
        payload = format_matrix(inst.Q)
    elif args.kind == "gnp":
        g = gen_gnp_graph(args.n, args.p, seed=seed)
        if args.clique:
            g = plant_clique(g, args.clique, seed=seed)
        payload = None
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    if args.kind == "gnp":
        if args.out:
            save_dimacs(g, args.out)
        else:
            sys.stdout.write(f"p edge {g.n} {g.m}\n")
            for i, j in sorted(g.edges):
                sys.stdout.write(f"e {i + 1} {j + 1}\n")
    else:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    return EXIT_DECIDED


def _row_seed(master: int, index: int) -> np.random.SeedSequence:
    # per-row stream: master entropy extended by the row index, so any row
    # can be regenerated in isolation
    return np.random.SeedSequence([master, index])


def _bench_instance(spec: dict, seed_seq) -> np.ndarray:
    kind = spec["kind"]
    if kind == "spn":
        a, _, _ = gen_random_spn(int(spec["n"]), seed_seq)
        return a
    if kind == "kgamma":
        return max_clique_matrix(complete_graph(int(spec["n"])), float(spec["gamma"]))
    if kind == "plantedqp":
        inst = gen_planted_qp(
            int(spec["n"]), int(spec["support"]), float(spec["t"]), seed=seed_seq
        )
        return std_qp_matrix(inst.Q, float(spec.get("gamma", 0.0)))
    if kind == "file":
        return load_matrix(spec["path"])
    raise ValueError(f"unknown instance kind {kind!r}")


def _bench_row(index: int, row: dict, master: int) -> RunRecord:
    seed_seq = _row_seed(master, index)
    a = _bench_instance(row["instance"], seed_seq)
    task = row.get("task", "membership")
    cone_flag = row.get("cone", "F+-")
    family = CONE_FLAGS[cone_flag]
    config = {
        "row": index,
        "task": task,
        "cone": cone_flag,
        "instance": row["instance"],
    }
    started = time.monotonic()
    if task == "membership":
        verdicts = cones.membership_report(a, cones=[family])
        v = verdicts[0]
        return RunRecord(
            command="bench",
            input_digest=matrix_digest(a),
            config=config,
            outcome=v.status,
            alpha_star=v.alpha_star,
            lp_calls=1 if family in cones.LP_FAMILIES else 0,
            wall_time=time.monotonic() - started,
            seed=f"{master}/{index}",
        )
    if task == "copositive":
        cfg = CopoConfig(
            cone_family=family,
            use_alg2=(int(row.get("alg", 2)) == 2),
            max_iterations=int(row.get("max_iter", 1_000_000)),
            time_limit=float(row.get("time_limit", 300.0)),
        )
        res = test_copositive(a, cfg)
        return RunRecord(
            command="bench",
            input_digest=matrix_digest(a),
            config=config,
            outcome=res.outcome,
            certificate=None if res.certificate is None else list(res.certificate),
            iterations=res.stats.get("iterations", 0),
            lp_calls=res.stats.get("lp_calls", 0),
            wall_time=time.monotonic() - started,
            seed=f"{master}/{index}",
        )
    raise ValueError(f"unknown task {task!r}")


def _expand_suite(suite: dict) -> list:
    rows = []
    for row in suite["rows"]:
        repeat = int(row.get("repeat", 1))
        base = {k: v for k, v in row.items() if k != "repeat"}
        rows.extend(dict(base) for _ in range(repeat))
    return rows


def _summary_records(records: list) -> list:
    by_cone: dict = {}
    for r in records:
        cone = r.config.get("cone", "?")
        bucket = by_cone.setdefault(cone, {"runs": 0, "decided": 0, "time": 0.0})
        bucket["runs"] += 1
        bucket["time"] += r.wall_time
        if r.outcome in (cones.MEMBER, copositivity.COPOSITIVE,
                         copositivity.NOT_COPOSITIVE):
            bucket["decided"] += 1
    out = []
    for cone in sorted(by_cone):
        b = by_cone[cone]
        out.append(
            RunRecord(
                command="summary",
                input_digest="",
                config={"cone": cone, "runs": b["runs"]},
                outcome=f"decided={b['decided']}/{b['runs']}",
                wall_time=b["time"] / b["runs"],
                seed="",
            )
        )
    return out


def cmd_bench(args) -> int:
    with open(args.suite) as fh:
        suite = json.load(fh)
    master = int(args.seed if args.seed is not None else suite.get("seed", 0))
    rows = _expand_suite(suite)
    threads = int(os.environ.get("CONEKIT_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(
                pool.map(lambda ir: _bench_row(ir[0], ir[1], master), enumerate(rows))
            )
    else:
        records = [_bench_row(i, row, master) for i, row in enumerate(rows)]
    records = records + _summary_records(records)
    out, close = _open_out(args.out)
    try:
        write_records(records, args.format, out)
    finally:
        if close:
            out.close()
    any_inconclusive = any(
        r.outcome
        in (copositivity.INCONCLUSIVE, cones.NOT_IDENTIFIED)
        for r in records
        if r.command == "bench"
    )
    return EXIT_INCONCLUSIVE if any_inconclusive else EXIT_DECIDED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conekit",
        description="Cone membership tests and copositivity runs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, cone_default):
        p.add_argument("--cone", default=cone_default)
        p.add_argument("--alg", type=int, choices=(1, 2), default=2)
        p.add_argument("--eps", type=float, default=cones.EPS_ALPHA)
        p.add_argument("--max-iter", type=int, default=1_000_000)
        p.add_argument("--time-limit", type=float, default=300.0)
        p.add_argument("--format", choices=("csv", "json", "table"), default="table")
        p.add_argument("--out", default=None)

    p = sub.add_parser("membership", help="per-cone membership report")
    p.add_argument("matrix")
    common(p, "N,DD,H,G,F+,F+-,L")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("copositive", help="simplicial-partition copositivity test")
    p.add_argument("matrix")
    common(p, "F+-")
    p.set_defaults(func=cmd_copositive)

    p = sub.add_parser("clique", help="clique number via copositivity probes")
    p.add_argument("graph")
    common(p, "F+-")
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("qpbound", help="bracket the simplex-QP optimum")
    p.add_argument("matrix")
    common(p, "F+-")
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=cmd_qpbound)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("kind", choices=("spn", "plantedqp", "gnp"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--support", type=int, default=3)
    p.add_argument("--t", type=float, default=-10.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--clique", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a declarative suite to CSV/JSON")
    p.add_argument("suite", help="suite spec (JSON)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_ERROR
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
