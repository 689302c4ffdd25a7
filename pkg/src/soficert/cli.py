"""Command-line frontend.

Subcommands: approx (build a certificate from a JSON job config),
verify (check a certificate file), subgroup (inspect a subgroup graph
and optionally its Hall separator), conj-demo (build and check the
conjugation-action certificate), fuzz (mutation and oracle harnesses).

Exit codes: 0 accept/success, 1 reject, 2 malformed input or pipeline
error.  All numerics in configs and outputs are integers or "p/q"
rational strings; certificate files are pretty-printed with sorted keys
so identical jobs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .actions import (
    ActionSpec,
    CosetAction,
    GroupElement,
    action_from_json,
    parse_element,
    point_rank,
)
from .builder import (
    Caps,
    Certificate,
    CertificateFormatError,
    StageError,
    approximate,
    certificate_to_dict,
    write_certificate,
)
from .stallings import (
    CoreTooLargeError,
    InseparableError,
    core_graph,
    hall_completion,
)
from .verifier import (
    brute_force_witness,
    check_orbit_witness,
    mutate_certificate,
    verify_certificate,
)
from .words import Word, parse_word


@dataclass(frozen=True)
class JobConfig:
    """A build job: action, F, E, tolerance, strategy, caps, output path."""

    action: ActionSpec
    F: tuple[GroupElement, ...]
    E: tuple[Word, ...]
    epsilon: Fraction
    strategy: str
    caps: Caps
    out: str | None
    seed: int


def job_from_dict(data: dict) -> JobConfig:
    if not isinstance(data, dict):
        raise ValueError("job config must be a JSON object")
    for key in ("action", "F", "E"):
        if key not in data:
            raise ValueError(f"job config missing {key!r}")
    action = action_from_json(data["action"])
    F = tuple(parse_element(action, item) for item in data["F"])
    rank = point_rank(action)
    E = tuple(parse_word(t, rank) for t in data["E"])
    epsilon = Fraction(str(data.get("epsilon", "0")))
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    strategy = data.get("strategy", "core")
    if strategy not in ("core", "literal"):
        raise ValueError(f"unknown strategy {strategy!r}")
    caps_data = data.get("caps", {})
    if not isinstance(caps_data, dict):
        raise ValueError("caps must be an object")
    caps = Caps(**caps_data)
    for name in ("core_cap", "literal_degree_max", "bireg_carrier_cap",
                 "quotient_degree_max", "quotient_samples", "orbit_bound"):
        if getattr(caps, name) <= 0:
            raise ValueError(f"cap {name} must be positive")
    out = data.get("out")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ValueError("seed must be an integer")
    return JobConfig(action, F, E, epsilon, strategy, caps, out, seed)


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _summary(cert: Certificate, out: str | None) -> dict:
    prov = cert.provenance
    payload = {
        "carrier_size": cert.approx.size,
        "b_size": len(cert.witness.b_labels),
        "epsilon_achieved": str(cert.epsilon),
        "strategy": prov.get("strategy", "?"),
    }
    if "separator" in prov:
        payload["separator_index"] = prov["separator"]["index"]
    if "quotient" in prov:
        payload["quotient_order"] = prov["quotient"]["order"]
    if out:
        payload["out"] = out
    return payload


def cmd_approx(args) -> int:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        job = job_from_dict(data)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    strategy = args.strategy or job.strategy
    out = args.out or job.out
    try:
        cert = approximate(job.action, job.F, job.E, job.epsilon, strategy, job.caps)
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return 2
    if out:
        write_certificate(cert, out)
    _emit(_summary(cert, out), args.json)
    return 0


def cmd_verify(args) -> int:
    epsilon = None
    if args.epsilon is not None:
        try:
            epsilon = Fraction(args.epsilon)
        except (ValueError, ZeroDivisionError) as exc:
            print(f"error [epsilon]: {exc}", file=sys.stderr)
            return 2
    try:
        report = verify_certificate(args.certificate, epsilon)
    except CertificateFormatError as exc:
        print(f"error [schema]: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) if args.json
          else report.to_text())
    return 0 if report.accepted else 1


def _word_list(text: str, rank: int) -> list[Word]:
    if not text:
        return []
    return [parse_word(part, rank) for part in text.split(",")]


def cmd_subgroup(args) -> int:
    try:
        gens = _word_list(args.gens, args.rank)
        graph = core_graph(gens, args.rank)
        avoid = _word_list(args.avoid, args.rank) if args.avoid is not None else None
    except ValueError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    payload: dict = {
        "rank": args.rank,
        "generators": [w.text() for w in gens],
        "vertices": graph.vertex_count,
        "edges": [f"{u} -{chr(96 + l)}-> {v}" for u, l, v in sorted(graph.edges)],
    }
    if avoid is not None:
        try:
            table = hall_completion(graph, avoid)
        except InseparableError as exc:
            payload["separator"] = f"inseparable: {exc.word.text()!r} lies in the subgroup"
            _emit(payload, args.json)
            return 0
        payload["separator_index"] = table.size
        for i, img in enumerate(table.images):
            payload[f"table_{chr(97 + i)}"] = list(img)
    _emit(payload, args.json)
    return 0


def cmd_conj_demo(args) -> int:
    from .actions import BiregularAction, RestrictedAction

    try:
        F = _word_list(args.f, args.rank)
        E = _word_list(args.e, args.rank)
        diag = tuple(
            (Word((i,), args.rank), Word((i,), args.rank)) for i in range(1, args.rank + 1)
        )
        spec = RestrictedAction(BiregularAction(args.rank), diag)
        cert = approximate(spec, F, E)
        bireg = approximate(BiregularAction(args.rank), [(g, g) for g in F], E)
    except StageError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    if args.out:
        write_certificate(cert, args.out)
    report = verify_certificate(cert)
    diagonal_ok = all(
        cert.approx.permutation_of(g) == bireg.approx.permutation_of((g, g)) for g in F
    )
    payload = _summary(cert, args.out)
    payload["verdict"] = "accept" if report.accepted else "reject"
    payload["diagonal_phi_agreement"] = diagonal_ok
    _emit(payload, args.json)
    return 0 if report.accepted and diagonal_ok else 1


# ---------------------------------------------------------------------------
# harnesses


def oracle_cases(caps: Caps = Caps()) -> list[Certificate]:
    """Deterministic pool of small built certificates (|A| <= 8, |E| <= 3,
    |B| <= 5) for the brute-force oracle to cross-examine."""
    jobs: list[tuple[CosetAction, list[Word], list[Word]]] = []
    for m in (2, 3, 4):
        spec = CosetAction(1, (parse_word("a" * m, 1),))
        points = [parse_word("a" * i, 1) for i in range(min(m, 3))]
        gens = [parse_word("a", 1)]
        for k in range(1, len(points) + 1):
            jobs.append((spec, gens, points[:k]))
    f2 = [parse_word("a", 2), parse_word("b", 2)]
    w2 = lambda t: parse_word(t, 2)
    for sub, e_sets in [
        ((w2("aa"), w2("b")), [["" ], ["", "a"]]),
        ((w2("a"),), [[""], ["", "b"]]),
        ((w2("ab"), w2("ba")), [[""], ["", "a"]]),
        ((w2("aa"), w2("ab")), [[""], ["", "a"]]),
        ((w2("a"), w2("bb")), [[""], ["", "b"]]),
        ((w2("aba"),), [["", "a"]]),
        ((), [["", "a"], ["", "b"]]),
    ]:
        spec = CosetAction(2, sub)
        for texts in e_sets:
            jobs.append((spec, f2, [w2(t) for t in texts]))
    out = []
    for spec, F, E in jobs:
        cert = approximate(spec, F, E, caps=caps)
        if cert.approx.size <= 8 and len(cert.witness.b_labels) <= 5:
            out.append(cert)
    return out


def oracle_agreement(certs) -> list[dict]:
    """For each certificate, the oracle must find a witness and that
    witness must itself check out."""
    results = []
    for cert in certs:
        found = brute_force_witness(
            cert.action, cert.approx, cert.F, cert.E, cert.epsilon,
            max_b=len(cert.witness.b_labels),
        )
        agreed = found is not None
        if agreed:
            chk = check_orbit_witness(
                cert.action, cert.approx, cert.F, cert.E, found, cert.epsilon
            )
            agreed = (
                chk.cardinality_ok
                and not chk.injectivity_failures
                and not chk.equivariance_failures
            )
        results.append({
            "carrier_size": cert.approx.size,
            "points": [x.text() for x in cert.E],
            "agreed": agreed,
        })
    return results


def mutation_battery(bases, count: int, seed: int) -> list[dict]:
    """``count`` random single-entry mutations spread over the base
    certificates, each re-verified; records which clause rejected it."""
    rng = random.Random(seed)
    dicts = [certificate_to_dict(c) for c in bases]
    results = []
    attempts = 0
    while len(results) < count and attempts < 100 * count + 100:
        attempts += 1
        m = mutate_certificate(dicts[attempts % len(dicts)], rng)
        if m is None:
            continue
        mutated, kind, description = m
        report = verify_certificate(mutated)
        results.append({
            "kind": kind,
            "description": description,
            "killed": not report.accepted,
            "clause": report.first_failure,
        })
    return results


def cmd_fuzz(args) -> int:
    w2 = lambda t: parse_word(t, 2)
    bases = [
        approximate(CosetAction(2, (w2("a"),)), [w2("a"), w2("b")], [w2(""), w2("b")]),
        approximate(CosetAction(2, (w2("aa"), w2("b"))), [w2("a"), w2("b")], [w2(""), w2("a")]),
    ]
    battery = mutation_battery(bases, args.cases, args.seed)
    kills = sum(1 for r in battery if r["killed"])
    agreements = oracle_agreement(oracle_cases())
    agreed = sum(1 for r in agreements if r["agreed"])
    payload = {
        "mutation_kill_rate": f"{kills}/{len(battery)}",
        "oracle_agreement": f"{agreed}/{len(agreements)}",
    }
    if args.json:
        payload["mutations"] = battery
        payload["oracle_cases"] = agreements
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"mutation kill-rate: {payload['mutation_kill_rate']}")
        print(f"oracle agreement: {payload['oracle_agreement']}")
    ok = kills == len(battery) and agreed == len(agreements)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soficert",
        description="build and verify exact sofic-approximation certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="build a certificate from a job config")
    p.add_argument("--config", required=True, help="JSON job config path")
    p.add_argument("--out", help="certificate output path (overrides config)")
    p.add_argument("--strategy", choices=["core", "literal"],
                   help="finite-index strategy (overrides config)")
    p.add_argument("--json", action="store_true", help="JSON summary")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", help="verify a certificate file")
    p.add_argument("certificate", help="certificate path")
    p.add_argument("--epsilon", help="tolerance override, e.g. 1/10")
    p.add_argument("--json", action="store_true", help="JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("subgroup", help="inspect a subgroup graph / Hall separator")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--gens", default="", help="comma-separated subgroup generators")
    p.add_argument("--avoid", help="comma-separated words the separator must exclude")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_subgroup)

    p = sub.add_parser("conj-demo", help="certificate for the conjugation action")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--f", default="a,b", help="comma-separated F words")
    p.add_argument("--e", default="1,a,b,baB", help="comma-separated E words")
    p.add_argument("--out", help="certificate output path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_conj_demo)

    p = sub.add_parser("fuzz", help="mutation and oracle harnesses")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    raise SystemExit(main())
