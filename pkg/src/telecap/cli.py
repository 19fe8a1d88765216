"""Command line front end.

Five subcommands: analyze, verify, teleport, generate, demo-ghz.  States
travel as JSON files holding big-endian amplitudes as [re, im] pairs; a
channel file adds the two qubit lists.  Saving is a fixed point: loading a
file and saving it again reproduces the bytes exactly, because floats are
emitted with Python's shortest round-trip repr.

Exit codes:

0  success
1  the channel cannot teleport the requested payload (capacity shortfall)
2  malformed input (unreadable or structurally invalid state file)
3  norm invariant violated (amplitudes off unit norm by more than 1e-6)
4  infeasible request (bad split, inadmissible capacity claim, failed
   condition check)
5  a protocol branch fell below the fidelity floor
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .capacity import (
    DEFAULT_EPS,
    analyze,
    max_capacity,
    reduced_density,
    synthesize_u_b,
    verify_condition,
)
from .corpus import generate_planted, ghz_canonical_form, ghz_channel, ghz_cnot_chain
from .linalg import cluster_spectrum, hermitian_eig
from .states import ChannelState, PureState, apply_unitary, fidelity, random_pure_state
from .teleport import CapacityShortfall, teleport_bell, teleport_circuit

__all__ = [
    "EXIT_OK",
    "EXIT_CAPACITY",
    "EXIT_MALFORMED",
    "EXIT_NORM",
    "EXIT_INFEASIBLE",
    "EXIT_FIDELITY",
    "FIDELITY_FLOOR",
    "encode_state",
    "decode_state",
    "save_state_file",
    "load_state_file",
    "main",
    "entry",
]

EXIT_OK = 0
EXIT_CAPACITY = 1
EXIT_MALFORMED = 2
EXIT_NORM = 3
EXIT_INFEASIBLE = 4
EXIT_FIDELITY = 5

FIDELITY_FLOOR = 1.0 - 1e-6

_FORMAT = "telecap-state"
_RENORM_WARN = 1e-9
_RENORM_REJECT = 1e-6


class CliFailure(Exception):
    """Carries an exit code and a one-line explanation."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- state files

def encode_state(state: PureState, alice=None, bob=None) -> dict:
    doc = {
        "format": _FORMAT,
        "qubits": state.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }
    if alice is not None or bob is not None:
        doc["alice"] = [int(q) for q in alice]
        doc["bob"] = [int(q) for q in bob]
    return doc


def decode_state(doc) -> tuple[PureState, tuple | None, tuple | None]:
    """Rebuild a state (and split, when present) from a parsed document.

    Structural problems raise CliFailure(2); a norm more than 1e-6 off
    raises CliFailure(3).  Deviations between 1e-9 and 1e-6 renormalize
    with a warning on stderr.
    """
    if not isinstance(doc, dict):
        raise CliFailure(EXIT_MALFORMED, "state file must hold a JSON object")
    if doc.get("format") != _FORMAT:
        raise CliFailure(EXIT_MALFORMED, f"missing format tag '{_FORMAT}'")
    qubits = doc.get("qubits")
    amps = doc.get("amplitudes")
    if not isinstance(qubits, int) or not 1 <= qubits <= 16:
        raise CliFailure(EXIT_MALFORMED, "qubits must be an integer in 1..16")
    if not isinstance(amps, list) or len(amps) != 1 << qubits:
        raise CliFailure(EXIT_MALFORMED, "amplitude count must equal 2**qubits")
    try:
        v = np.array([complex(re, im) for re, im in amps], dtype=np.complex128)
    except (TypeError, ValueError):
        raise CliFailure(EXIT_MALFORMED, "amplitudes must be [re, im] pairs")
    if not np.isfinite(v).all():
        raise CliFailure(EXIT_MALFORMED, "amplitudes must be finite")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _RENORM_REJECT:
        raise CliFailure(EXIT_NORM, f"state norm {norm:.9f} is off by more than 1e-6")
    if abs(norm - 1.0) > _RENORM_WARN:
        print(f"warning: renormalizing state (norm deviation {abs(norm - 1.0):.3e})",
              file=sys.stderr)
        v = v / norm
    state = PureState(v)
    if ("alice" in doc) != ("bob" in doc):
        raise CliFailure(EXIT_MALFORMED, "alice and bob must appear together")
    if "alice" not in doc:
        return state, None, None
    alice, bob = doc["alice"], doc["bob"]
    if not isinstance(alice, list) or not isinstance(bob, list) or \
            not all(isinstance(q, int) for q in alice + bob):
        raise CliFailure(EXIT_MALFORMED, "alice and bob must be integer lists")
    return state, tuple(alice), tuple(bob)


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def save_state_file(path: str, state: PureState, alice=None, bob=None) -> None:
    text = dump_document(encode_state(state, alice, bob))
    with open(path, "w", encoding="ascii") as fp:
        fp.write(text)


def load_state_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fp:
            doc = json.load(fp)
    except OSError as exc:
        raise CliFailure(EXIT_MALFORMED, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliFailure(EXIT_MALFORMED, f"{path} is not valid JSON: {exc}")
    return decode_state(doc)


def _load_channel(path: str) -> ChannelState:
    state, alice, bob = load_state_file(path)
    if alice is None:
        raise CliFailure(EXIT_MALFORMED, f"{path} lacks the alice/bob split")
    try:
        return ChannelState(state, alice, bob)
    except ValueError as exc:
        raise CliFailure(EXIT_INFEASIBLE, f"bad split: {exc}")


def _load_payload(path: str) -> PureState:
    state, alice, _ = load_state_file(path)
    if alice is not None:
        raise CliFailure(EXIT_MALFORMED, f"{path} is a channel file, not a payload")
    return state


# ------------------------------------------------------------------ reporting

def _matrix_json(m) -> list | None:
    if m is None:
        return None
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m)]


def _two_adic(k: int) -> int:
    return (k & -k).bit_length() - 1


def _print_clusters(clusters) -> None:
    for c in clusters.clusters:
        print(f"cluster value={c.value:.9f} multiplicity={c.multiplicity} "
              f"v2={_two_adic(c.multiplicity)}")


def _print_analysis(report) -> None:
    print(f"entropy={report.entropy_bits:.6f} capacity={report.capacity}")
    _print_clusters(report.clusters)
    print(f"swapped={'true' if report.swapped else 'false'}")
    for t, (a, b) in enumerate(report.pairs):
        print(f"pair {t}: alice_qubit={a} bob_qubit={b}")


def _write_report(path: str, report) -> None:
    doc = {
        "entropy_bits": report.entropy_bits,
        "capacity": report.capacity,
        "clusters": [
            {"value": c.value, "multiplicity": c.multiplicity,
             "v2": _two_adic(c.multiplicity)}
            for c in report.clusters.clusters
        ],
        "swapped": report.swapped,
        "pairs": [list(p) for p in report.pairs],
        "bob_relabeling": list(report.bob_relabeling),
        "u_a": _matrix_json(report.u_a),
        "u_b": _matrix_json(report.u_b),
        "eta": _matrix_json(report.eta),
    }
    with open(path, "w", encoding="ascii") as fp:
        fp.write(dump_document(doc))


def _print_branches(result) -> None:
    print(f"payload_qubits={result.payload_qubits} method={result.method} "
          f"branches={len(result.branches)}")
    for b in result.branches:
        print(f"branch message={b.bits} probability={b.probability:.9f} "
              f"fidelity={b.fidelity:.12f}")
    print(f"min_fidelity={result.min_fidelity:.12f}")


def _check_fidelity(result) -> None:
    if result.min_fidelity < FIDELITY_FLOOR:
        raise CliFailure(
            EXIT_FIDELITY,
            f"branch fidelity {result.min_fidelity:.12f} below {FIDELITY_FLOOR}",
        )


# ---------------------------------------------------------------- subcommands

def _cmd_analyze(args) -> int:
    channel = _load_channel(args.channel)
    report = analyze(channel, args.eps)
    _print_analysis(report)
    if args.report:
        _write_report(args.report, report)
    return EXIT_OK


def _cmd_verify(args) -> int:
    channel = _load_channel(args.channel)
    m, n = len(channel.alice), len(channel.bob)
    d = args.capacity
    if not 0 <= d <= min(m, n):
        raise CliFailure(EXIT_INFEASIBLE,
                         f"claimed capacity {d} outside 0..min({m}, {n})")
    w, v = hermitian_eig(reduced_density(channel, "bob"))
    clusters = cluster_spectrum(w, args.eps, eigenvectors=v)
    _print_clusters(clusters)
    for c in clusters.clusters:
        if c.multiplicity % (1 << d):
            raise CliFailure(
                EXIT_INFEASIBLE,
                f"multiplicity {c.multiplicity} at value {c.value:.9f} "
                f"is not divisible by 2**{d}",
            )
    u_b, _, _ = synthesize_u_b(channel, clusters, d)
    if not verify_condition(channel, u_b, d, args.eps):
        raise CliFailure(EXIT_INFEASIBLE,
                         f"factorization condition fails at capacity {d}")
    print(f"condition holds at capacity={d}")
    return EXIT_OK


def _teleport_run(channel, payload, args, method):
    report = analyze(channel, args.eps)
    payload_seed, sample_seed = np.random.SeedSequence(args.seed).spawn(2)
    if payload is None:
        if report.capacity == 0:
            raise CapacityShortfall("channel capacity is 0, nothing can be sent")
        payload = random_pure_state(report.capacity, payload_seed)
    print(f"entropy={report.entropy_bits:.6f} capacity={report.capacity}")
    run = teleport_bell if method == "bell" else teleport_circuit
    result = run(channel, payload, report, mode=args.mode,
                 seed=sample_seed, trials=args.trials, eps=args.eps)
    _print_branches(result)
    _check_fidelity(result)
    return EXIT_OK


def _cmd_teleport(args) -> int:
    channel = _load_channel(args.channel)
    payload = _load_payload(args.payload) if args.payload else None
    return _teleport_run(channel, payload, args, args.method)


def _cmd_generate(args) -> int:
    m, n, d = args.m, args.n, args.d
    try:
        planted = generate_planted(m, n, d, args.seed, args.eps)
    except ValueError as exc:
        raise CliFailure(EXIT_INFEASIBLE, str(exc))
    doc = encode_state(planted.channel.state, planted.channel.alice,
                       planted.channel.bob)
    text = dump_document(doc)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fp:
            fp.write(text)
        print(f"planted capacity={d} qubits={m}+{n} seed={args.seed} "
              f"file={args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_demo_ghz(args) -> int:
    n, m = args.qubits, args.split
    if not 1 <= m < n:
        raise CliFailure(EXIT_INFEASIBLE, "need 1 <= split < qubits")
    channel = ghz_channel(n, m)
    u_a, u_b = ghz_cnot_chain(n, m)
    chained = apply_unitary(channel.state, u_a, range(m))
    chained = apply_unitary(chained, u_b, range(m, n))
    match = fidelity(chained, ghz_canonical_form(n)) > 1.0 - 1e-12
    print(f"cnot_chain_reaches_bell={'true' if match else 'false'}")
    return _teleport_run(channel, None, args, args.method)


# ----------------------------------------------------------------- entry path

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="telecap",
        description="Teleportation capacity of bipartite multiqubit channels.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, teleports: bool):
        sp.add_argument("--eps", type=float, default=DEFAULT_EPS,
                        help="degeneracy tolerance on the trace-one spectrum")
        if teleports:
            sp.add_argument("--method", choices=("bell", "circuit"),
                            default="bell", help="measurement flavour")
            sp.add_argument("--mode", choices=("exhaustive", "sample"),
                            default="exhaustive", help="branch coverage")
            sp.add_argument("--seed", type=int, default=0,
                            help="seed for payload and sampling")
            sp.add_argument("--trials", type=int, default=1,
                            help="sampled runs when --mode sample")

    sp = sub.add_parser("analyze", help="entropy, capacity, and certificate")
    sp.add_argument("channel", help="channel state file")
    sp.add_argument("--report", help="write the full analysis as JSON")
    common(sp, teleports=False)
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("verify", help="check the capacity certificate")
    sp.add_argument("channel", help="channel state file")
    sp.add_argument("capacity", type=int, help="claimed capacity")
    common(sp, teleports=False)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("teleport", help="run a protocol over a channel")
    sp.add_argument("channel", help="channel state file")
    sp.add_argument("payload", nargs="?",
                    help="payload state file (default: seeded random payload)")
    common(sp, teleports=True)
    sp.set_defaults(fn=_cmd_teleport)

    sp = sub.add_parser("generate", help="write a planted channel")
    sp.add_argument("m", type=int, help="sender qubits")
    sp.add_argument("n", type=int, help="receiver qubits")
    sp.add_argument("d", type=int, help="planted capacity")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
    sp.set_defaults(fn=_cmd_generate)

    sp = sub.add_parser("demo-ghz", help="GHZ walkthrough: analysis plus a run")
    sp.add_argument("qubits", type=int, help="GHZ size")
    sp.add_argument("split", type=int, help="sender qubit count")
    common(sp, teleports=True)
    sp.set_defaults(fn=_cmd_demo_ghz)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.eps <= 0:
        print("error: --eps must be positive", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        return args.fn(args)
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapacityShortfall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
