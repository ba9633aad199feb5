"""Batch command-line front end.

Subcommands: ``unitary``, ``probs``, ``sample``, ``certify``, ``decompose``,
``hom``, ``analyze``.  Exit codes are a stable contract: 0 success, 2 parse
error, 3 numeric or capacity error, 4 capability mismatch, 5 empty
post-selection.  All randomness flows from ``--seed``; without the flag a
seed is drawn and printed so the run can be repeated exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import backends, sources
from .analysis import (CountRule, LogicalEncoding, analyze_gate, pk_analytic,
                       pk_estimate, post_select)
from .circuit import Circuit, compute_unitary, dump_circuit, expanded_unitary, load_circuit, parse_circuit
from .decompose import decompose_rectangular, decompose_triangular
from .errors import (CapabilityError, CapacityError, EmptyPostSelectionError,
                     NumericError, PhotonsimError, StateParseError)
from .fock import FockState, format_state, parse_state
from .linalg import Unitary, dump_matrix_text, load_matrix, save_matrix
from .permanent import default_threads


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = int(np.random.default_rng().integers(0, 2 ** 63))
    print(f"seed: {seed}")
    return seed


def _write_output(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_circuit_or_matrix(path) -> tuple[Circuit | None, np.ndarray]:
    """Circuit files are JSON objects; anything else is a matrix file."""
    with open(path, "rb") as fh:
        head = fh.read(64)
    if head.lstrip().startswith(b"{"):
        with open(path) as fh:
            circuit = parse_circuit(fh.read())
        u = (expanded_unitary(circuit) if circuit.has_polarization
             else compute_unitary(circuit))
        return circuit, u.mat
    mat = load_matrix(path)
    return None, Unitary(mat, tol=1e-8).mat


def _format_distribution(dist: backends.Distribution, fmt: str,
                         header: list[str]) -> str:
    out = io.StringIO()
    for line in header:
        out.write(f"# {line}\n")
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["state", "probability"])
        for state, p in dist.sorted_items():
            writer.writerow([format_state(state), repr(p)])
    else:
        for state, p in dist.sorted_items():
            out.write(f"{format_state(state)} {p!r}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_unitary(args) -> int:
    circuit = load_circuit(args.circuit)
    u = (expanded_unitary(circuit) if circuit.has_polarization
         else compute_unitary(circuit))
    if args.output:
        save_matrix(args.output, u.mat, binary=args.binary)
    else:
        sys.stdout.write(dump_matrix_text(u.mat))
    return 0


def cmd_probs(args) -> int:
    if args.backend not in backends.DISTRIBUTION_BACKENDS:
        raise CapabilityError(
            f"back-end {args.backend!r} cannot produce distributions "
            f"(choose from {', '.join(backends.DISTRIBUTION_BACKENDS)})")
    circuit, mat = _load_circuit_or_matrix(args.input)
    state = parse_state(args.input_state)
    if state.annotated:
        dist = backends.simulate_annotated(mat, state,
                                           memory_budget=args.memory_budget)
    elif args.backend == "naive":
        dist = backends.naive_full_distribution(mat, state,
                                                threads=args.threads)
    elif args.backend == "stepper":
        if circuit is None:
            raise CapabilityError(
                "the stepper back-end simulates circuits, not bare matrices")
        dist = backends.stepper_full_distribution(circuit, state)
    else:
        dist = backends.slos_full_distribution(
            mat, state, memory_budget=args.memory_budget)
    header = [f"backend: {args.backend}",
              f"input: {format_state(state)}",
              f"total mass: {dist.total_mass!r}"]
    if args.post_select:
        rule = CountRule.parse(args.post_select)
        dist, retained = post_select(dist, rule)
        header.append(f"post-selected: retained mass {retained!r}, "
                      "renormalized to 1")
    _write_output(args, _format_distribution(dist, args.format, header))
    return 0


def cmd_sample(args) -> int:
    if args.backend not in backends.SAMPLING_BACKENDS:
        raise CapabilityError(
            f"back-end {args.backend!r} cannot sample "
            f"(choose from {', '.join(backends.SAMPLING_BACKENDS)})")
    _, mat = _load_circuit_or_matrix(args.input)
    state = parse_state(args.input_state)
    seed = _resolve_seed(args)
    record = backends.sample_cc2017(mat, state, args.count, seed=seed)
    lines = [f"# seed: {seed}", f"# input: {format_state(state)}"]
    lines += [format_state(s) for s in record]
    _write_output(args, "\n".join(lines) + "\n")
    return 0


def _load_samples(path) -> list[FockState]:
    states = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                states.append(parse_state(line))
            except StateParseError as exc:
                raise StateParseError(f"bad sample: {exc}", line=ln) from exc
    if not states:
        raise StateParseError(f"no samples in {path}")
    m_set = {s.m for s in states}
    n_set = {s.n for s in states}
    if len(m_set) != 1 or len(n_set) != 1:
        raise NumericError(
            f"samples disagree on shape: modes {sorted(m_set)}, "
            f"photons {sorted(n_set)}")
    return states


def cmd_certify(args) -> int:
    samples = _load_samples(args.samples)
    m, n = samples[0].m, samples[0].n
    ks = [int(tok) for tok in args.k.split(",")]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["K", "estimate", "analytic", "std_error"])
    count = len(samples)
    for k in ks:
        est = pk_estimate(samples, k)
        ana = pk_analytic(m, n, k)
        stderr = (est * (1.0 - est) / count) ** 0.5
        writer.writerow([k, repr(est), repr(ana), repr(stderr)])
    _write_output(args, out.getvalue())
    return 0


def cmd_decompose(args) -> int:
    mat = load_matrix(args.matrix)
    mesh = (decompose_triangular if args.mesh == "triangular"
            else decompose_rectangular)
    circuit = mesh(mat)
    _write_output(args, dump_circuit(circuit))
    return 0


def cmd_hom(args) -> int:
    from .gallery import hom_circuit
    model = sources.SourceModel(args.emission_prob, args.multi_photon_prob,
                                args.indistinguishability)
    seed = _resolve_seed(args)
    hist = sources.simulate_hom(hom_circuit(), model, args.periods,
                                seed=seed, window=args.window)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["tau", "count"])
    for tau in sorted(hist):
        writer.writerow([tau, hist[tau]])
    _write_output(args, out.getvalue())
    return 0


def _parse_encoding(text: str) -> LogicalEncoding:
    pairs = []
    for part in text.split(";"):
        bits = part.split(",")
        if len(bits) != 2:
            raise StateParseError(
                f"encoding wants 'a,b;c,d;...' mode pairs, got {text!r}")
        pairs.append((int(bits[0]), int(bits[1])))
    return LogicalEncoding.dual_rail(pairs)


def cmd_analyze(args) -> int:
    circuit = load_circuit(args.circuit)
    u = (expanded_unitary(circuit) if circuit.has_polarization
         else compute_unitary(circuit))
    encoding = _parse_encoding(args.encoding)
    states = {encoding.label(i): encoding.dual_rail_state(
        encoding.label(i), u.m) for i in range(encoding.dim)}
    expected = {}
    for pair in args.expected.split(","):
        src, _, dst = pair.partition("=")
        if dst == "" or src not in states or dst not in states:
            raise StateParseError(f"bad expected map entry {pair!r}")
        expected[src] = dst
    rule = CountRule.parse(args.post_select) if args.post_select else None
    analysis = analyze_gate(u, states, expected, rule=rule)
    print(analysis.format_table())
    print(f"=> {analysis.summary()}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(analysis.to_csv())
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(parser, *, backend: str | None = None) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (drawn and printed if omitted)")
    parser.add_argument("--threads", type=int, default=default_threads(),
                        help="worker threads for permanent kernels")
    parser.add_argument("--memory-budget", type=int,
                        default=backends.DEFAULT_MEMORY_BUDGET,
                        help="byte budget for in-memory simulation")
    parser.add_argument("--output", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "txt"), default="csv")
    if backend is not None:
        parser.add_argument("--backend", choices=backends.BACKEND_NAMES,
                            default=backend)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonsim",
        description="Fock-state simulation of linear-optical circuits")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unitary", help="compose a circuit's unitary matrix")
    p.add_argument("circuit")
    p.add_argument("--binary", action="store_true",
                   help="write the binary matrix format")
    _add_common(p)
    p.set_defaults(func=cmd_unitary)

    p = sub.add_parser("probs", help="full output distribution")
    p.add_argument("input", help="circuit (JSON) or matrix file")
    p.add_argument("--input-state", required=True, help='e.g. "|1,0,1>"')
    p.add_argument("--post-select",
                   help='rule, e.g. "count(modes 1..2) == 1"')
    _add_common(p, backend="slos")
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("sample", help="draw output samples")
    p.add_argument("input", help="circuit (JSON) or matrix file")
    p.add_argument("--input-state", required=True)
    p.add_argument("--count", type=int, required=True)
    _add_common(p, backend="cc2017")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("certify", help="bunching certificate of a sample file")
    p.add_argument("samples")
    p.add_argument("--k", required=True, help="comma-separated K values")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("decompose", help="unitary to interferometer mesh")
    p.add_argument("matrix")
    p.add_argument("--mesh", choices=("triangular", "rectangular"),
                   default="rectangular")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hom", help="delay-line interference histogram")
    p.add_argument("--emission-prob", type=float, default=1.0)
    p.add_argument("--multi-photon-prob", type=float, default=0.0)
    p.add_argument("--indistinguishability", type=float, default=1.0)
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--window", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("analyze", help="post-selected gate truth table")
    p.add_argument("circuit")
    p.add_argument("--encoding", required=True,
                   help='dual-rail mode pairs, e.g. "1,2;3,4"')
    p.add_argument("--expected", required=True,
                   help='label map, e.g. "00=00,01=01,10=11,11=10"')
    p.add_argument("--post-select",
                   help="override the default rule (labeled states only)")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StateParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 4
    except EmptyPostSelectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PhotonsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
