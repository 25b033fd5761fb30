"""Command-line front end.

Every run ends with a manifest of resolved parameters: written next to
``--out`` as ``<out>.manifest.json`` or printed as a final ``# manifest:``
line. Flags fall back to ``QL_*`` environment variables (``QL_R``, ``QL_C``,
``QL_D``, ``QL_ALPHA``, ``QL_SOLVER``, ``QL_READS``, ``QL_SWEEPS``,
``QL_SEED``, ``QL_TOL``, ``QL_MAX_ITER``, ``QL_POLICY``) and then to
built-in defaults.

Exit codes: 0 success, 2 usage error, 3 solver failure, 4 singular matrix,
5 every sample had a broken chain.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .anneal import Annealer, SamplerConfig, chimera_for
from .chimera import BrokenChainError, counter_term_energy, embed_complete_graph, verify_embedding
from .division import DivisionProblem, iterate_division, solve_division
from .encoding import BinaryEncoding
from .fixtures import FIXTURES, get_fixture
from .landscape import compare_embedded_landscape, gray_projection
from .linear_system import (
    MatrixProblem,
    SingularMatrixError,
    build_linear_qubo,
    format_problem,
    invert_matrix,
    parse_problem,
    solve_linear,
)
from .qubo_core import EnumerationCapError, brute_force_solve, scale_by_max_coupling

EXIT_USAGE, EXIT_SOLVER, EXIT_SINGULAR, EXIT_BROKEN = 2, 3, 4, 5

ENV_PREFIX = "QL_"
_ENV_FLAGS = {
    "R": ("R", int, None),  # None: take R from the problem file, else 4
    "c": ("C", float, 2.0),
    "d": ("D", float, 1.0),
    "alpha": ("ALPHA", float, 20.0),
    "solver": ("SOLVER", str, "brute"),
    "reads": ("READS", int, 100),
    "sweeps": ("SWEEPS", int, 1000),
    "seed": ("SEED", int, 0),
    "tol": ("TOL", float, 1e-6),
    "max_iter": ("MAX_ITER", int, 50),
    "policy": ("POLICY", str, "discard"),
}


def fmt(value) -> str:
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(fmt(v) for v in np.asarray(value).ravel())
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def bitstring(bits) -> str:
    return "".join(str(int(b)) for b in bits)


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    input_sha256: Optional[str] = None
    outputs: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _env_default(dest: str):
    suffix, kind, default = _ENV_FLAGS[dest]
    raw = os.environ.get(ENV_PREFIX + suffix)
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise CliError(EXIT_USAGE, f"bad value for {ENV_PREFIX}{suffix}: {raw!r}") from None


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("encoding and solver")
    g.add_argument("--R", dest="R", type=int, default=_env_default("R"), help="bits per variable")
    g.add_argument("--c", dest="c", type=float, default=_env_default("c"), help="encoding scale")
    g.add_argument("--d", dest="d", type=float, default=_env_default("d"), help="encoding offset")
    g.add_argument("--alpha", type=float, default=_env_default("alpha"), help="chain strength")
    g.add_argument("--solver", choices=("brute", "sa"), default=_env_default("solver"))
    g.add_argument("--reads", type=int, default=_env_default("reads"))
    g.add_argument("--sweeps", type=int, default=_env_default("sweeps"))
    g.add_argument("--seed", type=int, default=_env_default("seed"))
    g.add_argument("--tol", type=float, default=_env_default("tol"))
    g.add_argument("--max-iter", dest="max_iter", type=int, default=_env_default("max_iter"))
    g.add_argument("--policy", choices=("discard", "majority"), default=_env_default("policy"))
    g.add_argument("--out", type=Path, default=None, help="write the main artifact here")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="qlinsolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divide", parents=[common], help="solve m*x = y")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--iterate", action="store_true", help="refine until |residual| <= tol")

    p = sub.add_parser("solve", parents=[common], help="solve M x = Y from a problem file or fixture name")
    p.add_argument("problem")

    p = sub.add_parser("invert", parents=[common], help="invert M column by column")
    p.add_argument("problem")

    p = sub.add_parser("landscape", parents=[common], help="Gray-ordered energy projection as CSV")
    p.add_argument("problem")
    p.add_argument("--overlay", type=Path, default=None, help="also write the embedded-overlay CSV")

    p = sub.add_parser("spectrum", parents=[common], help="counter-term table or full problem spectrum")
    p.add_argument("problem", nargs="?")
    p.add_argument("--chain", type=int, default=None, help="chain length for the counter-term table")

    p = sub.add_parser("embed-info", parents=[common], help="print and verify the K_k Chimera embedding")
    p.add_argument("--k", type=int, required=True)
    return parser


# -- helpers -------------------------------------------------------------


def _encoding(args, file_R: Optional[int] = None) -> BinaryEncoding:
    if args.R is None:
        args.R = file_R if file_R is not None else 4
    try:
        return BinaryEncoding(args.R, args.c, args.d)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _solver(args):
    if args.solver == "brute":
        return "brute"
    try:
        config = SamplerConfig(reads=args.reads, sweeps=args.sweeps, seed=args.seed)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    return Annealer(config=config, alpha=args.alpha, policy=args.policy)


def _load_problem(spec: str) -> tuple[np.ndarray, np.ndarray, int, str]:
    """``(M, Y, R, sha256)`` from a file path or a bundled fixture name."""
    path = Path(spec)
    if path.is_file():
        data = path.read_bytes()
        try:
            M, Y, R = parse_problem(data.decode("utf-8"))
        except ValueError as exc:
            raise CliError(EXIT_USAGE, f"{spec}: {exc}") from None
        return M, Y, R, hashlib.sha256(data).hexdigest()
    try:
        f = get_fixture(spec)
    except KeyError:
        raise CliError(EXIT_USAGE, f"{spec}: no such file or fixture (fixtures: {', '.join(FIXTURES)})") from None
    text = format_problem(f.M, f.Y)
    return f.M, f.Y, 4, hashlib.sha256(text.encode("utf-8")).hexdigest()


def _params(args, *names) -> dict:
    keys = ("R", "c", "d", "alpha", "solver", "reads", "sweeps", "seed", "tol", "max_iter", "policy") + names
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _matrix_problem(M, Y, enc) -> MatrixProblem:
    try:
        return MatrixProblem(M, Y, enc)
    except SingularMatrixError as exc:
        raise CliError(EXIT_SINGULAR, f"singular matrix: {exc}") from None


# -- subcommands ---------------------------------------------------------


def cmd_divide(args, out) -> RunManifest:
    enc = _encoding(args)
    solver = _solver(args)
    if args.m == 0:
        raise CliError(EXIT_USAGE, "divisor m must be nonzero")
    if args.iterate:
        trace = iterate_division(args.y, args.m, args.tol, args.max_iter, solver, enc)
        out.append(f"x = {fmt(trace.solution)}")
        out.append(f"iterations = {trace.iterations}")
        out.append(f"residual = {fmt(trace.error)}")
        out.append(f"converged = {fmt(trace.converged)}")
        for k, rec in enumerate(trace.records, 1):
            out.append(f"step {k}: offset = {rec.offset} x = {fmt(rec.x)} bits = {bitstring(rec.bits)}")
    else:
        res = solve_division(DivisionProblem(args.m, args.y, enc), solver)
        out.append(f"x = {fmt(res.x)}")
        out.append(f"bits = {bitstring(res.bits)}")
        out.append(f"scaled_energy = {fmt(res.scaled_energy)}")
        out.append(f"objective = {fmt(res.raw_objective)}")
    out.append(f"solver = {args.solver}")
    return RunManifest("divide", _params(args, "m", "y", "iterate"))


def cmd_solve(args, out) -> RunManifest:
    M, Y, R, digest = _load_problem(args.problem)
    p = _matrix_problem(M, Y, _encoding(args, R))
    sol = solve_linear(p, _solver(args))
    out.append(f"x = {fmt(sol.x)}")
    out.append(f"bits = {bitstring(sol.bits)}")
    out.append(f"residual_norm = {fmt(sol.residual_norm)}")
    out.append(f"scaled_energy = {fmt(sol.scaled_energy)}")
    out.append(f"raw_energy = {fmt(sol.raw_energy)}")
    if args.solver == "sa":
        out.append(f"chain_break_fraction = {fmt(sol.chain_break_fraction)}")
    out.append(f"solver = {args.solver}")
    return RunManifest("solve", _params(args, "problem"), digest)


def cmd_invert(args, out) -> RunManifest:
    M, Y, R, digest = _load_problem(args.problem)
    enc = _encoding(args, R)
    _matrix_problem(M, Y, enc)
    res = invert_matrix(M, enc, _solver(args))
    for row in res.inverse:
        out.append(fmt(row))
    for j, why in sorted(res.failures.items()):
        out.append(f"# column {j} failed: {why}")
    if not res.complete:
        raise CliError(EXIT_BROKEN, "broken chains: inversion incomplete")
    return RunManifest("invert", _params(args, "problem"), digest)


def cmd_landscape(args, out) -> RunManifest:
    M, Y, R, digest = _load_problem(args.problem)
    p = _matrix_problem(M, Y, _encoding(args, R))
    model = scale_by_max_coupling(build_linear_qubo(p))
    proj = gray_projection(model)
    outputs = []
    if args.out is not None:
        proj.to_csv(args.out)
        outputs.append(str(args.out))
        out.append(f"wrote {len(proj)} rows to {args.out}")
    else:
        out.append("gray_index,bits,energy")
        out.extend(f"{k},{b},{fmt(e)}" for k, b, e in proj.rows())
    if args.overlay is not None:
        graph = chimera_for(model.num_vars)
        emb = embed_complete_graph(model.num_vars, graph)
        compare_embedded_landscape(model, emb, graph, args.alpha).to_csv(args.overlay)
        outputs.append(str(args.overlay))
    return RunManifest("landscape", _params(args, "problem"), digest, outputs)


def cmd_spectrum(args, out) -> RunManifest:
    if args.chain is not None:
        n = args.chain
        if n < 1 or n > 16:
            raise CliError(EXIT_USAGE, "--chain must be in [1, 16]")
        out.append("bits,energy")
        for bits in itertools.product((0, 1), repeat=n):
            out.append(f"{bitstring(bits)},{fmt(counter_term_energy(bits, args.alpha))}")
        return RunManifest("spectrum", _params(args, "chain"))
    if args.problem is None:
        raise CliError(EXIT_USAGE, "spectrum needs a problem or --chain")
    M, Y, R, digest = _load_problem(args.problem)
    p = _matrix_problem(M, Y, _encoding(args, R))
    spec = brute_force_solve(scale_by_max_coupling(build_linear_qubo(p)))
    out.append("rank,bits,energy")
    for k, (s, e) in enumerate(zip(spec.states, spec.energies)):
        out.append(f"{k},{bitstring(s)},{fmt(e)}")
    return RunManifest("spectrum", _params(args, "problem"), digest)


def cmd_embed_info(args, out) -> RunManifest:
    if args.k < 1:
        raise CliError(EXIT_USAGE, "--k must be positive")
    graph = chimera_for(args.k)
    emb = embed_complete_graph(args.k, graph)
    out.append(f"graph = chimera {graph.rows}x{graph.cols} ({graph.num_qubits} qubits)")
    out.extend(emb.to_text().splitlines())
    report = verify_embedding(emb, args.k, graph)
    out.append(f"physical_qubits = {len(emb.qubits)}")
    out.append(f"max_chain_length = {emb.max_chain_length}")
    out.append(f"valid = {fmt(report.ok)}")
    out.extend(f"# violation: {v}" for v in report.violations)
    return RunManifest("embed-info", _params(args, "k"))


COMMANDS = {
    "divide": cmd_divide,
    "solve": cmd_solve,
    "invert": cmd_invert,
    "landscape": cmd_landscape,
    "spectrum": cmd_spectrum,
    "embed-info": cmd_embed_info,
}


def _emit(lines, manifest: Optional[RunManifest], args, stream) -> None:
    for line in lines:
        stream.write(line + "\n")
    if manifest is None:
        return
    if args.out is not None and args.command != "landscape":
        args.out.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        manifest.outputs.insert(0, str(args.out))
    if args.out is not None:
        path = Path(f"{args.out}.manifest.json")
        path.write_text(manifest.to_json(), encoding="utf-8")
    else:
        stream.write("# manifest: " + json.dumps(asdict(manifest), sort_keys=True) + "\n")


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    lines: list[str] = []
    try:
        manifest = COMMANDS[args.command](args, lines)
    except CliError as exc:
        _emit(lines, None, args, sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BrokenChainError as exc:
        msg = str(exc)
        print(f"error: {msg if msg.startswith('broken chains') else 'broken chains: ' + msg}", file=sys.stderr)
        return EXIT_BROKEN
    except SingularMatrixError as exc:
        print(f"error: singular matrix: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (EnumerationCapError, ZeroDivisionError, OverflowError, ValueError) as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(lines, manifest, args, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
