"""
Command-line entry point for the qudit tree synthesizer
plan / synth / verify / bench / lower
"""

import sys
import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.analysis.benchmark import DEFAULT_FAMILIES, BenchmarkRunner
from src.analysis.lowering import lower_cx, lower_cz_theta
from src.analysis.scheduler import depth
from src.analysis.synthesizer import SynthesisPlan, TreeSynthesizer, phase_purpose
from src.data.circuit_io import (
    load_block, load_circuit, load_matrix, render_text, save_circuit, to_document
)
from src.data.families import parse_family
from src.data.topology_loader import load_topology
from src.models.circuit import Circuit, gate_histogram, two_qudit_count
from src.models.schemas import DimensionPurpose, PlanReport
from src.models.topology import (
    CouplingGraph, TreePlan, check_feasibility, minimal_dimensions, plan_tree
)
from src.simulation.oracles import Oracle, oracle, oracle_from_tags
from src.simulation.verifier import CircuitVerifier
from src.utils.errors import FeasibilityError, QuditSynthError, UsageError, VerificationFailure

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
GATES = ('cnz', 'cnx', 'cnztheta', 'cnu', 'cnu-multi')


def setup_logging(quiet: bool = False, log_file: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n", encoding='utf-8')
        logger.info(f"Wrote {out}")
    else:
        print(text)


def load_graph(args) -> CouplingGraph:
    if bool(args.topology) == bool(args.family):
        raise UsageError("give exactly one of --topology FILE or --family NAME(params)")
    if args.topology:
        return load_topology(args.topology)
    return parse_family(args.family).build()


def _purpose_for(args, tree) -> DimensionPurpose:
    if args.gate == 'cnu-multi':
        return DimensionPurpose.MULTI_TARGET
    if args.gate in ('cnztheta', 'cnu'):
        return phase_purpose(tree, args.lower_cztheta)
    return DimensionPurpose.CONTROLLED_PHASE


def build_plan_report(source: str, graph: CouplingGraph, planned: TreePlan,
                      purpose: DimensionPurpose) -> PlanReport:
    tree = planned.tree
    report = PlanReport(
        source=source,
        node_count=tree.node_count,
        tree_edges=planned.tree_edges,
        removed_edges=planned.removed_edges,
        root=tree.root,
        root_candidates=planned.root_candidates,
        height=tree.height,
        addresses=tree.address,
        minimal_dims=minimal_dimensions(tree, purpose).dims,
        purpose=purpose,
    )
    if graph.dims:
        violations = check_feasibility(graph, tree, purpose)
        report.declared_dims = dict(graph.dims)
        report.feasible = not violations
        report.violations = violations
    return report


def render_plan(report: PlanReport) -> str:
    lines = [
        "=" * 60,
        f"PLAN: {report.source}",
        "=" * 60,
        f"Nodes: {report.node_count}",
        f"Root: {report.root} (centre candidates {report.root_candidates})",
        f"Height: {report.height}",
        f"Tree edges: {report.tree_edges}",
        f"Removed edges: {report.removed_edges or 'none'}",
        f"Purpose: {report.purpose.value}",
        "",
        f"{'node':>6} {'address':>12} {'min dim':>8} {'declared':>9}",
    ]
    for node in sorted(report.addresses):
        declared = report.declared_dims.get(node, '-') if report.declared_dims else '-'
        lines.append(f"{node:>6} {report.addresses[node]:>12} {report.minimal_dims[node]:>8} {declared!s:>9}")
    if report.feasible is not None:
        lines.append("")
        lines.append(f"Feasible: {'yes' if report.feasible else 'NO'}")
        for v in report.violations:
            lines.append(f"  • {v}")
    return "\n".join(lines)


def cmd_plan(args) -> int:
    graph = load_graph(args)
    planned = plan_tree(graph, root=args.root)
    purpose = DimensionPurpose(args.purpose)
    report = build_plan_report(args.topology or args.family, graph, planned, purpose)
    text = report.model_dump_json(indent=2) if args.format == 'structured' else render_plan(report)
    _emit(text, args.out)
    if report.feasible is False:
        raise FeasibilityError("declared dimensions do not fit the tree", report.violations)
    return 0


def synthesize(args) -> Circuit:
    graph = load_graph(args)
    tree = plan_tree(graph, root=args.root).tree
    if graph.dims:
        dims: Dict[int, int] = dict(graph.dims)
    else:
        dims = minimal_dimensions(tree, _purpose_for(args, tree)).dims
    plan = SynthesisPlan(tree=tree, dims=dims, lower_cx=args.lower_cx,
                         lower_cz_theta=args.lower_cztheta)
    synth = TreeSynthesizer(plan)

    if args.gate == 'cnz':
        return synth.cnz()
    if args.gate == 'cnx':
        return synth.cnx(_require(args.target, '--target'))
    if args.gate == 'cnztheta':
        return synth.cnz_theta(_require(args.theta, '--theta'))
    if args.gate == 'cnu':
        U = load_matrix(_require(args.matrix, '--matrix'))
        return synth.cnu(U, _require(args.target, '--target'))
    block = load_block(_require(args.block, '--block'))
    return synth.cnu_multi(block)


def _file_format(path: str) -> str:
    """Circuit files are JSON unless the name ends in .txt"""
    return 'text' if path.endswith('.txt') else 'structured'


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"this gate needs {flag}")
    return value


def circuit_stats(circuit: Circuit) -> Dict:
    return {
        'name': circuit.name,
        'qudits': len(circuit.register),
        'gates': len(circuit),
        'two_qudit_count': two_qudit_count(circuit),
        'depth': depth(circuit),
        'histogram': gate_histogram(circuit),
    }


def render_stats(stats: Dict) -> str:
    lines = [
        f"Circuit: {stats['name']}",
        f"  Qudits: {stats['qudits']}",
        f"  Gates: {stats['gates']}",
        f"  Two-qudit gates: {stats['two_qudit_count']}",
        f"  Depth: {stats['depth']}",
        "  Histogram:",
    ]
    for name, count in sorted(stats['histogram'].items()):
        lines.append(f"    {name}: {count}")
    return "\n".join(lines)


def write_circuit(circuit: Circuit, args) -> None:
    """To --out in the file's own format, else to stdout in --format"""
    if args.out:
        save_circuit(circuit, args.out, fmt=_file_format(args.out))
        print(render_stats(circuit_stats(circuit)))
    elif args.format == 'structured':
        print(to_document(circuit).model_dump_json(indent=2))
    else:
        print(render_text(circuit), end="")
        print(render_stats(circuit_stats(circuit)))


def cmd_synth(args) -> int:
    write_circuit(synthesize(args), args)
    return 0


def oracle_for(args, circuit: Circuit) -> Oracle:
    if args.gate is None:
        return oracle_from_tags(circuit)
    target = matrix = None
    target_dims = ()
    if args.gate in ('cnx', 'cnu'):
        target = circuit.label_index(_require(args.target, '--target'))
    if args.gate == 'cnztheta':
        _require(args.theta, '--theta')
    if args.gate == 'cnu':
        matrix = load_matrix(_require(args.matrix, '--matrix'))
    if args.gate == 'cnu-multi':
        block = load_block(_require(args.block, '--block'))
        matrix, target_dims = block.unitary, block.target_dims
    return oracle(args.gate, len(circuit.register), target=target, theta=args.theta,
                  matrix=matrix, target_dims=target_dims)


def cmd_verify(args) -> int:
    circuit = load_circuit(args.circuit)
    expected = oracle_for(args, circuit)
    verifier = CircuitVerifier(
        tolerance=args.tolerance,
        leakage_tolerance=args.leakage_tolerance,
        sample_cutoff=args.sample_cutoff,
        seed=args.seed,
        workers=args.workers
    )
    report = verifier.verify(circuit, expected)
    if args.format == 'structured':
        _emit(report.model_dump_json(indent=2, by_alias=True), args.out)
    else:
        lines = [
            f"Circuit: {report.circuit}",
            f"Oracle: {report.oracle}",
            f"Inputs tested: {report.basis_states_tested}{' (sampled)' if report.sampled else ''}",
            f"Max amplitude error: {report.max_amplitude_error:.3e} (tolerance {report.tolerance:.1e})",
            f"Leakage: {report.leakage:.3e} (tolerance {report.leakage_tolerance:.1e})",
            f"Result: {'PASS' if report.passed else 'FAIL'}",
        ]
        if report.failing_input:
            lines.append(f"Failing input: {report.failing_input}")
        _emit("\n".join(lines), args.out)
    if not report.passed:
        raise VerificationFailure(f"{circuit.name or args.circuit} failed at {report.failing_input}")
    return 0


def cmd_bench(args) -> int:
    families = [f.strip() for f in args.families.split(',') if f.strip()]
    sizes = [int(s) for s in args.sizes.split(',') if s.strip()]
    runner = BenchmarkRunner(families=families, sizes=sizes, verify=args.verify, seed=args.seed)
    rows = runner.run(progress=not args.quiet)
    if args.csv:
        runner.save_csv(args.csv)
    if args.plot:
        from src.visualization.generate_plots import plot_benchmark
        plot_benchmark(runner.to_dataframe(), args.plot)
        logger.info(f"✓ Benchmark plot saved: {args.plot}")
    if args.format == 'structured':
        _emit("[\n" + ",\n".join(r.model_dump_json() for r in rows) + "\n]", args.out)
    else:
        _emit(runner.render_table(), args.out)
    if any(r.verified is False for r in rows):
        raise VerificationFailure("at least one bench row failed verification")
    return 0


def cmd_lower(args) -> int:
    circuit = load_circuit(args.circuit)
    if not (args.lower_cx or args.lower_cztheta):
        raise UsageError("lower needs --lower-cx and/or --lower-cztheta")
    if args.lower_cztheta:
        circuit = lower_cz_theta(circuit)
    if args.lower_cx:
        circuit = lower_cx(circuit)
    write_circuit(circuit, args)
    return 0


def _add_topology_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument('--topology', help='topology JSON file')
    p.add_argument('--family', help='family spec, e.g. line(8), grid(3,3), kary(2,3)')
    p.add_argument('--root', type=int, help='override the leaves-reduction root')


def _add_gate_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument('--gate', choices=GATES, required=required, default=None)
    p.add_argument('--target', type=int, help='target node id (cnx, cnu)')
    p.add_argument('--theta', type=float, help='phase angle (cnztheta)')
    p.add_argument('--matrix', help='2x2 unitary file (cnu)')
    p.add_argument('--block', help='controlled block file (cnu-multi)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qudit-synth',
        description='Topology-aware multi-controlled gate synthesis for qudit processors'
    )
    parser.add_argument('-q', '--quiet', action='store_true', help='only log warnings and errors')
    parser.add_argument('--log-file', help='also write the log to this file')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('plan', help='spanning tree, root, addresses and dimensions')
    _add_topology_flags(p)
    p.add_argument('--purpose', choices=[d.value for d in DimensionPurpose],
                   default=DimensionPurpose.CONTROLLED_PHASE.value)
    p.add_argument('--format', choices=('text', 'structured'), default='text')
    p.add_argument('--out')
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser('synth', help='synthesize a multi-controlled gate')
    _add_topology_flags(p)
    _add_gate_flags(p, required=True)
    p.add_argument('--lower-cx', action='store_true')
    p.add_argument('--lower-cztheta', action='store_true')
    p.add_argument('--format', choices=('text', 'structured'), default='text')
    p.add_argument('--out', help='circuit file to write')
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser('verify', help='check a circuit file against an oracle')
    p.add_argument('circuit')
    _add_gate_flags(p, required=False)
    p.add_argument('--tolerance', type=float, default=1e-10)
    p.add_argument('--leakage-tolerance', type=float, default=1e-12)
    p.add_argument('--sample-cutoff', type=int, default=4096)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--format', choices=('text', 'structured'), default='text')
    p.add_argument('--out')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('bench', help='C^{N-1}Z counts and depths over topology families')
    p.add_argument('--families', default=','.join(DEFAULT_FAMILIES))
    p.add_argument('--sizes', default='4,7,8,15,16,31,63')
    p.add_argument('--verify', action='store_true')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--csv')
    p.add_argument('--plot')
    p.add_argument('--format', choices=('text', 'structured'), default='text')
    p.add_argument('--out')
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser('lower', help='apply lowering passes to a circuit file')
    p.add_argument('circuit')
    p.add_argument('--lower-cx', action='store_true')
    p.add_argument('--lower-cztheta', action='store_true')
    p.add_argument('--format', choices=('text', 'structured'), default='structured')
    p.add_argument('--out')
    p.set_defaults(func=cmd_lower)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else UsageError.exit_code
    setup_logging(args.quiet, args.log_file)
    try:
        return args.func(args)
    except QuditSynthError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
