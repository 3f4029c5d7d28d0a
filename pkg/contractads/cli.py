"""
Contractads CLI - Batch command-line front end.

Every verb builds a Report and prints it in the chosen format on standard
output; progress goes to standard error through logging.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from . import __version__
from .config import Settings, get_settings, parse_bound, set_settings
from .errors import ContractadError
from .graph_core import (
    Graph,
    acyclic_orientations,
    characteristic_polynomial,
    connected_graphs,
    enumerate_tubes,
    family_name,
    isomorphism_classes,
    moebius,
    parse_graph,
)
from .grobner import (
    Presentation,
    certified_basis,
    component_dimension,
    dimension_oracle,
    graded_counts,
    koszul_dual,
    normal_monomials,
    pbw_basis,
    pbw_check,
    weight2_dimensions,
)
from .homology import bar_complex, homology_ranks, koszul_euler
from .orders import MonomialOrder, sample_monotonicity
from .orlik_solomon import EdgeOrder, is_signed_identity, nbc_basis, os_hilbert, pairing_matrix
from .presets import list_presets, preset
from .report import Report, ReportValidator
from .trees import nested_sets, stable_trees

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
FORMATS = ("table", "json", "csv")
ORDERS = ("graphpermlex", "rev-graphpermlex", "quantum")

GRAPH_HELP = (
    "graph spec: a family token (P4, C5, K3, St3 with center 1, K(1^2,2)) "
    "or an edge list such as edges:1-2,2-3,1-3"
)


def _graphs(args: argparse.Namespace) -> List[Graph]:
    """The --graph value, or every isomorphism class on 2..--vertices vertices."""
    if args.graph:
        return [parse_graph(args.graph)]
    return [g for n in range(2, args.vertices + 1) for g in isomorphism_classes(n)]


def _presentation(args: argparse.Namespace, name: Optional[str] = None) -> Presentation:
    return preset(name or args.preset, args.n)


def _order(args: argparse.Namespace, p: Presentation) -> MonomialOrder:
    if not args.order:
        return p.default_order()
    return MonomialOrder.parse(args.order, p.default_order().letters)


def _order_inputs(args: argparse.Namespace, p: Presentation, o: MonomialOrder) -> Dict[str, object]:
    inputs: Dict[str, object] = {"preset": p.name, "order": str(o)}
    if args.n is not None:
        inputs["n"] = args.n
    return inputs


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_graphs(args: argparse.Namespace) -> Report:
    if args.ordered:
        graphs = connected_graphs(args.vertices)
    else:
        graphs = _graphs(args)
    report = Report("graphs", {"graph": args.graph, "vertices": args.vertices, "ordered": args.ordered})
    for g in graphs:
        trees = stable_trees(g)
        report.add_row(
            graph=g.spec(),
            family=family_name(g),
            tubes=len(enumerate_tubes(g)),
            moebius=moebius(g),
            chromatic=characteristic_polynomial(g),
            acyclic_orientations=acyclic_orientations(g),
            stable_trees=sum(len(ts) for ts in trees.values()),
            nested_sets=len(nested_sets(g)),
        )
    return report


def cmd_dims(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    o = _order(args, p)
    report = Report("dims", dict(_order_inputs(args, p, o), graph=args.graph, vertices=args.vertices))
    graphs = _graphs(args)
    if args.linear_algebra:
        for g in graphs:
            report.add_row(graph=g.spec(), family=family_name(g), dimension=component_dimension(p, g))
        report.certificates["method"] = "linear-algebra"
        return report
    bound = args.bound or (max(g.n for g in graphs), max(g.n for g in graphs) - 1)
    gb = certified_basis(p, o, bound)
    for g in graphs:
        normal = normal_monomials(gb, g)
        row = dict(graph=g.spec(), family=family_name(g), dimension=len(normal))
        if p.signature.has_odd or any(x.degree for x in p.signature.generators):
            row["graded"] = [f"{d}:{c}" for d, c in graded_counts(normal, p.signature).items()]
        report.add_row(**row)
    report.certificates.update(certificate=gb.certificate, complete=gb.complete)
    return report


def cmd_gb(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    o = _order(args, p)
    gb = certified_basis(p, o, args.bound)
    report = Report("gb", dict(_order_inputs(args, p, o), bound=list(args.bound) if args.bound else None))
    for e in gb.all_elements():
        lt, _ = e.leading_term(o)
        report.add_row(host=e.host.spec(), leading=str(lt), weight=e.weight, element=str(e))
    report.certificates.update(
        certificate=gb.certificate,
        complete=gb.complete,
        certified=[f"{n},{w}" for n, w in sorted(gb.certified)],
    )
    if gb.incomplete_reason:
        report.certificates["incomplete"] = gb.incomplete_reason
    return report


def cmd_normal_monomials(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    o = _order(args, p)
    g = parse_graph(args.graph)
    gb = certified_basis(p, o, args.bound or (g.n, g.n - 1))
    report = Report("normal-monomials", dict(_order_inputs(args, p, o), graph=g.spec()))
    for m in o.sorted(normal_monomials(gb, g)):
        report.add_row(monomial=str(m), degree=p.signature.degree(m))
    report.certificates["certificate"] = gb.certificate
    return report


def cmd_pbw_check(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    o = _order(args, p)
    result = pbw_check(p, o)
    report = Report("pbw-check", _order_inputs(args, p, o), status="PASS" if result.passed else "FAIL")
    for row in result.rows:
        report.add_row(graph=row.graph.spec(), family=row.family, normal=row.normal,
                       dimension=row.dimension, match=row.match)
    report.certificates["components"] = len(result.rows)
    return report


def cmd_order_check(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    o = _order(args, p)
    settings = get_settings()
    samples = args.samples if args.samples is not None else settings.property_samples
    graphs = [g for n in range(3, args.vertices + 1)
              for g in (connected_graphs(n) if n <= 4 else isomorphism_classes(n))]
    result = sample_monotonicity(o, p.signature, graphs, samples, settings.seed)
    inputs = _order_inputs(args, p, o)
    inputs.update(vertices=args.vertices, samples=samples, seed=settings.seed)
    report = Report("order-check", inputs, status="PASS" if result.passed else "FAIL")
    for failure in result.failures:
        report.add_row(graph=failure.graph.spec(), tube=list(failure.tube), side=failure.side,
                       before=failure.before, after=failure.after)
    report.certificates["samples"] = result.samples
    report.certificates["failures"] = len(result.failures)
    return report


def cmd_bar_homology(args: argparse.Namespace) -> Report:
    p = _presentation(args)
    report = Report("bar-homology", {"preset": p.name, "graph": args.graph, "vertices": args.vertices})
    for g in _graphs(args):
        complex_ = bar_complex(p, g)
        for s, rank in zip(complex_.degrees, homology_ranks(complex_)):
            report.add_row(graph=g.spec(), degree=s, dimension=complex_.dimension(s), homology=rank)
    report.certificates["d_squared"] = "zero"
    return report


def cmd_koszul_euler(args: argparse.Namespace) -> Report:
    p = _presentation(args, args.dual)
    dual = koszul_dual(p)
    dual_gb = pbw_basis(dual)
    primal_dims = dimension_oracle(p, pbw_basis(p))
    dual_dims = dimension_oracle(dual, dual_gb)
    report = Report("koszul-euler", {"dual": p.name, "graph": args.graph, "vertices": args.vertices})
    acyclic = True
    for g in _graphs(args):
        chi = koszul_euler(dual_dims, primal_dims, g)
        acyclic = acyclic and chi == 0
        report.add_row(graph=g.spec(), family=family_name(g), euler=chi, dual_dimension=dual_dims(g))
    report.status = "PASS" if acyclic else "FAIL"
    report.certificates["acyclicity"] = "consistent" if acyclic else "violated"
    report.certificates["dual_dimensions"] = "pbw" if dual_gb is not None else "linear-algebra"
    return report


def cmd_os(args: argparse.Namespace) -> Report:
    g = parse_graph(args.graph)
    o = EdgeOrder.parse(g, args.edge_order) if args.edge_order else EdgeOrder.default(g)
    report = Report(f"os {args.action}", {"graph": g.spec(), "edge_order": str(o)})
    if args.action == "hilbert":
        for k, c in enumerate(os_hilbert(g, o)):
            report.add_row(degree=k, dimension=c)
    elif args.action == "nbc":
        for s in nbc_basis(g, args.degree, o):
            report.add_row(degree=len(s), edges=[f"{u}-{v}" for u, v in s])
    else:
        basis, matrix = pairing_matrix(g, o)
        for s, row in zip(basis, matrix):
            report.add_row(nbc=[f"{u}-{v}" for u, v in s] or ["-"], values=row)
        report.status = "PASS" if is_signed_identity(matrix) else "FAIL"
        report.certificates["diagonal"] = report.status == "PASS"
    return report


def cmd_pairing(args: argparse.Namespace) -> Report:
    """dim R + dim R^perp against the weight-2 space on every ordered 3-vertex graph."""
    p = _presentation(args)
    dual = koszul_dual(p)
    primal, annihilator = weight2_dimensions(p), weight2_dimensions(dual)
    report = Report("pairing", {"preset": p.name, "dual": dual.name})
    complementary = True
    for host in sorted(primal, key=lambda h: h.sorted_edges()):
        space, rank = primal[host]
        dual_rank = annihilator[host][1]
        complementary = complementary and rank + dual_rank == space
        report.add_row(graph=host.spec(), space=space, relations=rank, annihilator=dual_rank)
    report.status = "PASS" if complementary else "FAIL"
    return report


def cmd_presets(args: argparse.Namespace) -> Report:
    report = Report("presets")
    for name in list_presets():
        if name == "En" and args.n is None:
            report.add_row(name=name, generators="c (needs --n)", relations=None, order=None)
            continue
        p = preset(name, args.n if name == "En" else None)
        report.add_row(
            name=name,
            generators=[f"{x.name}:{x.degree}" for x in p.signature.generators],
            relations=p.relation_count(),
            order=str(p.default_order()),
        )
    return report


def cmd_validate_report(args: argparse.Namespace) -> int:
    result = ReportValidator().validate_file(args.file)
    print(result)
    if result.warnings:
        print("\nWarnings:")
        for warning in result.warnings:
            print(f"  ⚠ {warning.path}: {warning.message}")
    return 0 if result.valid else 1


COMMANDS = {
    "graphs": cmd_graphs,
    "dims": cmd_dims,
    "gb": cmd_gb,
    "normal-monomials": cmd_normal_monomials,
    "pbw-check": cmd_pbw_check,
    "order-check": cmd_order_check,
    "bar-homology": cmd_bar_homology,
    "koszul-euler": cmd_koszul_euler,
    "os": cmd_os,
    "pairing": cmd_pairing,
    "presets": cmd_presets,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table", help="output format")
    common.add_argument("--config", help="settings YAML file")
    common.add_argument("--seed", type=int, help="seed for randomized sampling")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for details")

    parser = argparse.ArgumentParser(prog="contractads", description="Computer algebra for contractads")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def verb(name: str, help_text: str, graph: bool = False, presentation: bool = False,
             order: bool = False, bound: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if graph:
            p.add_argument("--graph", help=GRAPH_HELP)
            p.add_argument("--vertices", type=int, default=4,
                           help="without --graph, run on every unlabeled graph with 2..V vertices")
        if presentation:
            p.add_argument("--preset", required=True, help="preset name, see the presets verb")
            p.add_argument("--n", type=int, help="disk dimension for En")
        if order:
            p.add_argument("--order", choices=ORDERS, help="monomial order (default: the preset's)")
        if bound:
            p.add_argument("--bound", type=parse_bound, help="completion bound V,W")
        return p

    graphs = verb("graphs", "graph invariants", graph=True)
    graphs.add_argument("--ordered", action="store_true", help="list every labeled graph on --vertices vertices")
    dims = verb("dims", "component dimensions", graph=True, presentation=True, order=True, bound=True)
    dims.add_argument("--linear-algebra", action="store_true", help="skip the Gröbner basis")
    verb("gb", "Gröbner basis", presentation=True, order=True, bound=True)
    nm = verb("normal-monomials", "normal monomials on one graph", presentation=True, order=True, bound=True)
    nm.add_argument("--graph", required=True, help=GRAPH_HELP)
    verb("pbw-check", "weight-3 PBW criterion on the 38 ordered 4-vertex graphs", presentation=True, order=True)
    oc = verb("order-check", "sample compositions to check the order is monotone", presentation=True, order=True)
    oc.add_argument("--vertices", type=int, default=4, help="sample graphs with 3..V vertices")
    oc.add_argument("--samples", type=int, help="number of samples (default: property_samples)")
    verb("bar-homology", "bar complex dimensions and homology", graph=True, presentation=True)
    ke = verb("koszul-euler", "Euler characteristic of the Koszul complex", graph=True)
    ke.add_argument("--dual", required=True, help="preset whose Koszul complex is checked")
    ke.add_argument("--n", type=int, help="disk dimension for En")
    os_parser = verb("os", "Orlik-Solomon algebra of a graphic arrangement")
    os_parser.add_argument("action", choices=("hilbert", "nbc", "pairing"))
    os_parser.add_argument("--graph", required=True, help=GRAPH_HELP)
    os_parser.add_argument("--degree", type=int, help="nbc degree (default: all)")
    os_parser.add_argument("--edge-order", help="edge order such as 1-2,1-4,2-3")
    verb("pairing", "weight-2 relations against their annihilator", presentation=True)
    presets_parser = verb("presets", "list shipped presets")
    presets_parser.add_argument("--n", type=int, help="also describe En for this n")
    validate = sub.add_parser("validate-report", parents=[common], help="check a JSON report against its schema")
    validate.add_argument("file")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, execute and print; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING if args.verbose == 0 else (logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT, level=level)

    try:
        settings = Settings.load(args.config)
        if args.seed is not None:
            settings = settings.merge({"seed": args.seed})
        set_settings(settings)
        if args.command == "validate-report":
            return cmd_validate_report(args)
        report = COMMANDS[args.command](args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ContractadError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    print(report.render(args.format))
    return 0 if report.passed else 1


def main():
    """CLI entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
