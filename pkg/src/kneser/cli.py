"""Command line interface.

Exit codes: 0 success, 2 failed precondition (bad prime, odd lattice, ...),
3 unparsable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import genus, hecke, isometry, theta
from .errors import KneserError, UnknownLatticeError
from .finite import hensel_lift, isotropic_array
from .genus import default_threads
from .io import LatticeFormatError, classset_document, lattice_to_dict, load_lattice
from .lattice import Lattice, builtin
from .neighbors import iter_neighbors, neighbor

EXIT_OK, EXIT_PRECONDITION, EXIT_PARSE = 0, 2, 3


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


@dataclass
class RunConfig:
    command: str
    sources: list[Lattice]
    primes: list[int] = field(default_factory=list)
    bound: Fraction | None = None
    fmt: str = "text"
    certify: bool = False
    threads: int = 1


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ParseError(f"not an integer list: {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def _sources(args) -> list[Lattice]:
    out = [builtin(name) for name in (args.builtin or [])]
    files = getattr(args, "files", None) or []
    if isinstance(files, str):
        files = [files]
    for path in files:
        if not Path(path).exists():
            raise ParseError(f"no such file: {path}")
        if not Path(path).is_file():
            raise ParseError(f"not a regular file: {path}")
        out.append(load_lattice(path))
    return out


def _one(cfg: RunConfig) -> Lattice:
    if len(cfg.sources) != 1:
        raise ParseError("expected exactly one lattice (file or --builtin)")
    return cfg.sources[0]


def _gram_ints(lat: Lattice):
    return [[int(x) if x.denominator == 1 else str(x) for x in r] for r in lat.gram]


def _matrix_text(m) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m) + "]"


def _emit(cfg: RunConfig, doc, text_lines):
    if cfg.fmt == "json":
        print(json.dumps(doc, indent=1))
    else:
        for line in text_lines:
            print(line)


# -- commands -------------------------------------------------------------

def cmd_neighbors(cfg: RunConfig, args) -> int:
    lat = _one(cfg)
    if len(cfg.primes) != 1:
        raise ParseError("neighbors takes a single prime")
    p = cfg.primes[0]
    if args.vector is not None:
        amb = _int_list(args.vector)
        v = lat.lattice_vector(amb) if len(amb) == lat.n else None
        if v is None:
            raise ParseError(f"vector needs {lat.n} coordinates")
        if lat.evaluate(v) % (p * p):
            v = hensel_lift(lat, p, v)
        nb = neighbor(lat, p, v)
        red = isometry.reduction(nb)
        roots = len(isometry.short_vectors(nb, 1))
        doc = {"p": p, "vector": [str(x) for x in lat.to_ambient(v)],
               "lattice_vector": v, "neighbor": lattice_to_dict(nb, exact=True),
               "reduced_gram": red.gram.tolist(), "discriminant": str(nb.discriminant),
               "even": nb.is_even, "norm1_pairs": roots}
        lines = [f"p = {p}", f"lifted vector (ambient) = {[str(x) for x in lat.to_ambient(v)]}",
                 f"discriminant = {nb.discriminant}, even = {nb.is_even}, rank = {nb.n}",
                 f"LLL-reduced Gram = {_matrix_text(red.gram.tolist())}",
                 "no vectors of norm 1" if roots == 0 else f"{2 * roots} vectors of norm 1"]
        _emit(cfg, doc, lines)
        return EXIT_OK
    entries, lines = [], []
    for pt, v, nb in iter_neighbors(lat, p):
        entries.append({"point": list(pt.coords), "vector": v, "gram": _gram_ints(nb)})
        lines.append(f"{pt}  v = {v}  Gram = {_matrix_text(_gram_ints(nb))}")
    lines.insert(0, f"{len(entries)} {p}-neighbors")
    _emit(cfg, {"p": p, "count": len(entries), "neighbors": entries}, lines)
    return EXIT_OK


def _classify(cfg: RunConfig, args):
    lat = _one(cfg)
    primes = cfg.primes or [_smallest_good_prime(lat)]
    return genus.enumerate_classes(lat, primes, dedup=args.dedup, threads=cfg.threads)


def _smallest_good_prime(lat: Lattice) -> int:
    from sympy import nextprime
    d = lat.discriminant.numerator
    p = 2
    while d % p == 0:
        p = nextprime(p)
    return p


def cmd_classify(cfg: RunConfig, args) -> int:
    cs = _classify(cfg, args)
    report = genus.certify(cs) if cfg.certify else None
    doc = classset_document(cs, report)
    lines = [f"{len(cs)} classes (primes {cs.primes_used})"]
    for entry in doc["classes"]:
        src = "seed" if entry["provenance"] is None else \
            f"from class {entry['provenance']['parent']} at p={entry['provenance']['p']} v={entry['provenance']['v']}"
        gram = entry["lattice"].get("gram")
        lines.append(f"  class {entry['index']}: #Aut = {entry['aut_order']}, {src}")
        if gram is not None:
            lines.append(f"    Gram = {_matrix_text(gram)}")
    if report is not None:
        lines.append(f"mass = {report.computed_mass}")
        lines.append(f"formula mass = {report.formula_mass}")
        lines.append(report.status)
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=1) + "\n")
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_hecke(cfg: RunConfig, args) -> int:
    lat = _one(cfg)
    primes = cfg.primes or [_smallest_good_prime(lat)]
    cs = genus.enumerate_classes(lat, primes[:1], dedup=args.dedup, threads=cfg.threads)
    ms = [hecke.hecke_matrix(cs, p, cfg.threads) for p in primes]
    pairs = hecke.eigenforms(ms) if cs.rank <= 24 else []
    doc = {"classes": len(cs), "aut_orders": cs.aut_orders, "matrices": [], "eigenforms": []}
    lines = [f"{len(cs)} classes, #Aut = {cs.aut_orders}"]
    for m in ms:
        doc["matrices"].append({"p": m.p, "basis": m.labels, "matrix": m.entries,
                                "components": hecke.component_count(m)})
        lines.append(f"T_{m.p} = {_matrix_text(m.entries)}")
    for k in range(len(pairs[0]) if pairs else 0):
        vec = pairs[0][k].eigenvector
        vals = [str(lst[k].eigenvalue) for lst in pairs]
        doc["eigenforms"].append({"vector": None if vec is None else [str(x) for x in vec],
                                  "eigenvalues": dict(zip([str(m.p) for m in ms], vals))})
        shown = "(interval only)" if vec is None else "(" + ", ".join(str(x) for x in vec) + ")"
        lines.append(f"eigenvector {shown}: " +
                     ", ".join(f"a_{m.p} = {v}" for m, v in zip(ms, vals)))
    if args.dot:
        Path(args.dot).write_text("".join(hecke.export_dot(m) for m in ms))
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_theta(cfg: RunConfig, args) -> int:
    lat = _one(cfg)
    series = theta.theta_series(lat, args.M)
    _emit(cfg, series.to_list(), [json.dumps(series.to_list())])
    return EXIT_OK


def cmd_aut(cfg: RunConfig, args) -> int:
    lat = _one(cfg)
    grp = isometry.aut_group(lat)
    doc = {"order": grp.order, "generators": grp.generators}
    lines = [str(grp.order)]
    if args.generators:
        lines += [_matrix_text(g) for g in grp.generators]
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_isometric(cfg: RunConfig, args) -> int:
    if len(cfg.sources) != 2:
        raise ParseError("isometric needs two lattices")
    a, b = cfg.sources
    g, reason = isometry.find_isometry(a, b)
    doc = {"isometric": g is not None, "reason": reason, "matrix": g}
    lines = ["isometric" if g is not None else "not isometric", reason]
    if g is not None:
        lines.append(_matrix_text(g))
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_shortvectors(cfg: RunConfig, args) -> int:
    lat = _one(cfg)
    sv = isometry.short_vectors(lat, cfg.bound)
    norms = [str(q) for q in sv.norms]
    doc = {"bound": str(cfg.bound), "vectors": sv.vectors.tolist(), "norms": norms}
    lines = [f"{len(sv)} vectors up to sign with Q <= {cfg.bound}"]
    lines += [f"{q}  {list(v)}" for q, v in zip(norms, sv.vectors.tolist())]
    _emit(cfg, doc, lines)
    return EXIT_OK


COMMANDS = {"neighbors": cmd_neighbors, "classify": cmd_classify, "hecke": cmd_hecke,
            "theta": cmd_theta, "aut": cmd_aut, "isometric": cmd_isometric,
            "shortvectors": cmd_shortvectors}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kneser", description="Kneser neighbors, genera and Hecke operators.")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $KNESER_THREADS or all cores)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, primes=False, nfiles="?"):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("files", nargs=nfiles, help="lattice JSON file(s)")
        sp.add_argument("--builtin", "-b", action="append",
                        help="catalog lattice: E8, E8E8, D16plus, D24plus, disc11a, disc11b, Zn(n), Dn(n), Dnplus(n), H")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        if primes:
            sp.add_argument("-p", "--prime", type=int, action="append", dest="primes",
                            help="prime (repeatable)")
        return sp

    sp = add("neighbors", "list p-neighbors, or build one from --vector", primes=True)
    sp.add_argument("--vector", help="comma separated ambient coordinates")
    sp = add("classify", "enumerate the class set", primes=True)
    sp.add_argument("--certify", action="store_true", help="compare with the mass formula")
    sp.add_argument("--dedup", choices=genus.DEDUP_MODES, default="auto")
    sp.add_argument("--output", "-o", help="write the class-set document here")
    sp = add("hecke", "Hecke matrices and eigenforms", primes=True)
    sp.add_argument("--dedup", choices=genus.DEDUP_MODES, default="auto")
    sp.add_argument("--dot", help="write the neighbor graphs as DOT")
    sp = add("theta", "theta series coefficients")
    sp.add_argument("-M", type=int, default=10, help="truncation")
    sp = add("aut", "automorphism group order")
    sp.add_argument("--generators", action="store_true")
    add("isometric", "test two lattices for isometry", nfiles="*")
    sp = add("shortvectors", "vectors with Q(x) <= bound")
    sp.add_argument("--bound", default="1")
    return parser


def _config(args) -> RunConfig:
    threads = args.threads if args.threads else default_threads()
    return RunConfig(command=args.command, sources=_sources(args),
                     primes=list(getattr(args, "primes", None) or []),
                     bound=_fraction(args.bound) if hasattr(args, "bound") else None,
                     fmt=args.format, certify=getattr(args, "certify", False),
                     threads=max(1, threads))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except (ParseError, LatticeFormatError, UnknownLatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except KneserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
