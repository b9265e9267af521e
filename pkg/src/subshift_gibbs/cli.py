"""Command-line experiments.

Metadata and verdicts go to stdout as ``key: value`` lines; series go to
``--out`` (or follow the metadata on stdout after a blank line). Exit codes:
0 computed, 1 a checked property was violated, 2 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from . import generators, measures, spectral, subshifts
from .subshifts import SpecParseError, SubshiftSpec
from .words import Block, to_array

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

DEFAULT_TOLERANCES = {"pf": 1e-12, "bound": 1e-12, "margin": 0.01, "behrend": 0.05}


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    spec: Optional[SubshiftSpec] = None
    n_max: int = 12
    window: Optional[int] = None
    h: Optional[str] = None
    a: Optional[Union[float, Fraction]] = None
    output: Optional[Path] = None
    format: str = "csv"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self) -> None:
        if not 1 <= self.n_max <= subshifts.DEFAULT_ENUMERATION_CAP:
            raise UsageError(f"--n-max must lie in 1..{subshifts.DEFAULT_ENUMERATION_CAP}")
        for name, value in self.tolerances.items():
            if value <= 0:
                raise UsageError(f"tolerance {name} must be positive")
        if self.window is not None and self.spec is not None:
            self.spec = _with_window(self.spec, self.window)


def _with_window(spec: SubshiftSpec, window: int) -> SubshiftSpec:
    if spec.kind in ("bfree", "sturmian"):
        return SubshiftSpec(spec.kind, dataclasses.replace(spec.payload, window=window))
    return spec


def _number(text: str) -> Union[float, Fraction]:
    return Fraction(text) if "/" in text else float(text)


class Emitter:
    """Collects metadata lines and one table, then writes them out."""

    def __init__(self, config: ExperimentConfig, stdout: TextIO):
        self.config = config
        self.stdout = stdout
        self.meta: list[tuple[str, object]] = []

    def info(self, key: str, value: object) -> None:
        self.meta.append((key, value))

    def finish(self, header: Sequence[str] = (), rows: Sequence[Sequence] = ()) -> None:
        fmt = self.config.format
        if fmt == "json-lines":
            lines = [json.dumps({"type": "meta", **{k: _jsonable(v) for k, v in self.meta}})]
            lines += [json.dumps(dict(zip(header, map(_jsonable, r)))) for r in rows]
            table = "\n".join(lines[1:])
            meta = lines[0]
        else:
            meta = "\n".join(f"{k}: {v}" for k, v in self.meta)
            table = ""
            if header:
                table = "\n".join([",".join(header)] + [",".join(_cell(c) for c in r) for r in rows])
        out = self.config.output
        if out is not None and table:
            Path(out).write_text(table + "\n")
            print(meta, file=self.stdout)
        else:
            print(meta, file=self.stdout)
            if table:
                print(("" if fmt == "json-lines" else "\n") + table, file=self.stdout)


def _cell(c) -> str:
    if isinstance(c, float):
        return repr(c)
    if c is None:
        return ""
    return str(c)


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, Block):
        return str(v)
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def _need_spec(config: ExperimentConfig) -> SubshiftSpec:
    if config.spec is None:
        raise UsageError("this command needs --spec FILE")
    return config.spec


def cmd_entropy(config: ExperimentConfig, stdout: TextIO = sys.stdout) -> int:
    spec = _need_spec(config)
    em = Emitter(config, stdout)
    em.info("kind", spec.kind)
    if spec.has_presentation:
        h = spectral.topological_entropy_exact(spec.graph(), tol=config.tolerances["pf"])
        em.info("entropy_exact", repr(h))
    series = spectral.entropy_series(spec, config.n_max)
    em.finish(["n", "value", "witness_block"], [(e.n, float(e.value), e.witness) for e in series])
    return EXIT_OK


def cmd_density(config: ExperimentConfig, stdout: TextIO = sys.stdout) -> int:
    spec = _need_spec(config)
    em = Emitter(config, stdout)
    em.info("kind", spec.kind)
    status = EXIT_OK
    series = spectral.ones_density_series(spec, config.n_max)
    if spec.has_presentation:
        G = spec.graph()
        d = spectral.max_mean_cycle(G)
        em.info("d", d)
        em.info("d_float", repr(float(d)))
        if d <= Fraction(1, 2):
            h = spectral.topological_entropy_exact(G, tol=config.tolerances["pf"])
            check = spectral.entropy_density_bound_check(h, float(d), tol=config.tolerances["bound"])
            em.info("entropy_density_bound", f"{'holds' if check.holds else 'VIOLATED'} slack={check.slack!r}")
            if not check.holds:
                status = EXIT_VIOLATION
    else:
        dn = measures.d_nu(measures.empirical_measure(spec.point_array(), 1))
        em.info("d_nu_estimate", repr(float(dn)))
    em.finish(["n", "value", "witness_block"], [(e.n, float(e.value), e.witness) for e in series])
    return status


def _gibbs_source(spec: SubshiftSpec, n_max: int) -> measures.MeasureSeries:
    if spec.kind == "periodic":
        return measures.periodic_series(spec.payload, n_max)
    if spec.kind in ("bfree", "sturmian"):
        return measures.empirical_series(spec.point_array(), n_max)
    raise UsageError(f"gibbs needs a generic-point source (bfree, sturmian, periodic), not {spec.kind!r}")


def _resolve_h(recipe: Optional[str], spec: SubshiftSpec, series: measures.MeasureSeries, tol: float):
    if recipe is None:
        raise UsageError("gibbs needs --h VALUE|exact|d-equals-htilde")
    if recipe == "d-equals-htilde":
        return measures.d_nu(series)
    if recipe == "exact":
        if not spec.has_presentation:
            raise UsageError("--h exact needs a presented subshift (periodic)")
        closure = subshifts.hereditary_closure_graph(spec.graph())
        h = spectral.topological_entropy_exact(closure, tol=tol)
        if spec.kind == "periodic":
            # the closure of one periodic orbit has entropy ones/k; keep it rational
            exact = Fraction(spec.payload.ones, spec.payload.length)
            if abs(h - exact) > 1e-9:
                raise AssertionError(f"closure entropy {h} disagrees with {exact}")
            return exact
        return h
    try:
        return _number(recipe)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse --h {recipe!r}") from None


def cmd_gibbs(config: ExperimentConfig, stdout: TextIO = sys.stdout) -> int:
    spec = _need_spec(config)
    series = _gibbs_source(spec, config.n_max)
    h = _resolve_h(config.h, spec, series, config.tolerances["pf"])
    report = measures.gibbs_ratio_series(series, h)
    status = EXIT_OK
    em = Emitter(config, stdout)
    em.info("kind", spec.kind)
    em.info("h", h)
    em.info("assumptions", "; ".join(report.assumptions))
    n_late = config.n_max
    n_early = max(1, n_late // 3)
    atoms = measures.atom_bound_series(series).values
    strictly_decreasing = all(b < a for a, b in zip(atoms, atoms[1:]))
    em.info("atom_bound_strictly_decreasing", strictly_decreasing)
    if n_late > n_early and report.decays(n_early, n_late):
        em.info("verdict", f"ratio decays; no Gibbs at desk scale (certified, nu(C_{n_late}) <= nu(C_{n_early})/2)")
    else:
        kappa = measures.convolve_series(series)
        bound = measures.gibbs_lower_bound_check(kappa, h, config.a if config.a is not None else Fraction(1, 10**9))
        em.info("verdict", f"Gibbs evidence: holds with a* >= {bound.a_star:.6g} (worst block {bound.worst_block} at n={bound.worst_n})")
        if config.a is not None:
            em.info("a_check", f"{'passes' if bound.passed else 'fails'} against a={config.a}")
            if not bound.passed:
                status = EXIT_VIOLATION
    rows = [
        (e.n, e.witness, e.ones, measures._fmt_prob(e.nu), measures._fmt_prob(e.kappa), e.ratio, int(e.certified))
        for e in report
    ]
    em.finish(["n", "witness", "ones", "nu", "kappa", "ratio", "certified_bound"], rows)
    return status


def _bfree_from(config: ExperimentConfig, B_text: Optional[str]) -> tuple[list[int], int]:
    if B_text is not None:
        B = generators.primitivize(generators.parse_family(B_text))
    elif config.spec is not None and config.spec.kind == "bfree":
        B = list(config.spec.payload.B)
    else:
        raise UsageError("give B with --B LIST|FAMILY or a bfree --spec")
    window = config.window or (config.spec.payload.window if config.spec is not None and config.spec.kind == "bfree" else 10**6)
    return B, window


def cmd_taut(config: ExperimentConfig, B_text: Optional[str] = None, stdout: TextIO = sys.stdout) -> int:
    B, N = _bfree_from(config, B_text)
    report = generators.taut_check(B, N, margin=config.tolerances["margin"])
    behrend = generators.behrend_check(B, N, threshold=config.tolerances["behrend"])
    em = Emitter(config, stdout)
    em.info("N", N)
    em.info("verdict", report.summary())
    em.info("log_density_multiples", repr(report.density_multiples))
    em.info("log_density_free", repr(behrend.density_free))
    em.info("behrend_evidence", f"{behrend.behrend} (threshold {behrend.threshold}) [{behrend.label}]")
    rows = [(b, g, int(g > report.margin)) for b, g in report.gaps.items()]
    em.finish(["b", "gap", "above_margin"], rows)
    return EXIT_OK


def cmd_eta(config: ExperimentConfig, B_text: Optional[str] = None, stdout: TextIO = sys.stdout) -> int:
    if B_text is None and config.spec is not None and config.spec.kind == "sturmian":
        point = generators.sturmian_point(config.spec.payload)
    else:
        B, N = _bfree_from(config, B_text)
        point = generators.eta(generators.BFreeSpec(tuple(B), N))
    if config.format == "packed":
        data = np.packbits(to_array(point)).tobytes()
        if config.output is None:
            raise UsageError("--format packed needs --out PATH")
        Path(config.output).write_bytes(data)
        print(f"length: {point.length}", file=stdout)
        return EXIT_OK
    text = str(point)
    if config.output is not None:
        Path(config.output).write_text(text + "\n")
        print(f"length: {point.length}", file=stdout)
    else:
        print(text, file=stdout)
    return EXIT_OK


def cmd_closure(config: ExperimentConfig, stdout: TextIO = sys.stdout) -> int:
    spec = _need_spec(config)
    if not spec.has_presentation:
        raise UsageError("closure needs a presented subshift (sft, sofic, periodic, full)")
    closure = SubshiftSpec.sofic(subshifts.hereditary_closure_graph(spec.graph()))
    text = f"# hereditary closure of a {spec.kind} presentation\n" + subshifts.dump_spec(closure)
    if config.output is not None:
        Path(config.output).write_text(text)
        print(f"edges: {len(closure.payload.edges)}", file=stdout)
    else:
        stdout.write(text)
    return EXIT_OK


def cmd_embed(config: ExperimentConfig, word: str, stdout: TextIO = sys.stdout) -> int:
    try:
        y = Block.from_str(word)
        x = subshifts.upgrade_embedding(y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = str(x)
    ok = "00" not in s and "111" not in s
    print(f"input: {y}\noutput: {x}\ncheck: {'ok' if ok else 'VIOLATED'}", file=stdout)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subshift-gibbs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json-lines")):
        p.add_argument("--spec", type=Path, help="subshift spec file")
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--window", type=int, default=None)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
        return p

    common(sub.add_parser("entropy", help="exact entropy and entropy series"))
    common(sub.add_parser("density", help="max-mean-cycle density and ones-density series"))
    g = common(sub.add_parser("gibbs", help="Gibbs ratio report for nu * B(1/2,1/2)"))
    g.add_argument("--h", dest="h", default=None, help="VALUE|exact|d-equals-htilde")
    g.add_argument("--a", dest="a", default=None)
    t = common(sub.add_parser("taut", help="tautness and Behrend evidence for B"))
    t.add_argument("--B", dest="B", default=None, help="explicit list or family")
    e = common(sub.add_parser("eta", help="export the B-free (or Sturmian) window"), formats=("text", "packed"))
    e.add_argument("--B", dest="B", default=None)
    common(sub.add_parser("closure", help="hereditary closure presentation as a spec file"))
    m = common(sub.add_parser("embed", help="upgrade a word of X_{111,1001} into X_{00,111}"))
    m.add_argument("--word", required=True)
    return parser


def _config_from(args) -> ExperimentConfig:
    spec = subshifts.load_spec(args.spec) if args.spec is not None else None
    tolerances = dict(DEFAULT_TOLERANCES)
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise UsageError(f"bad --tol {item!r}; known names: {', '.join(DEFAULT_TOLERANCES)}")
        tolerances[name] = float(value)
    n_max = args.n_max if args.n_max is not None else (16 if args.command == "gibbs" else 12)
    a = _number(args.a) if getattr(args, "a", None) is not None else None
    return ExperimentConfig(
        spec=spec, n_max=n_max, window=args.window, h=getattr(args, "h", None), a=a,
        output=args.out, format=args.format, tolerances=tolerances,
    )


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from(args)
        if args.command == "entropy":
            return cmd_entropy(config, stdout)
        if args.command == "density":
            return cmd_density(config, stdout)
        if args.command == "gibbs":
            return cmd_gibbs(config, stdout)
        if args.command == "taut":
            return cmd_taut(config, args.B, stdout)
        if args.command == "eta":
            return cmd_eta(config, args.B, stdout)
        if args.command == "closure":
            return cmd_closure(config, stdout)
        if args.command == "embed":
            return cmd_embed(config, args.word, stdout)
    except (UsageError, SpecParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
