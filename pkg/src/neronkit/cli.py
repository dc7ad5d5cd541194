"""Command-line entry point.

Exit codes: 0 success, 1 domain or input error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NeronError, NotExtendable, SchemaError
from .fibers import SemiTorusFiber
from .hodge import HodgeFiltrationStep, NilpotentOrbit, check_hypothesis_C, limit_mhs, weight_monodromy_filtration
from .linalg import IntMatrix, cokernel_structure
from .models import bps_fiber_curve, clemens_extend, clemens_fiber, ggk_fiber0, zucker_fiber0
from .monodromy import (
    NonUnipotentWarning,
    MonodromyOperator,
    admissible_class_subgroup,
    component_group,
    component_group_formulas,
    invariant_lattice,
    link_cohomology_bidisk,
)
from .normal_functions import check_admissible, cohomology_class_curve, monodromy_defect, zucker_limit
from .numeric import DEFAULT_TOL
from .polydisk import BidiskFamilyConfig, NuPAlpha, hausdorff_probe
from .serialize import FamilySpec, dumps, encode, parse_family, parse_normal_function

CSV_HEADER = ["j", "t1_re", "t1_im", "t2_re", "t2_im", "chart0_re", "chart0_im", "shift_k"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


def _family(args) -> FamilySpec:
    return parse_family(_read(args.family))


def _orbit(spec: FamilySpec, T=None) -> NilpotentOrbit:
    if spec.F0 is None:
        raise SchemaError("$.F0: this command needs a Hodge filtration")
    mono = MonodromyOperator.from_matrix(T if T is not None else spec.monodromy[0])
    F0 = HodgeFiltrationStep(np.array(spec.F0, dtype=complex).T.reshape(spec.n, len(spec.F0)), spec.n)
    return NilpotentOrbit(mono.N, F0, spec.weight)


def _fiber_summary(f: SemiTorusFiber) -> dict:
    return {
        "dim": f.dim,
        "discrete": f.discrete,
        "real_type": list(f.real_type) if f.real_type else None,
        "description": f.describe(),
        "lattice_images": f.lattice_images,
    }


def _monodromy_summary(T: IntMatrix) -> dict:
    mono = MonodromyOperator.from_matrix(T)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonUnipotentWarning)
        G = component_group(T)
    return {
        "T": T,
        "unipotent": mono.unipotent,
        "unipotent_power": mono.m,
        "N": mono.N,
        "invariant_lattice": invariant_lattice(T),
        "cokernel": cokernel_structure(T - IntMatrix.identity(T.rows)),
        "component_group": G,
    }


def _weight_summary(W) -> dict:
    return {
        "center": W.center,
        "steps": {str(k): W.W(k) for k in sorted(W.steps)},
        "graded_dims": {str(k): d for k, d in W.graded_dims().items()},
    }


def cmd_analyze(args) -> dict:
    spec = _family(args)
    out = {"label": spec.label, "monodromy": [_monodromy_summary(T) for T in spec.monodromy]}
    if spec.F0 is not None:
        T = spec.monodromy[0]
        mono = MonodromyOperator.from_matrix(T)
        orbit = _orbit(spec, T)
        mhs = limit_mhs(orbit, args.tol)
        out["limit"] = {
            "weight_filtration": _weight_summary(mhs.W),
            "hodge_numbers": {f"{p},{q}": c for (p, q), c in sorted(mhs.graded_hodge_numbers.items())},
            "hypothesis_C": check_hypothesis_C(orbit, args.tol),
        }
        fibers = {"ggk": _fiber_summary(ggk_fiber0(orbit)), "bps": _fiber_summary(bps_fiber_curve(T, orbit.F0, args.tol))}
        if mono.unipotent:
            fibers["zucker"] = _fiber_summary(zucker_fiber0(orbit, T))
        out["fibers"] = fibers
    if len(spec.monodromy) == 2:
        out["link_cohomology"] = _link_summary(*spec.monodromy)
    return out


def cmd_component_group(args) -> dict:
    spec = _family(args)
    T = spec.monodromy[0]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonUnipotentWarning)
        G = component_group(T)
    f = component_group_formulas(T)
    return {
        "label": spec.label,
        "component_group": G,
        "torsion": list(G.torsion),
        "formulas": {"cokernel": f.cokernel, "saturation": f.saturation, "enumeration": f.enumeration},
        "unipotent_warning": bool(caught),
    }


def cmd_limit_filtration(args) -> dict:
    spec = _family(args)
    mono = MonodromyOperator.from_matrix(spec.monodromy[0])
    W = weight_monodromy_filtration(mono.N, spec.weight)
    out = {"label": spec.label, "N": mono.N, "weight_filtration": _weight_summary(W)}
    if spec.F0 is not None:
        mhs = limit_mhs(_orbit(spec), args.tol)
        out["hodge_numbers"] = {f"{p},{q}": c for (p, q), c in sorted(mhs.graded_hodge_numbers.items())}
    return out


def cmd_fiber(args) -> dict:
    spec = _family(args)
    T = spec.monodromy[0]
    if args.model == "bps":
        F0 = None
        if spec.F0 is not None:
            F0 = np.array(spec.F0, dtype=complex).T.reshape(spec.n, len(spec.F0))
        return {"model": "bps", "fiber": _fiber_summary(bps_fiber_curve(T, F0, args.tol))}
    orbit = _orbit(spec)
    if args.model == "zucker":
        return {"model": "zucker", "fiber": _fiber_summary(zucker_fiber0(orbit, T))}
    if args.model == "ggk":
        return {"model": "ggk", "fiber": _fiber_summary(ggk_fiber0(orbit, T))}
    mf = clemens_fiber(orbit, T)
    return {
        "model": "clemens",
        "fiber": _fiber_summary(mf.identity_component),
        "components": mf.components,
        "component_count": mf.component_count,
    }


def _nf(args, spec: FamilySpec):
    return parse_normal_function(_read(args.nf), spec.n)


def cmd_nf_check(args) -> dict:
    spec = _family(args)
    T = spec.monodromy[0]
    nf = _nf(args, spec)
    a, b = check_admissible(nf, T)
    cls = cohomology_class_curve(nf, T)
    return {
        "defect": monodromy_defect(nf, T),
        "growth_ok": a,
        "defect_ok": b,
        "class": {"value": list(cls.value), "group": cls.group, "torsion": cls.torsion},
    }


def cmd_nf_extend(args) -> dict:
    spec = _family(args)
    T = spec.monodromy[0]
    nf = _nf(args, spec)
    orbit = _orbit(spec)
    out: dict = {}
    try:
        out["zucker_limit"] = zucker_limit(nf, T, orbit).coords
        out["extendable"] = True
    except NotExtendable as exc:
        out["extendable"] = False
        out["obstruction"] = {"value": list(exc.cohomology_class.value), "group": exc.cohomology_class.group}
    point = clemens_extend(nf, T, orbit)
    out["clemens"] = {"component": list(point.component), "coordinate": point.coordinate.coords}
    return out


def _link_summary(T1, T2) -> dict:
    lc = link_cohomology_bidisk(T1, T2)
    adm = admissible_class_subgroup(lc, T1, T2)
    return {
        "h0": lc.h0,
        "h1": lc.h1,
        "h1_basis": [[list(a), list(b)] for a, b in lc.h1_basis],
        "admissible": {
            "group": adm.group,
            "generators": [[list(a), list(b)] for a, b in adm.generators],
            "classes": [list(c) for c in adm.generator_classes],
        },
    }


def cmd_link_cohomology(args) -> dict:
    spec = _family(args)
    if len(spec.monodromy) != 2:
        raise SchemaError("$.monodromy: link-cohomology needs two matrices")
    return {"label": spec.label, **_link_summary(*spec.monodromy)}


def probe_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in report.samples:
        w.writerow([
            s.j, repr(s.t1.real), repr(s.t1.imag), repr(s.t2.real), repr(s.t2.imag),
            repr(s.representative.real), repr(s.representative.imag), s.k,
        ])
    return buf.getvalue()


def cmd_probe_hausdorff(args) -> dict:
    report = hausdorff_probe(BidiskFamilyConfig(), NuPAlpha(args.p, args.alpha), args.beta, args.samples)
    Path(args.csv).write_text(probe_csv(report), encoding="utf-8")
    return {
        "p": report.p,
        "alpha": report.alpha,
        "beta": report.beta,
        "samples": len(report.samples),
        "limit_chart0": report.limit_chart0,
        "extended_component": report.extended_component,
        "verdict": report.verdict,
        "csv": args.csv,
    }


COMMANDS = {
    "analyze": cmd_analyze,
    "component-group": cmd_component_group,
    "limit-filtration": cmd_limit_filtration,
    "fiber": cmd_fiber,
    "nf-check": cmd_nf_check,
    "nf-extend": cmd_nf_extend,
    "link-cohomology": cmd_link_cohomology,
    "probe-hausdorff": cmd_probe_hausdorff,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative rank tolerance (default 1e-9)")
    parser = _Parser(prog="neronkit", description="Neron models of degenerating weight -1 variations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("analyze", "component-group", "limit-filtration", "link-cohomology"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--family", required=True)
    p = sub.add_parser("fiber", parents=[common])
    p.add_argument("--family", required=True)
    p.add_argument("--model", choices=["zucker", "clemens", "ggk", "bps"], default="zucker")
    for name in ("nf-check", "nf-extend"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--family", required=True)
        p.add_argument("--nf", required=True)
    p = sub.add_parser("probe-hausdorff", parents=[common])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--alpha", type=_complex_arg, default=complex(1))
    p.add_argument("--beta", type=_complex_arg, default=complex(1))
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--csv", default="probe_hausdorff.csv")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except NeronError as exc:
        print(f"neronkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    tree = encode({"command": args.command, "tol": args.tol, "result": result})
    text = dumps(tree)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))
