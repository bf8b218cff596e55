"""Evaluation, equivalence, spheres, Hanf types and Hanf normal forms."""
from pathlib import Path
from typing import Annotated, Optional

import typer

from fomod.cli.common import (
    CapOpt,
    ClassOpt,
    EmitOpt,
    FormulaOpt,
    NuOpt,
    SigOpt,
    StructureOpt,
    UpToIsoOpt,
    app,
    emit,
    load_formula,
    load_structures,
    new_budget,
    parse_assignment,
    resolve_class,
    settings,
    stderr,
)
from fomod.config import DEFAULT_NU, DEFAULT_SIGNATURE, Emit, ExitCode
from fomod.errors import DomainError
from fomod.hanf.enumerate import enumerate_spheres
from fomod.hanf.hnf import hnf_convert
from fomod.hanf.oracle import brute_equivalent
from fomod.hanf.types import hanf_type, nurmonen_condition, nurmonen_parameters, sphere_census
from fomod.logic.evaluate import ModelChecker
from fomod.model.io import format_structure, format_structures
from fomod.model.nu import parse_nu
from fomod.model.signature import Signature
from fomod.paths import certificate_dir
from fomod.reports import (
    CounterexampleReport,
    HanfEntryRecord,
    HanfTypeReport,
    HnfReport,
    SphereRecord,
    SpheresReport,
    StructureRecord,
    VerdictReport,
    save_certificate,
)


def _bool(value: bool) -> str:
    return "true" if value else "false"


@app.command("eval")
def eval_command(
    structure: StructureOpt,
    formula: FormulaOpt,
    assign: Annotated[Optional[str], typer.Option("--assign", help="Free variables, e.g. 'x=0,y=2'.")] = None,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Evaluate a formula on every structure of a file."""
    items = load_structures(structure)
    phi = load_formula(formula, items[0][1].signature)
    env = parse_assignment(assign)
    budget = new_budget()
    results = [(name, ModelChecker(A, budget).holds(phi, env)) for name, A in items]
    holds = all(value for _, value in results)
    if len(results) == 1:
        text = _bool(holds)
    else:
        text = "\n".join(f"{name}: {_bool(value)}" for name, value in results)
    detail = ", ".join(f"{name}={_bool(value)}" for name, value in results)
    emit(emit_as, text, VerdictReport(command="eval", holds=holds, detail=detail))
    return ExitCode.OK if holds else ExitCode.FALSE


@app.command("equiv")
def equiv_command(
    phi: Annotated[str, typer.Option("--phi", help="First sentence (or @path).")],
    psi: Annotated[str, typer.Option("--psi", help="Second sentence (or @path).")],
    cap: CapOpt,
    sig: SigOpt = DEFAULT_SIGNATURE,
    cls: ClassOpt = "all",
    nu: NuOpt = DEFAULT_NU,
    up_to_iso: UpToIsoOpt = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Search for a structure of the class on which two sentences disagree."""
    signature = Signature.parse(sig)
    first, second = load_formula(phi, signature), load_formula(psi, signature)
    klass = resolve_class(cls, parse_nu(nu))
    A = brute_equivalent(
        first, second, klass, cap, signature, up_to_iso=up_to_iso, budget=new_budget(), progress=settings.progress
    )
    report = CounterexampleReport(
        command="equiv", cap=cap, found=A is not None, counterexample=None if A is None else StructureRecord.of(A, "counterexample")
    )
    if A is None:
        emit(emit_as, f"equivalent on {klass.name} up to size {cap}", report)
        return ExitCode.OK
    emit(emit_as, format_structure(A, "counterexample", comment="the sentences disagree here"), report)
    return ExitCode.FALSE


@app.command("spheres")
def spheres_command(
    radius: Annotated[int, typer.Option("--r", help="Sphere radius.")],
    centres: Annotated[int, typer.Option("--centres", help="Number of centres.")] = 1,
    sig: SigOpt = DEFAULT_SIGNATURE,
    nu: NuOpt = DEFAULT_NU,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """List every ν-bounded sphere of the given radius, one per isomorphism type."""
    bound = parse_nu(nu)
    found = enumerate_spheres(Signature.parse(sig), bound, radius, centres, new_budget())
    items = [(f"T{i}", t.structure) for i, t in enumerate(found, start=1)]
    lines = [f"{len(found)} spheres of radius {radius} with {centres} centres under nu = {bound}"]
    lines += [f"T{i} centres ({','.join(map(str, t.centres))})" for i, t in enumerate(found, start=1)]
    text = format_structures(items, "\n".join(lines)) if items else lines[0]
    report = SpheresReport(
        radius=radius,
        centres=centres,
        nu=str(bound),
        count=len(found),
        spheres=[
            SphereRecord(centres=list(t.centres), structure=StructureRecord.of(t.structure, name))
            for (name, _), t in zip(items, found)
        ],
    )
    emit(emit_as, text, report)
    return ExitCode.OK


@app.command("hanf-type")
def hanf_type_command(
    structure: StructureOpt,
    radius: Annotated[int, typer.Option("--r", help="Sphere radius.")],
    threshold: Annotated[int, typer.Option("--t", help="Counts are cut off at this threshold.")],
    modulus: Annotated[int, typer.Option("--m", help="Counts are also kept modulo this number.")] = 1,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Print the (r, t, m) Hanf type of the first structure of a file."""
    if threshold < 1 or modulus < 1:
        raise DomainError("threshold and modulus must be positive")
    A = load_structures(structure)[0][1]
    ht = hanf_type(A, radius, threshold, modulus)
    census = sphere_census(A, radius)
    entries = []
    lines = [f"hanf type r={radius} t={threshold} m={modulus} digest={ht.digest()}"]
    for i, (key, truncated, residue) in enumerate(ht.entries, start=1):
        t = census[key][1]
        entries.append(
            HanfEntryRecord(
                sphere=SphereRecord(centres=list(t.centres), structure=StructureRecord.of(t.structure, f"T{i}")),
                truncated=truncated,
                residue=residue,
            )
        )
        lines.append(f"T{i} centre {t.centres[0]} truncated {truncated} residue {residue}")
    items = [(record.sphere.structure.name, census[key][1].structure) for record, (key, _, _) in zip(entries, ht.entries)]
    text = format_structures(items, "\n".join(lines))
    report = HanfTypeReport(radius=radius, threshold=threshold, modulus=modulus, digest=ht.digest(), entries=entries)
    emit(emit_as, text, report)
    return ExitCode.OK


@app.command("nurmonen")
def nurmonen_command(
    structures: Annotated[str, typer.Option("--structures", help="File with the two structures A and B.")],
    q: Annotated[int, typer.Option("--q", help="Quantifier rank.")],
    m: Annotated[int, typer.Option("--m", help="Modulus.")] = 1,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Check the sufficient condition for A and B to agree on all sentences of rank q with moduli dividing m."""
    items = load_structures(structures)
    if len(items) < 2:
        raise DomainError("nurmonen needs two structures")
    (_, A), (_, B) = items[:2]
    r, e, t = nurmonen_parameters(A, B, q)
    holds = nurmonen_condition(A, B, q, m)
    detail = f"r={r} e={e} t={t} m={m}"
    emit(emit_as, f"{_bool(holds)} ({detail})", VerdictReport(command="nurmonen", holds=holds, detail=detail))
    return ExitCode.OK if holds else ExitCode.FALSE


@app.command("hnf")
def hnf_command(
    formula: FormulaOpt,
    witness_cap: Annotated[int, typer.Option("--witness-cap", help="Largest witness size.")],
    sig: SigOpt = DEFAULT_SIGNATURE,
    nu: NuOpt = DEFAULT_NU,
    up_to_iso: UpToIsoOpt = False,
    minimize_radius: Annotated[
        bool, typer.Option("--minimize-radius/--full-radius", help="Emit spheres of the smallest separating radius.")
    ] = True,
    show_certificate: Annotated[bool, typer.Option("--show-certificate", help="Print the certificate too.")] = False,
    save: Annotated[bool, typer.Option("--save-certificate", help="Write certificate.json.")] = False,
    certificate_path: Annotated[
        Optional[Path], typer.Option("--certificate-dir", help="Where --save-certificate writes.")
    ] = None,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Convert a sentence into Hanf normal form, checked on all ν-bounded witnesses up to the cap."""
    signature = Signature.parse(sig)
    phi = load_formula(formula, signature)
    hnf, cert = hnf_convert(
        phi,
        signature,
        parse_nu(nu),
        witness_cap,
        up_to_iso=up_to_iso,
        minimize_radius=minimize_radius,
        budget=new_budget(),
        progress=settings.progress,
    )
    text = hnf.format()
    if show_certificate:
        text += "\n" + cert.format()
    report = HnfReport(
        atoms=[atom.describe() for atom in hnf.atoms],
        skeleton=str(hnf.skeleton),
        formula=str(hnf.to_formula()),
        certificate=cert,
    )
    emit(emit_as, text, report)
    if save:
        path = save_certificate(cert, certificate_path or certificate_dir())
        stderr.print(f"certificate written to {path}")
    return ExitCode.OK
