"""Rewriting preserved sentences, minimal models and the minimal-model bounds."""
from typing import Annotated, Optional

import typer

from fomod.cli.common import (
    ClassOpt,
    EmitOpt,
    FormulaOpt,
    NuOpt,
    SigOpt,
    app,
    emit,
    load_formula,
    new_budget,
    resolve_class,
    settings,
)
from fomod.config import DEFAULT_NU, DEFAULT_SIGNATURE, BoundSource, Emit, ExitCode
from fomod.errors import DomainError
from fomod.logic.measures import moduli_lcm, qr, size
from fomod.model.io import format_structure, format_structures
from fomod.model.nu import parse_nu
from fomod.model.signature import Signature
from fomod.preservation.bounds import BoundParams, bound_extensions, bound_homomorphisms
from fomod.preservation.oracles import (
    Violation,
    check_preserved_extensions,
    check_preserved_homomorphisms,
    find_minimal_models,
    refute_small_existential,
    resolve_bound,
)
from fomod.preservation.rewrite import existential_positive_rewrite, existential_rewrite
from fomod.reports import BoundsReport, CounterexampleReport, FormulaReport, StructureRecord, StructuresReport

BoundOpt = Annotated[
    str, typer.Option("--bound", help="Minimal-model bound N: an integer, 'empirical' (needs --cap) or 'symbolic'.")
]
OptionalCapOpt = Annotated[Optional[int], typer.Option("--cap", help="Largest structure size to enumerate.")]
SpheresOpt = Annotated[Optional[int], typer.Option("--s", help="Number of r-spheres, if known.")]
BigSpheresOpt = Annotated[Optional[int], typer.Option("--S", help="Number of R-spheres, if known.")]


def _bound_source(text: str) -> tuple[BoundSource, int | None]:
    if text.isdigit():
        return BoundSource.VALUE, int(text)
    try:
        return BoundSource(text), None
    except ValueError:
        raise DomainError(f"--bound must be an integer, 'empirical' or 'symbolic', not {text!r}") from None


def _need_cap(cap: int | None, what: str) -> int:
    if cap is None:
        raise DomainError(f"{what} needs --cap")
    return cap


def _violation_text(v: Violation, kind: str) -> str:
    mapping = " ".join(f"{a}->{b}" for a, b in sorted(v.mapping.items()))
    comment = f"the smaller structure satisfies the sentence, the larger does not; {kind}: {mapping}"
    return format_structures([("smaller", v.smaller), ("larger", v.larger)], comment)


def _rewrite(
    command: str,
    formula: str,
    bound: str,
    cap: int | None,
    sig: str,
    cls: str,
    nu: str,
    s: int | None,
    S: int | None,
    check_preserved: bool,
    emit_as: Emit,
) -> ExitCode:
    signature = Signature.parse(sig)
    phi = load_formula(formula, signature)
    bound_nu = parse_nu(nu)
    klass = resolve_class(cls, bound_nu)
    budget = new_budget()
    extensions = command == "rewrite-ext"
    if check_preserved:
        check = check_preserved_extensions if extensions else check_preserved_homomorphisms
        v = check(phi, klass, _need_cap(cap, "--check-preserved"), signature, budget, settings.progress)
        if v is not None:
            report = CounterexampleReport(command=command, cap=cap, found=True, counterexample=StructureRecord.of(v.larger, "larger"))
            emit(emit_as, _violation_text(v, "embedding" if extensions else "homomorphism"), report)
            return ExitCode.FALSE
    source, value = _bound_source(bound)
    N = resolve_bound(
        phi,
        source,
        preserved_under="extensions" if extensions else "homomorphisms",
        value=value,
        cls=klass,
        cap=cap,
        sig=signature,
        nu=bound_nu,
        s=s,
        S=S,
        budget=budget,
    )
    if extensions:
        psi = existential_rewrite(phi, N)
    else:
        psi = existential_positive_rewrite(phi, N, klass, signature, budget, settings.progress)
    report = FormulaReport(command=command, formula=str(psi), size=size(psi), quantifier_rank=qr(psi), bound=N)
    emit(emit_as, str(psi), report)
    return ExitCode.OK


@app.command("rewrite-ext")
def rewrite_ext_command(
    formula: FormulaOpt,
    bound: BoundOpt = "empirical",
    cap: OptionalCapOpt = None,
    sig: SigOpt = DEFAULT_SIGNATURE,
    cls: ClassOpt = "all",
    nu: NuOpt = DEFAULT_NU,
    s: SpheresOpt = None,
    S: BigSpheresOpt = None,
    check_preserved: Annotated[
        bool, typer.Option("--check-preserved", help="First search for a violation of preservation up to --cap.")
    ] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Rewrite a sentence preserved under extensions into an existential sentence."""
    return _rewrite("rewrite-ext", formula, bound, cap, sig, cls, nu, s, S, check_preserved, emit_as)


@app.command("rewrite-hom")
def rewrite_hom_command(
    formula: FormulaOpt,
    bound: BoundOpt = "empirical",
    cap: OptionalCapOpt = None,
    sig: SigOpt = DEFAULT_SIGNATURE,
    cls: ClassOpt = "all",
    nu: NuOpt = DEFAULT_NU,
    s: SpheresOpt = None,
    S: BigSpheresOpt = None,
    check_preserved: Annotated[
        bool, typer.Option("--check-preserved", help="First search for a violation of preservation up to --cap.")
    ] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Rewrite a sentence preserved under homomorphisms into an existential-positive sentence."""
    return _rewrite("rewrite-hom", formula, bound, cap, sig, cls, nu, s, S, check_preserved, emit_as)


@app.command("minimal-models")
def minimal_models_command(
    formula: FormulaOpt,
    cap: Annotated[int, typer.Option("--cap", help="Largest structure size to enumerate.")],
    sig: SigOpt = DEFAULT_SIGNATURE,
    cls: ClassOpt = "all",
    nu: NuOpt = DEFAULT_NU,
    refute_k: Annotated[
        Optional[int],
        typer.Option("--refute-k", help="Also test whether an existential sentence with k variables can be equivalent."),
    ] = None,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """List the class-minimal models up to the cap, one per isomorphism type."""
    signature = Signature.parse(sig)
    phi = load_formula(formula, signature)
    klass = resolve_class(cls, parse_nu(nu))
    budget = new_budget()
    found = find_minimal_models(phi, cap, klass, signature, budget, settings.progress)
    comment = f"{len(found)} minimal models in {klass.name} up to size {cap}"
    items = [(f"M{i}", A) for i, A in enumerate(found, start=1)]
    text = format_structures(items, comment) if items else f"# {comment}"
    report = StructuresReport(
        command="minimal-models", comment=comment, structures=[StructureRecord.of(A, name) for name, A in items]
    )
    if refute_k is None:
        emit(emit_as, text, report)
        return ExitCode.OK
    ref = refute_small_existential(phi, refute_k, klass, cap, signature, budget)
    if not ref.refuted:
        note = f"an existential sentence with {refute_k} variables agrees on {ref.structures} structures"
        report.comment = f"{comment}; {note}"
        emit(emit_as, f"{text}\n# {note}", report)
        return ExitCode.OK
    note = f"no existential sentence with {refute_k} variables is equivalent on {klass.name} up to size {cap}"
    report.comment = f"{comment}; {note}"
    report.structures.append(StructureRecord.of(ref.witness, "witness"))
    witness = format_structure(ref.witness, "witness", comment=f"{note}; every {refute_k}-type of this model occurs in a non-model")
    emit(emit_as, f"{text}\n{witness}", report)
    return ExitCode.FALSE


@app.command("bounds")
def bounds_command(
    q: Annotated[Optional[int], typer.Option("--q", help="Quantifier rank.")] = None,
    m: Annotated[int, typer.Option("--m", help="Least common multiple of the moduli.")] = 1,
    formula: Annotated[
        Optional[str], typer.Option("--formula", help="Read q and m off this sentence instead.")
    ] = None,
    sig: SigOpt = DEFAULT_SIGNATURE,
    nu: NuOpt = DEFAULT_NU,
    s: SpheresOpt = None,
    S: BigSpheresOpt = None,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Instantiate the minimal-model size bounds for extensions and homomorphisms."""
    signature = Signature.parse(sig)
    if formula is not None:
        phi = load_formula(formula, signature)
        q, m = qr(phi), moduli_lcm(phi)
    if q is None:
        raise DomainError("bounds needs --q or --formula")
    bound_nu = parse_nu(nu)
    params = BoundParams(m=m, q=q, nu=bound_nu, s=s, S=S)
    budget = new_budget()
    ext = bound_extensions(params, signature, budget)
    hom = bound_homomorphisms(params, signature, budget)
    report = BoundsReport(
        nu=str(bound_nu), q=q, m=m, signature_size=signature.size, extensions=ext, homomorphisms=hom
    )
    emit(emit_as, f"extensions {ext}\nhomomorphisms {hom}", report)
    return ExitCode.OK
