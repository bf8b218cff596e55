"""Disjoint decompositions, sums and products of structures, and transductions."""
import logging
from enum import StrEnum
from typing import Annotated, Optional

import typer

from fomod.cli.common import (
    EmitOpt,
    FormulaOpt,
    NuOpt,
    SigOpt,
    app,
    emit,
    load_formula,
    load_structure,
    load_structures,
    new_budget,
    settings,
)
from fomod.config import DEFAULT_NU, DEFAULT_SIGNATURE, Emit, ExitCode
from fomod.errors import DomainError
from fomod.fv.decompose import decompose
from fomod.fv.lower_bound import refute_decomposition
from fomod.fv.reduction import ReductionSequence, delta_formula, eval_reduction, format_reduction, parse_reduction
from fomod.fv.transduction import (
    apply_transduction_formula,
    apply_transduction_structure,
    decompose_product,
    parse_transduction,
)
from fomod.logic.measures import qr, size
from fomod.model.io import format_structure, product_comment
from fomod.model.nu import parse_nu
from fomod.model.signature import Signature
from fomod.model.structure import direct_product, disjoint_sum, disjoint_union
from fomod.paths import read_text_argument
from fomod.reports import DecompositionReport, FormulaReport, StructureRecord, StructuresReport, VerdictReport

logger = logging.getLogger(__name__)


class Combine(StrEnum):
    """How ``product`` combines the structures of a file."""
    PRODUCT = "product"
    SUM = "sum"
    UNION = "union"


def _decomposition_report(D: ReductionSequence) -> DecompositionReport:
    return DecompositionReport(
        s=D.s,
        variables=list(D.variables),
        deltas=[[str(delta_formula(d)) for d in delta_i] for delta_i in D.deltas],
        beta=str(D.beta),
    )


def _abar(D: ReductionSequence, text: Optional[str]) -> list[tuple[int, int]]:
    """``x=0:2,y=1:0`` places x on element 2 of part 0 and y on element 0 of part 1."""
    placed: dict[str, tuple[int, int]] = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        var, _, where = item.partition("=")
        part, sep, element = where.partition(":")
        if not sep or not part.strip().isdigit() or not element.strip().isdigit():
            raise DomainError(f"bad placement {item!r}, expected VAR=PART:ELEMENT")
        placed[var.strip()] = (int(part), int(element))
    missing = [v for v in D.variables if v not in placed]
    if missing:
        raise DomainError(f"no element given for {', '.join(missing)}")
    return [placed[v] for v in D.variables]


@app.command("fv-decompose")
def fv_decompose_command(
    formula: FormulaOpt,
    s: Annotated[int, typer.Option("--s", help="Number of parts.")],
    witness_cap: Annotated[int, typer.Option("--witness-cap", help="Largest part size of the witness sums.")],
    sig: SigOpt = DEFAULT_SIGNATURE,
    nu: NuOpt = DEFAULT_NU,
    product: Annotated[
        bool, typer.Option("--product", help="Decompose for the direct product of the parts instead of their sum.")
    ] = False,
    show_certificate: Annotated[bool, typer.Option("--show-certificate", help="Print the certificate too.")] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Decompose a sentence about A_1 ⊕ ... ⊕ A_s (or A_1 ⊗ ... ⊗ A_s) into sentences about the parts."""
    signature = Signature.parse(sig)
    bound = parse_nu(nu)
    budget = new_budget()
    if product:
        phi = load_formula(formula, signature)
        D, cert = decompose_product(phi, s, bound, witness_cap, signature, budget=budget, progress=settings.progress)
    else:
        phi = load_formula(formula, signature.with_partition(s))
        D, cert = decompose(phi, s, bound, witness_cap, signature, budget=budget, progress=settings.progress)
    text = format_reduction(D)
    if show_certificate:
        text += cert.format()
    emit(emit_as, text, _decomposition_report(D))
    return ExitCode.OK


@app.command("fv-eval")
def fv_eval_command(
    decomposition: Annotated[str, typer.Option("--decomposition", help="Decomposition text, or @path.")],
    structures: Annotated[str, typer.Option("--structures", help="File with the parts, in order.")],
    assign: Annotated[
        Optional[str], typer.Option("--assign", help="Free variables as VAR=PART:ELEMENT, parts counted from 0.")
    ] = None,
    refute: Annotated[
        bool,
        typer.Option("--refute", help="Read the file as A_0, A_1, ... and search for a pair the decomposition gets wrong."),
    ] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Evaluate a decomposition on a tuple of parts."""
    D = parse_reduction(read_text_argument(decomposition))
    parts = [A for _, A in load_structures(structures)]
    if refute:
        collision = refute_decomposition(D, parts)
        if collision is None:
            text = f"no pair among {len(parts)} structures is answered wrongly"
            emit(emit_as, text, VerdictReport(command="fv-eval", holds=True, detail=text))
            return ExitCode.OK
        how = "equal truth vectors" if collision.pigeonhole else "direct check"
        text = (
            f"pair ({collision.i}, {collision.j}): decomposition says {str(collision.claimed).lower()}, "
            f"expected {str(collision.expected).lower()} ({how})"
        )
        emit(emit_as, text, VerdictReport(command="fv-eval", holds=False, detail=text))
        return ExitCode.FALSE
    holds = eval_reduction(D, parts, _abar(D, assign))
    emit(emit_as, str(holds).lower(), VerdictReport(command="fv-eval", holds=holds))
    return ExitCode.OK if holds else ExitCode.FALSE


@app.command("product")
def product_command(
    structures: Annotated[str, typer.Option("--structures", help="File with the structures to combine.")],
    kind: Annotated[Combine, typer.Option("--kind", help="Direct product, disjoint sum or disjoint union.")] = Combine.PRODUCT,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Combine the structures of a file."""
    parts = [A for _, A in load_structures(structures)]
    if kind == Combine.PRODUCT:
        result = direct_product(parts)
        comment = product_comment([A.size for A in parts])
    else:
        result, origin = (disjoint_sum if kind == Combine.SUM else disjoint_union)(parts)
        comment = "element origins (part, element): " + " ".join(f"{i}=({p},{a})" for i, (p, a) in enumerate(origin))
    text = format_structure(result, kind.value, comment)
    report = StructuresReport(command="product", comment=comment, structures=[StructureRecord.of(result, kind.value)])
    emit(emit_as, text, report)
    return ExitCode.OK


@app.command("transduce")
def transduce_command(
    transduction: Annotated[str, typer.Option("--transduction", help="Transduction text, or @path.")],
    structure: Annotated[Optional[str], typer.Option("--structure", help="Apply to this structure file.")] = None,
    formula: Annotated[
        Optional[str], typer.Option("--formula", help="Translate this formula over the target signature.")
    ] = None,
    sig: SigOpt = DEFAULT_SIGNATURE,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Apply a transduction to a structure, or translate a formula backwards through it."""
    if (structure is None) == (formula is None):
        raise DomainError("transduce needs exactly one of --structure and --formula")
    text = read_text_argument(transduction)
    if structure is not None:
        A = load_structure(structure)
        T = parse_transduction(text, A.signature)
        B = apply_transduction_structure(T, A, new_budget())
        comment = f"elements are the {T.t}-tuples satisfying theta, in lexicographic order"
        report = StructuresReport(command="transduce", comment=comment, structures=[StructureRecord.of(B, "image")])
        emit(emit_as, format_structure(B, "image", comment), report)
        return ExitCode.OK
    T = parse_transduction(text, Signature.parse(sig))
    phi = load_formula(formula, T.target)
    psi = apply_transduction_formula(T, phi)
    logger.info("transduction of dimension %d, parameter rank %d", T.t, T.parameter_rank)
    report = FormulaReport(command="transduce", formula=str(psi), size=size(psi), quantifier_rank=qr(psi))
    emit(emit_as, str(psi), report)
    return ExitCode.OK
