"""Tree encodings of numbers, the formula families over them, and fixture structures."""
from enum import StrEnum
from typing import Annotated, Optional

import typer
from rich.console import Console

from fomod.cli.common import EmitOpt, StructureOpt, app, emit, load_structure, parse_ints
from fomod.config import Emit, ExitCode
from fomod.encodings import formulas
from fomod.encodings.fixtures import (
    PathVariant,
    c1_members,
    c2_members,
    encoding_forest,
    fv_lower_witnesses,
    fv_premise_holds,
    gen_path_fixture,
)
from fomod.encodings.sentences import PATH_SIGNATURE, endpoints_green, gen_phi_ext, gen_phi_fv, gen_phi_hom, green_endpoint
from fomod.encodings.trees import decode_roots, encode_forest, encode_number, render_tree
from fomod.errors import DomainError
from fomod.logic.measures import qr, size
from fomod.logic.syntax import Formula
from fomod.model.io import format_structure, format_structures
from fomod.reports import FormulaReport, NumberReport, StructureRecord, StructuresReport

HOpt = Annotated[Optional[int], typer.Option("--h", help="Encoding parameter, at least -1.")]


class Family(StrEnum):
    """Formula families printed by ``gen-formula``."""
    DIST_LE = "dist-le"
    DIST_EQ = "dist-eq"
    GAMMA = "gamma"
    GAMMA_ORDERED = "gamma-ordered"
    ENC = "enc"
    MIN = "min"
    MAX = "max"
    EQ = "eq"
    LESS = "less"
    SUCC = "succ"
    PHI_EXT = "phi-ext"
    PHI_HOM = "phi-hom"
    PHI_FV = "phi-fv"
    ENDPOINTS_GREEN = "endpoints-green"
    GREEN_ENDPOINT = "green-endpoint"


class Fixture(StrEnum):
    """Structure families printed by ``fixtures``."""
    PATH = "path"
    CENTRED_PATH = "centred-path"
    C1 = "c1"
    C2 = "c2"
    ORDERED = "ordered"
    COLOURED_ORDERED = "coloured-ordered"
    FV_WITNESSES = "fv-witnesses"


def _need(value: Optional[int], flag: str, what: str) -> int:
    if value is None:
        raise DomainError(f"{what} needs {flag}")
    return value


@app.command("encode-tree")
def encode_tree_command(
    h: Annotated[int, typer.Option("--h", help="Encoding parameter, at least -1.")],
    i: Annotated[Optional[int], typer.Option("--i", help="The number to encode.")] = None,
    values: Annotated[
        Optional[str], typer.Option("--values", help="Comma-separated numbers: encode a forest instead.")
    ] = None,
    slot_order: Annotated[
        Optional[str], typer.Option("--slot-order", help="Permutation of the top attachment slots.")
    ] = None,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Print a binary tree encoding a number (or a forest encoding several)."""
    if (i is None) == (values is None):
        raise DomainError("encode-tree needs exactly one of --i and --values")
    if values is not None:
        numbers = parse_ints(values)
        F = encode_forest(h, numbers)
        comment = f"roots encode {', '.join(map(str, numbers))} with parameter {h}"
    else:
        order = parse_ints(slot_order) if slot_order is not None else None
        F = encode_number(h, i, slot_order=order)
        comment = f"root 0 encodes {i} with parameter {h}"
    report = StructuresReport(command="encode-tree", comment=comment, structures=[StructureRecord.of(F, "encoding")])
    emit(emit_as, format_structure(F, "encoding", comment), report)
    return ExitCode.OK


@app.command("decode-tree")
def decode_tree_command(
    h: Annotated[int, typer.Option("--h", help="Encoding parameter, at least -1.")],
    structure: StructureOpt = "-",
    render: Annotated[bool, typer.Option("--render", help="Also draw the forest with decoded values.")] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Print the number encoded at every root of a binary forest, 'none' where there is none."""
    F = load_structure(structure)
    decoded = decode_roots(F, h)
    text = "\n".join("none" if v is None else str(v) for v in decoded)
    emit(emit_as, text, NumberReport(h=h, values=decoded))
    if render and emit_as == Emit.TEXT:
        Console().print(render_tree(F, h))
    return ExitCode.FALSE if None in decoded else ExitCode.OK


def _family_formula(family: Family, h: Optional[int], d: Optional[int], x: str, y: str) -> Formula:
    match family:
        case Family.DIST_LE:
            return formulas.gen_dist_le(_need(d, "--d", family), x, y)
        case Family.DIST_EQ:
            return formulas.gen_dist_eq(_need(d, "--d", family), x, y)
        case Family.GAMMA:
            return formulas.gen_gamma(_need(d, "--d", family), x)
        case Family.GAMMA_ORDERED:
            return formulas.gen_gamma_ordered(_need(d, "--d", family), x)
        case Family.ENC:
            return formulas.gen_enc(_need(h, "--h", family), x)
        case Family.MIN:
            return formulas.gen_min(_need(h, "--h", family), x)
        case Family.MAX:
            return formulas.gen_max(_need(h, "--h", family), x)
        case Family.EQ:
            return formulas.gen_eq(_need(h, "--h", family), x, y)
        case Family.LESS:
            return formulas.gen_less(_need(h, "--h", family), x, y)
        case Family.SUCC:
            return formulas.gen_succ(_need(h, "--h", family), x, y)
        case Family.PHI_EXT:
            return gen_phi_ext(_need(h, "--h", family))
        case Family.PHI_HOM:
            return gen_phi_hom(_need(h, "--h", family))
        case Family.PHI_FV:
            return gen_phi_fv(_need(h, "--h", family))
        case Family.ENDPOINTS_GREEN:
            return endpoints_green()
        case Family.GREEN_ENDPOINT:
            return green_endpoint()
    raise DomainError(f"unknown family {family}")


@app.command("gen-formula")
def gen_formula_command(
    family: Annotated[Family, typer.Argument(help="Which formula to print.")],
    h: HOpt = None,
    d: Annotated[Optional[int], typer.Option("--d", help="Distance or depth.")] = None,
    x: Annotated[str, typer.Option("--x", help="Name of the first free variable.")] = "x",
    y: Annotated[str, typer.Option("--y", help="Name of the second free variable.")] = "y",
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Print one of the formulas about tree encodings or coloured paths."""
    if x == y:
        raise DomainError("--x and --y must differ")
    phi = _family_formula(family, h, d, x, y)
    report = FormulaReport(command="gen-formula", formula=str(phi), size=size(phi), quantifier_rank=qr(phi))
    emit(emit_as, str(phi), report)
    return ExitCode.OK


@app.command("fixtures")
def fixtures_command(
    kind: Annotated[Fixture, typer.Argument(help="Which structures to print.")],
    n: Annotated[Optional[int], typer.Option("--n", help="Path length or structure size.")] = None,
    h: HOpt = None,
    values: Annotated[Optional[str], typer.Option("--values", help="Numbers encoded by the ordered trees.")] = None,
    height: Annotated[Optional[int], typer.Option("--height", help="Height of the ordered trees.")] = None,
    H: Annotated[Optional[int], typer.Option("--H", help="The witnesses are A_1 .. A_(2^H - 1).")] = None,
    indices: Annotated[Optional[str], typer.Option("--indices", help="Only these witness indices.")] = None,
    check_premise: Annotated[
        bool, typer.Option("--check-premise", help="Check that A_i ⊎ A_j pairs all roots exactly when i = j.")
    ] = False,
    emit_as: EmitOpt = Emit.TEXT,
) -> ExitCode:
    """Print fixture structures: coloured paths, the classes C1 and C2, ordered encodings, FV witnesses."""
    comment = None
    match kind:
        case Fixture.PATH | Fixture.CENTRED_PATH:
            variant = PathVariant.ENDPOINTS if kind == Fixture.PATH else PathVariant.CENTRE
            items = [("P", gen_path_fixture(_need(n, "--n", kind), variant))]
        case Fixture.C1 | Fixture.C2:
            members = c1_members if kind == Fixture.C1 else c2_members
            size_n = _need(n, "--n", kind)
            items = [(f"M{k}", A) for k, A in enumerate(members(PATH_SIGNATURE, size_n), start=1)]
            comment = f"{len(items)} members of {kind.value.upper()} with {size_n} elements, one per isomorphism type"
        case Fixture.ORDERED | Fixture.COLOURED_ORDERED:
            if values is None:
                raise DomainError(f"{kind} needs --values")
            param = _need(h, "--h", kind)
            F = encoding_forest(param, parse_ints(values), height=height, coloured=kind == Fixture.COLOURED_ORDERED)
            items = [("F", F)]
        case Fixture.FV_WITNESSES:
            param, top = _need(h, "--h", kind), _need(H, "--H", kind)
            chosen = parse_ints(indices) if indices is not None else list(range(1, 2**top))
            witnesses = fv_lower_witnesses(param, top, chosen)
            items = [(f"A_{i}", A) for i, A in zip(chosen, witnesses)]
            if check_premise:
                comment = f"premise holds: {str(fv_premise_holds(witnesses, param)).lower()}"
    text = format_structures(items, comment) if items else f"# {comment}"
    report = StructuresReport(
        command="fixtures", comment=comment, structures=[StructureRecord.of(A, name) for name, A in items]
    )
    emit(emit_as, text, report)
    return ExitCode.OK
