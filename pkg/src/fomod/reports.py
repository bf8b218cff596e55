"""Typed JSON payloads of the ``fomod`` commands and the HNF certificate.

Every ``--emit json`` output is one of the models below, tagged by ``kind``
so that tools reading the output can dispatch on it. The certificate of an
HNF conversion can also be written to disk next to other run artifacts.
"""
from __future__ import annotations

from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter

from fomod.model.structure import Structure

SCHEMA_VERSION = 1
CERTIFICATE_FILENAME = "certificate.json"


class StructureRecord(BaseModel):
    """A structure in JSON form; tuples are lists of elements, unary ones included."""

    name: str = "A"
    signature: str
    size: int
    relations: dict[str, list[list[int]]]

    @classmethod
    def of(cls, A: Structure, name: str = "A") -> StructureRecord:
        return cls(
            name=name,
            signature=str(A.signature),
            size=A.size,
            relations={rel: [list(t) for t in sorted(tuples)] for rel, tuples in A.items()},
        )


class BucketRecord(BaseModel):
    """One Hanf-type bucket of an HNF run."""

    digest: str
    members: int
    value: bool
    representative: str


class HnfCertificate(BaseModel):
    """What an HNF conversion checked, and up to which size.

    Equivalence is only established on the witnesses: ``complete`` is always
    false, it is recorded so that readers of the JSON do not have to know it.
    """

    schema_version: int = SCHEMA_VERSION
    kind: Literal["hnf_certificate"] = "hnf_certificate"
    formula: str
    signature: str
    nu: str
    witness_cap: int
    up_to_iso: bool
    witnesses: int
    quantifier_rank: int
    modulus: int
    radius: int
    radius_used: int
    threshold: int
    consistent: bool = True
    complete: bool = False
    buckets: list[BucketRecord]

    def format(self) -> str:
        lines = [
            "certificate {",
            f"  formula = {self.formula}",
            f"  signature = {self.signature} ; nu = {self.nu}",
            f"  witness_cap = {self.witness_cap} ; up_to_iso = {str(self.up_to_iso).lower()} ; witnesses = {self.witnesses}",
            f"  q = {self.quantifier_rank} ; m = {self.modulus} ; r = {self.radius} ; r_used = {self.radius_used} ; t = {self.threshold}",
            f"  consistent = {str(self.consistent).lower()} ; buckets = {len(self.buckets)}",
        ]
        for b in self.buckets:
            lines.append(f"  bucket {b.digest} members={b.members} value={str(b.value).lower()}")
            lines += ["    " + line for line in b.representative.splitlines()]
        lines.append("}")
        return "\n".join(lines)


class VerdictReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["verdict"] = "verdict"
    command: str
    holds: bool
    detail: Optional[str] = None


class CounterexampleReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["counterexample"] = "counterexample"
    command: str
    cap: int
    found: bool
    counterexample: Optional[StructureRecord] = None


class StructuresReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["structures"] = "structures"
    command: str
    comment: Optional[str] = None
    structures: list[StructureRecord]


class SphereRecord(BaseModel):
    centres: list[int]
    structure: StructureRecord


class SpheresReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["spheres"] = "spheres"
    radius: int
    centres: int
    nu: str
    count: int
    spheres: list[SphereRecord]


class HanfEntryRecord(BaseModel):
    sphere: SphereRecord
    truncated: int
    residue: int


class HanfTypeReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["hanf_type"] = "hanf_type"
    radius: int
    threshold: int
    modulus: int
    digest: str
    entries: list[HanfEntryRecord]


class FormulaReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["formula"] = "formula"
    command: str
    formula: str
    size: int
    quantifier_rank: int
    bound: Optional[int] = None


class HnfReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["hnf"] = "hnf"
    atoms: list[str]
    skeleton: str
    formula: str
    certificate: HnfCertificate


class BoundsReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["bounds"] = "bounds"
    nu: str
    q: int
    m: int
    signature_size: int
    extensions: int
    homomorphisms: int


class DecompositionReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["decomposition"] = "decomposition"
    s: int
    variables: list[str]
    deltas: list[list[str]]
    beta: str


class NumberReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["number"] = "number"
    h: int
    values: list[Optional[int]]


Payload = Annotated[
    Union[
        HnfCertificate,
        VerdictReport,
        CounterexampleReport,
        StructuresReport,
        SpheresReport,
        HanfTypeReport,
        FormulaReport,
        HnfReport,
        BoundsReport,
        DecompositionReport,
        NumberReport,
    ],
    Field(discriminator="kind"),
]

PAYLOAD_ADAPTER: TypeAdapter = TypeAdapter(Payload)


def save_certificate(cert: HnfCertificate, save_dir: Union[str, Path]) -> Path:
    """Write ``certificate.json`` inside ``save_dir``. Returns the written file path."""
    path = Path(save_dir) / CERTIFICATE_FILENAME
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cert.model_dump_json(indent=2))
    return path


def load_certificate(save_dir: Union[str, Path]) -> HnfCertificate:
    path = Path(save_dir) / CERTIFICATE_FILENAME
    return HnfCertificate.model_validate_json(path.read_text())


def load_payload(text: str):
    """Parse any ``--emit json`` output back into its model."""
    return PAYLOAD_ADAPTER.validate_json(text)
