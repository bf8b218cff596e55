"""Hanf formulas ∃^{≥k} y sph_τ(x̄, y) and Boolean combinations of them."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from fomod.errors import DomainError
from fomod.logic.prop import Leaf, eval_prop, props_used, substitute_props
from fomod.logic.sphere_formula import sphere_formula
from fomod.logic.sugar import at_least_k
from fomod.logic.syntax import Formula, VarSupply, children
from fomod.model.io import format_structure_block
from fomod.model.spheres import Sphere, sphere_key
from fomod.model.structure import Structure


@dataclass(frozen=True)
class HanfFormula:
    """At least ``k`` elements y realise ``sphere`` together with the free variables.

    The sphere has one centre per free variable followed by the centre of y.
    """

    k: int
    sphere: Sphere
    free: tuple[str, ...] = ()
    counted: str = "y"

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("Hanf formulas need a threshold k ≥ 1")
        if len(self.free) + 1 != len(self.sphere.centres):
            raise DomainError("a Hanf formula needs one centre per free variable plus the counted one")
        if self.counted in self.free:
            raise DomainError(f"counted variable {self.counted} is also free")

    @property
    def radius(self) -> int:
        return self.sphere.radius

    def count(self, A: Structure, assignment: Mapping[str, int] | None = None) -> int:
        assignment = assignment or {}
        try:
            abar = tuple(assignment[x] for x in self.free)
        except KeyError as exc:
            raise DomainError(f"unassigned free variable {exc}") from None
        key = self.sphere.key
        return sum(1 for b in A.universe if sphere_key(A, abar + (b,), self.radius) == key)

    def holds(self, A: Structure, assignment: Mapping[str, int] | None = None) -> bool:
        if A.signature != self.sphere.signature:
            raise DomainError("structure and Hanf formula use different signatures")
        return self.count(A, assignment) >= self.k

    def to_formula(self, supply: VarSupply | None = None) -> Formula:
        supply = supply or VarSupply(set(self.free) | {self.counted}, prefix="u")
        body = sphere_formula(self.sphere, self.free + (self.counted,), supply)
        return at_least_k(self.k, self.counted, body, supply)

    def describe(self) -> str:
        """One-line text form: ``Ege k y. sph[r; centres; structure]``."""
        centres = ",".join(str(c) for c in self.sphere.centres)
        block = " ".join(line.strip() for line in format_structure_block("T", self.sphere.structure).splitlines()[1:-1])
        free = ",".join(self.free + (self.counted,))
        return f"Ege {self.k} {self.counted}. sph({free})[radius {self.radius}; centres ({centres}); {block}]"


@dataclass(frozen=True)
class HanfRef(Leaf):
    """Leaf H_i of a Hanf normal form skeleton (1-based)."""

    index: int

    @property
    def name(self) -> str:
        return f"H_{self.index}"


@dataclass(frozen=True)
class HanfNormalForm:
    """A Boolean combination ``skeleton`` over leaves H_1..H_L standing for ``atoms``."""

    atoms: tuple[HanfFormula, ...]
    skeleton: Formula

    def __post_init__(self):
        for ref in props_used(self.skeleton):
            if not isinstance(ref, HanfRef) or not 1 <= ref.index <= len(self.atoms):
                raise DomainError(f"skeleton leaf {ref.name} has no Hanf formula")

    def evaluate(self, A: Structure, assignment: Mapping[str, int] | None = None) -> bool:
        truth = {HanfRef(i + 1): atom.holds(A, assignment) for i, atom in enumerate(self.atoms)}
        return eval_prop(self.skeleton, truth)

    def to_formula(self) -> Formula:
        return substitute_props(
            self.skeleton, {HanfRef(i + 1): atom.to_formula() for i, atom in enumerate(self.atoms)}
        )

    def format(self) -> str:
        lines = ["hnf {"]
        lines += [f"  H_{i} = {atom.describe()}" for i, atom in enumerate(self.atoms, start=1)]
        lines.append(f"  formula = {self.skeleton}")
        lines.append("}")
        return "\n".join(lines)


def is_boolean_combination(phi: Formula) -> bool:
    """True iff ``phi`` uses only connectives, constants and leaves."""
    from fomod.logic.syntax import Atom, Eq, Exists, Forall, ModExists

    if isinstance(phi, (Atom, Eq, Exists, Forall, ModExists)):
        return False
    return all(is_boolean_combination(c) for c in children(phi))
