"""Explicit simplification pass: constant folding and flattening of ⋀/⋁.

Nothing else in the package simplifies implicitly, so formula sizes stay
exactly those of the constructions that produced them.
"""
from __future__ import annotations

from fomod.logic.syntax import (
    FALSE,
    TRUE,
    And,
    Bottom,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    ModExists,
    Not,
    Or,
    Top,
    conj,
    disj,
)


def normalize(phi: Formula) -> Formula:
    match phi:
        case Not(body):
            inner = normalize(body)
            match inner:
                case Top():
                    return FALSE
                case Bottom():
                    return TRUE
                case Not(again):
                    return again
            return Not(inner)
        case And(parts):
            flat: list[Formula] = []
            for p in map(normalize, parts):
                if isinstance(p, Bottom):
                    return FALSE
                if isinstance(p, And):
                    flat.extend(p.parts)
                elif not isinstance(p, Top):
                    flat.append(p)
            return conj(flat)
        case Or(parts):
            flat = []
            for p in map(normalize, parts):
                if isinstance(p, Top):
                    return TRUE
                if isinstance(p, Or):
                    flat.extend(p.parts)
                elif not isinstance(p, Bottom):
                    flat.append(p)
            return disj(flat)
        case Implies(left, right):
            left, right = normalize(left), normalize(right)
            if isinstance(left, Bottom) or isinstance(right, Top):
                return TRUE
            if isinstance(left, Top):
                return right
            if isinstance(right, Bottom):
                return normalize(Not(left))
            return Implies(left, right)
        case Iff(left, right):
            left, right = normalize(left), normalize(right)
            if isinstance(left, Top):
                return right
            if isinstance(right, Top):
                return left
            if isinstance(left, Bottom):
                return normalize(Not(right))
            if isinstance(right, Bottom):
                return normalize(Not(left))
            return Iff(left, right)
        case Exists(v, body):
            body = normalize(body)
            # the universe is never empty
            if isinstance(body, (Top, Bottom)):
                return body
            return Exists(v, body)
        case Forall(v, body):
            body = normalize(body)
            if isinstance(body, (Top, Bottom)):
                return body
            return Forall(v, body)
        case ModExists(m, v, body):
            body = normalize(body)
            if isinstance(body, Bottom):
                return TRUE
            return ModExists(m, v, body)
    return phi
