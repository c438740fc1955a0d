"""Exception hierarchy.

Every failure mode that callers are expected to branch on gets its own
class; everything derives from StarkVerifyError so the CLI can map any
of them to exit code 3.
"""

from __future__ import annotations


class StarkVerifyError(Exception):
    pass


# --- number field arithmetic ---

class DivisionByZero(StarkVerifyError, ZeroDivisionError):
    pass


class NonInvertible(StarkVerifyError):
    """gcd(b, p) != 1; signals a non-squarefree or corrupt modulus."""


class NotAnAutomorphism(StarkVerifyError):
    pass


class RefinementEscapedInterval(StarkVerifyError):
    pass


class PrecisionExhausted(StarkVerifyError):
    pass


# --- group algebra ---

class NotClosed(StarkVerifyError):
    pass


class NotAbelian(StarkVerifyError):
    pass


class NoIdentity(StarkVerifyError):
    pass


class DomainMismatch(StarkVerifyError):
    pass


class NotGaloisStable(StarkVerifyError):
    pass


class RoundingExceededTolerance(StarkVerifyError):
    pass


# --- places ---

class ValuationUnavailable(StarkVerifyError):
    pass


class HypothesisViolated(StarkVerifyError):
    pass


class ActionMismatch(StarkVerifyError):
    pass


# --- S-unit lattice ---

class NotInLattice(StarkVerifyError):
    pass


class NonIntegralCoefficients(StarkVerifyError):
    pass


class SingularMatrix(StarkVerifyError):
    pass


class InfiniteIndex(StarkVerifyError):
    pass


# --- Artin systems ---

class DominanceFailed(StarkVerifyError):
    def __init__(self, message: str, place_index: int | None = None):
        super().__init__(message)
        self.place_index = place_index


class SingularSubmatrix(StarkVerifyError):
    pass


class KernelRankNotOne(StarkVerifyError):
    pass


# --- Stark stage ---

class RegulatorVanishes(StarkVerifyError):
    pass


class MissingLValue(StarkVerifyError):
    pass


class ConjugationAsymmetry(StarkVerifyError):
    pass


class RecognitionFailed(StarkVerifyError):
    def __init__(self, message: str, best: object = None, residual: object = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


# --- Popescu stage ---

class UnsupportedRank(StarkVerifyError):
    pass


class NonCyclicGroup(StarkVerifyError):
    pass


# --- class groups ---

class ActionNotWellDefined(StarkVerifyError):
    pass


# --- bundles ---

class SchemaError(StarkVerifyError):
    pass


class ValidationError(StarkVerifyError):
    """Carries the full list of violations found in a bundle."""

    def __init__(self, violations: list[str]):
        super().__init__("bundle validation failed:\n" + "\n".join(violations))
        self.violations = violations
