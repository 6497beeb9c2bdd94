"""Small reference matrices used by the tests, the CLI examples and the README."""

from __future__ import annotations

from .concepts import ConceptCharacterization, literal
from .matrix import ModularityMatrix, build_matrix

ATM_STRUCTORS = ("bank-account", "checking-account", "savings-account", "touch-screen", "security-unit")
ATM_FUNCTIONALS = (
    "open-account",
    "withdraw/deposit-cash",
    "calculate-interest",
    "touch-to-choose-operation",
    "encrypt/decrypt-message",
)
ATM_ELEMENTS = (
    (1, 1, 1, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
    (0, 0, 0, 0, 1),
)


def atm() -> ModularityMatrix:
    """The simplified ATM matrix: a 3x3 bank-accounts block and two 1x1 blocks."""
    return build_matrix(ATM_STRUCTORS, ATM_FUNCTIONALS, ATM_ELEMENTS)


def atm_duplicated_column() -> ModularityMatrix:
    """ATM with a sixth structor identical to checking-account."""
    rows = [list(r) + [r[1]] for r in ATM_ELEMENTS]
    return build_matrix(ATM_STRUCTORS + ("checking-account-copy",), ATM_FUNCTIONALS, rows)


def two_block_outlier() -> ModularityMatrix:
    """Two 2x2 blocks, three ones each, coupled by a single 1 at (F3, S2).

    The coupled 4x4 module has sparsity 9/16.
    """
    return build_matrix(
        ["S1", "S2", "S3", "S4"],
        ["F1", "F2", "F3", "F4"],
        [
            [1, 1, 0, 0],
            [0, 1, 0, 0],
            [0, 1, 1, 0],
            [0, 0, 1, 1],
        ],
    )


def four_module() -> ModularityMatrix:
    """6x6 block-diagonal matrix with four modules of sizes 2x2, 1x1, 2x2, 1x1."""
    return build_matrix(
        [f"S{j}" for j in range(1, 7)],
        [f"F{i}" for i in range(1, 7)],
        [
            [1, 1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 1, 0],
            [0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ],
    )


def vehicle_characterizations() -> list[ConceptCharacterization]:
    return [
        ConceptCharacterization(
            "bicycle", "vehicle", (("wheels", 2), ("tire-width", literal("narrow")), ("engine", literal("none")))
        ),
        ConceptCharacterization(
            "motorcycle", "vehicle", (("wheels", 2), ("tire-width", literal("wide")), ("engine", literal("one")))
        ),
    ]


def bank_operation_characterizations() -> list[ConceptCharacterization]:
    return [
        ConceptCharacterization(
            "cash-withdrawal",
            "bank-operation",
            (("type", literal("cash")), ("amount", literal("cash-limited")), ("duration", literal("one-day"))),
        ),
        ConceptCharacterization(
            "authorize-mortgage",
            "bank-operation",
            (
                ("type", literal("loan")),
                ("amount", literal("collateral-property-limited")),
                ("duration", literal("long-term")),
            ),
        ),
    ]
