"""Wiener-Hopf factorization of matrix functions with finite-group symmetry.

The package handles two matrix shapes built from a finite group G and
rational symbols a_i(t) on the unit circle: the group-algebra form
A(t)_{ij} = a(g_i g_j^{-1}) and the center-algebra form assembled from
conjugacy-class sums.  A constant unitary similarity splits the first
into irreducible diagonal blocks (reducing the factorization problem);
the second diagonalizes outright, so its factorization and partial
indices are computed explicitly.
"""

from .blocks import (
    BlockDiagonal,
    BlockStructure,
    GroupSymbol,
    IndexReport,
    MatrixFactorization,
    assemble_matrix,
    block_diagonalize,
    block_structure,
    convolve,
    factor_block,
    factor_group_symbol,
    factor_triangular_2x2,
    partial_indices,
    symbol_from_blocks,
)
from .center import (
    CenterFactorization,
    CenterSymbol,
    assemble_center_matrix,
    center_diagonalize,
    center_factorize,
)
from .errors import (
    DegreeCapError,
    DocumentError,
    GroupConstructionError,
    IllPosedSymbolError,
    NotInvertibleOnCircleError,
    PartialFactorizationError,
    PoleOnGridError,
    RepValidationError,
    SymbolDivisionError,
    UndersampledError,
    UnsupportedGroupError,
    WhsymmError,
)
from .groups import (
    CATALOG,
    FiniteGroup,
    build_group,
    center_structure,
    commutator_subgroup,
    conjugacy_classes,
)
from .ratmat import RationalMatrix
from .reps import (
    CharacterTable,
    Irrep,
    RepSet,
    center_fourier,
    character_table,
    fourier_matrix,
    irreps_for,
    validate_repset,
)
from .scalar import ScalarFactorization, factor_grid, factor_rational, verify_scalar
from .symbols import (
    CircleGrid,
    LaurentPoly,
    RationalSymbol,
    annulus_coeffs,
    eval_on_grid,
    poly_roots,
    project_high,
    project_low,
    rational_arith,
    winding_index,
)
from .verify import (
    Check,
    VerificationReport,
    det_index_oracle,
    unitarity_check,
    verify_matrix_factorization,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDiagonal",
    "BlockStructure",
    "CATALOG",
    "CenterFactorization",
    "CenterSymbol",
    "CharacterTable",
    "Check",
    "CircleGrid",
    "DegreeCapError",
    "DocumentError",
    "FiniteGroup",
    "GroupConstructionError",
    "GroupSymbol",
    "IllPosedSymbolError",
    "IndexReport",
    "Irrep",
    "LaurentPoly",
    "MatrixFactorization",
    "NotInvertibleOnCircleError",
    "PartialFactorizationError",
    "PoleOnGridError",
    "RationalMatrix",
    "RationalSymbol",
    "RepSet",
    "RepValidationError",
    "ScalarFactorization",
    "SymbolDivisionError",
    "UndersampledError",
    "UnsupportedGroupError",
    "VerificationReport",
    "WhsymmError",
    "annulus_coeffs",
    "assemble_center_matrix",
    "assemble_matrix",
    "block_diagonalize",
    "block_structure",
    "build_group",
    "center_diagonalize",
    "center_factorize",
    "center_fourier",
    "center_structure",
    "character_table",
    "commutator_subgroup",
    "conjugacy_classes",
    "convolve",
    "det_index_oracle",
    "eval_on_grid",
    "factor_block",
    "factor_grid",
    "factor_group_symbol",
    "factor_rational",
    "factor_triangular_2x2",
    "fourier_matrix",
    "irreps_for",
    "partial_indices",
    "poly_roots",
    "project_high",
    "project_low",
    "rational_arith",
    "symbol_from_blocks",
    "unitarity_check",
    "validate_repset",
    "verify_matrix_factorization",
    "verify_scalar",
    "winding_index",
]
