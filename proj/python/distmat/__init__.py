"""Cache-aware distance matrix operations.

Validation, Gower double-centering, principal coordinates analysis, and the
Mantel permutation test, each backed by a fused cache-blocked kernel with a
naive multi-pass reference available via ``naive=True``.
"""

from ._core import (
    __version__,
    center,
    condensed_form,
    condensed_index,
    make_permutations,
    mantel,
    pcoa,
    validate,
)

__all__ = [
    "__version__",
    "center",
    "condensed_form",
    "condensed_index",
    "make_permutations",
    "mantel",
    "pcoa",
    "validate",
]
