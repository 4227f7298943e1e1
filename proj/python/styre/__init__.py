from ._styre import (
    FiniteGroup,
    NoiseLaw,
    classify,
    cyclic,
    dihedral,
    extremal_law,
    orbit,
    simulate_marginal,
    symmetric,
    torus_classify,
    __version__,
)

__all__ = [
    "FiniteGroup",
    "NoiseLaw",
    "classify",
    "cyclic",
    "dihedral",
    "extremal_law",
    "orbit",
    "simulate_marginal",
    "symmetric",
    "torus_classify",
    "__version__",
]
