"""Kernel selection: the compiled extension when built, else pure Python."""

try:
    from ._ckernels import rref_mod, shuffle_terms  # type: ignore[attr-defined]

    COMPILED = True
except ImportError:  # pragma: no cover - depends on the build
    from ._pykernels import rref_mod, shuffle_terms

    COMPILED = False

__all__ = ["COMPILED", "rref_mod", "shuffle_terms"]
