"""Circle packings invariant under Kleinian groups: Apollonian and Schottky
orbit packings, their spherical images, and curvature statistics."""

from .apollonian import Packing, generate, generate_root, realize_root, reduce_to_root
from .inversive import (
    DescartesQuadruple,
    InversiveCircle,
    MobiusMap,
    apollonius_pair,
    apply_mobius,
    descartes_form,
    inversive_product,
    is_tangent,
    make_circle,
    make_line,
    swap,
)
from .schottky import SchottkyGroup, estimate_delta, generate_orbit, sample_group

__all__ = [
    "DescartesQuadruple", "InversiveCircle", "MobiusMap", "Packing", "SchottkyGroup",
    "apollonius_pair", "apply_mobius", "descartes_form", "estimate_delta", "generate",
    "generate_orbit", "generate_root", "inversive_product", "is_tangent", "make_circle",
    "make_line", "realize_root", "reduce_to_root", "sample_group", "swap",
]
