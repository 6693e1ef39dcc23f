"""Finite double-cover towers that resolve intersections of curves on surfaces."""

from .surface import CurveArcTriple, Surface, Walk, make_triple
from .tower import TowerConfig, build_resolving_tower, depth_driver, validate_certificate

__all__ = [
    "CurveArcTriple",
    "Surface",
    "TowerConfig",
    "Walk",
    "build_resolving_tower",
    "make_triple",
    "depth_driver",
    "validate_certificate",
]
