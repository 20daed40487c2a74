"""Exact equivariant Chow classes of point-configuration strata on the projective line.

Ordered strata live in A_T((P^1)^n), unordered strata in A_GL2(P^n) and
A_PGL2(P^n).  All arithmetic is exact (Python ints and Fractions).
"""

from .ordered import (NotInSpan, SquareRelationCertificate, StrataCombinationOrdered, decompose,
                      delta_ij, delta_P, goodify, product_to_strata, psi, spanning_forest_product,
                      square_relation_class)
from .partitions import (IntPartition, SetPartition, count_good, enumerate_int_partitions,
                         enumerate_set_partitions, good_partitions, is_good, rank)
from .pgl2 import Mod2Class, pgl2_integral_class, pgl2_mod2_class, q_poly
from .poly import NotDivisible, Poly, PolyRing, parse_poly
from .rings import SCHEMA, OrderedClass, ProjClass
from .unordered import (StrataCombinationUnordered, ab1_decompose, class_unordered, class_Z,
                        phi_pushforward, reconstruct, relation_check)

__all__ = [
    "SCHEMA", "Poly", "PolyRing", "NotDivisible", "parse_poly",
    "OrderedClass", "ProjClass",
    "SetPartition", "IntPartition", "enumerate_set_partitions", "enumerate_int_partitions",
    "is_good", "good_partitions", "count_good", "rank",
    "delta_ij", "delta_P", "psi", "spanning_forest_product", "square_relation_class",
    "StrataCombinationOrdered", "SquareRelationCertificate", "NotInSpan",
    "goodify", "decompose", "product_to_strata",
    "phi_pushforward", "class_unordered", "class_Z", "ab1_decompose", "reconstruct",
    "StrataCombinationUnordered", "relation_check",
    "Mod2Class", "q_poly", "pgl2_mod2_class", "pgl2_integral_class",
]

__version__ = "0.1.0"
