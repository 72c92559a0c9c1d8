"""Filtered (curved) A-infinity algebras over truncated Novikov coefficients.

Modules: ``scalars`` (coefficient rings), ``linear`` (filtered modules and
maps), ``core`` (algebras and their relations), ``trees`` (stable planar
trees), ``morphisms`` (morphisms, deformations, Maurer-Cartan elements),
``transfer`` (homotopy transfer, fiber products, mapping cocylinders),
``scenarios`` (worked wall-crossing examples), ``document`` and ``cli``.
"""

from .scalars import (ChartRing, ChartSeries, INF, Novikov, NovikovRing, ScalarError,
                      format_chart, format_novikov)
from .linear import (FilteredModule, LinearAlgebraError, LinearMap, direct_sum,
                     invariant_factors, invert_map, map_ord, map_val, vval)
from .core import (AInftyAlgebra, AlgebraError, CheckReport, MultiOperator,
                   check_quadratic_relations, check_unit, curved_dga, quotient_by_ideal)
from .trees import (count_stable_trees, enumerate_stable_trees, format_tree, parse_tree)
from .morphisms import (AInftyMorphism, MorphismError, check_morphism, compose, deform,
                        deform_via_trees, identity_morphism, mc_residual, pushforward,
                        strict_morphism, zero_morphism)
from .transfer import (AInftyBimodule, CocylinderDecomposition, RecognitionError, SDRData,
                       TransferError, change_of_base_bimodule, check_bimodule, check_sdr,
                       cocylinder_to_morphism, fiber_product, iso_sdr, mapping_cocylinder,
                       recognize, transfer)

__version__ = "0.1.0"
