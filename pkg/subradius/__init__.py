__version__ = '0.1'

from subradius.antinorm import PolytopeAntinorm, eval_matrix, eval_vector
from subradius.driver import iterative_rescaling_driver, regularized_lsr
from subradius.errors import *
from subradius.family import MatrixFamily, rescale_family, transpose_family
from subradius.jsr import (JsrConfig, PolytopeNorm, adaptive_gripenberg_jsr,
                           gripenberg_jsr)
from subradius.lsr import (SolverConfig, run_algorithm_a, run_algorithm_e,
                           run_algorithm_s, run_lsr)
from subradius.slp import identify_slp_candidates

__all__ = ['EnumerationCapError', 'FamilyFormatError', 'InvalidInputError',
           'JsrConfig', 'MatrixFamily', 'NumericalFailure', 'PolytopeAntinorm',
           'PolytopeNorm', 'ProductOverflowError', 'SolverConfig',
           'SubradiusError', 'adaptive_gripenberg_jsr', 'eval_matrix',
           'eval_vector', 'gripenberg_jsr', 'identify_slp_candidates',
           'iterative_rescaling_driver', 'regularized_lsr', 'rescale_family',
           'run_algorithm_a', 'run_algorithm_e', 'run_algorithm_s', 'run_lsr',
           'transpose_family']
