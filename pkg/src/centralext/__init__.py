"""Central extensions, commutators and second cohomology of finite algebras
in varieties with a difference term."""

from .algebra import (FiniteAlgebra, FreeAlgebra, FreePresentation, Homomorphism, direct_product,
                      enumerate_homs, find_idempotents, free_algebra_hsp, is_isomorphic,
                      presentation_of, quotient, satisfies, satisfies_all, subalgebra_generated)
from .cohomology import CohomologyGroup, HomGroup, h2, hochschild_serre_check
from .commutator import center, is_abelian, is_central, is_perfect, matrix_algebra, r1, tc_commutator
from .congruence import Congruence, Partition, all_congruences, cg, join, meet, parse_partition
from .errors import (BudgetExceeded, CentralExtError, HypothesisFailed, NoIdempotent, ParseError,
                     SplittingNotFound)
from .extension import (CentralExtension, Cocycle, KernelAlgebra, basic_construction,
                        extract_cocycle, kernel_algebra)
from .schur import Cover, SchurMultiplier, cover_construct, invariance_check, schur_hopf_check, schur_multiplier
from .termlang import (Identity, Signature, Term, VarietySpec, parse_identity, parse_signature,
                       parse_term)

__version__ = "0.1.0"
