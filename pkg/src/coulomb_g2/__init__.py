"""Hydrogen atom in (r, rho, phi) coordinates as an exact polynomial spectral problem.

Submodules: :mod:`.algebra` (rational bivariate polynomials), :mod:`.diffop`
(differential operators), :mod:`.lie` (g^(2) generators), :mod:`.spectral`
(exact and numeric eigensolvers), :mod:`.coulomb`, :mod:`.qes`, :mod:`.quad`
and :mod:`.verification`.
"""

from .algebra import BiPoly, GradedBasis, as_scalar, basis, dim_Pn, poly_eval, poly_mul
from .coulomb import (
    DegeneratePoint, HydrogenState, LaguerreMatch, MismatchReport, QuantumNumbers, build_h_a,
    build_h_a_r, coulomb_spectrum, energy, hydrogen_states, laguerre_check, schrodinger_residual,
    single_variable_subfamily, sturmian_states, wavefunction_eval,
)
from .diffop import (
    DiffOp, OpMatrix, OrderOverflowError, PreservationError, apply, commutator, compose,
    conjugate_gaussian, matrix_on_basis, op_equal,
)
from .lie import (
    GeneratorId, NonClosure, closure_check, generator, identity_report, lie_form_coulomb,
    lie_form_laguerre, lie_form_qes,
)
from .qes import (
    ConstructionMismatch, CountMismatch, QESConfig, QESState, build_h_tilde, potential_W,
    qes_cubic_check, qes_hamiltonian_residual, qes_spectrum,
)
from .quad import GramReport, QuadratureGrid, TailError, gram_matrix, inner_product, norm, normalize
from .spectral import CharPoly, IllConditioned, SpectralLevel, char_poly, exact_eigen, numeric_eigen

__version__ = "0.1.0"
