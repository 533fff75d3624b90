"""Steady states, currents and bath-inversion symmetries of boundary-driven
XXZ and XXX spin-1/2 chains."""

__version__ = "0.1.0"

from .drives import (DriveSpec, JumpOperator, build_jump_operators, invert_baths, six_op_xxx,
                     six_op_xxz, twisted_xy, twisted_zx, z_target)
from .errors import (CapacityError, ConfigError, ConvergenceError, DegenerateSteadyStateError,
                     InvalidInputError, NumericalConsistencyError, StepSizeError)
from .liouvillian import (SolverOptions, SteadyStateResult, apply_generator, build_superoperator,
                          steady_state, time_evolve)
from .models import ChainModel, build_hamiltonian, graded_profile, xxx_chain, xxz_chain
from .observables import (CurrentReport, energy_current_operator, measure,
                          spin_current_operator)
from .pauli import embed, pauli, product_chain
from .symmetry import (LocalUnitary, global_unitary, make_unitary, verify_current_invariance,
                       verify_dissipator_swap, verify_hamiltonian_invariance)
