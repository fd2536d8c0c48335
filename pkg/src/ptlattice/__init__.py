"""PT-symmetric N-site lattice analogues of the imaginary cubic oscillator.

Modules
-------
lattice      the matrices H(a, z), parity, grid discretisation
linalg       eigen-solvers, nullspaces, polynomial roots, bisection
spectra      reality of the spectrum, exceptional points, sweeps
topology     topology of the real spectral locus and its critical exponents
metric       pseudometric families, positivity edges, linearized metric
observables  observables and the CPT charge
cli          command-line front end (``ptlattice``)
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: F401
    BracketError,
    ConstructionError,
    ContractViolationError,
    ConvergenceError,
    DegenerateTopologyError,
    ExactnessError,
    InvalidDimensionError,
    PtLatticeError,
    ResolutionError,
)
from .lattice import (  # noqa: F401
    GridSpec,
    HamiltonianSpec,
    build_hamiltonian,
    build_parity,
    coupling_from_grid,
    discretize_potential,
    hamiltonian,
)
from .linalg import SecularPolynomial, Spectrum, eig_general, eig_hermitian, nullspace_real, poly_real_roots  # noqa: F401
from .spectra import find_alpha, reality_intervals, spectrum, sweep  # noqa: F401
from .topology import classify, critical_exponents, detect_anomalies, enumerate_patterns, fibonacci_count  # noqa: F401
from .metric import (  # noqa: F401
    beta,
    dieudonne_basis,
    linearized_metric,
    positivity_beta,
    pseudometric_n2,
    pseudometric_n4,
    pseudometric_n6,
    secular_polynomial,
    special_pseudometric,
)
from .observables import cpt_charge_general, cpt_charge_n2, observable_basis, observable_n2  # noqa: F401
