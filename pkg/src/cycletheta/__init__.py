"""cycletheta: exact desk-scale computations with even quadratic lattices.

Coset theta series and representation numbers, finite Weil representations,
Heegner 0-cycles on modular curves, Eisenstein-series Fourier coefficients,
and p-adic representation densities, with exact rational arithmetic
throughout.
"""

__version__ = "0.1.0"

from .quadlattice import (  # noqa: F401
    DiscriminantForm,
    Lattice,
    direct_sum,
    disc_b,
    discriminant_form,
    gauss_sum,
    named_lattice,
    new_lattice,
)
from .enumeration import (  # noqa: F401
    VectorValuedQSeries,
    rep_number,
    rep_number_genus2,
    theta_qseries,
    vectors_with_norm,
)
from .weilrep import (  # noqa: F401
    WeilRepMatrix,
    rho_S,
    rho_T,
    rho_word,
    theta_transform_check,
    verify_relations,
)
from .heegner import (  # noqa: F401
    HeegnerCycle,
    forms_with_disc,
    gamma0_classes,
    heegner_cycle,
    orbit_cross_check,
)
from .eisenstein import (  # noqa: F401
    cohen,
    cohen_number,
    eisenstein_k,
    hurwitz,
    local_density,
    siegel_product,
)
