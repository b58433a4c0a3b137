"""O(2)- and O(3)-covariant fuzzy circle and fuzzy sphere as dense operators."""
from .fuzzy_circle import (
    FuzzyCircle,
    build_circle,
    circle_convergence_scan,
    realize_circle_uso3,
    reflection_automorphism,
    rotation_automorphism,
    verify_circle_algebra,
)
from .fuzzy_sphere import (
    FuzzySphere,
    build_sphere,
    fuzzy_harmonic,
    g_function,
    madore_baseline,
    parity_automorphism,
    realize_sphere_uso4,
    rotation_automorphism_3d,
    sphere_convergence_scan,
    verify_sphere_algebra,
)
from .lie_reps import clebsch_gordan, so4_coupled_rep, so4_product_oracle, su2_irrep
from .radial import RadialProblem, calibrate_V0, cutoff_check, solve_radial
from .reports import ConsistencyWarning, ConvergenceTable, VerificationReport, resolve_k

__version__ = "0.1.0"
