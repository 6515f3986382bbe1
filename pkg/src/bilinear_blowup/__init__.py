"""Verification toolkit for critical-order bilinear symbol classes.

Exact rational exponent maps, a replayable derivation engine for the
forced identity 1/p = 1/p1 + 1/p2, and seeded desk-scale experiments
demonstrating the operator-norm blow-up of the frequency-lattice
counterexample construction.
"""

__version__ = "0.1.0"

from .exponents import (
    ExponentTriple,
    Region,
    base_order,
    classify_region,
    critical_order,
    inv_exponent,
)
from .derivation import (
    BoundednessStatement,
    Conclusion,
    Constraint,
    DerivationTrace,
    derive_necessity,
    known_boundedness,
    replay_trace,
)
from .bumps import Bump, inverse_fourier, load_bump, make_phi, make_phi_tilde, save_bump
from .wainger import (
    WaingerFunction,
    WaingerParams,
    build_wainger,
    evaluate_f,
    membership_threshold,
    norm_scaling_experiment,
)
from .counterexample import (
    CounterexampleParams,
    DyadicBand,
    LatticeSymbol,
    build_Dj,
    build_sigma,
    choose_c,
    closed_form_T,
    compute_dk,
)
from .operators import (
    FrequencySamples,
    SeminormConfig,
    SymbolClassParams,
    apply_bilinear,
    lp_norm,
    seminorm_estimate,
)
from .stochastics import khintchine_ratio, signs
from .fitting import fit_log2_slope
from .harness import (
    ExperimentConfig,
    ScalingReport,
    emit_report,
    parse_config_file,
    run_blowup_experiment,
    run_lemma_suite,
)
