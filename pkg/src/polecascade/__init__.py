"""Residual pole spaces of rational root-system forms, exactly.

The package constructs and classifies the residual pole spaces of the
partially symmetrized rational forms attached to a based root system with a
chosen maximal Levi, builds the cascade of contour-shift data phase by
phase, computes enveloping denominator multisets and admissibility regions,
and runs the E8 special-line vanishing verification.  All arithmetic is
exact rational.
"""

from .roots import (RootDatum, WeylElement, build_root_datum, dominant_map,
                    inversion_set, minimal_coset_reps)
from .polespaces import (DensityFactors, FormalPoint, OrbitLabel, PoleSpace,
                         classify, enumerate_standard_residual, nu_density,
                         pole_space, std_data, weighted_dynkin_label)
from .cascade import (CascadeDB, GenRow, StdRow, casc_phase, first_generation,
                      init_gen0, poles_crossed, run_cascade, sub_tag,
                      verify_cascade)
from .denominators import (AffineForm, DenominatorMultiset, EnvelopeRecord,
                           adm_membership, check_main_containment,
                           check_tau_identity, den_sigma, den_sigma_prime,
                           enveloping_den, maximal_regular_subsets,
                           reg_components, regular_envelopes, std_wdd)
from .special import (SpecialContext, SSet, build_special_context,
                      classify_weyl_triples, e_value, harmonic_image_basis,
                      s_sets, verify_special_vanishing)
from .store import export_cascade, import_cascade

__version__ = "0.1.0"
