"""Tensor-power quivers, mirror stability conditions and the Fermat point pipeline.

The main entry points are re-exported here; see the submodules for the rest.
"""

__version__ = "0.1.0"

from .errors import FermatMirrorError, TheoremViolation
from .fields import C64, Q, QI, Field, GaussianRational, field_from_tag
from .quiver import Quiver, Arrow, arrow_label, build, build_beilinson, build_dynkin_A, \
    build_tensor_power, index_of, to_dot
from .rep import Representation, is_isomorphic_thin, rep_from_json, rep_to_json, simple_at, \
    subreps_thin, thin_rep_from_point, validate
from .stability import StabilityFunction, is_framed_invariant, is_stable, make_Zn, mirror, \
    walls_on_segment
from .framed import FramedRep, check_framed, functor_F, functor_G, lemma_identities, trivialize
from .sdr import ProjectivePoint, build_sdr, check_complex, classify_support, extract_point, \
    fermat_value
from .moduli import ModuliChart, MirrorReport, build_chart, mirror_report, sample_fermat_points, \
    syz_pipeline

__all__ = [name for name in dir() if not name.startswith("_")]
