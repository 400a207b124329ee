"""Exact eps-shift radix systems and eps-canonical number systems."""
from .cns import (
    CnsVerdict,
    DigitSet,
    Expansion,
    MonicPolynomial,
    digit_set,
    divide_step,
    expand,
    is_cns_classic,
    is_eps_cns_algorithmic,
    is_eps_cns_closed_form,
    is_scns,
    reduce_eps,
    srs_parameter,
)
from .dynamics import Cycle, OrbitOutcome, SrsParameter, canonical_cycle, cycle_realized_region, orbit, tau_step
from .geometry import (
    HalfPlane,
    RegionCell,
    cell_contains,
    cell_from_halfplanes,
    cell_meet,
    floor_affine,
    format_rational,
    parse_rational,
    parse_vector,
)
from .witness import (
    Caps,
    Certificate,
    Hull,
    WitnessGraph,
    build_graph,
    certify_hull,
    decide_point,
    primitive_cycles,
    subdivide,
    witness_set,
)
from .atlas import delta_family, lattice_in_B, lattice_in_D, region, region_sample, reproduce_lemma

__version__ = "0.1.0"
