"""Alexander invariants, Nakanishi-index certificates and MQ-index bounds for knots,
plus the free-group commutator machinery behind the fibered case."""

from .freegroup import Word, commutator, derived_depth, kill_generators, lemma_witness, parse_word
from .fox import alexander_matrix, alexander_polynomial
from .indices import IndexBounds, IndexReport, kpq_classify, mq_bounds, nakanishi_bounds
from .laurent import FieldSpec, LaurentPoly, PolyMatrix, parse_laurent
from .notation import KnotDiagram, braid_closure, parse_braid, parse_pd, wirtinger_presentation
from .tables import KnotRecord, load_dataset, report_emit, reproduce_section4, run_pipeline

__version__ = "0.1.0"
