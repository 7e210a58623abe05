"""Karyotype ontology toolkit: ISCN parsing, band classes, EL+ classification
and a four-tier ontology test harness."""

from .bands import BandTree, ClassBatch, expand_band_tree, is_band, str_pband, str_qband
from .errors import (
    ArmMismatch,
    DuplicateBand,
    FormatError,
    KaryotestError,
    KindClash,
    TierViolation,
    UnknownEntity,
    UnsupportedPloidy,
)
from .iscn import Karyotype, ParseError, parse, random_karyotype, render
from .karyotypes import axiomatize, base_ontology, derivation_base, event_concept
from .ontology import TBox, deserialize, serialize, snapshot_digest, with_probe
from .reasoner import classify, coherent, consistent, isuperclass, normalize

__version__ = "0.1.0"
