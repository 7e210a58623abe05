from pathlib import Path

import pytest

from karyotest import bands as B
from karyotest import iscn
from karyotest import karyotypes as K

DATA = Path(B.bundled_band_file()).parent
EXAMPLES = ["45,X", "45,XX,-22", "45,X,-X", "45,X,-Y"]


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def full_batch():
    return B.expand_all(B.load_band_file(DATA / "bands_full.json"))


@pytest.fixture
def base(full_batch):
    return K.base_ontology(full_batch)


@pytest.fixture
def example_ontology(base):
    for s in EXAMPLES:
        K.axiomatize(iscn.parse(s), base)
    return base
