import random

import pytest

from karyotest import bands as B
from karyotest import harness as H
from karyotest import iscn
from karyotest import karyotypes as K
from karyotest.errors import FormatError, TierViolation, UnknownEntity
from karyotest.harness import Tier, TestCase
from karyotest.ontology import Class, Named, SubClassOf, snapshot_digest

HEADER = "Karyotype,Female,Male,Haploid,Diploid\n"


def _write(tmp_path, text, name="facets.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_bundled_table(data_dir):
    table = H.load_facet_table(data_dir / "facets.csv")
    assert table.facet_names == ("Female", "Male", "Haploid", "Diploid")
    assert [k for k, _ in table.rows] == ["45,X", "45,XX,-22", "45,X,-X", "45,X,-Y"]
    assert table.rows[0][1] == (-1, -1, -1, 1)
    assert table.non_zero_cells() == 16


def test_header_only_and_empty_files(tmp_path):
    assert H.load_facet_table(_write(tmp_path, HEADER)).rows == []
    empty = H.load_facet_table(_write(tmp_path, "", "empty.csv"))
    assert empty.rows == [] and empty.facet_names == ()


def test_bad_cell_names_row_and_column(tmp_path):
    path = _write(tmp_path, HEADER + '"45,X",-1,2,-1,1\n')
    with pytest.raises(ValueError) as info:
        H.load_facet_table(path)
    assert info.value.row == 2 and info.value.column == "Male"


def test_ragged_row(tmp_path):
    with pytest.raises(FormatError) as info:
        H.load_facet_table(_write(tmp_path, HEADER + '"45,X",-1,-1\n'))
    assert info.value.line == 2


def test_unparseable_karyotype(tmp_path):
    with pytest.raises(iscn.ParseError) as info:
        H.load_facet_table(_write(tmp_path, HEADER + '"45,X",1,1,1,1\n"46;XY",0,0,0,0\n'))
    assert info.value.row == 3


def test_blank_header_cell(tmp_path):
    with pytest.raises(FormatError):
        H.load_facet_table(_write(tmp_path, "Karyotype,,Male\n"))


def test_assertions_from_bundled_table(data_dir, example_ontology):
    table = H.load_facet_table(data_dir / "facets.csv")
    cases = H.assertions_from(table, example_ontology)
    assert len(cases) == 16
    assert all(c.tier == Tier.REASONER for c in cases)
    first = [c.id for c in cases[:4]]
    assert first == ["45,X Female=-1", "45,X Male=-1", "45,X Haploid=-1", "45,X Diploid=1"]


def test_zero_cells_make_no_cases(tmp_path, example_ontology):
    table = H.load_facet_table(_write(tmp_path, HEADER + '"45,X",0,0,0,0\n"45,X,-Y",0,1,0,0\n'))
    cases = H.assertions_from(table, example_ontology)
    assert [c.id for c in cases] == ["45,X,-Y Male=1"]


def test_unmapped_facet_column(tmp_path, example_ontology):
    table = H.load_facet_table(_write(tmp_path, 'Karyotype,Mosaic\n"45,X",1\n'))
    with pytest.raises(UnknownEntity):
        H.assertions_from(table, example_ontology)


def test_unknown_karyotype_row(tmp_path, base):
    table = H.load_facet_table(_write(tmp_path, HEADER + '"45,X",-1,-1,-1,1\n'))
    with pytest.raises(UnknownEntity):
        H.assertions_from(table, base)


def test_flipped_cell_message(tmp_path, example_ontology):
    table = H.load_facet_table(_write(tmp_path, HEADER + '"45,X",-1,1,-1,1\n'))
    report = H.run_suite(H.assertions_from(table, example_ontology), example_ontology)
    [failure] = report.failures
    assert "45,X" in failure.message and "Male" in failure.message
    assert "DiploidKaryotype" in failure.message


def test_empty_suite():
    report = H.run_suite([], K.base_ontology(B.ClassBatch()))
    assert report.ok and report.total == 0
    assert all(report.counts(t) == (0, 0, 0) for t in Tier)


def test_crash_counts_as_failure(base):
    def boom(ctx):
        raise RuntimeError("kaput")

    report = H.run_suite([TestCase("boom", Tier.SOFTWARE, boom),
                          TestCase("fine", Tier.SOFTWARE, lambda ctx: True)], base)
    assert [r.passed for r in report.results] == [False, True]
    assert "kaput" in report.failures[0].message


def test_standard_suite_passes_and_probe_reverts(data_dir, example_ontology):
    table = H.load_facet_table(data_dir / "facets.csv")
    corpus = iscn.load_corpus(data_dir / "corpus.txt")
    before = snapshot_digest(example_ontology)
    report = H.run_suite(H.standard_suite(example_ontology, table, corpus), example_ontology)
    assert report.ok, report.format()
    assert snapshot_digest(example_ontology) == before
    assert report.counts(Tier.REASONER, "ISCN Examples")[2] == 16
    assert report.counts(Tier.PROBE)[2] >= 1
    assert all(report.counts(t)[2] > 0 for t in Tier)
    total = sum(report.counts(t)[2] for t in Tier)
    assert total == report.total == len({r.id for r in report.results})


def test_report_table_layout(data_dir, example_ontology):
    table = H.load_facet_table(data_dir / "facets.csv")
    report = H.run_suite(H.standard_suite(example_ontology, table), example_ontology)
    lines = report.format_table().splitlines()
    assert lines[0].split() == ["Test", "Class", "Software", "Ontology", "Reasoner", "Probe"]
    row = next(l for l in lines if l.startswith("ISCN Examples"))
    assert row.split()[-4:] == ["0", "0", "16", "0"]
    total = next(l for l in lines if l.startswith("Total"))
    assert [int(x) for x in total.split()[1:]] == [report.counts(t)[2] for t in Tier]


def test_determinism(data_dir, example_ontology):
    table = H.load_facet_table(data_dir / "facets.csv")
    runs = [H.run_suite(H.standard_suite(example_ontology, table), example_ontology).format()
            for _ in range(2)]
    assert runs[0] == runs[1]


def test_probe_isolation_under_shuffle(data_dir, example_ontology):
    table = H.load_facet_table(data_dir / "facets.csv")
    cases = H.standard_suite(example_ontology, table)
    baseline = {r.id: r.passed for r in H.run_suite(cases, example_ontology).results}
    rng = random.Random(11)
    for _ in range(5):
        shuffled = list(cases)
        rng.shuffle(shuffled)
        got = {r.id: r.passed for r in H.run_suite(shuffled, example_ontology).results}
        assert got == baseline


# -- tiers ------------------------------------------------------------------

PROBE = (Class("_"), SubClassOf(Named("_"), Named("HumanAutosome")),
         SubClassOf(Named("_"), Named("HumanSexChromosome")))


def test_tier_examples(base):
    pband = TestCase("pband", Tier.SOFTWARE, lambda ctx: B.str_pband("HumanChromosome1Bandp10"))
    band = TestCase("band", Tier.ONTOLOGY, lambda ctx: ctx.band("HumanChromosome1Bandp10"))
    facet = TestCase("facet", Tier.REASONER, lambda ctx: ctx.isuperclass("k46_XY", "MaleKaryotype"))
    probe = TestCase("probe", Tier.PROBE, lambda ctx: not ctx.coherent(), probe=PROBE)
    assert [H.tier_of(c, base) for c in (pband, band, facet, probe)] == list(Tier)
    assert H.tier_of(facet) == Tier.REASONER


@pytest.mark.parametrize("case", [
    TestCase("probe without reasoner", Tier.PROBE, lambda ctx: "_" in ctx.tbox.classes, probe=PROBE),
    TestCase("probe without additions", Tier.PROBE, lambda ctx: ctx.coherent()),
    TestCase("software touching tbox", Tier.SOFTWARE, lambda ctx: bool(ctx.tbox.classes)),
    TestCase("ontology using reasoner", Tier.ONTOLOGY, lambda ctx: ctx.coherent()),
    TestCase("reasoner on nothing", Tier.REASONER, lambda ctx: True),
])
def test_tier_violations(case, base):
    with pytest.raises(TierViolation):
        H.tier_of(case, base)
    report = H.run_suite([case], base)
    assert not report.ok
    assert "TierViolation" in report.failures[0].message


def test_violation_traced_even_when_assertion_fails(base):
    def bad(ctx):
        ctx.tbox
        raise AssertionError("no")

    with pytest.raises(TierViolation):
        H.tier_of(TestCase("bad", Tier.SOFTWARE, bad), base)


def test_standard_suite_tiers_are_valid(example_ontology, data_dir):
    table = H.load_facet_table(data_dir / "facets.csv")
    for case in H.standard_suite(example_ontology, table, ["45,X"]):
        if case.group != "Bands":  # 1198 of the same shape; one suffices
            H.tier_of(case, example_ontology)
    H.tier_of(TestCase("band?", Tier.ONTOLOGY, lambda ctx: ctx.band(B.BAND_ROOT)), example_ontology)
