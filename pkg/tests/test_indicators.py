import pytest

from citefair.errors import ParseError, RescaleError
from citefair.indicators import (
    IndicatorSpec,
    IndicatorTable,
    compute_table,
    compute_tables,
    if_denominator,
    if_numerator,
    rank_table,
    read_table,
    rescale,
    standard_specs,
    write_table,
)
from citefair.model import CitationEvent, Cluster, JournalRecord, PublicationCount

from conftest import make_dataset


def flat_table(values, indicator_id="T", normalization="raw"):
    return IndicatorTable(
        indicator_id=indicator_id, kind="impact_factor", window=2,
        counting="integer", normalization=normalization, census_year=2010,
        values=values)


class TestSpec:
    def test_ids(self):
        assert IndicatorSpec("impact_factor", 2, "integer").indicator_id == "IF2-IC"
        assert IndicatorSpec("impact_factor", 5, "fractional").indicator_id == "IF5-FC"
        assert IndicatorSpec("total_cites", counting="integer").indicator_id == "TC-IC"
        assert IndicatorSpec("cp_ratio", counting="fractional").indicator_id == "CP-FC"
        assert IndicatorSpec("numerator_only", 2, "integer").indicator_id == "TC-IC2"

    def test_window_validation(self):
        with pytest.raises(ValueError):
            IndicatorSpec("impact_factor", 3)
        with pytest.raises(ValueError):
            IndicatorSpec("impact_factor")
        with pytest.raises(ValueError):
            IndicatorSpec("total_cites", 2)
        with pytest.raises(ValueError):
            IndicatorSpec("nope", 2)

    def test_all_window_normalized(self):
        assert IndicatorSpec("total_cites").window == "all"
        assert IndicatorSpec("cp_ratio", "all").window == "all"


class TestNumeratorDenominator:
    def test_fractional_two_events_quarter_weight(self, tiny_dataset):
        spec = IndicatorSpec("impact_factor", 2, "fractional")
        # p1 (n_refs=4) cites jA twice in-window and p2 (n_refs=2) once
        assert if_numerator(tiny_dataset, "jA", spec) == pytest.approx(2 / 4 + 1 / 2)

    def test_single_paper_two_citations(self):
        journals = [JournalRecord("j1", "One", "g")]
        clusters = [Cluster("g", "G", 1)]
        events = [CitationEvent("p1", "jX", 2010, "j1", 2009, 4),
                  CitationEvent("p1", "jX", 2010, "j1", 2008, 4)]
        ds = make_dataset(journals, clusters, [], events)
        assert if_numerator(ds, "j1", IndicatorSpec("impact_factor", 2, "fractional")) == 0.5
        assert if_numerator(ds, "j1", IndicatorSpec("impact_factor", 2, "integer")) == 2

    def test_integer_same_events(self, tiny_dataset):
        spec = IndicatorSpec("impact_factor", 2, "integer")
        assert if_numerator(tiny_dataset, "jA", spec) == 3

    def test_all_unit_refs_match_integer(self):
        journals = [JournalRecord("j1", "One", "g")]
        clusters = [Cluster("g", "G", 1)]
        events = [CitationEvent(f"p{i}", "jX", 2010, "j1", 2009, 1) for i in range(5)]
        ds = make_dataset(journals, clusters, [], events)
        frac = if_numerator(ds, "j1", IndicatorSpec("impact_factor", 2, "fractional"))
        whole = if_numerator(ds, "j1", IndicatorSpec("impact_factor", 2, "integer"))
        assert frac == 5.0 == whole

    def test_denominator_window_two(self, tiny_dataset):
        assert if_denominator(tiny_dataset, "jA", 2) == 250

    def test_denominator_missing_years_zero(self, tiny_dataset):
        assert if_denominator(tiny_dataset, "jC", 2) == 20  # only 2009 present
        ds = make_dataset([JournalRecord("j1", "One", "g")], [Cluster("g", "G", 1)], [], [])
        assert if_denominator(ds, "j1", 2) == 0

    def test_denominator_window_five(self):
        counts = [PublicationCount("j1", y, 10) for y in range(2005, 2010)]
        ds = make_dataset([JournalRecord("j1", "One", "g")], [Cluster("g", "G", 1)], counts, [])
        assert if_denominator(ds, "j1", 5) == 50

    def test_numerator_bad_kind(self, tiny_dataset):
        with pytest.raises(ValueError):
            if_numerator(tiny_dataset, "jA", IndicatorSpec("total_cites"))

    def test_numerator_unknown_journal(self, tiny_dataset):
        with pytest.raises(ValueError):
            if_numerator(tiny_dataset, "nope", IndicatorSpec("impact_factor", 2))


class TestComputeTable:
    def test_if2_integer(self, tiny_dataset):
        table = compute_table(tiny_dataset, IndicatorSpec("impact_factor", 2, "integer"))
        assert table.values["jA"] == pytest.approx(3 / 250)
        assert table.indicator_id == "IF2-IC"
        assert table.normalization == "raw"

    def test_simple_ratio(self):
        journals = [JournalRecord("j1", "One", "g")]
        clusters = [Cluster("g", "G", 1)]
        counts = [PublicationCount("j1", 2008, 150), PublicationCount("j1", 2009, 100)]
        events = [CitationEvent(f"p{i}", "jX", 2010, "j1", 2009, 1) for i in range(50)]
        ds = make_dataset(journals, clusters, counts, events)
        table = compute_table(ds, IndicatorSpec("impact_factor", 2, "integer"))
        assert table.values["j1"] == pytest.approx(0.2)

    def test_zero_denominator_undefined(self, tiny_dataset):
        table = compute_table(tiny_dataset, IndicatorSpec("impact_factor", 5, "integer"))
        # jB and jC have no 2005-2009 items beyond those listed; all have some
        ds = make_dataset(
            [JournalRecord("j1", "One", "g")], [Cluster("g", "G", 1)], [],
            [CitationEvent("p1", "jX", 2010, "j1", 2009, 2)])
        t = compute_table(ds, IndicatorSpec("impact_factor", 2, "integer"))
        assert t.values["j1"] is None

    def test_total_cites_counts_all_years(self, tiny_dataset):
        table = compute_table(tiny_dataset, IndicatorSpec("total_cites", counting="integer"))
        assert table.values["jA"] == 4.0  # includes the 2005 citation
        assert table.values["jB"] == 1.0  # the same-year citation
        assert table.values["jC"] == 1.0

    def test_cp_ratio(self, tiny_dataset):
        table = compute_table(tiny_dataset, IndicatorSpec("cp_ratio", counting="integer"))
        assert table.values["jA"] == pytest.approx(4 / 80)
        ds = make_dataset(
            [JournalRecord("j1", "One", "g")], [Cluster("g", "G", 1)], [],
            [CitationEvent("p1", "jX", 2010, "j1", 2009, 2)])
        assert compute_table(ds, IndicatorSpec("cp_ratio")).values["j1"] is None

    def test_fractional_equals_integer_when_unit_refs(self):
        journals = [JournalRecord(f"j{i}", f"J{i}", "g") for i in range(3)]
        clusters = [Cluster("g", "G", 3)]
        counts = [PublicationCount(f"j{i}", y, 10) for i in range(3) for y in (2008, 2009, 2010)]
        events = [CitationEvent(f"p{k}", "jX", 2010, f"j{k % 3}", 2009 - (k % 2), 1)
                  for k in range(20)]
        ds = make_dataset(journals, clusters, counts, events)
        for spec_i in standard_specs():
            if spec_i.counting != "integer":
                continue
            spec_f = IndicatorSpec(spec_i.kind, None if spec_i.window == "all" else spec_i.window,
                                   "fractional")
            ti = compute_table(ds, spec_i)
            tf = compute_table(ds, spec_f)
            assert ti.values == tf.values

    def test_bulk_matches_single(self, tiny_dataset):
        specs = standard_specs()
        bulk = compute_tables(tiny_dataset, specs)
        for spec, table in zip(specs, bulk):
            assert table.values == compute_table(tiny_dataset, spec).values

    def test_fractional_at_most_integer(self, tiny_dataset):
        ti = compute_table(tiny_dataset, IndicatorSpec("numerator_only", 2, "integer"))
        tf = compute_table(tiny_dataset, IndicatorSpec("numerator_only", 2, "fractional"))
        for jid in ti.values:
            assert tf.values[jid] <= ti.values[jid]

    def test_paper_fraction_sums_to_one_iff_all_refs_inside(self, tiny_dataset):
        # p1 has 4 refs but only 3 recorded events: its weights sum below 1
        by_paper = {}
        for ev in tiny_dataset.citation_events:
            by_paper.setdefault(ev.citing_paper_id, []).append(ev)
        sums = {pid: sum(1 / e.n_refs for e in evs) for pid, evs in by_paper.items()}
        assert sums["p1"] == pytest.approx(3 / 4)
        assert sums["p2"] == pytest.approx(1.0)  # both refs landed inside
        assert all(s <= 1.0 + 1e-12 for s in sums.values())


class TestRescale:
    def test_simple_cluster(self):
        table = flat_table({"a": 2.0, "b": 4.0, "c": 6.0})
        out = rescale(table, {"a": "g", "b": "g", "c": "g"})
        assert out.values == {"a": 0.5, "b": 1.0, "c": 1.5}
        assert out.normalization == "rescaled"
        assert out.source_id == "T"
        assert out.indicator_id == "T-RS"

    def test_all_equal_values(self):
        table = flat_table({"a": 3.0, "b": 3.0})
        out = rescale(table, {"a": "g", "b": "g"})
        assert out.values == {"a": 1.0, "b": 1.0}

    def test_quotient_of_known_mean(self):
        # a 31-journal cluster with mean 0.576 holding one value of 3.843
        rest = (0.576 * 31 - 3.843) / 30
        values = {"j00": 3.843, **{f"j{i:02d}": rest for i in range(1, 31)}}
        table = flat_table(values)
        out = rescale(table, {j: "g" for j in values})
        assert out.values["j00"] == pytest.approx(3.843 / 0.576, abs=1e-9)
        assert round(out.values["j00"], 3) == 6.672

    def test_cluster_means_become_one(self):
        values = {"a": 1.0, "b": 3.0, "c": 10.0, "d": 30.0}
        partition = {"a": "g1", "b": "g1", "c": "g2", "d": "g2"}
        out = rescale(flat_table(values), partition)
        assert (out.values["a"] + out.values["b"]) / 2 == pytest.approx(1.0, abs=1e-9)
        assert (out.values["c"] + out.values["d"]) / 2 == pytest.approx(1.0, abs=1e-9)

    def test_undefined_stays_undefined_and_excluded(self):
        values = {"a": 2.0, "b": None, "c": 4.0}
        out = rescale(flat_table(values), {"a": "g", "b": "g", "c": "g"})
        assert out.values["b"] is None
        assert out.values["a"] == pytest.approx(2.0 / 3.0)
        assert out.cluster_baselines["g"] == (3.0, 2)

    def test_zero_mean_cluster_is_error(self):
        with pytest.raises(RescaleError, match="g2"):
            rescale(flat_table({"a": 1.0, "b": 0.0}), {"a": "g1", "b": "g2"})

    def test_all_undefined_cluster_is_error(self):
        with pytest.raises(RescaleError, match="g2"):
            rescale(flat_table({"a": 1.0, "b": None}), {"a": "g1", "b": "g2"})

    def test_missing_partition_entry(self):
        with pytest.raises(RescaleError, match="b"):
            rescale(flat_table({"a": 1.0, "b": 2.0}), {"a": "g"})

    def test_rank_order_preserved_within_cluster(self):
        values = {f"j{i}": float(v) for i, v in enumerate([5.0, 1.0, 3.3, 0.7, 9.2])}
        out = rescale(flat_table(values), {j: "g" for j in values})
        order_before = sorted(values, key=values.get)
        order_after = sorted(out.values, key=out.values.get)
        assert order_before == order_after


class TestRankTable:
    def test_descending_with_ranks(self):
        table = flat_table({"a": 3.0, "b": 1.0, "c": 2.0})
        assert rank_table(table) == [("a", 3.0, 1), ("c", 2.0, 2), ("b", 1.0, 3)]

    def test_tie_broken_by_id(self):
        table = flat_table({"b": 2.0, "a": 2.0})
        assert rank_table(table) == [("a", 2.0, 1), ("b", 2.0, 2)]

    def test_undefined_last(self):
        table = flat_table({"a": 1.0, "b": None, "c": 2.0})
        assert rank_table(table) == [("c", 2.0, 1), ("a", 1.0, 2), ("b", None, 3)]

    def test_top_of_published_ranking(self):
        # 25-journal fixture with realistic rescaled impact values
        listed = [
            ("CA-CANCER J CLIN", 26.211), ("REV MOD PHYS", 19.514),
            ("ACTA CRYSTALLOGR A", 18.881), ("NAT MATER", 17.979),
            ("NEW ENGL J MED", 14.872), ("ANNU REV PLANT BIOL", 14.063),
            ("ANNU REV IMMUNOL", 13.700), ("CHEM REV", 11.479),
            ("ANNU REV ASTRON ASTR", 11.452), ("NAT NANOTECHNOL", 11.440),
            ("NAT REV CANCER", 10.338), ("NAT PHOTONICS", 9.982),
            ("PROG MATER SCI", 9.970), ("NAT REV IMMUNOL", 9.787),
            ("LANCET", 9.352), ("CHEM SOC REV", 9.238),
            ("NAT REV MOL CELL BIO", 8.787), ("JAMA-J AM MED ASSOC", 8.345),
            ("NAT GENET", 8.270), ("NATURE", 8.207),
            ("NAT REV NEUROSCI", 8.206), ("ADV PHYS", 8.008),
            ("NAT REV DRUG DISCOV", 7.984), ("PROG POLYM SCI", 7.947),
            ("ACCOUNTS CHEM RES", 7.590),
        ]
        table = flat_table(dict(listed), normalization="rescaled")
        ranked = rank_table(table)
        assert ranked[0] == ("CA-CANCER J CLIN", 26.211, 1)
        assert [r[1] for r in ranked] == sorted((v for _, v in listed), reverse=True)


class TestTableIo:
    def test_round_trip(self, tmp_path, tiny_dataset):
        table = compute_table(tiny_dataset, IndicatorSpec("impact_factor", 2, "fractional"))
        path = tmp_path / "IF2-FC.tsv"
        write_table(table, path)
        loaded = read_table(path)
        assert loaded.values == table.values
        assert loaded.indicator_id == table.indicator_id
        assert loaded.window == 2
        assert loaded.counting == "fractional"
        assert loaded.census_year == 2010

    def test_na_sentinel(self, tmp_path):
        table = flat_table({"a": 1.25, "b": None})
        path = tmp_path / "t.tsv"
        write_table(table, path)
        text = path.read_text()
        assert "b\tNA" in text
        assert read_table(path).values == {"a": 1.25, "b": None}

    def test_full_precision(self, tmp_path):
        v = 1 / 3 + 1e-15
        table = flat_table({"a": v, "b": 2.0})
        write_table(table, tmp_path / "t.tsv")
        assert read_table(tmp_path / "t.tsv").values["a"] == v

    def test_rescaled_provenance_round_trip(self, tmp_path):
        out = rescale(flat_table({"a": 2.0, "b": 4.0}), {"a": "g", "b": "g"})
        write_table(out, tmp_path / "t.tsv")
        loaded = read_table(tmp_path / "t.tsv")
        assert loaded.source_id == "T"
        assert loaded.normalization == "rescaled"

    def test_missing_header_is_error(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("journal_id\tvalue\na\t1.0\n")
        with pytest.raises(ParseError):
            read_table(path)

    def test_bad_value_names_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text(
            "# indicator_id=X kind=total_cites window=all counting=integer "
            "normalization=raw census_year=2010\n"
            "journal_id\tvalue\na\toops\n")
        with pytest.raises(ParseError, match="3"):
            read_table(path)
