"""Reading and writing the three tabular input files (journals,
publication counts, citation events) and assembling them into a validated
Dataset with the exclusion policy applied.

File formats (delimiter-separated text, UTF-8, mandatory header row,
columns matched by name):

journals      journal_id, title, cluster_id, cluster_name
publications  journal_id, year, citable_items
citations     citing_paper_id, citing_journal_id, citing_year,
              cited_journal_id, cited_year, n_refs

Citing journals may lie outside the indexed set; only cited journals must
resolve.  Clusters smaller than ``min_cluster_size`` are removed together
with their journals and any event touching them.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable, Sequence

from .errors import IngestWarning, ParseError, ValidationError
from .model import Cluster, CitationEvent, Dataset, JournalRecord, PublicationCount, validate

__all__ = [
    "IngestConfig",
    "IngestSummary",
    "parse_journals",
    "parse_publications",
    "parse_citations",
    "assemble",
    "write_journals",
    "write_publications",
    "write_citations",
    "write_dataset",
    "save_bundle",
    "load_bundle",
    "JOURNALS_FILE",
    "PUBLICATIONS_FILE",
    "CITATIONS_FILE",
]

POLICY_DROP = "drop"
POLICY_ERROR = "error"
POLICY_DROP_WARN = "drop-with-warning"

JOURNALS_FILE = "journals.tsv"
PUBLICATIONS_FILE = "publications.tsv"
CITATIONS_FILE = "citations.tsv"
META_FILE = "dataset.json"

JOURNAL_COLUMNS = ("journal_id", "title", "cluster_id", "cluster_name")
PUBLICATION_COLUMNS = ("journal_id", "year", "citable_items")
CITATION_COLUMNS = ("citing_paper_id", "citing_journal_id", "citing_year",
                    "cited_journal_id", "cited_year", "n_refs")


@dataclass(frozen=True)
class IngestConfig:
    """Exclusion policy and file format knobs."""

    min_cluster_size: int = 10
    unknown_cited_policy: str = POLICY_DROP
    zero_refs_policy: str = POLICY_DROP_WARN
    delimiter: str = "\t"

    def __post_init__(self):
        if self.min_cluster_size < 1:
            raise ValueError("min_cluster_size must be >= 1")
        if self.unknown_cited_policy not in (POLICY_DROP, POLICY_ERROR):
            raise ValueError(f"unknown_cited_policy must be '{POLICY_DROP}' or '{POLICY_ERROR}'")
        if self.zero_refs_policy not in (POLICY_DROP_WARN, POLICY_ERROR):
            raise ValueError(
                f"zero_refs_policy must be '{POLICY_DROP_WARN}' or '{POLICY_ERROR}'")


@dataclass(frozen=True)
class IngestSummary:
    """What assemble excluded, for auditability."""

    excluded_clusters: tuple[tuple[str, str, int], ...]  # (id, name, size)
    excluded_journals: int
    events_dropped_excluded_clusters: int
    events_dropped_unknown_cited: int
    counts_dropped: int
    census_year: int
    census_year_inferred: bool
    retained_journals: int
    retained_clusters: int
    retained_events: int


def _columns(path: Path, header: Sequence[str], required: Sequence[str]) -> list[int]:
    missing = [c for c in required if c not in header]
    if missing:
        raise ParseError(path, 1, f"missing required column(s): {', '.join(missing)}")
    return [header.index(c) for c in required]


def _parse_int(path: Path, lineno: int, raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(path, lineno, f"{what} must be an integer, got {raw!r}") from None


def parse_journals(path: str | Path,
                   config: IngestConfig = IngestConfig()) -> tuple[list[JournalRecord], list[Cluster]]:
    """Read the journals file; clusters are declared by first appearance.

    Raises ParseError with a line number for malformed rows, and
    ValidationError for duplicate journal ids or conflicting cluster names.
    """
    path = Path(path)
    journals: list[JournalRecord] = []
    cluster_names: dict[str, str] = {}
    cluster_sizes: dict[str, int] = {}
    seen: set[str] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file; header row required") from None
        idx = _columns(path, header, JOURNAL_COLUMNS)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                raise ParseError(path, lineno, f"expected {len(header)} columns, got {len(row)}")
            jid, title, cid, cname = (row[i] for i in idx)
            if not jid:
                raise ParseError(path, lineno, "empty journal_id")
            if not cid:
                raise ParseError(path, lineno, "empty cluster_id")
            if jid in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate journal_id '{jid}'")
            seen.add(jid)
            if cid in cluster_names:
                if cluster_names[cid] != cname:
                    raise ValidationError(
                        f"{path}:{lineno}: cluster '{cid}' renamed "
                        f"('{cluster_names[cid]}' vs '{cname}')")
            else:
                cluster_names[cid] = cname
                cluster_sizes[cid] = 0
            cluster_sizes[cid] += 1
            journals.append(JournalRecord(jid, title, cid))
    clusters = [Cluster(cid, cluster_names[cid], cluster_sizes[cid]) for cid in cluster_names]
    return journals, clusters


def parse_publications(path: str | Path,
                       config: IngestConfig = IngestConfig()) -> list[PublicationCount]:
    path = Path(path)
    counts: list[PublicationCount] = []
    seen: set[tuple[str, int]] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file; header row required") from None
        idx = _columns(path, header, PUBLICATION_COLUMNS)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                raise ParseError(path, lineno, f"expected {len(header)} columns, got {len(row)}")
            jid, year_raw, items_raw = (row[i] for i in idx)
            if not jid:
                raise ParseError(path, lineno, "empty journal_id")
            year = _parse_int(path, lineno, year_raw, "year")
            items = _parse_int(path, lineno, items_raw, "citable_items")
            if items < 0:
                raise ParseError(path, lineno, f"citable_items must be >= 0, got {items}")
            if (jid, year) in seen:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate publication record for ({jid}, {year})")
            seen.add((jid, year))
            counts.append(PublicationCount(jid, year, items))
    return counts


def parse_citations(path: str | Path,
                    config: IngestConfig = IngestConfig()) -> list[CitationEvent]:
    """Read citation events in file order.

    n_refs must parse as a positive integer; zero is handled per
    ``config.zero_refs_policy``.  Events of one citing paper must agree on
    citing journal, citing year and n_refs.
    """
    path = Path(path)
    events: list[CitationEvent] = []
    paper_info: dict[str, tuple[str, int, int]] = {}
    dropped_zero_refs = 0
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file; header row required") from None
        idx = _columns(path, header, CITATION_COLUMNS)
        i0, i1, i2, i3, i4, i5 = idx
        append = events.append
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                raise ParseError(path, lineno, f"expected {len(header)} columns, got {len(row)}")
            pid = row[i0]
            if not pid:
                raise ParseError(path, lineno, "empty citing_paper_id")
            citing_jid = row[i1]
            cited_jid = row[i3]
            if not cited_jid:
                raise ParseError(path, lineno, "empty cited_journal_id")
            try:
                citing_year = int(row[i2])
                cited_year = int(row[i4])
                n_refs = int(row[i5])
            except ValueError:
                raise ParseError(
                    path, lineno,
                    f"years and n_refs must be integers: {row[i2]!r}, {row[i4]!r}, {row[i5]!r}",
                ) from None
            if n_refs == 0:
                if config.zero_refs_policy == POLICY_ERROR:
                    raise ParseError(path, lineno, "n_refs is 0")
                dropped_zero_refs += 1
                continue
            if n_refs < 0:
                raise ParseError(path, lineno, f"n_refs must be positive, got {n_refs}")
            info = (citing_jid, citing_year, n_refs)
            prev = paper_info.setdefault(pid, info)
            if prev != info:
                raise ValidationError(
                    f"{path}:{lineno}: citing paper '{pid}' conflicts with an earlier "
                    f"row on (citing_journal_id, citing_year, n_refs)")
            append(CitationEvent(pid, citing_jid, citing_year, cited_jid, cited_year, n_refs))
    if dropped_zero_refs:
        warnings.warn(
            f"{path}: dropped {dropped_zero_refs} citation row(s) with n_refs=0",
            IngestWarning, stacklevel=2)
    return events


def assemble(journals: Sequence[JournalRecord],
             clusters: Sequence[Cluster],
             publication_counts: Sequence[PublicationCount],
             citation_events: Sequence[CitationEvent],
             census_year: int | None = None,
             config: IngestConfig = IngestConfig()) -> tuple[Dataset, IngestSummary]:
    """Join the parsed inputs into a validated Dataset.

    Clusters below ``min_cluster_size`` are removed entirely, together
    with their journals and every event citing or cited by those journals.
    ``census_year`` defaults to the latest citing year seen.  The returned
    summary records everything that was excluded.
    """
    membership: dict[str, int] = {}
    for j in journals:
        membership[j.cluster_id] = membership.get(j.cluster_id, 0) + 1

    kept_clusters: list[Cluster] = []
    excluded: list[tuple[str, str, int]] = []
    for c in clusters:
        size = membership.get(c.cluster_id, 0)
        if size < config.min_cluster_size:
            excluded.append((c.cluster_id, c.name, size))
        else:
            kept_clusters.append(Cluster(c.cluster_id, c.name, size))
    excluded_ids = {cid for cid, _, _ in excluded}

    kept_journals = [j for j in journals if j.cluster_id not in excluded_ids]
    if not kept_journals:
        raise ValidationError("assembly produced an empty dataset (no journals retained)")
    dropped_journal_ids = {j.journal_id for j in journals if j.cluster_id in excluded_ids}
    kept_journal_ids = {j.journal_id for j in kept_journals}

    kept_events: list[CitationEvent] = []
    dropped_cluster_events = 0
    dropped_unknown = 0
    error_on_unknown = config.unknown_cited_policy == POLICY_ERROR
    append = kept_events.append
    for ev in citation_events:
        if ev.cited_journal_id in dropped_journal_ids or ev.citing_journal_id in dropped_journal_ids:
            dropped_cluster_events += 1
            continue
        if ev.cited_journal_id not in kept_journal_ids:
            if error_on_unknown:
                raise ValidationError(
                    f"citation event of paper '{ev.citing_paper_id}' cites unknown "
                    f"journal '{ev.cited_journal_id}'")
            dropped_unknown += 1
            continue
        append(ev)

    kept_counts = [p for p in publication_counts if p.journal_id in kept_journal_ids]
    counts_dropped = len(publication_counts) - len(kept_counts)

    inferred = census_year is None
    if inferred:
        if not kept_events:
            raise ValidationError(
                "census_year not given and no citation events to infer it from")
        census_year = max(ev.citing_year for ev in kept_events)

    dataset = Dataset(
        journals=tuple(kept_journals),
        clusters=tuple(kept_clusters),
        publication_counts=tuple(kept_counts),
        citation_events=tuple(kept_events),
        census_year=census_year,
    )
    violations = validate(dataset)
    if violations:
        shown = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        raise ValidationError(f"assembled dataset fails validation: {shown}{more}")

    summary = IngestSummary(
        excluded_clusters=tuple(excluded),
        excluded_journals=len(dropped_journal_ids),
        events_dropped_excluded_clusters=dropped_cluster_events,
        events_dropped_unknown_cited=dropped_unknown,
        counts_dropped=counts_dropped,
        census_year=census_year,
        census_year_inferred=inferred,
        retained_journals=len(kept_journals),
        retained_clusters=len(kept_clusters),
        retained_events=len(kept_events),
    )
    return dataset, summary


def _write_rows(path: Path, header: Iterable[str], rows: Iterable[tuple], delimiter: str) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_journals(journals: Sequence[JournalRecord], clusters: Sequence[Cluster],
                   path: str | Path, delimiter: str = "\t") -> None:
    names = {c.cluster_id: c.name for c in clusters}
    _write_rows(Path(path), JOURNAL_COLUMNS,
                ((j.journal_id, j.title, j.cluster_id, names.get(j.cluster_id, j.cluster_id))
                 for j in journals),
                delimiter)


def write_publications(counts: Sequence[PublicationCount], path: str | Path,
                       delimiter: str = "\t") -> None:
    _write_rows(Path(path), PUBLICATION_COLUMNS,
                ((p.journal_id, p.year, p.citable_items) for p in counts), delimiter)


def write_citations(events: Sequence[CitationEvent], path: str | Path,
                    delimiter: str = "\t") -> None:
    _write_rows(Path(path), CITATION_COLUMNS,
                ((e.citing_paper_id, e.citing_journal_id, e.citing_year,
                  e.cited_journal_id, e.cited_year, e.n_refs) for e in events),
                delimiter)


def write_dataset(dataset: Dataset, directory: str | Path,
                  delimiter: str = "\t") -> dict[str, Path]:
    """Write the three input files; record order is preserved, so writing
    and re-ingesting an assembled dataset round-trips exactly."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "journals": directory / JOURNALS_FILE,
        "publications": directory / PUBLICATIONS_FILE,
        "citations": directory / CITATIONS_FILE,
    }
    write_journals(dataset.journals, dataset.clusters, paths["journals"], delimiter)
    write_publications(dataset.publication_counts, paths["publications"], delimiter)
    write_citations(dataset.citation_events, paths["citations"], delimiter)
    return paths


def save_bundle(dataset: Dataset, directory: str | Path,
                summary: IngestSummary | None = None, delimiter: str = "\t") -> Path:
    """Persist a validated dataset as the three files plus a metadata file."""
    directory = Path(directory)
    paths = write_dataset(dataset, directory, delimiter)
    meta = {
        "format": "citefair-dataset/1",
        "census_year": dataset.census_year,
        "delimiter": delimiter,
        "journals": len(dataset.journals),
        "clusters": [{"cluster_id": c.cluster_id, "name": c.name, "size": c.size}
                     for c in dataset.clusters],
        "publication_counts": len(dataset.publication_counts),
        "citation_events": len(dataset.citation_events),
        "validated": True,
    }
    if summary is not None:
        meta["ingest_summary"] = asdict(summary)
    meta_path = directory / META_FILE
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return meta_path


def load_bundle(directory: str | Path, verify: bool = False) -> tuple[Dataset, dict]:
    """Load a bundle written by save_bundle.

    The bundle is trusted as already validated; pass ``verify=True`` to
    re-run model validation anyway.
    """
    directory = Path(directory)
    meta_path = directory / META_FILE
    if not meta_path.exists():
        raise ValidationError(f"not a dataset bundle (missing {META_FILE}): {directory}")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    config = IngestConfig(min_cluster_size=1, delimiter=meta.get("delimiter", "\t"))
    journals, clusters = parse_journals(directory / JOURNALS_FILE, config)
    counts = parse_publications(directory / PUBLICATIONS_FILE, config)
    events = parse_citations(directory / CITATIONS_FILE, config)
    order = {c["cluster_id"]: i for i, c in enumerate(meta.get("clusters", []))}
    clusters.sort(key=lambda c: order.get(c.cluster_id, len(order)))
    dataset = Dataset(
        journals=tuple(journals),
        clusters=tuple(clusters),
        publication_counts=tuple(counts),
        citation_events=tuple(events),
        census_year=int(meta["census_year"]),
    )
    if verify:
        violations = validate(dataset)
        if violations:
            raise ValidationError(
                f"bundle {directory} fails validation: {violations[0]}"
                + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""))
    return dataset, meta
