"""Citation indicators per journal: impact factors (2- and 5-year windows),
total cites, c/p ratios and bare numerators, each under integer or
fractional counting, plus per-cluster mean rescaling.

Counting modes
--------------
integer     every citation event adds 1 to the cited journal.
fractional  every event adds 1/n_refs, n_refs being the citing paper's
            full reference-list length; denominators are never
            fractionalized.

A value is UNDEFINED (None) exactly when the indicator's denominator is
zero for that journal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .errors import ParseError, RescaleError
from .model import Dataset
from .stats import rank_order

__all__ = [
    "WINDOW_ALL",
    "IndicatorSpec",
    "IndicatorTable",
    "if_numerator",
    "if_denominator",
    "compute_table",
    "compute_tables",
    "rescale",
    "rank_table",
    "write_table",
    "read_table",
    "standard_specs",
]

KINDS = ("impact_factor", "total_cites", "cp_ratio", "numerator_only")
COUNTINGS = ("integer", "fractional")
WINDOW_ALL = "all"

NA = "NA"  # serialized UNDEFINED sentinel


@dataclass(frozen=True)
class IndicatorSpec:
    """What to compute: kind, citation window, and counting mode.

    ``window`` is 2 or 5 for impact factors and numerators; total cites
    and c/p ratios always use all prior years ("all").
    """

    kind: str
    window: int | str | None = None
    counting: str = "integer"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown indicator kind '{self.kind}'")
        if self.counting not in COUNTINGS:
            raise ValueError(f"unknown counting mode '{self.counting}'")
        if self.kind in ("impact_factor", "numerator_only"):
            if self.window not in (2, 5):
                raise ValueError(f"{self.kind} requires window 2 or 5, got {self.window!r}")
        else:
            if self.window not in (None, WINDOW_ALL):
                raise ValueError(f"{self.kind} uses all prior years; got window {self.window!r}")
            object.__setattr__(self, "window", WINDOW_ALL)

    @property
    def indicator_id(self) -> str:
        suffix = "IC" if self.counting == "integer" else "FC"
        if self.kind == "impact_factor":
            return f"IF{self.window}-{suffix}"
        if self.kind == "numerator_only":
            return f"TC-{suffix}{self.window}"
        if self.kind == "total_cites":
            return f"TC-{suffix}"
        return f"CP-{suffix}"


@dataclass(frozen=True)
class IndicatorTable:
    """One indicator's value per journal, with provenance.

    ``values`` maps every journal to a non-negative float or None
    (UNDEFINED).  Rescaled tables carry the raw table's id in
    ``source_id`` and the divisor used per cluster in
    ``cluster_baselines`` (mean, defined-count) pairs.
    """

    indicator_id: str
    kind: str
    window: int | str
    counting: str
    normalization: str
    census_year: int
    values: Mapping[str, Optional[float]]
    source_id: Optional[str] = None
    cluster_baselines: Optional[Mapping[str, tuple[float, int]]] = field(
        default=None, compare=False)

    def defined(self) -> dict[str, float]:
        return {j: v for j, v in self.values.items() if v is not None}


def if_denominator(dataset: Dataset, journal_id: str, window: int) -> int:
    """Citable items summed over the window years [t-window, t-1]."""
    if window not in (2, 5):
        raise ValueError(f"window must be 2 or 5, got {window}")
    items = dataset.items_by_journal_year
    t = dataset.census_year
    return sum(items.get((journal_id, y), 0) for y in range(t - window, t))


def if_numerator(dataset: Dataset, journal_id: str, spec: IndicatorSpec) -> float:
    """Citations received in year t to items of the window years.

    Integer counting returns the event count; fractional counting the sum
    of 1/n_refs over the same events.
    """
    if spec.kind not in ("impact_factor", "numerator_only"):
        raise ValueError(f"numerator undefined for kind '{spec.kind}'")
    if journal_id not in dataset.journal_ids:
        raise ValueError(f"journal '{journal_id}' not in dataset")
    t = dataset.census_year
    lo = t - spec.window
    events = [ev for ev in dataset.events_by_cited.get(journal_id, ())
              if ev.citing_year == t and lo <= ev.cited_year <= t - 1]
    if spec.counting == "integer":
        return len(events)
    return sum(1.0 / ev.n_refs for ev in events)


def compute_tables(dataset: Dataset, specs: list[IndicatorSpec]) -> list[IndicatorTable]:
    """Compute several indicator tables in a single pass over the events.

    Bulk path for large datasets: accumulators for every required
    (window, counting) pair are filled together, then assembled per spec.
    """
    t = dataset.census_year
    journal_ids = [j.journal_id for j in dataset.journals]

    needed: set[tuple[int | str, str]] = set()
    for spec in specs:
        if spec.kind in ("impact_factor", "numerator_only"):
            needed.add((spec.window, spec.counting))
        else:
            needed.add((WINDOW_ALL, spec.counting))

    acc: dict[tuple[int | str, str], dict[str, float]] = {
        key: dict.fromkeys(journal_ids, 0.0) for key in needed
    }
    w2i = acc.get((2, "integer"))
    w2f = acc.get((2, "fractional"))
    w5i = acc.get((5, "integer"))
    w5f = acc.get((5, "fractional"))
    alli = acc.get((WINDOW_ALL, "integer"))
    allf = acc.get((WINDOW_ALL, "fractional"))

    for ev in dataset.citation_events:
        if ev.citing_year != t:
            continue
        jid = ev.cited_journal_id
        dy = t - ev.cited_year
        if alli is not None:
            alli[jid] += 1.0
        if allf is not None:
            allf[jid] += 1.0 / ev.n_refs
        if 1 <= dy <= 2:
            if w2i is not None:
                w2i[jid] += 1.0
            if w2f is not None:
                w2f[jid] += 1.0 / ev.n_refs
        if 1 <= dy <= 5:
            if w5i is not None:
                w5i[jid] += 1.0
            if w5f is not None:
                w5f[jid] += 1.0 / ev.n_refs

    items = dataset.items_by_journal_year
    tables = []
    for spec in specs:
        values: dict[str, Optional[float]] = {}
        if spec.kind == "impact_factor":
            nums = acc[(spec.window, spec.counting)]
            for jid in journal_ids:
                den = sum(items.get((jid, y), 0) for y in range(t - spec.window, t))
                values[jid] = nums[jid] / den if den > 0 else None
        elif spec.kind == "numerator_only":
            nums = acc[(spec.window, spec.counting)]
            values = dict(nums)
        elif spec.kind == "total_cites":
            values = dict(acc[(WINDOW_ALL, spec.counting)])
        else:  # cp_ratio
            nums = acc[(WINDOW_ALL, spec.counting)]
            for jid in journal_ids:
                den = items.get((jid, t), 0)
                values[jid] = nums[jid] / den if den > 0 else None
        tables.append(IndicatorTable(
            indicator_id=spec.indicator_id,
            kind=spec.kind,
            window=spec.window,
            counting=spec.counting,
            normalization="raw",
            census_year=t,
            values=values,
        ))
    return tables


def compute_table(dataset: Dataset, spec: IndicatorSpec) -> IndicatorTable:
    """Compute one indicator table (see compute_tables for the bulk path)."""
    return compute_tables(dataset, [spec])[0]


def standard_specs() -> list[IndicatorSpec]:
    """The default battery: IF2/IF5, total cites and c/p, both countings."""
    specs = []
    for window in (2, 5):
        for counting in COUNTINGS:
            specs.append(IndicatorSpec("impact_factor", window, counting))
    for kind in ("total_cites", "cp_ratio"):
        for counting in COUNTINGS:
            specs.append(IndicatorSpec(kind, counting=counting))
    return specs


def rescale(table: IndicatorTable, partition: Mapping[str, str]) -> IndicatorTable:
    """Divide each defined value by the arithmetic mean of its cluster.

    Means are taken over defined values only; UNDEFINED values stay
    UNDEFINED and the per-cluster divisor and defined-count used are
    recorded on the result.  After rescaling, each cluster's mean of
    defined values is 1.
    """
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for jid, v in table.values.items():
        try:
            g = partition[jid]
        except KeyError:
            raise RescaleError(f"journal '{jid}' missing from the partition") from None
        if v is None:
            sums.setdefault(g, 0.0)
            counts.setdefault(g, 0)
            continue
        sums[g] = sums.get(g, 0.0) + v
        counts[g] = counts.get(g, 0) + 1

    baselines: dict[str, tuple[float, int]] = {}
    for g in sums:
        if counts[g] == 0:
            raise RescaleError(f"cluster '{g}' has no defined values to rescale")
        mean = sums[g] / counts[g]
        if mean == 0.0:
            raise RescaleError(f"cluster '{g}' has zero mean; cannot rescale")
        baselines[g] = (mean, counts[g])

    values = {
        jid: (None if v is None else v / baselines[partition[jid]][0])
        for jid, v in table.values.items()
    }
    return IndicatorTable(
        indicator_id=f"{table.indicator_id}-RS",
        kind=table.kind,
        window=table.window,
        counting=table.counting,
        normalization="rescaled",
        census_year=table.census_year,
        values=values,
        source_id=table.indicator_id,
        cluster_baselines=baselines,
    )


def rank_table(table: IndicatorTable, descending: bool = True) -> list[tuple[str, Optional[float], int]]:
    """Rank journals by value, UNDEFINED last, ties broken by id ascending.

    Returns (journal_id, value, rank) with 1-based ranks; tied values get
    distinct consecutive ranks under the id tie-break.
    """
    defined = rank_order(table.values)
    if not descending:
        defined.sort(key=lambda kv: (kv[1], kv[0]))
    undefined = sorted(j for j, v in table.values.items() if v is None)
    ranked: list[tuple[str, Optional[float], int]] = []
    rank = 1
    for jid, v in defined:
        ranked.append((jid, v, rank))
        rank += 1
    for jid in undefined:
        ranked.append((jid, None, rank))
        rank += 1
    return ranked


def write_table(table: IndicatorTable, path: str | Path, delimiter: str = "\t") -> None:
    """Serialize a table: one provenance header line, then journal/value rows.

    Values keep full precision; UNDEFINED is written as "NA".  Rows are
    sorted by journal id so identical tables produce identical bytes.
    """
    path = Path(path)
    meta = (f"# indicator_id={table.indicator_id} kind={table.kind} "
            f"window={table.window} counting={table.counting} "
            f"normalization={table.normalization} census_year={table.census_year}")
    if table.source_id:
        meta += f" source_id={table.source_id}"
    lines = [meta, f"journal_id{delimiter}value"]
    for jid in sorted(table.values):
        v = table.values[jid]
        lines.append(f"{jid}{delimiter}{NA if v is None else repr(v)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_table(path: str | Path, delimiter: str = "\t") -> IndicatorTable:
    """Read a table written by write_table (or an externally supplied one
    in the same format, e.g. vendor-provided impact factors)."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("#"):
            raise ParseError(path, 1, "missing provenance header line")
        meta: dict[str, str] = {}
        for token in header.lstrip("#").split():
            key, _, val = token.partition("=")
            if not _:
                raise ParseError(path, 1, f"malformed provenance token '{token}'")
            meta[key] = val
        for key in ("indicator_id", "kind", "window", "counting",
                    "normalization", "census_year"):
            if key not in meta:
                raise ParseError(path, 1, f"provenance header missing '{key}'")
        columns = fh.readline().rstrip("\n").split(delimiter)
        if columns[:2] != ["journal_id", "value"]:
            raise ParseError(path, 2, "expected columns journal_id, value")
        values: dict[str, Optional[float]] = {}
        for lineno, line in enumerate(fh, start=3):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(delimiter)
            if len(parts) != 2 or not parts[0]:
                raise ParseError(path, lineno, f"malformed row: {line!r}")
            jid, raw = parts
            if jid in values:
                raise ParseError(path, lineno, f"duplicate journal_id '{jid}'")
            if raw == NA:
                values[jid] = None
            else:
                try:
                    values[jid] = float(raw)
                except ValueError:
                    raise ParseError(path, lineno, f"bad value {raw!r}") from None
    window: int | str = meta["window"]
    if window != WINDOW_ALL:
        window = int(window)
    try:
        census_year = int(meta["census_year"])
    except ValueError:
        raise ParseError(path, 1, f"bad census_year {meta['census_year']!r}") from None
    return IndicatorTable(
        indicator_id=meta["indicator_id"],
        kind=meta["kind"],
        window=window,
        counting=meta["counting"],
        normalization=meta["normalization"],
        census_year=census_year,
        values=values,
        source_id=meta.get("source_id"),
    )
