import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citefair.model import (
    CitationEvent,
    Cluster,
    Dataset,
    JournalRecord,
    PublicationCount,
)


def make_dataset(journals, clusters, counts, events, census_year=2010) -> Dataset:
    return Dataset(
        journals=tuple(journals),
        clusters=tuple(clusters),
        publication_counts=tuple(counts),
        citation_events=tuple(events),
        census_year=census_year,
    )


@pytest.fixture
def tiny_dataset() -> Dataset:
    """Three journals in two clusters, census year 2010, hand-checkable."""
    journals = [
        JournalRecord("jA", "Alpha Journal", "g1"),
        JournalRecord("jB", "Beta Journal", "g1"),
        JournalRecord("jC", "Gamma Journal", "g2"),
    ]
    clusters = [Cluster("g1", "Group One", 2), Cluster("g2", "Group Two", 1)]
    counts = [
        PublicationCount("jA", 2008, 150),
        PublicationCount("jA", 2009, 100),
        PublicationCount("jA", 2010, 80),
        PublicationCount("jB", 2008, 40),
        PublicationCount("jB", 2009, 60),
        PublicationCount("jB", 2010, 50),
        PublicationCount("jC", 2009, 20),
        PublicationCount("jC", 2010, 10),
    ]
    events = [
        # one citing paper with 4 refs citing jA twice in-window
        CitationEvent("p1", "jB", 2010, "jA", 2009, 4),
        CitationEvent("p1", "jB", 2010, "jA", 2008, 4),
        CitationEvent("p1", "jB", 2010, "jC", 2009, 4),
        # a second paper citing jA once in-window, once out-of-window
        CitationEvent("p2", "jC", 2010, "jA", 2009, 2),
        CitationEvent("p2", "jC", 2010, "jA", 2005, 2),
        # same-year citation (counts for total cites, not for IF2)
        CitationEvent("p3", "jA", 2010, "jB", 2010, 1),
    ]
    return make_dataset(journals, clusters, counts, events)
