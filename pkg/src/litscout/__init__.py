"""litscout: scholarly search and recommendation engine.

Faceted ranked retrieval over a bibliographic corpus, list-to-list operators
on the citation and readership graphs, chained explore-the-field pipelines,
a reduced-space recommendation panel, and per-user digests; usable as a
library, a pipeable CLI, and an HTTP service with a bundled web client.
"""

__version__ = "0.1.0"
