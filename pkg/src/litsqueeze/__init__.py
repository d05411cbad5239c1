"""litsqueeze: squeeze collections of biomedical abstracts into structured data.

The package turns a set of publication abstracts into ranked genes and terms
(randomization test against a heterogeneous background), RAKE key phrases,
enriched gene sets, and condition similarity networks / heat-maps.  It is
usable as a library, through the ``litsqueeze`` CLI, and as an HTTP service.
"""

__version__ = "0.1.0"

from litsqueeze.corpus import Document, DocumentSet
from litsqueeze.query import BooleanQuery

__all__ = ["Document", "DocumentSet", "BooleanQuery", "__version__"]
