"""
Persistence of experiment results: CSV rows, certificate dumps and graph
files, all through the Storage layer.
"""

import csv
import io
import logging
from typing import Iterable, Optional

from .certificate import MinorCertificate
from .errors import InvalidParameterError
from .graph import MultiGraph
from .models import CSV_COLUMNS, ExperimentRecord
from .parser import GraphParser
from .storage import Storage
from .utils import slugify


class ResultRepository:
    """Reads and writes result artefacts under the storage base directory."""

    CERTIFICATE_SUFFIX = ".json"

    def __init__(self, storage: Storage, parser: Optional[GraphParser] = None):
        """Initialize with storage instance and optional graph parser."""
        self.storage = storage
        self.parser = parser or GraphParser()
        self.logger = logging.getLogger(__name__)

    def render_csv(self, records: Iterable[ExperimentRecord]) -> str:
        """CSV text with the fixed header, one row per record."""
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=list(CSV_COLUMNS), lineterminator="\n"
        )
        writer.writeheader()
        for record in records:
            writer.writerow(record.to_row())
        return buffer.getvalue()

    def save_records(
        self, path: str, records: Iterable[ExperimentRecord]
    ) -> bool:
        """Write records as CSV to ``path``."""
        saved = self.storage.write_text(path, self.render_csv(records))
        if not saved:
            self.logger.error("Could not write results to %s", path)
        return saved

    def certificate_path(self, directory: str, record: ExperimentRecord) -> str:
        """Dump location of the certificate behind ``record``."""
        name = (
            f"{record.command}_{slugify(record.param)}_seed{record.seed}"
            f"_trial{record.trial:04d}{self.CERTIFICATE_SUFFIX}"
        )
        return self.storage.join_path(directory, name)

    def save_certificate(
        self, directory: str, record: ExperimentRecord
    ) -> Optional[str]:
        """Write the record's certificate, return its path (None if absent)."""
        if record.certificate is None:
            return None
        path = self.certificate_path(directory, record)
        if not self.storage.write_json(path, record.certificate):
            self.logger.error("Could not write certificate %s", path)
            return None
        self.logger.debug("Saved certificate %s", path)
        return path

    def load_certificate(self, path: str) -> Optional[MinorCertificate]:
        """Read a certificate dump, None if missing or malformed."""
        data = self.storage.read_json(path)
        if not data:
            return None
        try:
            return MinorCertificate.from_dict(data)
        except (KeyError, TypeError, ValueError):
            self.logger.warning("Malformed certificate in %s", path)
            return None

    def list_certificates(self, directory: str) -> list[str]:
        """Paths of the certificate dumps in ``directory``."""
        return [
            self.storage.join_path(directory, name)
            for name in self.storage.list_files(
                directory, self.CERTIFICATE_SUFFIX
            )
        ]

    def save_graph(self, path: str, graph: MultiGraph) -> bool:
        """Write ``graph`` in the plain-text format."""
        return self.storage.write_text(path, self.parser.format(graph))

    def load_graph(self, path: str) -> Optional[MultiGraph]:
        """Read a graph file, None if missing or malformed."""
        content = self.storage.read_text(path)
        if content is None:
            return None
        try:
            return self.parser.parse(content)
        except InvalidParameterError as exc:
            self.logger.warning("Malformed graph file %s: %s", path, exc)
            return None
