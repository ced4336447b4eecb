import logging
from collections.abc import Callable
from pathlib import Path

import pytest

from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Disk
from homothet_packing.geometry import axis_rectangle
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.packings.documents import save
from homothet_packing.packings.tests.factories import DiskFactory
from homothet_packing.packings.tests.factories import PackingDocFactory

logger = logging.getLogger(__name__)


@pytest.fixture(autouse=True)
def _float_eps(settings) -> None:
    settings.PACKING_FLOAT_EPS = 1e-9


@pytest.fixture
def unit_square() -> ConvexPolygon:
    return UNIT_SQUARE


@pytest.fixture
def unit_disk() -> Disk:
    return Disk.of(0, 0, 1)


@pytest.fixture
def disk_row() -> PackingDoc:
    """Three tangent unit-diameter disks in ``[0, 3] x [0, 1]``."""
    DiskFactory.reset_sequence()
    return PackingDocFactory(
        container=axis_rectangle(0, 0, 3, 1),
        bodies=tuple(DiskFactory.create_batch(3)),
        reference_body=Disk.of(0, 0, 1),
    )


@pytest.fixture
def write_doc(tmp_path) -> Callable[[PackingDoc, str], Path]:
    """Write a document under ``tmp_path`` and return its path."""

    def _write(doc: PackingDoc, name: str = "packing.json") -> Path:
        path = tmp_path / name
        path.write_text(save(doc), encoding="utf-8")
        logger_message = f"Wrote {doc.n} bodies to {path}"
        logger.debug(logger_message)
        return path

    return _write
