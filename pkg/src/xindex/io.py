"""CSV/JSON readers and writers for manifests, rater scores and results.

Schemas (header rows are exact):

* manifest: ``dataset_id,title,seed_work_id,access_url,author_ids,citation_override``
  with ``author_ids`` separated by ``;`` and ``citation_override`` optional.
* raters: ``dataset_id,r1,r2,r3,r4,r5`` with scores in [0, 100].
* vscores: ``dataset_id,X,Y,C,D,V,truncated,errors``.
* xindex: ``author_id,datasets,x_index``.

CSV floats carry 6 significant digits; JSON keeps full precision.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from xindex.errors import ManifestError, MissingField
from xindex.model import MANIFEST_COLUMNS, DatasetRecord, RaterScoreRow, validate_manifest

RATER_COLUMNS = ("dataset_id", "r1", "r2", "r3", "r4", "r5")
VSCORE_COLUMNS = ("dataset_id", "X", "Y", "C", "D", "V", "truncated", "errors")
XINDEX_COLUMNS = ("author_id", "datasets", "x_index")


def fmt_float(value: float) -> str:
    return f"{value:.6g}"


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str | os.PathLike, payload: object) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _read_rows(path: str | os.PathLike, required: Sequence[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingField(0, column)
        return [dict(row) for row in reader]


def read_manifest(path: str | os.PathLike) -> list[DatasetRecord]:
    return validate_manifest(_read_rows(path, ("dataset_id", "seed_work_id")))


def manifest_csv(records: Iterable[DatasetRecord]) -> str:
    rows = []
    for r in records:
        override = "" if r.scalar_citation_override is None else str(r.scalar_citation_override)
        rows.append([r.dataset_id, r.title, r.seed_work_id, r.access_url or "", ";".join(r.author_ids), override])
    return render_csv(MANIFEST_COLUMNS, rows)


def read_raters(path: str | os.PathLike) -> list[RaterScoreRow]:
    rows = []
    for i, raw in enumerate(_read_rows(path, RATER_COLUMNS), start=1):
        try:
            scores = tuple(float(raw[c]) for c in RATER_COLUMNS[1:])
            rows.append(RaterScoreRow(dataset_id=raw["dataset_id"].strip(), scores=scores))
        except (TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: row {i}: {exc}") from exc
    return rows


def raters_csv(rows: Iterable[RaterScoreRow]) -> str:
    return render_csv(RATER_COLUMNS, ([r.dataset_id, *(repr(s) for s in r.scores)] for r in rows))


def read_vscores(path: str | os.PathLike) -> dict[str, float]:
    """dataset_id -> V for rows carrying a value; rows without V are skipped."""
    out = {}
    for raw in _read_rows(path, ("dataset_id", "V")):
        if raw["V"].strip():
            out[raw["dataset_id"]] = float(raw["V"])
    return out


def xindex_csv(rows: Iterable[tuple[str, int, float]]) -> str:
    return render_csv(XINDEX_COLUMNS, ([a, n, fmt_float(x)] for a, n, x in rows))


def vscores_csv(rows: Iterable[Mapping[str, object]]) -> str:
    out = []
    for row in rows:
        if row.get("V") is None:
            out.append([row["dataset_id"], "", "", "", "", "", "", row.get("errors", "")])
            continue
        out.append(
            [
                row["dataset_id"],
                fmt_float(row["X"]),
                row["Y"],
                row["C"],
                fmt_float(row["D"]),
                fmt_float(row["V"]),
                "true" if row["truncated"] else "false",
                row.get("errors", ""),
            ]
        )
    return render_csv(VSCORE_COLUMNS, out)
