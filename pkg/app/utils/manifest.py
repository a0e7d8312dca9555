"""
Stitch manifest files.

One CSV row per contact with the columns

    frame,g0,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,depth_mm

Paths are resolved against the manifest's directory. The g0 column may be
left out (or blank) when a shared rest frame is given instead.
"""

import csv
from pathlib import Path
from typing import Optional, Union
from pydantic import ValidationError
from app.exceptions import FileFormatError, ManifestError
from app.schemas.pipeline import ManifestRow, RunManifest
from app.schemas.point_cloud import RigidTransform

PathLike = Union[str, Path]
POSE_COLUMNS = [f"r{i}{j}" for i in range(3) for j in range(3)] + ["tx", "ty", "tz"]
REQUIRED_COLUMNS = ["frame", *POSE_COLUMNS, "depth_mm"]


def read_manifest(path: PathLike, default_g0: Optional[PathLike] = None) -> RunManifest:
    """
    Parse a manifest and check that every referenced image exists.

    :param path: Manifest CSV.
    :param default_g0: Rest frame for rows without a g0 entry.
    :return: The manifest rows in file order.
    """
    path = Path(path)
    base = path.parent
    try:
        with path.open(newline="") as f:
            reader = csv.DictReader(f)
            header = [name.strip() for name in (reader.fieldnames or [])]
            missing = [column for column in REQUIRED_COLUMNS if column not in header]
            if missing:
                raise FileFormatError(path, f"missing columns {', '.join(missing)}")
            records = [
                {k.strip(): (v or "").strip() for k, v in row.items() if k} for row in reader
            ]
    except UnicodeDecodeError:
        raise FileFormatError(path, "manifest is not a text file")

    rows = []
    for index, record in enumerate(records):
        if record.get("g0"):
            g0 = base / record["g0"]
        elif default_g0 is not None:
            g0 = Path(default_g0)
        else:
            raise ManifestError(index, "no g0 column value and no default rest frame")
        try:
            pose = RigidTransform.from_row_major([float(record[c]) for c in POSE_COLUMNS])
            rows.append(
                ManifestRow(
                    frame=base / record["frame"],
                    g0=g0,
                    pose=pose,
                    depth_mm=float(record["depth_mm"]),
                )
            )
        except (ValueError, ValidationError) as e:
            raise ManifestError(index, str(e))
    return RunManifest(rows=rows)


def write_manifest(path: PathLike, manifest: RunManifest) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["frame", "g0", *POSE_COLUMNS, "depth_mm"])
        for row in manifest.rows:
            writer.writerow(
                [str(row.frame), str(row.g0), *[repr(v) for v in row.pose.to_row_major()], repr(row.depth_mm)]
            )
    return path
