"""ASCII PLY and CSV point cloud files (x, y, z in mm)."""

from pathlib import Path
from typing import List, Union
import numpy as np
from app.exceptions import FileFormatError
from app.schemas.point_cloud import PointCloud

PathLike = Union[str, Path]
CSV_HEADER = "x_mm,y_mm,z_mm"
COORDINATE_FORMAT = "%.9f"


def write_ply(path: PathLike, cloud: PointCloud) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = "\n".join(
        [
            "ply",
            "format ascii 1.0",
            f"element vertex {len(cloud)}",
            "property float x",
            "property float y",
            "property float z",
            "end_header",
        ]
    )
    with path.open("w") as f:
        f.write(header + "\n")
        np.savetxt(f, cloud.points, fmt=COORDINATE_FORMAT, delimiter=" ")
    return path


def read_ply(path: PathLike, frame: str = "sensor") -> PointCloud:
    """
    Read the x, y, z properties of the vertex element of an ASCII PLY file.

    Other vertex properties are ignored; elements after the vertices are not read.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise FileFormatError(path, "missing ply magic")

    vertex_count, properties, in_vertex, body_start = None, [], False, None
    for index, line in enumerate(lines[1:], start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "comment":
            continue
        if tokens[0] == "format" and tokens[1:2] != ["ascii"]:
            raise FileFormatError(path, "only ascii PLY is supported")
        elif tokens[0] == "element":
            in_vertex = tokens[1] == "vertex"
            if in_vertex:
                vertex_count = int(tokens[2])
        elif tokens[0] == "property" and in_vertex:
            properties.append(tokens[-1])
        elif tokens[0] == "end_header":
            body_start = index + 1
            break

    if vertex_count is None or body_start is None:
        raise FileFormatError(path, "header has no vertex element or end_header")
    try:
        columns = [properties.index(axis) for axis in ("x", "y", "z")]
    except ValueError:
        raise FileFormatError(path, "vertex element lacks x, y or z")

    body = lines[body_start : body_start + vertex_count]
    if len(body) != vertex_count:
        raise FileFormatError(path, f"expected {vertex_count} vertices, found {len(body)}")
    if vertex_count == 0:
        return PointCloud(points=np.zeros((0, 3)), frame=frame)
    try:
        values = np.loadtxt(body, ndmin=2)
    except ValueError as e:
        raise FileFormatError(path, f"bad vertex row ({e})")
    return PointCloud(points=values[:, columns], frame=frame)


def write_csv(path: PathLike, cloud: PointCloud) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path, cloud.points, fmt=COORDINATE_FORMAT, delimiter=",", header=CSV_HEADER, comments=""
    )
    return path


def read_csv(path: PathLike, frame: str = "sensor") -> PointCloud:
    path = Path(path)
    lines: List[str] = path.read_text().splitlines()
    if not lines or lines[0].strip().replace(" ", "") != CSV_HEADER:
        raise FileFormatError(path, f"expected header {CSV_HEADER}")
    rows = [line for line in lines[1:] if line.strip()]
    if not rows:
        return PointCloud(points=np.zeros((0, 3)), frame=frame)
    try:
        values = np.loadtxt(rows, delimiter=",", ndmin=2)
    except ValueError as e:
        raise FileFormatError(path, f"bad coordinate row ({e})")
    return PointCloud(points=values, frame=frame)


def read_cloud(path: PathLike, frame: str = "sensor") -> PointCloud:
    """Dispatch on the suffix: .csv is CSV, anything else PLY."""
    if Path(path).suffix.lower() == ".csv":
        return read_csv(path, frame)
    return read_ply(path, frame)


def write_cloud(path: PathLike, cloud: PointCloud) -> Path:
    if Path(path).suffix.lower() == ".csv":
        return write_csv(path, cloud)
    return write_ply(path, cloud)
