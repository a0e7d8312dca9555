import numpy as np
import pytest
from app.exceptions import FileFormatError
from app.schemas.point_cloud import PointCloud
from app.utils.point_cloud_io import read_cloud, read_csv, read_ply, write_cloud, write_csv, write_ply


@pytest.mark.parametrize("name", ["cloud.ply", "cloud.csv"])
def test_cloud_round_trip(tmp_path, rng, name):
    cloud = PointCloud(points=rng.uniform(-20.0, 20.0, (50, 3)))

    loaded = read_cloud(write_cloud(tmp_path / name, cloud))

    np.testing.assert_allclose(loaded.points, cloud.points, rtol=0, atol=1e-9)


def test_empty_cloud_round_trip(tmp_path):
    assert read_ply(write_ply(tmp_path / "empty.ply", PointCloud())).is_empty
    assert read_csv(write_csv(tmp_path / "empty.csv", PointCloud())).is_empty


def test_csv_header(tmp_path):
    path = write_csv(tmp_path / "c.csv", PointCloud(points=[[1.0, 2.0, 3.0]]))

    assert path.read_text().splitlines()[0] == "x_mm,y_mm,z_mm"


def test_read_ply_with_extra_properties(tmp_path):
    path = tmp_path / "normals.ply"
    path.write_text(
        "ply\n"
        "format ascii 1.0\n"
        "comment written elsewhere\n"
        "element vertex 2\n"
        "property float nx\n"
        "property float x\n"
        "property float y\n"
        "property float z\n"
        "element face 0\n"
        "property list uchar int vertex_indices\n"
        "end_header\n"
        "9 1 2 3\n"
        "9 4 5 6\n"
    )

    cloud = read_ply(path)

    assert cloud.points.tolist() == [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]


@pytest.mark.parametrize(
    "text",
    [
        "not a ply file\n",
        "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n",
        "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2 3\n",
        "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nend_header\n1 2\n",
    ],
)
def test_malformed_ply(tmp_path, text):
    path = tmp_path / "bad.ply"
    path.write_text(text)

    with pytest.raises(FileFormatError):
        read_ply(path)


def test_csv_needs_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2,3\n")

    with pytest.raises(FileFormatError):
        read_csv(path)
