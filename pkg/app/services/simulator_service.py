from typing import Optional, Tuple
import numpy as np
from scipy.ndimage import gaussian_filter
from app.constants.simulator import DEFAULT_SKIRT_SIGMA, PrimitiveKinds
from app.core.logging_config import get_logger
from app.exceptions import InvalidPrimitiveError, ShapeMismatchError
from app.schemas.geometry import HeightField, HeightUnits, SensorGeometry
from app.schemas.image import RasterImage
from app.schemas.simulator import (
    ContactPrimitive,
    ExposureModel,
    FrameMetadata,
    PinLattice,
    SyntheticFrame,
)

logger = get_logger("tacshade.simulator")

WHITE = 255
BLACK = 0


class SimulatorService:
    """Synthetic TacShade frames with known ground-truth depth."""

    def lattice_sites(self, lattice: PinLattice) -> np.ndarray:
        """
        Pin centers (u, v) of the hexagonal lattice anchored at the field center.

        Rows are pitch * sqrt(3) / 2 apart and every odd row is shifted by
        half a pitch. Sites whose disc could touch the frame are returned.
        """
        center_u, center_v = lattice.field.center_u, lattice.field.center_v
        row_step = lattice.pitch * np.sqrt(3.0) / 2.0
        margin = lattice.pin_radius + lattice.pitch

        j_low = int(np.floor((-margin - center_v) / row_step))
        j_high = int(np.ceil((lattice.height + margin - center_v) / row_step))
        i_low = int(np.floor((-margin - center_u) / lattice.pitch)) - 1
        i_high = int(np.ceil((lattice.width + margin - center_u) / lattice.pitch)) + 1

        j, i = np.mgrid[j_low : j_high + 1, i_low : i_high + 1]
        u = center_u + (i + 0.5 * (j % 2)) * lattice.pitch
        v = center_v + j * row_step
        sites = np.column_stack([u.ravel(), v.ravel()])
        keep = (
            (sites[:, 0] > -margin)
            & (sites[:, 0] < lattice.width + margin)
            & (sites[:, 1] > -margin)
            & (sites[:, 1] < lattice.height + margin)
        )
        return sites[keep]

    def render_rest_frame(self, lattice: PinLattice) -> RasterImage:
        """White field with black pin discs at every lattice site; black outside the field."""
        sites = self.lattice_sites(lattice)
        radii = np.full(len(sites), lattice.pin_radius)
        return self._rasterize(lattice, sites, radii)

    def indent_height(
        self,
        primitive: ContactPrimitive,
        geom: SensorGeometry,
        width: int,
        height: int,
        skirt_sigma: float = DEFAULT_SKIRT_SIGMA,
    ) -> HeightField:
        """
        Ground-truth depth of a rigid primitive pressed into the hemisphere.

        The rigid depth is measured along the ray to the sphere center and
        capped at the indent depth, then spread by a Gaussian skirt of
        skirt_sigma pixels (0 disables the skirt).

        :param primitive: The pressed object and its pose.
        :param geom: Sensor geometry mapping pixels to mm.
        :param width: Frame width in pixels.
        :param height: Frame height in pixels.
        :param skirt_sigma: Standard deviation of the skirt in pixels.
        :return: Height field in mm.
        """
        radius = geom.radius_r
        depth = primitive.indent_depth
        if depth >= radius:
            raise InvalidPrimitiveError(
                f"Indent depth {depth} mm must be below the hemisphere radius {radius} mm"
            )
        if skirt_sigma < 0:
            raise InvalidPrimitiveError("Skirt sigma must be non-negative")
        if primitive.x_mm**2 + primitive.y_mm**2 >= radius**2:
            logger.debug(
                f"Primitive at ({primitive.x_mm}, {primitive.y_mm}) misses the hemisphere; no contact"
            )
            return HeightField(data=np.zeros((height, width)), units=HeightUnits.MILLIMETRES)

        v, u = np.mgrid[0:height, 0:width].astype(np.float64)
        x, y = geom.pixel_to_mm(u, v)
        on_sphere = (x**2 + y**2 < radius**2) & geom.mask.inside(width, height)
        rest_z = np.sqrt(np.clip(radius**2 - x**2 - y**2, 0.0, None))

        if depth == 0:
            h = np.zeros((height, width))
        elif primitive.kind == PrimitiveKinds.SPHERE:
            h = self._sphere_depth(primitive, radius, x, y, rest_z)
        else:
            h = self._extruded_depth(primitive, radius, x, y, rest_z)
        h = np.where(on_sphere, np.clip(h, 0.0, depth), 0.0)

        if skirt_sigma > 0 and depth > 0:
            h = gaussian_filter(h, sigma=skirt_sigma, mode="constant")
        logger.debug(f"{primitive.kind} indent: peak {h.max():.3f} mm over {int((h > 0).sum())} px")
        return HeightField(data=h, units=HeightUnits.MILLIMETRES)

    def render_deformed_frame(
        self,
        lattice: PinLattice,
        h: HeightField,
        exposure: Optional[ExposureModel] = None,
    ) -> SyntheticFrame:
        """
        Shrink every pin by the local depth at its site.

        Rendered radius is pin_radius * (1 - kappa * d / max_depth) with d the
        depth at the site, capped at the saturation depth when one is set.
        """
        exposure = exposure or ExposureModel()
        if (h.height, h.width) != (lattice.height, lattice.width):
            raise ShapeMismatchError(
                f"Height field is {h.width}x{h.height}, lattice is {lattice.width}x{lattice.height}"
            )
        sites = self.lattice_sites(lattice)
        site_depth = self._sample_at_sites(h.data, sites)
        cap = exposure.max_depth_mm
        if exposure.saturation_depth_mm is not None:
            cap = min(cap, exposure.saturation_depth_mm)
        effective = np.clip(site_depth, 0.0, cap)
        radii = lattice.pin_radius * (1.0 - exposure.kappa * effective / exposure.max_depth_mm)
        image = self._rasterize(lattice, sites, radii)
        return SyntheticFrame(image=image, truth_height=h)

    def make_frame(
        self,
        primitive: ContactPrimitive,
        geom: SensorGeometry,
        lattice: PinLattice,
        exposure: Optional[ExposureModel] = None,
        skirt_sigma: float = DEFAULT_SKIRT_SIGMA,
    ) -> Tuple[SyntheticFrame, RasterImage]:
        """Render a contact frame with metadata together with its rest frame."""
        exposure = exposure or ExposureModel()
        truth = self.indent_height(primitive, geom, lattice.width, lattice.height, skirt_sigma)
        frame = self.render_deformed_frame(lattice, truth, exposure)
        meta = FrameMetadata(
            primitive=primitive,
            geometry=geom,
            lattice=lattice,
            exposure=exposure,
            skirt_sigma=skirt_sigma,
        )
        rest = self.render_rest_frame(lattice)
        return SyntheticFrame(image=frame.image, truth_height=truth, meta=meta), rest

    def _rasterize(
        self, lattice: PinLattice, sites: np.ndarray, radii: np.ndarray
    ) -> RasterImage:
        inside = lattice.field.inside(lattice.width, lattice.height)
        background = WHITE if lattice.marker_background else BLACK
        image = np.where(inside, background, BLACK).astype(np.uint8)

        for (site_u, site_v), pin_radius in zip(sites, radii):
            if pin_radius <= 0:
                continue
            u0 = max(int(np.floor(site_u - pin_radius)), 0)
            u1 = min(int(np.ceil(site_u + pin_radius)) + 1, lattice.width)
            v0 = max(int(np.floor(site_v - pin_radius)), 0)
            v1 = min(int(np.ceil(site_v + pin_radius)) + 1, lattice.height)
            if u0 >= u1 or v0 >= v1:
                continue
            vv, uu = np.mgrid[v0:v1, u0:u1]
            disc = (uu - site_u) ** 2 + (vv - site_v) ** 2 < pin_radius**2
            image[v0:v1, u0:u1][disc] = BLACK
        return RasterImage(data=image)

    @staticmethod
    def _sample_at_sites(h: np.ndarray, sites: np.ndarray) -> np.ndarray:
        cols = np.clip(np.rint(sites[:, 0]).astype(int), 0, h.shape[1] - 1)
        rows = np.clip(np.rint(sites[:, 1]).astype(int), 0, h.shape[0] - 1)
        return h[rows, cols]

    @staticmethod
    def _sphere_depth(
        primitive: ContactPrimitive,
        radius: float,
        x: np.ndarray,
        y: np.ndarray,
        rest_z: np.ndarray,
    ) -> np.ndarray:
        ball = primitive.dimension("radius")
        pose_z = np.sqrt(radius**2 - primitive.x_mm**2 - primitive.y_mm**2)
        normal = np.array([primitive.x_mm, primitive.y_mm, pose_z]) / radius
        center = (radius - primitive.indent_depth + ball) * normal

        # Ray t * m from the sphere center; the skin stops at the nearer ball crossing
        along = (x * center[0] + y * center[1] + rest_z * center[2]) / radius
        discriminant = along**2 - center @ center + ball**2
        hit = discriminant >= 0
        t_near = along - np.sqrt(np.clip(discriminant, 0.0, None))
        return np.where(hit & (t_near < radius), radius - t_near, 0.0)

    @staticmethod
    def _extruded_depth(
        primitive: ContactPrimitive,
        radius: float,
        x: np.ndarray,
        y: np.ndarray,
        rest_z: np.ndarray,
    ) -> np.ndarray:
        yaw = np.deg2rad(primitive.yaw_deg)
        dx, dy = x - primitive.x_mm, y - primitive.y_mm
        along = dx * np.cos(yaw) + dy * np.sin(yaw)
        across = -dx * np.sin(yaw) + dy * np.cos(yaw)
        pose_z = np.sqrt(radius**2 - primitive.x_mm**2 - primitive.y_mm**2)
        floor_z = pose_z - primitive.indent_depth

        if primitive.kind == PrimitiveKinds.BOX:
            footprint = (np.abs(along) <= primitive.dimension("length") / 2) & (
                np.abs(across) <= primitive.dimension("width") / 2
            )
            bottom = np.full_like(x, floor_z)
        elif primitive.kind == PrimitiveKinds.CYLINDER:
            cyl = primitive.dimension("radius")
            footprint = (np.abs(along) <= primitive.dimension("length") / 2) & (
                np.abs(across) < cyl
            )
            bottom = floor_z + cyl - np.sqrt(np.clip(cyl**2 - across**2, 0.0, None))
        else:
            outer = primitive.dimension("outer_radius")
            inner = primitive.dimension("inner_radius")
            offset = primitive.dimension("offset")
            footprint = (along**2 + across**2 <= outer**2) & (
                (along - offset) ** 2 + across**2 > inner**2
            )
            bottom = np.full_like(x, floor_z)

        safe_z = np.where(rest_z > 0, rest_z, 1.0)
        depth = radius - radius * bottom / safe_z
        return np.where(footprint & (rest_z > 0), np.maximum(depth, 0.0), 0.0)
