from typing import NamedTuple, Optional
import numpy as np
from scipy import ndimage
from app.core.logging_config import get_logger
from app.exceptions import DomainError, ShapeMismatchError
from app.schemas.geometry import (
    GradientField,
    HeightField,
    HeightUnits,
    LambertianModel,
    ReconstructionConfig,
    SensorGeometry,
)
from app.schemas.image import GreyscaleField, ValueRange
from app.schemas.point_cloud import PointCloud
from app.constants.reconstruction import SfsInitialization
from app.utils.grid_paths import path_lengths

logger = get_logger("tacshade.sfs")

# 8-connectivity for flat-region labelling
EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


class LiftResult(NamedTuple):
    """Sensor-frame cloud with the depth each point was lifted from."""

    cloud: PointCloud
    depths: np.ndarray
    skipped: int


def backward_differences(h: np.ndarray, spacing: float):
    """p = dh/du and q = dh/dv with zero padding before the first column/row."""
    p = np.diff(h, axis=1, prepend=0.0) / spacing
    q = np.diff(h, axis=0, prepend=0.0) / spacing
    return p, q


def hold_apex(h: np.ndarray, apex) -> None:
    """Keep every pixel other than apex strictly below it, in place."""
    peak = h[apex]
    np.minimum(h, np.nextafter(peak, -np.inf), out=h)
    h[apex] = peak


class SfsService:
    """Greyscale algebra, shape from shading and the hemisphere lift."""

    def gradients(self, h: HeightField, spacing: float = 1.0) -> GradientField:
        p, q = backward_differences(h.data, spacing)
        return GradientField(p=p, q=q)

    def delta_greyscale(
        self, g: GreyscaleField, g0: GreyscaleField, clamp: bool = True
    ) -> GreyscaleField:
        """
        Greyscale variation g - g0 caused by contact.

        :param g: Smoothed greyscale of the deformed frame.
        :param g0: Smoothed greyscale of the rest frame.
        :param clamp: Set negative variation to 0.
        :return: RAW field when clamped, SIGNED otherwise.
        """
        self._check_shapes(g, g0)
        delta = g.data - g0.data
        if clamp:
            return GreyscaleField(data=np.maximum(delta, 0.0), value_range=ValueRange.RAW)
        return GreyscaleField(data=delta, value_range=ValueRange.SIGNED)

    def shape_weighted_greyscale(
        self, g_dn: GreyscaleField, g0: GreyscaleField
    ) -> GreyscaleField:
        """Weight the rest greyscale by the normalized variation: g_dn * g0."""
        self._check_shapes(g_dn, g0)
        self._check_normalized(g_dn)
        return GreyscaleField(data=g_dn.data * g0.data, value_range=g0.value_range)

    def normalize(self, g: GreyscaleField) -> GreyscaleField:
        """Min-max rescale to [0, 1]; a constant field becomes all zeros."""
        low, high = float(g.data.min()), float(g.data.max())
        if high == low:
            return GreyscaleField(data=np.zeros(g.shape), value_range=ValueRange.NORMALIZED)
        data = (g.data - low) / (high - low)
        return GreyscaleField(data=data, value_range=ValueRange.NORMALIZED)

    def contact_shading(
        self, g_hn: GreyscaleField, g_dn: GreyscaleField, threshold: float
    ) -> GreyscaleField:
        """
        Pin pixels without contact to full brightness.

        Where the normalized variation is below the threshold the skin is
        undeformed, which the reflectance model expresses as brightness 1.
        """
        self._check_shapes(g_hn, g_dn)
        self._check_normalized(g_hn)
        shaded = np.where(g_dn.data < threshold, 1.0, g_hn.data)
        return GreyscaleField(data=shaded, value_range=ValueRange.NORMALIZED)

    def lambertian_render(
        self, h: HeightField, model: LambertianModel, spacing: float = 1.0
    ) -> GreyscaleField:
        """
        Forward render brightness I * rho * cos(N, L) of a height field.

        Gradients use the same backward differences as the solver, so a
        render followed by hybrid_sfs is a true round trip.
        """
        p, q = backward_differences(h.data, spacing)
        p_c, q_c = model.slopes
        cosine = (p * p_c + q * q_c + 1.0) / (
            np.sqrt(p**2 + q**2 + 1.0) * np.sqrt(p_c**2 + q_c**2 + 1.0)
        )
        brightness = model.intensity_I * model.reflectance_rho * np.clip(cosine, 0.0, None)
        return GreyscaleField(data=brightness, value_range=ValueRange.NORMALIZED)

    def hybrid_sfs(
        self,
        g_hn: GreyscaleField,
        cfg: Optional[ReconstructionConfig] = None,
        geom: Optional[SensorGeometry] = None,
    ) -> HeightField:
        """
        Recover an unscaled height field from normalized shading.

        Starts from the eikonal surface (or zeros) and runs cfg.iterations
        Jacobi sweeps of the per-pixel Newton update h <- h - f / (df/dh)
        with f = g - R'(p, q). Pixels whose derivative magnitude is below
        the guard keep their height for that sweep. The peak of a positive
        start surface stays the unique maximum through every sweep.

        :param g_hn: Normalized shape-dependent greyscale.
        :param cfg: Iteration settings.
        :param geom: Sensor geometry; supplies the camera axis (p_c, q_c).
        :return: Unscaled height field.
        """
        cfg = cfg or ReconstructionConfig()
        self._check_normalized(g_hn)
        g = g_hn.data
        height, width = g.shape
        spacing = cfg.grid_spacing or 1.0 / max(width, height)
        p_c, q_c = (geom.p_c, geom.q_c) if geom is not None else (0.0, 0.0)
        axis_norm = np.sqrt(p_c**2 + q_c**2 + 1.0)

        if cfg.initialization == SfsInitialization.EIKONAL:
            h = self._eikonal_start(g, cfg, spacing)
        else:
            h = np.zeros_like(g)
        # peak location comes from the start surface
        apex = np.unravel_index(np.argmax(h), h.shape) if h.max() > 0 else None

        max_step = cfg.max_step * spacing if cfg.max_step is not None else None
        for iteration in range(cfg.iterations):
            p, q = backward_differences(h, spacing)
            norm = np.sqrt(p**2 + q**2 + 1.0)
            dot = p * p_c + q * q_c + 1.0
            f = g - dot / (norm * axis_norm)
            df = ((p + q) * dot / (norm**3 * axis_norm) - (p_c + q_c) / (norm * axis_norm)) / spacing
            if cfg.symmetry_epsilon > 0:
                df = np.where(df >= 0, df + cfg.symmetry_epsilon, df - cfg.symmetry_epsilon)

            active = np.abs(df) >= cfg.derivative_guard_eps
            step = np.zeros_like(h)
            step[active] = f[active] / df[active]
            if max_step is not None:
                np.clip(step, -max_step, max_step, out=step)
            h = h - step
            if apex is not None:
                hold_apex(h, apex)
            logger.debug(
                f"SFS sweep {iteration + 1}/{cfg.iterations}: active={int(active.sum())} "
                f"residual={float(np.abs(f).mean()):.3e}"
            )

        return HeightField(data=h, units=HeightUnits.UNSCALED)

    def calibrate_alpha(self, h: HeightField, contact_depth_mm: float) -> float:
        """Scale factor mapping the deepest estimate onto a measured contact depth."""
        if contact_depth_mm <= 0:
            raise DomainError("Contact depth must be positive to calibrate alpha")
        peak = h.max_depth
        if peak <= 0:
            raise DomainError("Height field has no positive depth to calibrate against")
        return contact_depth_mm / peak

    def scale_height(self, h: HeightField, geom: SensorGeometry) -> HeightField:
        """Multiply by alpha and clip to [0, radius_r]."""
        scaled = np.clip(geom.alpha * h.data, 0.0, geom.radius_r)
        return HeightField(data=scaled, units=HeightUnits.MILLIMETRES)

    def lift_to_hemisphere(self, h: HeightField, geom: SensorGeometry) -> LiftResult:
        """
        Place every in-mask pixel on the deformed hemisphere.

        A pixel at (x, y) mm with depth h sits at z = sqrt((r - h)^2 - x^2 - y^2)
        above the sphere center. Pixels whose radicand is negative fall
        outside the deformed surface and are skipped.

        :param h: Scaled height field in mm.
        :param geom: Sensor geometry.
        :return: The cloud, the depth of each emitted point and the skipped count.
        """
        inside = geom.mask.inside(h.width, h.height)
        rows, cols = np.nonzero(inside)
        x, y = geom.pixel_to_mm(cols.astype(np.float64), rows.astype(np.float64))
        depth = h.data[rows, cols]
        radicand = (geom.radius_r - depth) ** 2 - x**2 - y**2
        keep = radicand >= 0
        skipped = int((~keep).sum())
        if skipped:
            logger.debug(f"Lift skipped {skipped} out-of-domain pixels")

        points = np.column_stack([x[keep], y[keep], np.sqrt(radicand[keep])])
        return LiftResult(
            cloud=PointCloud(points=points, frame="sensor"),
            depths=depth[keep],
            skipped=skipped,
        )

    def _eikonal_start(
        self, g: np.ndarray, cfg: ReconstructionConfig, spacing: float
    ) -> np.ndarray:
        """Integrate the slope magnitude implied by the brightness from the flat border."""
        brightness = np.clip(g, cfg.brightness_floor, 1.0)
        slope = np.sqrt(1.0 / brightness**2 - 1.0)
        flat = slope <= cfg.flat_tolerance
        if flat.all():
            return np.zeros_like(g)

        labels, _ = ndimage.label(flat, structure=EIGHT_CONNECTED)
        border = np.zeros_like(flat)
        border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
        border_labels = np.unique(labels[border & flat])
        sources = border | np.isin(labels, border_labels[border_labels > 0])
        return path_lengths(slope, sources, spacing)

    @staticmethod
    def _check_shapes(a: GreyscaleField, b: GreyscaleField) -> None:
        if a.shape != b.shape:
            raise ShapeMismatchError(f"Greyscale shapes differ: {a.shape} vs {b.shape}")

    @staticmethod
    def _check_normalized(g: GreyscaleField) -> None:
        if g.value_range != ValueRange.NORMALIZED:
            raise DomainError(
                f"Expected a normalized greyscale field, got {g.value_range.name.lower()}"
            )
