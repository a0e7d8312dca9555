from typing import Optional, Tuple, Union
import numpy as np
from scipy.interpolate import RegularGridInterpolator
from app.constants.reconstruction import MASK_RADIUS_PERCENTILE
from app.core.logging_config import get_logger
from app.exceptions import InvalidMaskError, InvalidWindowError
from app.schemas.image import (
    BinaryImage,
    CircularMask,
    GreyscaleField,
    RasterImage,
    ValueRange,
)
from app.utils.integral_image import box_sums, integral_image

logger = get_logger("tacshade.image")

# Largest step of the dual iteration for the 2-D forward-difference operator (1 / ||D||^2)
TV_DUAL_STEP = 1.0 / 8.0


class ImageService:
    """Raw frame to smoothed greyscale depth proxy."""

    def apply_circular_mask(self, img: RasterImage, mask: CircularMask) -> RasterImage:
        """
        Zero every pixel farther than the mask radius from the mask center.

        :param img: The camera frame.
        :param mask: Circular field of view.
        :return: The masked frame.
        """
        if not mask.fits(img.width, img.height):
            raise InvalidMaskError(
                f"Mask center ({mask.center_u}, {mask.center_v}) lies outside a "
                f"{img.width}x{img.height} image"
            )
        inside = mask.inside(img.width, img.height)
        return RasterImage(data=np.where(inside, img.data, 0))

    def estimate_mask(self, img: RasterImage) -> CircularMask:
        """
        Estimate the field of view from the nonzero pixels of a frame.

        :param img: A frame whose background outside the field is black.
        :return: Mask centered on the centroid, radius at the 99th distance percentile.
        """
        rows, cols = np.nonzero(img.data)
        if rows.size == 0:
            raise InvalidMaskError("Cannot estimate a mask from an all-black image")
        center_u, center_v = float(cols.mean()), float(rows.mean())
        distances = np.hypot(cols - center_u, rows - center_v)
        radius = max(float(np.percentile(distances, MASK_RADIUS_PERCENTILE)), 1.0)
        logger.debug(f"Estimated mask center=({center_u:.1f}, {center_v:.1f}) r={radius:.1f}")
        return CircularMask(center_u=center_u, center_v=center_v, radius=radius)

    def otsu_threshold(self, img: RasterImage) -> Optional[int]:
        """
        Threshold maximizing the between-class variance of the intensity histogram.

        Pixels >= t form the upper class. Every t in 1..255 is tried and the
        first maximizer wins; a constant image has no valid split and gives None.
        """
        counts = np.bincount(img.data.ravel(), minlength=256).astype(np.float64)
        levels = np.arange(256, dtype=np.float64)
        total = counts.sum()
        total_mass = (counts * levels).sum()

        # Class 0 holds levels < t, for t = 1..255
        w0 = np.cumsum(counts)[:-1]
        m0 = np.cumsum(counts * levels)[:-1]
        w1 = total - w0
        valid = (w0 > 0) & (w1 > 0)
        if not valid.any():
            return None

        between = np.full(255, -1.0)
        mu0 = m0[valid] / w0[valid]
        mu1 = (total_mass - m0[valid]) / w1[valid]
        between[valid] = w0[valid] * w1[valid] * (mu0 - mu1) ** 2
        return int(np.argmax(between)) + 1

    def binarize(self, img: RasterImage, threshold: Union[int, str] = "auto") -> BinaryImage:
        """
        Split a frame into white markers (1) and everything else (0).

        :param img: The (masked) frame.
        :param threshold: Intensity threshold, or "auto" for the Otsu threshold.
        :return: Binary image, pixel >= threshold -> 1.
        """
        if threshold == "auto":
            chosen = self.otsu_threshold(img)
            if chosen is None:
                logger.debug("Constant image, auto threshold gives an all-zero binary image")
                return BinaryImage(data=np.zeros_like(img.data))
            threshold = chosen
            logger.debug(f"Auto threshold {threshold}")
        return BinaryImage(data=(img.data >= int(threshold)).astype(np.uint8))

    def ratio_convolution(
        self, b: BinaryImage, window: Tuple[int, int], stride: int = 1
    ) -> GreyscaleField:
        """
        Local white-pixel ratio 255 * s_w / s_t over an m x n window.

        Windows are clipped at the image border, so s_t counts only in-bounds
        pixels. With stride k the ratio is sampled every k pixels (plus the
        last row and column) and bilinearly interpolated back to full size.
        """
        m, n = window
        if m < 1 or n < 1 or m % 2 == 0 or n % 2 == 0:
            raise InvalidWindowError(f"Window dimensions must be odd and >= 1, got {m}x{n}")
        if stride < 1:
            raise InvalidWindowError(f"Stride must be >= 1, got {stride}")

        table = integral_image(b.data)
        rows = self._sample_positions(b.height, stride)
        cols = self._sample_positions(b.width, stride)
        white, total = box_sums(table, rows, cols, (m, n))
        ratio = 255.0 * white / total

        if stride > 1:
            ratio = self._upsample(ratio, rows, cols, b.height, b.width)
            np.clip(ratio, 0.0, 255.0, out=ratio)
        return GreyscaleField(data=ratio, value_range=ValueRange.RAW)

    def tv_objective(self, x: np.ndarray, g: np.ndarray, weight: float) -> float:
        """Sum of squared deviation from g plus weight times anisotropic total variation."""
        fidelity = np.sum((x - g) ** 2)
        tv = np.abs(np.diff(x, axis=1)).sum() + np.abs(np.diff(x, axis=0)).sum()
        return float(fidelity + weight * tv)

    def tvd_denoise(
        self, g: GreyscaleField, weight: float, max_iters: int
    ) -> GreyscaleField:
        """
        Total variation denoising with an anisotropic TV term.

        Minimizes sum((x - g)^2) + weight * TV(x) by projected gradient on the
        dual variables of the horizontal and vertical differences. The result
        is clipped to the input range and never has a larger objective than g.

        :param g: Field to smooth.
        :param weight: Regularization weight (>= 0).
        :param max_iters: Number of dual iterations (>= 1).
        :return: Smoothed field with the same value range declaration.
        """
        if weight < 0:
            raise ValueError("TVD weight must be non-negative")
        if max_iters < 1:
            raise ValueError("TVD needs at least one iteration")
        data = g.data
        if weight == 0:
            return g

        # sum((x-g)^2) + w*TV == 2 * (0.5*||x-g||^2 + (w/2)*TV)
        bound = weight / 2.0
        dual_h = np.zeros((data.shape[0], data.shape[1] - 1))
        dual_v = np.zeros((data.shape[0] - 1, data.shape[1]))
        x = data.copy()
        for _ in range(max_iters):
            dual_h += TV_DUAL_STEP * np.diff(x, axis=1)
            dual_v += TV_DUAL_STEP * np.diff(x, axis=0)
            np.clip(dual_h, -bound, bound, out=dual_h)
            np.clip(dual_v, -bound, bound, out=dual_v)
            x = data - self._difference_adjoint(dual_h, dual_v, data.shape)

        np.clip(x, data.min(), data.max(), out=x)
        before = self.tv_objective(data, data, weight)
        after = self.tv_objective(x, data, weight)
        logger.debug(f"TVD objective {before:.3f} -> {after:.3f}")
        if after > before:
            return g
        return GreyscaleField(data=x, value_range=g.value_range)

    @staticmethod
    def _difference_adjoint(
        dual_h: np.ndarray, dual_v: np.ndarray, shape: Tuple[int, int]
    ) -> np.ndarray:
        """Apply D^T, the adjoint of the forward horizontal/vertical differences."""
        out = np.zeros(shape)
        out[:, :-1] -= dual_h
        out[:, 1:] += dual_h
        out[:-1, :] -= dual_v
        out[1:, :] += dual_v
        return out

    @staticmethod
    def _sample_positions(size: int, stride: int) -> np.ndarray:
        positions = np.arange(0, size, stride)
        if positions[-1] != size - 1:
            positions = np.append(positions, size - 1)
        return positions

    @staticmethod
    def _upsample(
        values: np.ndarray, rows: np.ndarray, cols: np.ndarray, height: int, width: int
    ) -> np.ndarray:
        # A single sample along an axis is duplicated so linear interpolation is defined
        if rows.size == 1:
            rows, values = np.array([rows[0], rows[0] + 1]), np.vstack([values, values])
        if cols.size == 1:
            cols, values = np.array([cols[0], cols[0] + 1]), np.hstack([values, values])
        interpolator = RegularGridInterpolator(
            (rows.astype(np.float64), cols.astype(np.float64)), values, method="linear"
        )
        grid_v, grid_u = np.mgrid[0:height, 0:width]
        points = np.column_stack([grid_v.ravel(), grid_u.ravel()]).astype(np.float64)
        return interpolator(points).reshape(height, width)
