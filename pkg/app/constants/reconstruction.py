"""Default tunables of the reconstruction pipeline."""

# Greyscale generation
DEFAULT_WINDOW = 21
DEFAULT_STRIDE = 1
DEFAULT_TVD_WEIGHT = 0.8
DEFAULT_TVD_ITERATIONS = 100
MASK_RADIUS_PERCENTILE = 99.0

# Shape from shading
DEFAULT_SFS_ITERATIONS = 25
DEFAULT_ALPHA = 15.0
DEFAULT_DERIVATIVE_GUARD_EPS = 1e-6
DEFAULT_BRIGHTNESS_FLOOR = 0.05
DEFAULT_MAX_STEP = 0.02
DEFAULT_CONTACT_THRESHOLD = 0.05
DEFAULT_FLAT_TOLERANCE = 1e-6

# Sensor
DEFAULT_RADIUS_MM = 20.0

# Point clouds
DEFAULT_SMOOTHING_RADIUS_MM = 1.0
KMEANS_MAX_ITERATIONS = 100


class SfsInitialization:
    """Starting surface of the Newton iteration."""

    EIKONAL = "eikonal"
    ZERO = "zero"

    @classmethod
    def get_all(cls):
        return [cls.EIKONAL, cls.ZERO]


class SmoothOrder:
    """When z-smoothing runs relative to stitching."""

    AFTER = "after"
    BEFORE = "before"

    @classmethod
    def get_all(cls):
        return [cls.AFTER, cls.BEFORE]
