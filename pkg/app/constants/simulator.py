DEFAULT_FRAME_WIDTH = 640
DEFAULT_FRAME_HEIGHT = 480
DEFAULT_LATTICE_PITCH = 28.0
DEFAULT_PIN_RADIUS = 9.0
DEFAULT_FIELD_RADIUS = 230.0
DEFAULT_KAPPA = 0.6
DEFAULT_MAX_DEPTH_MM = 5.0
DEFAULT_SKIRT_SIGMA = 8.0


class PrimitiveKinds:
    """Contact primitive kinds and the dimensions each one takes (mm)."""

    SPHERE = "sphere"
    BOX = "box"
    CYLINDER = "cylinder"
    CRESCENT = "crescent"

    DIMENSIONS = {
        SPHERE: ("radius",),
        BOX: ("length", "width"),
        CYLINDER: ("radius", "length"),
        CRESCENT: ("outer_radius", "inner_radius", "offset"),
    }

    @classmethod
    def get_all(cls):
        return [cls.SPHERE, cls.BOX, cls.CYLINDER, cls.CRESCENT]
