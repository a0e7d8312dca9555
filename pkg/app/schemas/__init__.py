from app.schemas.image import *
from app.schemas.geometry import *
from app.schemas.point_cloud import *
from app.schemas.simulator import *
from app.schemas.pipeline import *
