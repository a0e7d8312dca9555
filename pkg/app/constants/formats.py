GREYSCALE_MAGIC = b"TSGF"
HEIGHT_MAGIC = b"TSHF"
GRID_HEADER_BYTES = 16

IMAGE_SUFFIXES = (".png", ".pgm")
