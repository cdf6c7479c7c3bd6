"""facekit: face detection, feature extraction, contour segmentation and
recognition for still grayscale images."""

__version__ = "0.1.0"
