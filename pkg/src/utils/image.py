"""

 geotomo

 PGM export and import of reconstructions and masks

"""
import cv2
import numpy as np

from src.logger import logger


class ImageUtils:
    """A Static-only Class to hold PGM helpers & wrappers over OpenCV functions"""

    @staticmethod
    def save_img(path, image, binary_format=True):
        # P5 when binary_format, plain-text P2 otherwise
        logger.debug(f"Saving Image to '{path}'")
        ok = cv2.imwrite(
            str(path), image, [cv2.IMWRITE_PXM_BINARY, 1 if binary_format else 0]
        )
        if not ok:
            raise Exception(f"Could not write image to '{path}'")

    @staticmethod
    def to_gray_u8(pixels):
        pixels = np.asarray(pixels, dtype=np.float64)
        if pixels.size == 0 or pixels.max() <= pixels.min():
            return np.zeros(pixels.shape, dtype=np.uint8)
        return ImageUtils.normalize_util(pixels).astype(np.uint8)

    @staticmethod
    def mask_to_u8(mask):
        return np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)

    @staticmethod
    def normalize_util(img, alpha=0, beta=255):
        return cv2.normalize(img, None, alpha, beta, norm_type=cv2.NORM_MINMAX)

    @staticmethod
    def save_mask(path, mask, binary_format=True):
        ImageUtils.save_img(path, ImageUtils.mask_to_u8(mask), binary_format)

    @staticmethod
    def save_gray(path, pixels, binary_format=True):
        ImageUtils.save_img(path, ImageUtils.to_gray_u8(pixels), binary_format)

    @staticmethod
    def read_img(path):
        image = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
        if image is None:
            raise Exception(f"Could not read image at '{path}'")
        return image

    @staticmethod
    def read_mask(path):
        return ImageUtils.read_img(path) > 0
