"""
OAM-Holo Simulator - File Exporters
===================================

Writers for the run outputs:
- GrayImage -> binary PGM (P5, maxval 255, first row = top = y_max)
- GrayImage / intensity -> 8-bit grayscale PNG (Pillow)
- tables -> CSV with a header row and '.' decimals

Intensity images use a linear grayscale normalized to the frame peak.
"""

import csv
from pathlib import Path
from typing import Iterable

import numpy as np
from PIL import Image

from src.field_grid import ComplexField
from src.hologram import GrayImage


def write_pgm(image: GrayImage, path: Path) -> Path:
    """Binary PGM with the fixed header 'P5\\n<w> <h>\\n255\\n'."""
    path = Path(path)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(image.values, dtype=np.uint8).tobytes())
    return path


def read_pgm(path: Path) -> GrayImage:
    """Read back a P5 file written by write_pgm."""
    with Image.open(path) as im:
        return GrayImage(np.array(im.convert("L"), dtype=np.uint8))


def write_png(image: GrayImage, path: Path) -> Path:
    path = Path(path)
    Image.fromarray(np.ascontiguousarray(image.values, dtype=np.uint8)).save(path, format="PNG", optimize=False)
    return path


def intensity_image(field: ComplexField) -> GrayImage:
    """Linear grayscale of |field|^2, peak = 255, top row = y_max."""
    intensity = field.intensity()
    peak = intensity.max()
    if peak == 0:
        scaled = np.zeros_like(intensity)
    else:
        scaled = np.round(intensity / peak * 255.0)
    return GrayImage(np.flipud(scaled.astype(np.uint8)))


def write_intensity_png(field: ComplexField, path: Path) -> Path:
    return write_png(intensity_image(field), path)


def format_number(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.10g}"
    return str(value)


def write_csv(rows: Iterable[Iterable], path: Path) -> Path:
    """Rows as given, floats with 10 significant digits."""
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    return path
