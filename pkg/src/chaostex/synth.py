"""Synthetic texture dataset: oriented sinusoidal gratings plus noise.

Four classes that differ in spatial frequency and orientation, with
per-image jitter in phase, angle and frequency so the classes form real
distributions instead of four fixed images. Used by the desk-scale
end-to-end evaluation and handy as a smoke-test dataset.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

# (cycles per image, orientation in degrees)
GRATING_CLASSES = (
    ("grating_f03_t000", 3.0, 0.0),
    ("grating_f06_t045", 6.0, 45.0),
    ("grating_f12_t090", 12.0, 90.0),
    ("grating_f24_t135", 24.0, 135.0),
)


def grating(size: int, cycles: float, theta_deg: float, phase: float,
            noise_level: float, rng: np.random.Generator) -> np.ndarray:
    """One noisy grating image with values in [0,1]."""
    theta = np.deg2rad(theta_deg)
    r, c = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    axis = (c * np.cos(theta) + r * np.sin(theta)) / size
    wave = 0.5 + 0.5 * np.sin(2.0 * np.pi * cycles * axis + phase)
    noise = rng.uniform(0.0, 1.0, size=(size, size))
    return (1.0 - noise_level) * wave + noise_level * noise


def generate_dataset(out_dir: Path | str, per_class: int = 40, size: int = 64,
                     noise_level: float = 0.1, seed: int = 0) -> list[Path]:
    """Write the dataset as 8-bit PNGs, one directory per class."""
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    written = []
    for name, cycles, theta in GRATING_CLASSES:
        class_dir = out_dir / name
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            jittered_cycles = cycles * rng.uniform(0.95, 1.05)
            jittered_theta = theta + rng.uniform(-5.0, 5.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            img = grating(size, jittered_cycles, jittered_theta, phase, noise_level, rng)
            path = class_dir / f"img_{i:03d}.png"
            Image.fromarray(np.round(img * 255.0).astype(np.uint8), mode="L").save(path)
            written.append(path)
    return written
