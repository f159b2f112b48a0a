"""Simulated microscope: stage movement and deterministic image acquisition.

The synthetic specimen is an infinite plane of Gaussian blobs laid out by a
counter-based hash of 64 um world cells, so the image at a given stage
position and exposure is a pure function of (position, world seed) and tests
can assert pixel equality. The simulator serializes all tool invocations,
as a real stage would.
"""

from __future__ import annotations

import base64
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from agentkit.errors import BadExposure, OutOfRange
from agentkit.toolreg import ToolDescriptor

STAGE_LIMIT_UM = 10000.0
IMAGE_SIZE = 256
CELL_UM = 64
MIN_EXPOSURE_MS = 1
MAX_EXPOSURE_MS = 5000

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _cell_hash(cx: int, cy: int, seed: int) -> int:
    packed = ((cx & 0xFFFFFFFF) << 32) | (cy & 0xFFFFFFFF)
    return _splitmix64(packed ^ _splitmix64(seed))


@dataclass(frozen=True)
class ImageDescriptor:
    width: int
    height: int
    pixel_format: str
    data: str  # base64 of raw pixels
    acquired_at: str
    stage_position: dict

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "pixel_format": self.pixel_format,
            "data": self.data,
            "acquired_at": self.acquired_at,
            "stage_position": self.stage_position,
        }


class MicroscopeSimulator:
    def __init__(self, world_seed: int = 1234):
        self.world_seed = world_seed
        self.x = 0.0
        self.y = 0.0
        self._lock = threading.Lock()

    # -- stage ------------------------------------------------------------

    def move_stage(self, dx: float, dy: float) -> dict:
        """Relative move; rejected whole if either axis would leave range."""
        with self._lock:
            nx, ny = self.x + dx, self.y + dy
            if not (np.isfinite(nx) and np.isfinite(ny)):
                raise OutOfRange("move produced a non-finite position")
            if abs(nx) > STAGE_LIMIT_UM:
                raise OutOfRange(
                    f"x axis would reach {nx:g} um (limit +-{STAGE_LIMIT_UM:g}); "
                    f"stage stays at ({self.x:g}, {self.y:g})"
                )
            if abs(ny) > STAGE_LIMIT_UM:
                raise OutOfRange(
                    f"y axis would reach {ny:g} um (limit +-{STAGE_LIMIT_UM:g}); "
                    f"stage stays at ({self.x:g}, {self.y:g})"
                )
            self.x, self.y = nx, ny
            return self.state()

    def state(self) -> dict:
        return {"x": self.x, "y": self.y, "limit_um": STAGE_LIMIT_UM}

    # -- imaging ----------------------------------------------------------

    def snap_image(self, exposure_ms: float) -> ImageDescriptor:
        """Acquire a 256x256 grey-u8 frame centered on the stage position."""
        if not (
            isinstance(exposure_ms, (int, float))
            and np.isfinite(exposure_ms)
            and MIN_EXPOSURE_MS <= exposure_ms <= MAX_EXPOSURE_MS
        ):
            raise BadExposure(
                f"exposure must be in [{MIN_EXPOSURE_MS}, {MAX_EXPOSURE_MS}] ms, "
                f"got {exposure_ms!r}"
            )
        with self._lock:
            pixels = self._render(self.x, self.y, float(exposure_ms))
            position = {"x": self.x, "y": self.y}
        return ImageDescriptor(
            width=IMAGE_SIZE,
            height=IMAGE_SIZE,
            pixel_format="grey-u8",
            data=base64.b64encode(pixels.tobytes()).decode("ascii"),
            acquired_at=datetime.now(timezone.utc).isoformat(),
            stage_position=position,
        )

    def _render(self, x: float, y: float, exposure_ms: float) -> np.ndarray:
        half = IMAGE_SIZE / 2
        # World coordinates of pixel centers; 1 px corresponds to 1 um.
        cols = x - half + np.arange(IMAGE_SIZE) + 0.5
        rows = y - half + np.arange(IMAGE_SIZE) + 0.5
        wx = cols[None, :]
        wy = rows[:, None]

        field = np.zeros((IMAGE_SIZE, IMAGE_SIZE), dtype=np.float64)
        pad = 40.0  # widest blob reach beyond its cell
        cx_min = int(np.floor((x - half - pad) / CELL_UM))
        cx_max = int(np.floor((x + half + pad) / CELL_UM))
        cy_min = int(np.floor((y - half - pad) / CELL_UM))
        cy_max = int(np.floor((y + half + pad) / CELL_UM))
        for cy in range(cy_min, cy_max + 1):
            for cx in range(cx_min, cx_max + 1):
                h = _cell_hash(cx, cy, self.world_seed)
                if (h & 0xFF) < 64:  # ~25% of cells stay empty
                    continue
                ox = ((h >> 8) & 0xFFFF) / 0xFFFF * CELL_UM
                oy = ((h >> 24) & 0xFFFF) / 0xFFFF * CELL_UM
                sigma = 4.0 + ((h >> 40) & 0xFF) / 0xFF * 8.0
                amp = 0.3 + ((h >> 48) & 0xFF) / 0xFF * 0.7
                bx = cx * CELL_UM + ox
                by = cy * CELL_UM + oy
                r2 = (wx - bx) ** 2 + (wy - by) ** 2
                field += amp * np.exp(-r2 / (2.0 * sigma * sigma))

        return np.clip(field * exposure_ms * 0.5, 0.0, 255.0).astype(np.uint8)

    # -- federation surface -----------------------------------------------

    def get_schema(self) -> list[ToolDescriptor]:
        return [
            ToolDescriptor(
                name="move_stage",
                description="Move the microscope stage by a relative offset in "
                "micrometers and report the new position.",
                input_schema={
                    "type": "object",
                    "properties": {
                        "dx": {"type": "number", "description": "X offset in um"},
                        "dy": {"type": "number", "description": "Y offset in um"},
                    },
                    "required": ["dx", "dy"],
                },
            ),
            ToolDescriptor(
                name="snap_image",
                description="Acquire a 256x256 greyscale image at the current "
                "stage position with the given exposure.",
                input_schema={
                    "type": "object",
                    "properties": {
                        "exposure_ms": {
                            "type": "number",
                            "description": "Exposure time in milliseconds",
                        }
                    },
                    "required": ["exposure_ms"],
                },
            ),
        ]

    def tool_handlers(self) -> dict:
        return {
            "move_stage": lambda args: self.move_stage(args["dx"], args["dy"]),
            "snap_image": lambda args: self.snap_image(args["exposure_ms"]).to_dict(),
        }
