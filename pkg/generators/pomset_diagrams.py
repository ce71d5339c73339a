import hashlib
import json
import os
from functools import cached_property

from PIL import Image, ImageDraw, ImageFont

from traces import Trace

GENERATOR_VERSION = 1

DIAGRAM_DIR = os.environ.get("TRACE_MONITORS_DIAGRAM_DIR", "images/pomsets")

LANE_HEIGHT = 80
COLUMN_WIDTH = 90
LEFT_MARGIN = 70
TOP_MARGIN = 50
EVENT_RADIUS = 14
TEXT_OFFSET = 6

BACKGROUND = "white"
INK = "black"
LANE_COLOUR = (200, 200, 200)
MAXIMAL_COLOUR = (200, 40, 40)


class PomsetDiagram:
    """Labelled pomset picture of a finite trace: one lane per process, one
    column per causal depth, arrows to immediate predecessors."""

    def __init__(self, trace: Trace):
        self.trace = trace

    @cached_property
    def depths(self) -> list[int]:
        depths = []
        for event in self.trace:
            depths.append(
                1 + max((depths[p] for p in self.trace.preds[event]), default=-1)
            )
        return depths

    @property
    def generated_image_hash(self) -> str:
        alphabet = self.trace.alphabet
        data_hash_dict = {
            "processes": list(alphabet.process_order),
            "dom": {a: sorted(d) for a, d in alphabet.dom.items()},
            "normal_form": list(self.trace.normal_form),
            "version": GENERATOR_VERSION,
        }

        return hashlib.md5(
            json.dumps(data_hash_dict, sort_keys=True).encode("utf-8")
        ).hexdigest()

    @property
    def generated_image_path(self) -> str:
        return "{directory}/{hash}.png".format(
            directory=DIAGRAM_DIR, hash=self.generated_image_hash
        )

    @property
    def dimensions(self) -> tuple[int, int]:
        columns = max(self.depths, default=-1) + 1
        lanes = len(self.trace.alphabet.process_order)
        return (
            LEFT_MARGIN + max(columns, 1) * COLUMN_WIDTH,
            TOP_MARGIN + lanes * LANE_HEIGHT,
        )

    def _centre(self, event: int, process_row: int) -> tuple[int, int]:
        return (
            LEFT_MARGIN + self.depths[event] * COLUMN_WIDTH + COLUMN_WIDTH // 2,
            TOP_MARGIN + process_row * LANE_HEIGHT,
        )

    def _anchor(self, event: int) -> tuple[int, int]:
        # Arrows attach to the event's topmost lane.
        alphabet = self.trace.alphabet
        row = min(
            alphabet.process_index[p] for p in alphabet.dom[self.trace.label(event)]
        )
        return self._centre(event, row)

    def draw(self) -> Image.Image:
        alphabet = self.trace.alphabet
        font = ImageFont.load_default()
        image = Image.new("RGB", self.dimensions, BACKGROUND)
        draw = ImageDraw.Draw(image)

        width = self.dimensions[0]
        for row, process in enumerate(alphabet.process_order):
            y = TOP_MARGIN + row * LANE_HEIGHT
            draw.line([(LEFT_MARGIN, y), (width - 10, y)], fill=LANE_COLOUR, width=2)
            draw.text((10, y - TEXT_OFFSET), process, fill=INK, font=font)

        for event in self.trace:
            for pred in self.trace.preds[event]:
                draw.line(
                    [self._anchor(pred), self._anchor(event)], fill=INK, width=2
                )

        maximal = self.trace.maximal_events
        for event in self.trace:
            rows = sorted(
                alphabet.process_index[p]
                for p in alphabet.dom[self.trace.label(event)]
            )
            colour = MAXIMAL_COLOUR if event in maximal else INK
            top, bottom = self._centre(event, rows[0]), self._centre(event, rows[-1])
            draw.line([top, bottom], fill=colour, width=3)
            for row in rows:
                x, y = self._centre(event, row)
                draw.ellipse(
                    [
                        (x - EVENT_RADIUS, y - EVENT_RADIUS),
                        (x + EVENT_RADIUS, y + EVENT_RADIUS),
                    ],
                    fill=BACKGROUND,
                    outline=colour,
                    width=2,
                )
                draw.text(
                    (x - TEXT_OFFSET // 2, y - TEXT_OFFSET),
                    self.trace.label(event),
                    fill=colour,
                    font=font,
                )

        return image

    def generate(self) -> str:
        os.makedirs(os.path.dirname(self.generated_image_path), exist_ok=True)
        self.draw().save(self.generated_image_path, "PNG")
        return self.generated_image_path
