"""计算服务包"""

from .corners import behrend_construct, count_corners, embed_corner_free
from .driver import corner_hunt, replay_trace
from .energy import energy_increment_run, saturation_bound_check, uniform_rectangle_locate
from .graphview import gram_spectrum, spectral_uniformity_check
from .increment import find_density_increment
from .partition import ap_partition, right_square_partition
from .set_io import format_set, parse_set_text, read_set_file, write_set_file
from .verify import invariant_manifest, run_verify

__all__ = [
    "ap_partition",
    "behrend_construct",
    "corner_hunt",
    "count_corners",
    "embed_corner_free",
    "energy_increment_run",
    "find_density_increment",
    "format_set",
    "gram_spectrum",
    "invariant_manifest",
    "parse_set_text",
    "read_set_file",
    "replay_trace",
    "right_square_partition",
    "run_verify",
    "saturation_bound_check",
    "spectral_uniformity_check",
    "uniform_rectangle_locate",
    "write_set_file",
]
