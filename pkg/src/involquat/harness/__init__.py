"""Instance generation, worked examples, the exhaustive oracle, JSON I/O and the CLI."""

from .fixtures import verify_worked_examples
from .generate import generate_instance
from .oracle import brute_force_quat_oracle

__all__ = ["brute_force_quat_oracle", "generate_instance", "verify_worked_examples"]
