import sys

from .cli import veech_candidates_cli

sys.exit(veech_candidates_cli())
