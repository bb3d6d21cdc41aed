"""WordNet database exporters feeding the ordersketch file formats."""

from .aux import export_aux_sample
from .wordnet import ExportConfig, export_wordnet, locate_wordnet

__all__ = ["ExportConfig", "export_aux_sample", "export_wordnet", "locate_wordnet"]
