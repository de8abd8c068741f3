"""dirlap - Laplacians of directed weighted graphs: sectoriality, Cheeger constants, essential spectrum."""

__version__ = "0.1.0"
