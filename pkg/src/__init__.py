# Compositional attack-tree metric engine
__version__ = "0.1.0"
