"""
Qudit Tree Synthesizer
Topology-aware multi-controlled gate synthesis for mixed-dimension qudit processors
"""

__version__ = "1.0.0"
