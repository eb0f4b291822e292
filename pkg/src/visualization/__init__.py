# Visualization module