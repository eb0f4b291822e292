# Simulation module