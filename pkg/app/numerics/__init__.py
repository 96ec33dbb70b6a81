# Numerics Module
