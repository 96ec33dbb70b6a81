# Fourier-Bessel Kernels
