# Núcleos, espectro, envoltórias, transferência e varreduras
