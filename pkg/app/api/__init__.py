# Rotas HTTP
