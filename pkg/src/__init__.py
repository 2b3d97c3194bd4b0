# Near-Factorization Search Package
