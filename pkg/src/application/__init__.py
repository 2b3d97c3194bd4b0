# Application Layer 