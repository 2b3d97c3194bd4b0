# Infrastructure Layer 