# Presentation Layer 