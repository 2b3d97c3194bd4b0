# Domain Layer 