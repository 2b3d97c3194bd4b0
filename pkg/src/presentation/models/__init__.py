# Models package for presentation layer 