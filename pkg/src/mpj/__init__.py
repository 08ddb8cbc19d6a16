"""Programs over monoids in J: algebra, languages, program constructions and checks."""

__version__ = "0.1.0"
