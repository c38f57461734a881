"""Compile Structured English legal vocabularies and rules to OWL2 and LegalRuleML."""

__version__ = "0.1.0"
