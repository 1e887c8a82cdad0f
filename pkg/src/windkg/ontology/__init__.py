from .builder import build_bundled, build_ontology
from .manifest import (
    CATEGORIES,
    EXPECTED_COUNTS,
    ManifestError,
    OntologyManifest,
    RelationshipEntry,
    check_manifest,
    load_manifest,
    manifest_from_dict,
)
from .validate import ValidationReport, Violation, functional_groups, validate_ontology

__all__ = [
    "CATEGORIES",
    "EXPECTED_COUNTS",
    "ManifestError",
    "OntologyManifest",
    "RelationshipEntry",
    "ValidationReport",
    "Violation",
    "build_bundled",
    "build_ontology",
    "check_manifest",
    "functional_groups",
    "load_manifest",
    "manifest_from_dict",
    "validate_ontology",
]
