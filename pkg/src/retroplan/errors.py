"""Exception types shared across the package."""


class RetroplanError(Exception):
    """Base class for all errors raised by this package."""

    #: short machine-readable error kind, used by the CLI and HTTP layer
    kind = "error"

    def payload(self) -> dict:
        return {"error": self.kind, "message": str(self)}


# --- dataset / schema ---------------------------------------------------

class SchemaError(RetroplanError):
    kind = "schema_error"


class MissingColumn(RetroplanError):
    kind = "missing_column"


class BadValue(RetroplanError):
    kind = "bad_value"


class UnknownFeature(RetroplanError):
    kind = "unknown_feature"


class AllValuesAnomalous(RetroplanError):
    kind = "all_values_anomalous"


class TooFewRows(RetroplanError):
    kind = "too_few_rows"


class EmptyTest(RetroplanError):
    kind = "empty_test"


# --- training -----------------------------------------------------------

class BadArchitecture(RetroplanError):
    kind = "bad_architecture"


class DimMismatch(RetroplanError):
    kind = "dim_mismatch"


class NonFiniteLoss(RetroplanError):
    kind = "non_finite_loss"


class DegenerateBatch(RetroplanError):
    kind = "degenerate_batch"


class EmptyFineGroup(RetroplanError):
    kind = "empty_fine_group"


class LeakageError(RetroplanError):
    kind = "leakage"


# --- retrofit catalog / planning -----------------------------------------

class CatalogError(RetroplanError):
    kind = "catalog_error"


class DuplicateId(CatalogError):
    kind = "duplicate_id"


class GrantExceedsPrice(CatalogError):
    kind = "grant_exceeds_price"


class ConflictingMutations(RetroplanError):
    kind = "conflicting_mutations"


class CombinationLimitExceeded(RetroplanError):
    kind = "combination_limit_exceeded"


class EmptyCategory(RetroplanError):
    kind = "empty_category"


# --- reporting / persistence ---------------------------------------------

class MissingTemplate(RetroplanError):
    kind = "missing_template"


class BadCheckpoint(RetroplanError):
    kind = "bad_checkpoint"


class SchemaHashMismatch(BadCheckpoint):
    kind = "schema_hash_mismatch"
