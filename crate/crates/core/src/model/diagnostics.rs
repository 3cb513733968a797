use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Fatal,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Fatal => "fatal",
        }
    }

    pub fn parse(s: &str) -> Option<Severity> {
        [Severity::Info, Severity::Warning, Severity::Fatal].into_iter().find(|x| x.as_str() == s)
    }
}

macro_rules! codes {
    ($($name:ident => $text:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum DiagnosticCode {
            $(#[serde(rename = $text)] $name,)*
        }

        impl DiagnosticCode {
            pub fn as_str(self) -> &'static str {
                match self {
                    $(DiagnosticCode::$name => $text,)*
                }
            }
        }
    };
}

codes! {
    DuplicateId => "DUPLICATE_ID",
    CarrierExergy => "CARRIER_EXERGY",
    GridStep => "GRID_STEP",
    SeriesLength => "SERIES_LENGTH",
    NegativeSeries => "NEGATIVE_SERIES",
    NonFinite => "NON_FINITE",
    UnknownReference => "UNKNOWN_REFERENCE",
    FractionSum => "FRACTION_SUM",
    FractionRange => "FRACTION_RANGE",
    EmptySide => "EMPTY_SIDE",
    DuplicateShare => "DUPLICATE_SHARE",
    LimitCarrier => "LIMIT_CARRIER",
    EfficiencyRange => "EFFICIENCY_RANGE",
    UnitCoefficient => "UNIT_COEFFICIENT",
    UnitCoefficientInvalid => "UNIT_COEFFICIENT_INVALID",
    StorageParam => "STORAGE_PARAM",
    StorageUnconnected => "STORAGE_UNCONNECTED",
    DuplicatePort => "DUPLICATE_PORT",
    PortFields => "PORT_FIELDS",
    MinExceedsMax => "MIN_EXCEEDS_MAX",
    PriceMissing => "PRICE_MISSING",
    NetworkMaxMissing => "NETWORK_MAX_MISSING",
    NetworkMembers => "NETWORK_MEMBERS",
    NetworkPortMissing => "NETWORK_PORT_MISSING",
    NetworkPortOrphan => "NETWORK_PORT_ORPHAN",
    LossFraction => "LOSS_FRACTION",
    LoadUnsatisfiable => "LOAD_UNSATISFIABLE",
    UnsourcedInlet => "UNSOURCED_INLET",
    ReturnUnsourced => "RETURN_UNSOURCED",
    ImportUnused => "IMPORT_UNUSED",
    ExportUnused => "EXPORT_UNUSED",
    ReturnUnused => "RETURN_UNUSED",
    ForcedImportUnused => "FORCED_IMPORT_UNUSED",
    NegativeWeather => "NEGATIVE_WEATHER",
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub severity: Severity,
    /// Offending element, e.g. `process fuel_cell` or `port hub2/gas/import`.
    pub element: String,
    pub message: String,
}

impl Diagnostic {
    pub fn fatal(code: DiagnosticCode, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { code, severity: Severity::Fatal, element: element.into(), message: message.into() }
    }

    pub fn warning(code: DiagnosticCode, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { code, severity: Severity::Warning, element: element.into(), message: message.into() }
    }

    pub fn info(code: DiagnosticCode, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { code, severity: Severity::Info, element: element.into(), message: message.into() }
    }

    pub fn is_fatal(&self) -> bool {
        self.severity == Severity::Fatal
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{}]: {}", self.severity.as_str(), self.code.as_str(), self.element, self.message)
    }
}
