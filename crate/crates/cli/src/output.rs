//! JSON rendering with 17 significant digits and the error-to-exit-code map.

use std::fmt;
use std::io;

use fermiblob::numfmt::sig17;
use gridlab::GridError;
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::{json, Value};

struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn render<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    value.serialize(&mut Serializer::with_formatter(&mut buf, Sig17)).expect("JSON values always serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Failure classes of a command; the exit code follows the class.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or invalid input. Exit code 2.
    BadInput { code: &'static str, detail: String },
    /// The input was valid but a numerical step failed. Exit code 1.
    Numerical { code: &'static str, detail: String },
}

impl CliError {
    pub fn bad(code: &'static str, detail: impl fmt::Display) -> Self {
        CliError::BadInput { code, detail: detail.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput { .. } => 2,
            CliError::Numerical { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (CliError::BadInput { code, detail } | CliError::Numerical { code, detail }) = self;
        json!({ "error": code, "detail": detail })
    }
}

impl From<fermiblob::Error> for CliError {
    fn from(e: fermiblob::Error) -> Self {
        use fermiblob::Error::*;
        let detail = e.to_string();
        let (code, numerical) = match e {
            NonSymmetric { .. } => ("NonSymmetric", false),
            NotPositiveDefinite { .. } => ("NotPositiveDefinite", false),
            DimensionMismatch { .. } => ("DimensionMismatch", false),
            OddDimension(_) => ("OddDimension", false),
            NotSymplectic { .. } => ("NotSymplectic", false),
            LengthMismatch { .. } => ("LengthMismatch", false),
            InvalidInput(_) => ("InvalidInput", false),
            TooSmall { .. } => ("TooSmall", false),
            DegeneratePlane => ("DegeneratePlane", false),
            NoConvergence { .. } => ("NoConvergence", true),
            PairingFailure { .. } => ("PairingFailure", true),
            DegeneracyFailure => ("DegeneracyFailure", true),
            ContainmentFailure { .. } => ("ContainmentFailure", true),
        };
        if numerical {
            CliError::Numerical { code, detail }
        } else {
            CliError::BadInput { code, detail }
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        use GridError::*;
        let detail = e.to_string();
        let (code, numerical) = match e {
            Core(inner) => return inner.into(),
            InvalidGrid(_) => ("InvalidGrid", false),
            LengthMismatch { .. } => ("LengthMismatch", false),
            InvalidSamples(_) => ("InvalidSamples", false),
            GridTooNarrow { .. } => ("GridTooNarrow", false),
            SingularB { .. } => ("SingularB", false),
            NotSymplectic { .. } => ("NotSymplectic", false),
            InvalidMaslov { .. } => ("InvalidMaslov", false),
            NotWilliamsonFactor { .. } => ("NotWilliamsonFactor", false),
            HasNodes { .. } => ("HasNodes", false),
            Csv(_) => ("BadInput", false),
            Parse(_) => ("BadInput", false),
            AllMasked => ("AllMasked", true),
            InsufficientDecay { .. } => ("InsufficientDecay", true),
            ComplexWigner { .. } => ("ComplexWigner", true),
            NoContour => ("NoContour", true),
        };
        if numerical {
            CliError::Numerical { code, detail }
        } else {
            CliError::BadInput { code, detail }
        }
    }
}
