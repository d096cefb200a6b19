use std::fmt;

use serde::{Deserialize, Serialize};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure with optional location information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseError {
    pub message: String,
    /// 1-based line number for text formats.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    /// Path to the offending field for structured formats, e.g. `frames[0].rotations[2]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Source file, when parsing as part of a batch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into(), line: None, path: None, file: None }
    }

    pub fn at_line(line: usize, message: impl Into<String>) -> Self {
        Self { message: message.into(), line: Some(line), path: None, file: None }
    }

    pub fn at_path(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { message: message.into(), line: None, path: Some(path.into()), file: None }
    }
}

impl ParseError {
    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}: ")?;
        }
        match (&self.line, &self.path) {
            (Some(line), _) => write!(f, "line {line}: {}", self.message),
            (None, Some(path)) => write!(f, "at {path}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("incompatible skeletons in {file}: missing joints {missing:?}, extra joints {extra:?}")]
    IncompatibleSkeletons {
        file: String,
        missing: Vec<String>,
        extra: Vec<String>,
        /// Joints present in both files whose parents differ.
        reparented: Vec<String>,
    },

    #[error("no animations in session")]
    EmptySession,

    #[error("{0}")]
    Structural(String),

    #[error("frame {frame} out of range for clip {clip}")]
    FrameOutOfRange { clip: String, frame: i64 },

    #[error("object {0} has a degenerate transform")]
    ObjectDegenerate(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("validation failed: {0}")]
    Validation(String),
}

/// Closed set of error codes surfaced to API clients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    ParseError,
    IncompatibleSkeletons,
    NotFound,
    Validation,
    FrameOutOfRange,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::ParseError => "parse_error",
            ErrorCode::IncompatibleSkeletons => "incompatible_skeletons",
            ErrorCode::NotFound => "not_found",
            ErrorCode::Validation => "validation",
            ErrorCode::FrameOutOfRange => "frame_out_of_range",
        }
    }
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Parse(_) => ErrorCode::ParseError,
            Error::IncompatibleSkeletons { .. } => ErrorCode::IncompatibleSkeletons,
            Error::NotFound(_) => ErrorCode::NotFound,
            Error::FrameOutOfRange { .. } => ErrorCode::FrameOutOfRange,
            Error::EmptySession
            | Error::Structural(_)
            | Error::ObjectDegenerate(_)
            | Error::Validation(_) => ErrorCode::Validation,
        }
    }

    /// Structured context for API payloads.
    pub fn detail(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Error::Parse(p) => serde_json::to_value(p).unwrap_or_default(),
            Error::IncompatibleSkeletons { file, missing, extra, reparented } => json!({
                "file": file,
                "missing": missing,
                "extra": extra,
                "reparented": reparented,
            }),
            Error::FrameOutOfRange { clip, frame } => json!({ "clip": clip, "frame": frame }),
            Error::ObjectDegenerate(id) => json!({ "object_id": id }),
            Error::NotFound(what) => json!({ "what": what }),
            Error::EmptySession => json!({ "reason": "empty_session" }),
            Error::Structural(_) | Error::Validation(_) => json!({}),
        }
    }
}
