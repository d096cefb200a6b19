use axum::extract::multipart::MultipartError;
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::{json, Value};

use animlens_core::{Error, ErrorCode};

/// Error payload returned by every endpoint and printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), detail: json!({}) }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Validation, message)
    }

    pub fn not_found(what: impl Into<String>) -> Self {
        let what = what.into();
        Self { code: ErrorCode::NotFound, message: format!("not found: {what}"), detail: json!({ "what": what }) }
    }

    pub fn status(&self) -> StatusCode {
        match self.code {
            ErrorCode::ParseError | ErrorCode::Validation | ErrorCode::FrameOutOfRange => StatusCode::BAD_REQUEST,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::IncompatibleSkeletons => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        Self { code: e.code(), message: e.to_string(), detail: e.detail() }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::validation(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        Self::validation(e.body_text())
    }
}

impl From<MultipartError> for ApiError {
    fn from(e: MultipartError) -> Self {
        Self::validation(format!("bad multipart body: {}", e.body_text()))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}
