//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degenerate covariance: scale {scale} below floor {floor}")]
    DegenerateCovariance { scale: f64, floor: f64 },

    #[error("invalid gaussian parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed scene header: {0}")]
    MalformedHeader(String),

    #[error("truncated scene payload: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: u64, got: u64 },

    #[error("unsupported scene version {0}")]
    UnsupportedVersion(u32),

    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),

    #[error("empty reference bank with blend weight {lambda} < 1")]
    EmptyReferenceBank { lambda: f64 },

    #[error("bank layout mismatch: {0}")]
    BankMismatch(String),

    #[error("invalid rank {rank} for {d_in}x{d_out} layer")]
    InvalidRank { rank: usize, d_in: usize, d_out: usize },

    #[error("no trainable parameters")]
    NoTrainableParameters,

    #[error("timestep {t} out of range [0, {steps})")]
    TimestepOutOfRange { t: usize, steps: usize },

    #[error("mask/camera size mismatch: mask {mask_w}x{mask_h}, camera {cam_w}x{cam_h}")]
    MaskSizeMismatch { mask_w: usize, mask_h: usize, cam_w: usize, cam_h: usize },

    #[error("scene has no editable labeling; run label_editable first")]
    UnlabeledScene,

    #[error("need at least {required} views, got {got}")]
    NotEnoughViews { required: usize, got: usize },

    #[error("editor failed on view {view}: {message}")]
    EditorFailure { view: usize, message: String },

    #[error("loss became non-finite at iteration {iteration}: {diagnostics}")]
    NonFiniteLoss { iteration: usize, diagnostics: String },

    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("image error: {0}")]
    Image(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
