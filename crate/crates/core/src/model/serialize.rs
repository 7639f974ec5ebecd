//! Versioned, self-describing model persistence (field-tagged JSON).

use super::FittedModel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    /// Hash of the resolved spec, for quick config comparisons.
    config_fingerprint: String,
    model: FittedModel,
}

/// FNV-1a over the canonical spec serialization.
pub fn config_fingerprint(model: &FittedModel) -> String {
    let text = serde_json::to_string(&model.spec).expect("spec serializes");
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

pub fn to_json(model: &FittedModel) -> String {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        config_fingerprint: config_fingerprint(model),
        model: model.clone(),
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

pub fn from_json(text: &str) -> Result<FittedModel> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| Error::ModelIo(format!("parse failed: {e}")))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelIo(format!(
            "unsupported model format version {} (expected {MODEL_FORMAT_VERSION})",
            file.format_version
        )));
    }
    Ok(file.model)
}

pub fn save_model(model: &FittedModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model))?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<FittedModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ModelIo(format!("{}: {e}", path.display())))?;
    from_json(&text)
}
