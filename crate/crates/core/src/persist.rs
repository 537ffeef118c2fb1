//! Versioned JSON envelopes for fitted models.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    model: T,
}

pub(crate) fn to_json<T: Serialize>(format: &str, model: &T) -> String {
    serde_json::to_string_pretty(&Envelope {
        format: format.to_string(),
        version: FORMAT_VERSION,
        model,
    })
    .expect("model serializes")
}

pub(crate) fn from_json<T: DeserializeOwned>(format: &str, text: &str) -> Result<T> {
    let envelope: Envelope<T> =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if envelope.format != format {
        return Err(Error::Format(format!(
            "expected a `{format}` file, found `{}`",
            envelope.format
        )));
    }
    if envelope.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported {format} version {}",
            envelope.version
        )));
    }
    Ok(envelope.model)
}

pub(crate) fn save<T: Serialize>(path: &Path, format: &str, model: &T) -> Result<()> {
    fs::write(path, to_json(format, model)).map_err(|e| Error::io(path, e))
}

pub(crate) fn load<T: DeserializeOwned>(path: &Path, format: &str) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(format, &text)
}
