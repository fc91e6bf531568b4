//! Self-describing JSON snapshot of a [`Dataset`].
//!
//! ```text
//! { "format": "fxmidas-dataset", "version": 1, "checksum": "<sha256>",
//!   "payload": { ... series as base64 little-endian f64 arrays ... } }
//! ```
//!
//! The checksum is the SHA-256 of the payload's compact JSON with sorted
//! keys.

use std::collections::BTreeMap;
use std::path::Path;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::models::{Dataset, DatasetConfig, Fundamental};
use crate::timeseries::{Period, TimeSeries};

pub const SNAPSHOT_FORMAT: &str = "fxmidas-dataset";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    version: u32,
    checksum: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
struct EncodedSeries {
    start: Period,
    len: usize,
    values: String,
}

impl EncodedSeries {
    fn encode(s: &TimeSeries) -> Self {
        let bytes: Vec<u8> = s.values().iter().flat_map(|v| v.to_le_bytes()).collect();
        Self {
            start: s.start(),
            len: s.len(),
            values: BASE64.encode(bytes),
        }
    }

    fn decode(&self) -> Result<TimeSeries> {
        let bad = |m: &str| Error::ChecksumFailure(format!("corrupt series payload: {m}"));
        let bytes = BASE64
            .decode(&self.values)
            .map_err(|e| bad(&e.to_string()))?;
        if bytes.len() != 8 * self.len {
            return Err(bad("length mismatch"));
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        TimeSeries::new(self.start, values)
    }
}

#[derive(Serialize, Deserialize)]
struct Payload {
    config: DatasetConfig,
    metadata: BTreeMap<String, String>,
    fx_log: EncodedSeries,
    ds: EncodedSeries,
    monthly: BTreeMap<Fundamental, EncodedSeries>,
    quarterly: BTreeMap<Fundamental, EncodedSeries>,
    gdp_domestic: EncodedSeries,
    gdp_foreign: EncodedSeries,
    inflation_domestic: EncodedSeries,
    inflation_foreign: EncodedSeries,
}

fn checksum(payload: &Value) -> Result<String> {
    let canonical = serde_json::to_string(payload)?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Write `dataset` to `path`.
pub fn snapshot(dataset: &Dataset, path: &Path) -> Result<()> {
    let encode_map = |m: &BTreeMap<Fundamental, TimeSeries>| {
        m.iter()
            .map(|(f, s)| (*f, EncodedSeries::encode(s)))
            .collect()
    };
    let payload = Payload {
        config: dataset.config,
        metadata: dataset.metadata.clone(),
        fx_log: EncodedSeries::encode(&dataset.fx_log),
        ds: EncodedSeries::encode(&dataset.ds),
        monthly: encode_map(&dataset.monthly),
        quarterly: encode_map(&dataset.quarterly),
        gdp_domestic: EncodedSeries::encode(&dataset.gdp_domestic),
        gdp_foreign: EncodedSeries::encode(&dataset.gdp_foreign),
        inflation_domestic: EncodedSeries::encode(&dataset.inflation_domestic),
        inflation_foreign: EncodedSeries::encode(&dataset.inflation_foreign),
    };
    let payload = serde_json::to_value(payload)?;
    let envelope = Envelope {
        format: SNAPSHOT_FORMAT.into(),
        version: SNAPSHOT_VERSION,
        checksum: checksum(&payload)?,
        payload,
    };
    std::fs::write(path, serde_json::to_string_pretty(&envelope)?)?;
    Ok(())
}

/// Read a snapshot written by [`snapshot`], verifying version and checksum.
pub fn load_snapshot(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let envelope: Envelope = serde_json::from_str(&text).map_err(|e| {
        Error::ChecksumFailure(format!("{}: unreadable or truncated: {e}", path.display()))
    })?;
    if envelope.format != SNAPSHOT_FORMAT {
        return Err(Error::ChecksumFailure(format!(
            "{}: not a dataset snapshot (format {:?})",
            path.display(),
            envelope.format
        )));
    }
    if envelope.version != SNAPSHOT_VERSION {
        return Err(Error::VersionMismatch {
            found: envelope.version,
            expected: SNAPSHOT_VERSION,
        });
    }
    let actual = checksum(&envelope.payload)?;
    if actual != envelope.checksum {
        return Err(Error::ChecksumFailure(format!(
            "{}: expected {}, computed {actual}",
            path.display(),
            envelope.checksum
        )));
    }
    let p: Payload = serde_json::from_value(envelope.payload).map_err(|e| {
        Error::ChecksumFailure(format!("{}: malformed payload: {e}", path.display()))
    })?;
    let decode_map = |m: &BTreeMap<Fundamental, EncodedSeries>| -> Result<BTreeMap<_, _>> {
        m.iter().map(|(f, s)| Ok((*f, s.decode()?))).collect()
    };
    let dataset = Dataset {
        config: p.config,
        fx_log: p.fx_log.decode()?,
        ds: p.ds.decode()?,
        monthly: decode_map(&p.monthly)?,
        quarterly: decode_map(&p.quarterly)?,
        gdp_domestic: p.gdp_domestic.decode()?,
        gdp_foreign: p.gdp_foreign.decode()?,
        inflation_domestic: p.inflation_domestic.decode()?,
        inflation_foreign: p.inflation_foreign.decode()?,
        metadata: p.metadata,
    };
    dataset.validate()?;
    Ok(dataset)
}
