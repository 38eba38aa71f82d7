//! Shared serialization helpers for JSON/CSV output.

use num_bigint::BigUint;
use serde::ser::Serializer;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Big counts go out as decimal strings so no consumer silently rounds them.
pub fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Envelope for every JSON document the tools emit.
#[derive(Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

pub fn to_json<T: Serialize>(body: T) -> String {
    serde_json::to_string_pretty(&Document { schema_version: SCHEMA_VERSION, body })
        .expect("report serialization")
}
