//! Validation of reports against the shipped JSON schema.

use std::sync::OnceLock;

use jsonschema::JSONSchema;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../../../docs/report.schema.json");

fn compiled() -> &'static JSONSchema {
    static SCHEMA: OnceLock<JSONSchema> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("schema is valid JSON");
        JSONSchema::compile(&schema).expect("schema compiles")
    })
}

/// Every violation as `path: message`; empty when the report is valid.
pub fn validate_report(report: &Value) -> Vec<String> {
    match compiled().validate(report) {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{}: {}", e.instance_path, e))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rejects_wrong_format_tag() {
        let bad =
            json!({"format": "other", "version": 1, "settings": {}, "documents": [], "models": []});
        assert!(!validate_report(&bad).is_empty());
    }
}
