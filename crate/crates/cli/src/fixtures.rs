//! The bundled manifest of acceptance `(K, L)` pairs.

use crate::input::{InputDocument, InputError};

pub const MANIFEST: &str = include_str!("../fixtures/manifest.txt");

/// Named documents in manifest order.
pub fn manifest() -> Result<Vec<(String, InputDocument)>, InputError> {
    let mut out = Vec::new();
    let mut name: Option<String> = None;
    let mut body = String::new();
    let mut flush = |name: Option<String>, body: &mut String| -> Result<(), InputError> {
        if let Some(n) = name {
            out.push((n, InputDocument::parse(body)?));
        }
        body.clear();
        Ok(())
    };
    for line in MANIFEST.lines() {
        if let Some(n) = line.strip_prefix("=== ") {
            flush(name.take(), &mut body)?;
            name = Some(n.trim().to_string());
        } else if name.is_some() {
            body.push_str(line);
            body.push('\n');
        }
    }
    flush(name, &mut body)?;
    Ok(out)
}
