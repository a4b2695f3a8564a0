use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

use idcode_core::codefile::{self, CodeFile};
use idcode_core::Code;

pub fn read_code(path: &Path) -> Result<CodeFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    codefile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to `path` via a temp file in the same directory and a rename, or
/// to stdout when no path is given.
pub fn write_code(path: Option<&Path>, code: &Code, radius: Option<u32>) -> Result<()> {
    let text = codefile::render(code, radius);
    let Some(path) = path else {
        print!("{text}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating a temp file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
