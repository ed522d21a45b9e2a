//! Atomic file output: write to a sibling temporary file, then rename over the target.

use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

pub fn write_atomic<F>(path: &Path, fill: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut dyn Write) -> anyhow::Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'a str,
    config: &'a Value,
    report: &'a T,
}

/// `{ version, config, report }` as pretty JSON.
pub fn write_report<T: Serialize>(path: &Path, config: &Value, report: &T) -> anyhow::Result<()> {
    write_atomic(path, |w| {
        let env = Envelope {
            version: holorecon::VERSION,
            config,
            report,
        };
        serde_json::to_writer_pretty(&mut *w, &env)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}
