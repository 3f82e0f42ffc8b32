//! Atomic file output: write to a temporary file in the target directory,
//! then rename over the destination.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::pipeline::ScenarioOutput;

pub const REPORT_FILE: &str = "report.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(dir))?;
    tmp.write_all(bytes).map_err(io(path))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io(path))?;
    }
    tmp.as_file().sync_all().map_err(io(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

pub fn report_json(output: &ScenarioOutput) -> String {
    let mut text = serde_json::to_string_pretty(&output.report).expect("report serializes");
    text.push('\n');
    text
}

/// Writes one scenario's files under `<out>/<name>/`; returns the paths.
pub fn write_scenario(out: &Path, output: &ScenarioOutput) -> Result<Vec<PathBuf>, CliError> {
    let dir = out.join(&output.report.name);
    let mut written = Vec::new();
    if let Some(csv) = &output.csv {
        let path = dir.join(TRAJECTORY_FILE);
        write_atomic(&path, csv.as_bytes())?;
        written.push(path);
    }
    let path = dir.join(REPORT_FILE);
    write_atomic(&path, report_json(output).as_bytes())?;
    written.push(path);
    Ok(written)
}
