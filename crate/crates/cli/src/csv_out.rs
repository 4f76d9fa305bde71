//! CSV emission helpers: 17-significant-digit floats, unix newlines,
//! `# key=value` header comments, and a checksum of the effective
//! configuration for provenance.

use std::io::Write;

/// Round-trip-exact float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// FNV-1a 64-bit hash, hex encoded; stamps the effective configuration
/// into output headers.
pub fn fnv1a_hex(data: &str) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in data.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

/// Writes `# key=value` comment lines followed by a checksum line.
pub fn write_header_comments<W: Write>(
    out: &mut W,
    command: &str,
    entries: &[(&str, String)],
) -> std::io::Result<()> {
    let mut echo = String::new();
    writeln!(out, "# command={command}")?;
    echo.push_str(command);
    for (key, value) in entries {
        writeln!(out, "# {key}={value}")?;
        echo.push('\n');
        echo.push_str(key);
        echo.push('=');
        echo.push_str(value);
    }
    writeln!(out, "# config_checksum={}", fnv1a_hex(&echo))?;
    Ok(())
}
