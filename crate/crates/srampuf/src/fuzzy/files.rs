//! External enrollment: dump file in, helper-data artifact out, with an
//! optional source-embeddable rendering for firmware builds.

use std::fs;
use std::path::Path;

use crate::bits::BitVec;
use crate::error::{Error, Result};

use super::{enroll, DerivedKey, FuzzyConfig, HelperData, OffsetSource};

/// Enrolls from a raw dump file and writes the binary helper artifact.
/// Refuses to overwrite an existing artifact unless `force` is set
/// (re-enrollment invalidates deployed helper data, so it must be asked
/// for explicitly).
pub fn enroll_external(
    dump: &Path,
    config: &FuzzyConfig,
    offset_source: &mut dyn OffsetSource,
    out: &Path,
    force: bool,
) -> Result<(HelperData, DerivedKey)> {
    let bytes = fs::read(dump).map_err(|e| Error::io(dump, e))?;
    let readout = BitVec::from_bytes(bytes);
    let segment = config
        .segment_of(&readout)
        .map_err(|e| Error::Data(e.to_string()))?;
    let (helper, key) =
        enroll(&segment, config, offset_source).map_err(|e| Error::Data(e.to_string()))?;
    if out.exists() && !force {
        return Err(Error::Data(format!(
            "{} exists; re-enrollment must be forced explicitly",
            out.display()
        )));
    }
    fs::write(out, helper.serialize()).map_err(|e| Error::io(out, e))?;
    Ok((helper, key))
}

/// Renders the serialized artifact as a C byte array for embedding in
/// firmware source.
pub fn render_c_array(helper: &HelperData, symbol: &str) -> String {
    let bytes = helper.serialize();
    let mut out = String::new();
    out.push_str(&format!(
        "/* helper-data artifact, {} bytes */\n",
        bytes.len()
    ));
    out.push_str(&format!(
        "static const unsigned char {symbol}[{}] = {{\n",
        bytes.len()
    ));
    for chunk in bytes.chunks(12) {
        let row: Vec<String> = chunk.iter().map(|b| format!("0x{b:02x}")).collect();
        out.push_str(&format!("    {},\n", row.join(", ")));
    }
    out.push_str("};\n");
    out
}
