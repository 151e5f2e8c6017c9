//! Dump-file ingestion and export.
//!
//! Layout: `<root>/<device-id>/<readout-index>.bin`, flat binary, bit `i`
//! of the readout in bit `i % 8` of byte `i / 8`. All readouts under one
//! root must share a length.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::bits::BitVec;
use crate::error::{Error, Result};

use super::{sample_readout, DevicePopulation, SramReadout};

/// Reads every dump under `root`, sorted by (device, readout index).
pub fn ingest_dumps(root: &Path) -> Result<Vec<SramReadout>> {
    let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut readouts = Vec::new();
    let mut expected_len: Option<usize> = None;

    let mut device_dirs: Vec<(u32, std::path::PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let name = entry.file_name();
        let device_id: u32 = name
            .to_string_lossy()
            .parse()
            .map_err(|_| Error::Data(format!("device directory {name:?} is not numeric")))?;
        device_dirs.push((device_id, path));
    }
    device_dirs.sort_by_key(|(id, _)| *id);
    if device_dirs.is_empty() {
        return Err(Error::Data(format!(
            "no device directories under {}",
            root.display()
        )));
    }

    for (device_id, dir) in device_dirs {
        let mut files: Vec<(u32, std::path::PathBuf)> = Vec::new();
        for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
            let entry = entry.map_err(|e| Error::io(&dir, e))?;
            let path = entry.path();
            if path.extension().is_none_or(|e| e != "bin") {
                continue;
            }
            let stem = path.file_stem().unwrap_or_default().to_string_lossy();
            let idx: u32 = stem.parse().map_err(|_| {
                Error::Data(format!("readout file {} is not numeric", path.display()))
            })?;
            files.push((idx, path));
        }
        files.sort_by_key(|(idx, _)| *idx);
        if files.is_empty() {
            return Err(Error::Data(format!(
                "device directory {} holds no .bin readouts",
                dir.display()
            )));
        }
        for (readout_index, path) in files {
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            let bits = BitVec::from_bytes(bytes);
            match expected_len {
                None => expected_len = Some(bits.len()),
                Some(len) if len != bits.len() => {
                    return Err(Error::Data(format!(
                        "{}: {} bits, other readouts have {len}",
                        path.display(),
                        bits.len()
                    )));
                }
                _ => {}
            }
            readouts.push(SramReadout {
                device_id,
                readout_index,
                bits,
            });
        }
    }
    Ok(readouts)
}

/// Groups readouts per device, preserving readout order.
pub fn group_by_device(readouts: Vec<SramReadout>) -> BTreeMap<u32, Vec<SramReadout>> {
    let mut map: BTreeMap<u32, Vec<SramReadout>> = BTreeMap::new();
    for r in readouts {
        map.entry(r.device_id).or_default().push(r);
    }
    map
}

/// Samples and writes `readouts_per_device` dumps for every device in the
/// ingest layout.
pub fn export_dumps(
    pop: &DevicePopulation,
    readouts_per_device: u32,
    root: &Path,
) -> Result<()> {
    for device in 0..pop.n_devices() {
        let dir = root.join(device.to_string());
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for idx in 0..readouts_per_device {
            let readout = sample_readout(pop, device, idx)?;
            let path = dir.join(format!("{idx}.bin"));
            fs::write(&path, readout.bits.as_bytes()).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

/// Writes the population ground truth (per-position theta and flip
/// probability) for oracle checks against simulated dumps.
pub fn write_ground_truth(pop: &DevicePopulation, path: &Path) -> Result<()> {
    let mut out = String::from("# srampuf-csv v1 ground-truth\nposition,theta,flip_prob\n");
    for (i, cell) in pop.thetas().iter().zip(pop.flip_probs()).enumerate() {
        out.push_str(&format!("{i},{},{}\n", cell.0, cell.1));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
