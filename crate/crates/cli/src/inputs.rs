use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use icemetrics::MaskFormat;

use crate::CliError;

/// One mask input with its report id (the file name).
#[derive(Debug, Clone)]
pub struct MaskInput {
    pub id: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct MaskPair {
    pub id: String,
    pub pred: PathBuf,
    pub gt: PathBuf,
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn metadata(path: &Path) -> Result<fs::Metadata, CliError> {
    fs::metadata(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))
}

/// Mask files directly inside `dir`, sorted by name. Only `.pgm`, `.pnm` and
/// `.csv` files are considered.
fn list_masks(dir: &Path) -> Result<Vec<MaskInput>, CliError> {
    let entries =
        fs::read_dir(dir).map_err(|e| CliError::io(format!("listing {}", dir.display()), e))?;
    let mut inputs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(format!("listing {}", dir.display()), e))?;
        let path = entry.path();
        if path.is_file() && MaskFormat::from_path(&path).is_some() {
            inputs.push(MaskInput {
                id: file_id(&path),
                path,
            });
        }
    }
    inputs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(inputs)
}

pub fn resolve_masks(path: &Path) -> Result<Vec<MaskInput>, CliError> {
    let inputs = if metadata(path)?.is_dir() {
        list_masks(path)?
    } else {
        vec![MaskInput {
            id: file_id(path),
            path: path.to_path_buf(),
        }]
    };
    if inputs.is_empty() {
        return Err(CliError::config(format!(
            "no inputs: {} contains no mask files",
            path.display()
        )));
    }
    Ok(inputs)
}

/// Pairs prediction and ground-truth inputs by identical file name.
pub fn resolve_pairs(pred: &Path, gt: &Path) -> Result<Vec<MaskPair>, CliError> {
    let (pred_dir, gt_dir) = (metadata(pred)?.is_dir(), metadata(gt)?.is_dir());
    match (pred_dir, gt_dir) {
        (false, false) => {
            return Ok(vec![MaskPair {
                id: file_id(pred),
                pred: pred.to_path_buf(),
                gt: gt.to_path_buf(),
            }])
        }
        (true, true) => {}
        _ => {
            return Err(CliError::config(
                "--pred and --gt must both be files or both be directories",
            ))
        }
    }

    let preds = resolve_masks(pred)?;
    let gts = list_masks(gt)?;
    let pred_ids: BTreeSet<&str> = preds.iter().map(|p| p.id.as_str()).collect();
    let gt_ids: BTreeSet<&str> = gts.iter().map(|g| g.id.as_str()).collect();
    let pred_only: Vec<&str> = pred_ids.difference(&gt_ids).copied().collect();
    let gt_only: Vec<&str> = gt_ids.difference(&pred_ids).copied().collect();
    if !pred_only.is_empty() || !gt_only.is_empty() {
        let mut msg = String::from("unpaired inputs:");
        if !pred_only.is_empty() {
            msg.push_str(&format!(" missing from --gt: {}", pred_only.join(", ")));
        }
        if !gt_only.is_empty() {
            if !pred_only.is_empty() {
                msg.push(';');
            }
            msg.push_str(&format!(" missing from --pred: {}", gt_only.join(", ")));
        }
        return Err(CliError::Config(msg));
    }

    Ok(preds
        .into_iter()
        .zip(gts)
        .map(|(p, g)| MaskPair {
            id: p.id,
            pred: p.path,
            gt: g.path,
        })
        .collect())
}
