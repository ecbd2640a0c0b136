use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::well::{Facies, Sample, Well};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    well_id: String,
    x: f64,
    y: f64,
    facies: i64,
    depth: f64,
    permeability_md: f64,
}

pub(crate) fn csv_error(context: &str, e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::Parse(format!("{context}: line {}: {e}", pos.line())),
        None => Error::Parse(format!("{context}: {e}")),
    }
}

/// Reads `well_id,x,y,facies,depth,permeability_md` rows; rows may come in
/// any order. Wells keep the order of their first appearance.
pub fn read_wells<R: Read>(reader: R, context: &str) -> Result<Vec<Well>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut wells: Vec<Well> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| csv_error(context, e))?;
        let facies = Facies::from_code(row.facies)
            .map_err(|e| Error::Validation(format!("well {}: {e}", row.well_id)))?;
        let sample = Sample {
            depth: row.depth,
            permeability: row.permeability_md,
        };
        match index.get(&row.well_id) {
            Some(&k) => {
                let w = &mut wells[k];
                if w.x != row.x || w.y != row.y || w.facies != facies {
                    return Err(Error::Validation(format!(
                        "well {}: inconsistent coordinates or facies across rows",
                        row.well_id
                    )));
                }
                w.samples.push(sample);
            }
            None => {
                index.insert(row.well_id.clone(), wells.len());
                wells.push(Well {
                    well_id: row.well_id,
                    x: row.x,
                    y: row.y,
                    facies,
                    samples: vec![sample],
                });
            }
        }
    }
    for w in &mut wells {
        w.samples.sort_by(|a, b| a.depth.total_cmp(&b.depth));
        if w.samples.windows(2).any(|p| p[0].depth == p[1].depth) {
            return Err(Error::Validation(format!("well {}: duplicate depth", w.well_id)));
        }
        w.validate()?;
    }
    Ok(wells)
}

pub fn load_wells_csv(path: impl AsRef<Path>) -> Result<Vec<Well>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_wells(file, &path.display().to_string())
}

pub fn write_wells<W: Write>(writer: W, wells: &[Well]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for w in wells {
        for s in &w.samples {
            wtr.serialize(Row {
                well_id: w.well_id.clone(),
                x: w.x,
                y: w.y,
                facies: w.facies.code() as i64,
                depth: s.depth,
                permeability_md: s.permeability,
            })
            .map_err(|e| csv_error("wells CSV", e))?;
        }
    }
    wtr.flush().map_err(|e| Error::io("wells CSV", e))?;
    Ok(())
}

pub fn write_wells_csv(path: impl AsRef<Path>, wells: &[Well]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_wells(file, wells)
}
