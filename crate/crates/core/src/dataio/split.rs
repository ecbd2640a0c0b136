use std::collections::HashSet;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::csvio::csv_error;
use super::well::{Facies, Well};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Test,
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Role::Train),
            "test" => Ok(Role::Test),
            other => Err(Error::Validation(format!("unknown role `{other}` (train or test)"))),
        }
    }
}

/// Train/test assignment by well id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Split {
    pub entries: Vec<(String, Role)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SplitRow {
    well_id: String,
    role: String,
}

impl Split {
    pub fn ids(&self, role: Role) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, r)| *r == role)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    /// Wells with the given role, in split-file order. Every id must exist.
    pub fn select<'a>(&self, wells: &'a [Well], role: Role) -> Result<Vec<&'a Well>> {
        self.ids(role)
            .into_iter()
            .map(|id| {
                wells
                    .iter()
                    .find(|w| w.well_id == id)
                    .ok_or_else(|| Error::Validation(format!("split names unknown well `{id}`")))
            })
            .collect()
    }

    pub fn select_owned(&self, wells: &[Well], role: Role) -> Result<Vec<Well>> {
        Ok(self.select(wells, role)?.into_iter().cloned().collect())
    }
}

pub fn load_split(path: impl AsRef<Path>) -> Result<Split> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let ctx = path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for row in rdr.deserialize::<SplitRow>() {
        let row = row.map_err(|e| csv_error(&ctx, e))?;
        if !seen.insert(row.well_id.clone()) {
            return Err(Error::Validation(format!("{ctx}: well `{}` listed twice", row.well_id)));
        }
        entries.push((row.well_id, row.role.parse()?));
    }
    Ok(Split { entries })
}

pub fn write_split(path: impl AsRef<Path>, split: &Split) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    for (id, role) in &split.entries {
        let role = match role {
            Role::Train => "train",
            Role::Test => "test",
        };
        wtr.serialize(SplitRow {
            well_id: id.clone(),
            role: role.into(),
        })
        .map_err(|e| csv_error("split CSV", e))?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Distributes `total` across groups in proportion to `counts` by the
/// largest-remainder method. No group receives more than it has.
pub fn allocate_proportional(counts: &[usize], total: usize) -> Result<Vec<usize>> {
    let sum: usize = counts.iter().sum();
    if total > sum {
        return Err(Error::Config(format!("cannot allocate {total} of {sum} wells")));
    }
    if sum == 0 {
        return Ok(vec![0; counts.len()]);
    }
    let quotas: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 * total as f64 / sum as f64)
        .collect();
    let mut alloc: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut left = total - alloc.iter().sum::<usize>();
    for &g in order.iter().cycle().take(counts.len() * 2) {
        if left == 0 {
            break;
        }
        if alloc[g] < counts[g] {
            alloc[g] += 1;
            left -= 1;
        }
    }
    Ok(alloc)
}

/// Holds out `n_test` wells, allocated to facies in proportion to their
/// well counts and drawn at random within each facies.
pub fn proportional_split(wells: &[Well], n_test: usize, seed: u64) -> Result<Split> {
    let counts: Vec<usize> = Facies::ALL
        .iter()
        .map(|f| wells.iter().filter(|w| w.facies == *f).count())
        .collect();
    let alloc = allocate_proportional(&counts, n_test)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test = HashSet::new();
    for (f, &k) in Facies::ALL.iter().zip(&alloc) {
        let mut ids: Vec<&str> = wells
            .iter()
            .filter(|w| w.facies == *f)
            .map(|w| w.well_id.as_str())
            .collect();
        ids.shuffle(&mut rng);
        test.extend(ids.into_iter().take(k));
    }
    Ok(Split {
        entries: wells
            .iter()
            .map(|w| {
                let role = if test.contains(w.well_id.as_str()) {
                    Role::Test
                } else {
                    Role::Train
                };
                (w.well_id.clone(), role)
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_allocation() {
        assert_eq!(allocate_proportional(&[34, 17, 12], 10).unwrap(), vec![5, 3, 2]);
        assert_eq!(allocate_proportional(&[1, 1, 1], 0).unwrap(), vec![0, 0, 0]);
        assert_eq!(allocate_proportional(&[3, 0, 1], 4).unwrap(), vec![3, 0, 1]);
        assert!(allocate_proportional(&[1, 1], 3).is_err());
    }

    #[test]
    fn roles_parse() {
        assert_eq!("train".parse::<Role>().unwrap(), Role::Train);
        assert!("holdout".parse::<Role>().is_err());
    }
}
