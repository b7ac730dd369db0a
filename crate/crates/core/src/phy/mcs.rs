use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PhyError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    pub index: u32,
    pub min_sinr_db: f64,
    /// bits/s/Hz
    pub spectral_efficiency: f64,
}

/// SINR-threshold ladder, sorted by strictly increasing threshold and efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl Default for McsTable {
    /// 29 entries, thresholds -6..=22 dB in 1 dB steps, efficiency linear
    /// from 0.15 to 5.55 bits/s/Hz.
    fn default() -> Self {
        let n = 29;
        let entries = (0..n)
            .map(|i| McsEntry {
                index: i,
                min_sinr_db: -6.0 + i as f64,
                spectral_efficiency: 0.15 + (5.55 - 0.15) * i as f64 / (n - 1) as f64,
            })
            .collect();
        McsTable { entries }
    }
}

impl McsTable {
    pub fn new(entries: Vec<McsEntry>) -> Result<Self, PhyError> {
        if entries.is_empty() {
            return Err(PhyError::InvalidMcsTable("table is empty".into()));
        }
        for e in &entries {
            if !e.min_sinr_db.is_finite()
                || e.spectral_efficiency.is_nan()
                || e.spectral_efficiency <= 0.0
            {
                return Err(PhyError::InvalidMcsTable(format!(
                    "entry {}: threshold must be finite and efficiency positive",
                    e.index
                )));
            }
        }
        for w in entries.windows(2) {
            if w[1].min_sinr_db <= w[0].min_sinr_db {
                return Err(PhyError::InvalidMcsTable(format!(
                    "entry {}: thresholds must strictly increase",
                    w[1].index
                )));
            }
            if w[1].spectral_efficiency <= w[0].spectral_efficiency {
                return Err(PhyError::InvalidMcsTable(format!(
                    "entry {}: efficiencies must strictly increase",
                    w[1].index
                )));
            }
        }
        Ok(McsTable { entries })
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn lowest_threshold(&self) -> f64 {
        self.entries[0].min_sinr_db
    }

    /// Highest entry whose threshold is at or below `sinr_db`; `None` is outage.
    pub fn select(&self, sinr_db: f64) -> Option<&McsEntry> {
        let n = self.entries.partition_point(|e| e.min_sinr_db <= sinr_db);
        n.checked_sub(1).map(|i| &self.entries[i])
    }

    /// Reads `index,min_sinr_db,spectral_efficiency` rows after a header.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, PhyError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let mut entries = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| PhyError::McsFile {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            if row.len() != 3 {
                return Err(PhyError::McsFile {
                    line,
                    message: format!("expected 3 fields, found {}", row.len()),
                });
            }
            let field = |i: usize| {
                row[i].trim().parse::<f64>().map_err(|_| PhyError::McsFile {
                    line,
                    message: format!("field {} is not a number: {:?}", i + 1, &row[i]),
                })
            };
            let index = row[0]
                .trim()
                .parse::<u32>()
                .map_err(|_| PhyError::McsFile {
                    line,
                    message: format!("index is not a non-negative integer: {:?}", &row[0]),
                })?;
            entries.push(McsEntry {
                index,
                min_sinr_db: field(1)?,
                spectral_efficiency: field(2)?,
            });
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, PhyError> {
        let f = File::open(path).map_err(|e| PhyError::McsFile {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::read_csv(f)
    }
}

/// Free-function form of [`McsTable::select`].
pub fn select_mcs(sinr_db: f64, table: &McsTable) -> Option<McsEntry> {
    table.select(sinr_db).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{SimRng, Stream};

    fn linear_scan(sinr: f64, table: &McsTable) -> Option<McsEntry> {
        let mut out = None;
        for e in table.entries() {
            if e.min_sinr_db <= sinr {
                out = Some(*e);
            }
        }
        out
    }

    #[test]
    fn default_table_shape() {
        let t = McsTable::default();
        assert_eq!(t.entries().len(), 29);
        assert_eq!(t.entries()[0].min_sinr_db, -6.0);
        assert_eq!(t.entries()[28].min_sinr_db, 22.0);
        assert!((t.entries()[0].spectral_efficiency - 0.15).abs() < 1e-12);
        assert!((t.entries()[28].spectral_efficiency - 5.55).abs() < 1e-12);
        assert!(McsTable::new(t.entries().to_vec()).is_ok());
    }

    #[test]
    fn outage_below_all_thresholds() {
        assert_eq!(select_mcs(-6.01, &McsTable::default()), None);
    }

    #[test]
    fn threshold_is_inclusive() {
        let t = McsTable::default();
        assert_eq!(select_mcs(3.0, &t).unwrap().index, 9);
        assert_eq!(select_mcs(2.999, &t).unwrap().index, 8);
        assert_eq!(select_mcs(100.0, &t).unwrap().index, 28);
    }

    #[test]
    fn matches_linear_scan() {
        let t = McsTable::default();
        let mut rng = SimRng::new(1, Stream::Phy);
        for _ in 0..10_000 {
            let s = -10.0 + 40.0 * rng.uniform();
            assert_eq!(select_mcs(s, &t), linear_scan(s, &t));
        }
    }

    #[test]
    fn rejects_unsorted() {
        let e = |i, s, eff| McsEntry {
            index: i,
            min_sinr_db: s,
            spectral_efficiency: eff,
        };
        assert!(McsTable::new(vec![e(0, 1.0, 1.0), e(1, 1.0, 2.0)]).is_err());
        assert!(McsTable::new(vec![e(0, 1.0, 1.0), e(1, 2.0, 1.0)]).is_err());
        assert!(McsTable::new(vec![]).is_err());
    }

    #[test]
    fn csv_round() {
        let text = "index,min_sinr_db,spectral_efficiency\n0,-5,0.2\n1,0,1.0\n2,10,4.0\n";
        let t = McsTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(t.entries().len(), 3);
        assert_eq!(select_mcs(10.0, &t).unwrap().spectral_efficiency, 4.0);
        let bad = "index,min_sinr_db,spectral_efficiency\n0,-5,0.2\n1,x,1.0\n";
        match McsTable::read_csv(bad.as_bytes()) {
            Err(PhyError::McsFile { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
