use std::fmt;

use crate::beam::BeamPair;

/// Number of steering vectors in each side's codebook.
pub const CODEBOOK_SIZE: usize = 12;
/// Pointing-angle combinations per scan.
pub const PAC_COUNT: usize = CODEBOOK_SIZE * CODEBOOK_SIZE;

/// One full scan: relative received power in dB for every (tx, rx) steering
/// combination. Row index is the TX steering index, column the RX index.
#[derive(Clone, PartialEq)]
pub struct PowerMatrix {
    entries: [f64; PAC_COUNT],
}

impl PowerMatrix {
    pub fn filled(value_db: f64) -> Self {
        PowerMatrix {
            entries: [value_db; PAC_COUNT],
        }
    }

    /// Builds a matrix from 144 values in row-major (tx-major) order.
    pub fn from_row_major(values: &[f64]) -> Option<Self> {
        let entries: [f64; PAC_COUNT] = values.try_into().ok()?;
        Some(PowerMatrix { entries })
    }

    pub fn get(&self, tx: usize, rx: usize) -> f64 {
        self.entries[tx * CODEBOOK_SIZE + rx]
    }

    pub fn at(&self, pair: BeamPair) -> f64 {
        self.get(pair.tx(), pair.rx())
    }

    pub fn set(&mut self, tx: usize, rx: usize, value_db: f64) {
        self.entries[tx * CODEBOOK_SIZE + rx] = value_db;
    }

    pub fn as_row_major(&self) -> &[f64; PAC_COUNT] {
        &self.entries
    }

    /// Iterates `(pair, power)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (BeamPair, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &p)| (BeamPair::from_flat(i), p))
    }
}

impl fmt::Debug for PowerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.entries.chunks(CODEBOOK_SIZE) {
            list.entry(&row);
        }
        list.finish()
    }
}
