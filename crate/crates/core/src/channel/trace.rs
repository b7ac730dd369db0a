use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{ChannelError, PowerMatrix, PAC_COUNT};
use crate::beam::BeamPair;
use crate::engine::SimTime;

/// Time-indexed sequence of power scans, held constant between scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrace {
    sample_interval: SimTime,
    matrices: Vec<PowerMatrix>,
}

impl ChannelTrace {
    pub fn new(sample_interval: SimTime, matrices: Vec<PowerMatrix>) -> Result<Self, ChannelError> {
        if sample_interval == SimTime::ZERO {
            return Err(ChannelError::ZeroInterval);
        }
        if matrices.is_empty() {
            return Err(ChannelError::EmptyTrace);
        }
        Ok(ChannelTrace {
            sample_interval,
            matrices,
        })
    }

    pub fn sample_interval(&self) -> SimTime {
        self.sample_interval
    }

    pub fn matrices(&self) -> &[PowerMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn codebook_size_tx(&self) -> usize {
        super::CODEBOOK_SIZE
    }

    pub fn codebook_size_rx(&self) -> usize {
        super::CODEBOOK_SIZE
    }

    pub fn duration(&self) -> SimTime {
        self.sample_interval.mul(self.matrices.len() as u64)
    }

    /// Zero-order hold: the scan taken at `floor(t / interval)`.
    pub fn sample_at(&self, t: SimTime) -> Result<&PowerMatrix, ChannelError> {
        let idx = t.div_floor(self.sample_interval) as usize;
        self.matrices.get(idx).ok_or(ChannelError::OutOfRange {
            t,
            duration: self.duration(),
        })
    }

    pub fn power_at(&self, t: SimTime, pair: BeamPair) -> Result<f64, ChannelError> {
        Ok(self.sample_at(t)?.at(pair))
    }

    pub fn load(path: &Path, sample_interval: SimTime) -> Result<Self, ChannelError> {
        let file = File::open(path).map_err(|source| ChannelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::read_csv(file, sample_interval)
    }

    /// Parses the trace CSV: a header, then rows of `time_s` followed by 144
    /// dB values in tx-major order. Errors carry the 1-based file line.
    pub fn read_csv<R: Read>(reader: R, sample_interval: SimTime) -> Result<Self, ChannelError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let mut matrices = Vec::new();
        let mut values = Vec::with_capacity(PAC_COUNT);
        for record in rdr.records() {
            let record = record.map_err(|e| ChannelError::Csv {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != PAC_COUNT + 1 {
                return Err(ChannelError::FieldCount {
                    line,
                    found: record.len().saturating_sub(1),
                });
            }
            values.clear();
            for (col, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| ChannelError::NonNumeric {
                    line,
                    column: col + 1,
                    value: field.to_string(),
                })?;
                if !v.is_finite() {
                    return Err(ChannelError::NonNumeric {
                        line,
                        column: col + 1,
                        value: field.to_string(),
                    });
                }
                if col > 0 {
                    values.push(v);
                }
            }
            matrices.push(PowerMatrix::from_row_major(&values).expect("length checked"));
        }
        if matrices.is_empty() {
            return Err(ChannelError::EmptyTrace);
        }
        Self::new(sample_interval, matrices)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ChannelError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let mut header = Vec::with_capacity(PAC_COUNT + 1);
        header.push("time_s".to_string());
        for tx in 0..super::CODEBOOK_SIZE {
            for rx in 0..super::CODEBOOK_SIZE {
                header.push(format!("tx{tx}rx{rx}"));
            }
        }
        w.write_record(&header).map_err(csv_write_error)?;
        let mut row = Vec::with_capacity(PAC_COUNT + 1);
        for (k, m) in self.matrices.iter().enumerate() {
            row.clear();
            row.push(self.sample_interval.mul(k as u64).as_secs_f64().to_string());
            // `Display` for f64 prints the shortest string that parses back to the same value.
            row.extend(m.as_row_major().iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(csv_write_error)?;
        }
        w.flush().map_err(|e| ChannelError::Csv {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), ChannelError> {
        let file = File::create(path).map_err(|source| ChannelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

fn csv_write_error(e: csv::Error) -> ChannelError {
    ChannelError::Csv {
        line: 0,
        message: e.to_string(),
    }
}
