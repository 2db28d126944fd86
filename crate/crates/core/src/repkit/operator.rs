use std::io::{self, BufRead, Read, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{RepError, StateVector};
use crate::grid::RepGrid;

const BINARY_MAGIC: &[u8; 4] = b"RCOP";
const FORMAT_VERSION: u32 = 1;

/// A discretized operator on a [`RepGrid`]: `(A f)_i = Σ_j a_ij f_j`.
///
/// The grid inner product has uniform weight, so operator norms are plain
/// spectral norms of the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    grid: RepGrid,
    truncation_warning: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, grid: RepGrid) -> Result<Self, RepError> {
        if entries.nrows() != grid.len() || entries.ncols() != grid.len() {
            return Err(RepError::SampleCount {
                expected: grid.len(),
                found: entries.nrows(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(RepError::NonFinite);
        }
        Ok(OperatorMatrix {
            entries,
            grid,
            truncation_warning: false,
        })
    }

    pub(crate) fn with_warning(mut self, warning: bool) -> Self {
        self.truncation_warning = warning;
        self
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn grid(&self) -> &RepGrid {
        &self.grid
    }

    /// Set when the kernel reaches translations longer than half the grid
    /// window, so that periodic wrap-around affects the operator.
    pub fn truncation_warning(&self) -> bool {
        self.truncation_warning
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector, RepError> {
        if *v.grid() != self.grid {
            return Err(RepError::GridMismatch);
        }
        let x = DVector::from_column_slice(v.samples());
        let y = &self.entries * x;
        Ok(StateVector::from_parts(self.grid, y.iter().copied().collect()))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// One matrix row per line, as `re,im` pairs separated by commas, after
    /// a `#` header line carrying the shape.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# relconv operator v{FORMAT_VERSION} rows={} cols={} layout=re,im",
            self.entries.nrows(),
            self.entries.ncols()
        )?;
        for i in 0..self.entries.nrows() {
            let row: Vec<String> = (0..self.entries.ncols())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:e},{:e}", z.re, z.im)
                })
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Little-endian: magic `RCOP`, `u32` version, `u64` rows, `u64` cols,
    /// then row-major `f64` pairs `(re, im)`.
    pub fn write_binary<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(self.entries.nrows() as u64).to_le_bytes())?;
        out.write_all(&(self.entries.ncols() as u64).to_le_bytes())?;
        for i in 0..self.entries.nrows() {
            for j in 0..self.entries.ncols() {
                let z = self.entries[(i, j)];
                out.write_all(&z.re.to_le_bytes())?;
                out.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads the binary layout of [`write_binary`](Self::write_binary).
    pub fn read_binary<R: Read>(mut input: R) -> io::Result<DMatrix<Complex64>> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "not an operator file"));
        }
        let mut word = [0u8; 4];
        input.read_exact(&mut word)?;
        if u32::from_le_bytes(word) != FORMAT_VERSION {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "unsupported version"));
        }
        let mut long = [0u8; 8];
        input.read_exact(&mut long)?;
        let rows = u64::from_le_bytes(long) as usize;
        input.read_exact(&mut long)?;
        let cols = u64::from_le_bytes(long) as usize;
        let mut m = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
        for i in 0..rows {
            for j in 0..cols {
                input.read_exact(&mut long)?;
                let re = f64::from_le_bytes(long);
                input.read_exact(&mut long)?;
                let im = f64::from_le_bytes(long);
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }

    /// Reads the CSV layout of [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(input: R) -> io::Result<DMatrix<Complex64>> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| bad("bad number")))
                .collect::<Result<_, _>>()?;
            if !values.len().is_multiple_of(2) {
                return Err(bad("odd number of values in row"));
            }
            rows.push(values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
        }
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(bad("ragged rows"));
        }
        Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_grid() -> RepGrid {
        RepGrid::new(-1.0, 1.0, 8).unwrap()
    }

    proptest! {
        #[test]
        fn exports_round_trip(values in proptest::collection::vec(-1e6f64..1e6, 128)) {
            let m = DMatrix::from_fn(8, 8, |i, j| Complex64::new(values[2 * (8 * i + j)], values[2 * (8 * i + j) + 1]));
            let op = OperatorMatrix::new(m.clone(), small_grid()).unwrap();
            let mut bin = Vec::new();
            op.write_binary(&mut bin).unwrap();
            prop_assert_eq!(OperatorMatrix::read_binary(&bin[..]).unwrap(), m.clone());
            let mut csv = Vec::new();
            op.write_csv(&mut csv).unwrap();
            prop_assert_eq!(OperatorMatrix::read_csv(&csv[..]).unwrap(), m);
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let m = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
        assert!(OperatorMatrix::new(m, small_grid()).is_err());
        assert!(OperatorMatrix::read_binary(&b"XXXX"[..]).is_err());
    }
}
