use std::io::{Read, Write};

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::design::Design;
use crate::error::{domain, Error, Result};
use crate::model::CodeParams;
use crate::scalar::{dot_native, Real};
use crate::special::norm_quantile;

/// Fill `out` with column `j` of the dictionary seeded by `seed`.
///
/// Entries come from a ChaCha8 keystream addressed by position, so any column
/// can be regenerated on its own; each 53-bit uniform is mapped through the
/// normal quantile function.
pub fn gaussian_column<T: Real>(seed: u64, j: usize, out: &mut [T]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // two 32-bit words per entry
    rng.set_word_pos(2 * (j as u128) * out.len() as u128);
    for x in out.iter_mut() {
        let u = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        *x = T::of(norm_quantile(u));
    }
}

/// Dense n × N Gaussian dictionary, stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary<T> {
    rows: usize,
    section_size: usize,
    columns: usize,
    data: Vec<T>,
}

impl<T: Real> Dictionary<T> {
    /// Draw an i.i.d. N(0,1) dictionary for `code`.
    pub fn generate(code: &CodeParams, seed: u64) -> Result<Self> {
        Self::generate_shape(code.block_length, code.columns(), code.section_size, seed)
    }

    pub fn generate_shape(rows: usize, columns: usize, section_size: usize, seed: u64) -> Result<Self> {
        let len = rows
            .checked_mul(columns)
            .filter(|l| l.checked_mul(std::mem::size_of::<T>()).is_some())
            .ok_or_else(|| Error::Resource(format!("{rows} × {columns} dictionary is not addressable")))?;
        let mut data = Vec::new();
        data.try_reserve_exact(len)
            .map_err(|e| Error::Resource(format!("cannot allocate {rows} × {columns} dictionary: {e}")))?;
        data.resize(len, T::zero());
        if rows > 0 {
            for (j, col) in data.chunks_exact_mut(rows).enumerate() {
                gaussian_column(seed, j, col);
            }
        }
        Ok(Dictionary { rows, section_size, columns, data })
    }

    /// Wrap column-major data.
    pub fn from_columns(rows: usize, section_size: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || !data.len().is_multiple_of(rows) {
            return Err(Error::Dimension(format!("{} entries do not form columns of height {rows}", data.len())));
        }
        let columns = data.len() / rows;
        if section_size == 0 || !columns.is_multiple_of(section_size) {
            return Err(Error::Dimension(format!("{columns} columns do not split into sections of {section_size}")));
        }
        Ok(Dictionary { rows, section_size, columns, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn section_size(&self) -> usize {
        self.section_size
    }

    pub fn sections(&self) -> usize {
        self.columns / self.section_size
    }

    /// Section (0-based) holding column `j` (0-based).
    pub fn section_of(&self, j: usize) -> usize {
        j / self.section_size
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[col * self.rows + row]
    }

    /// Export: little-endian header (n, N as u32) followed by row-major f64 entries.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let to_u32 = |v: usize| {
            u32::try_from(v).map_err(|_| std::io::Error::new(std::io::ErrorKind::InvalidInput, "dimension exceeds u32"))
        };
        w.write_all(&to_u32(self.rows)?.to_le_bytes())?;
        w.write_all(&to_u32(self.columns)?.to_le_bytes())?;
        let mut row = Vec::with_capacity(8 * self.columns);
        for i in 0..self.rows {
            row.clear();
            for j in 0..self.columns {
                row.extend_from_slice(&self.get(i, j).f64().to_le_bytes());
            }
            w.write_all(&row)?;
        }
        Ok(())
    }

    /// Inverse of [`Dictionary::write_binary`].
    pub fn read_binary<R: Read>(mut r: R, section_size: usize) -> Result<Self> {
        let io = |e: std::io::Error| Error::Resource(format!("dictionary read failed: {e}"));
        let mut word = [0u8; 4];
        r.read_exact(&mut word).map_err(io)?;
        let rows = u32::from_le_bytes(word) as usize;
        r.read_exact(&mut word).map_err(io)?;
        let columns = u32::from_le_bytes(word) as usize;
        if rows == 0 {
            return domain("dictionary with zero rows");
        }
        let mut data = vec![T::zero(); rows * columns];
        let mut buf = vec![0u8; 8 * columns];
        for i in 0..rows {
            r.read_exact(&mut buf).map_err(io)?;
            for (j, b) in buf.chunks_exact(8).enumerate() {
                data[j * rows + i] = T::of(f64::from_le_bytes(b.try_into().unwrap()));
            }
        }
        Self::from_columns(rows, section_size, data)
    }
}

impl<T: Real> Design<T> for &Dictionary<T> {
    fn rows(&self) -> usize {
        self.rows
    }

    fn columns(&self) -> usize {
        self.columns
    }

    fn section_size(&self) -> usize {
        self.section_size
    }

    fn project(&mut self, e: &[T], out: &mut [T]) {
        assert_eq!(e.len(), self.rows, "direction length");
        for (j, o) in out.iter_mut().enumerate().take(self.columns) {
            *o = dot_native(self.column(j), e);
        }
    }

    fn accumulate(&mut self, j: usize, scale: T, acc: &mut [T]) {
        for (a, &x) in acc.iter_mut().zip(self.column(j)) {
            *a += scale * x;
        }
    }
}
