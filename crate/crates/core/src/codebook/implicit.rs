use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::design::Design;
use crate::scalar::{dot_native, Real};

const UNSET: u32 = u32::MAX;

/// A Gaussian dictionary sampled on demand.
///
/// The decoder only ever sees a column through its inner products with an
/// orthonormal sequence of directions, until the column is selected and its
/// full vector enters a fit. For a column that has not been materialised, its
/// coordinate along a fresh direction orthogonal to all earlier ones is an
/// independent N(0,1) variate, so it can be drawn at projection time. A column
/// is materialised on first use in [`Design::accumulate`]: its recorded
/// coordinates are kept and the orthogonal remainder is drawn fresh. The joint
/// law of everything the decoder observes is exactly that of a dense i.i.d.
/// N(0,1) dictionary, at a cost of O(N) draws per projection instead of O(nN).
#[derive(Clone, Debug)]
pub struct ImplicitDictionary<T> {
    rows: usize,
    columns: usize,
    section_size: usize,
    rng: ChaCha8Rng,
    slot: Vec<u32>,
    store: Vec<T>,
    basis: Vec<Vec<T>>,
    coords: Vec<Vec<T>>,
}

impl<T: Real> ImplicitDictionary<T> {
    pub fn new(rows: usize, sections: usize, section_size: usize, seed: u64) -> Self {
        let columns = sections * section_size;
        ImplicitDictionary {
            rows,
            columns,
            section_size,
            rng: ChaCha8Rng::seed_from_u64(seed),
            slot: vec![UNSET; columns],
            store: Vec::new(),
            basis: Vec::new(),
            coords: Vec::new(),
        }
    }

    /// Number of columns drawn in full so far.
    pub fn materialized(&self) -> usize {
        self.store.len() / self.rows.max(1)
    }

    /// Full column `j`, drawing it if needed.
    pub fn column(&mut self, j: usize) -> &[T] {
        let s = self.materialize(j);
        &self.store[s * self.rows..(s + 1) * self.rows]
    }

    fn normal(&mut self) -> T {
        T::of(self.rng.sample::<f64, _>(StandardNormal))
    }

    fn materialize(&mut self, j: usize) -> usize {
        if self.slot[j] != UNSET {
            return self.slot[j] as usize;
        }
        let n = self.rows;
        let mut g: Vec<T> = (0..n).map(|_| self.normal()).collect();
        // remove the part of the fresh draw inside the span of the basis (twice, for stability)
        for _ in 0..2 {
            for e in &self.basis {
                let c = dot_native(&g, e);
                for (x, &b) in g.iter_mut().zip(e) {
                    *x -= c * b;
                }
            }
        }
        // and put back the coordinates the decoder has already observed
        for (e, coord) in self.basis.iter().zip(&self.coords) {
            let c = coord[j];
            for (x, &b) in g.iter_mut().zip(e) {
                *x += c * b;
            }
        }
        let s = self.store.len() / n.max(1);
        self.store.extend_from_slice(&g);
        self.slot[j] = s as u32;
        s
    }
}

impl<T: Real> Design<T> for ImplicitDictionary<T> {
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
        debug_assert!(self.basis.iter().all(|b| dot_native(b, e).abs() < T::of(1e-6)));
        let n = self.rows;
        let mut coord = vec![T::zero(); self.columns];
        for j in 0..self.columns {
            let s = self.slot[j];
            out[j] = if s == UNSET {
                let z = self.normal();
                coord[j] = z;
                z
            } else {
                let s = s as usize;
                dot_native(&self.store[s * n..(s + 1) * n], e)
            };
        }
        self.basis.push(e.to_vec());
        self.coords.push(coord);
    }

    fn accumulate(&mut self, j: usize, scale: T, acc: &mut [T]) {
        let s = self.materialize(j);
        let n = self.rows;
        for (a, &x) in acc.iter_mut().zip(&self.store[s * n..(s + 1) * n]) {
            *a += scale * x;
        }
    }
}
