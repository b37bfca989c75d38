use crate::scalar::Real;

/// Column access needed by the decoders and the transmitter.
///
/// A design is an n × N matrix whose columns are grouped into sections of
/// `section_size` consecutive columns.
pub trait Design<T: Real> {
    fn rows(&self) -> usize;
    fn columns(&self) -> usize;
    fn section_size(&self) -> usize;

    /// `out[j] = ⟨X_j, e⟩` for every column.
    ///
    /// Lazily sampled designs require `e` to have unit norm and to be orthogonal
    /// to every direction projected on before.
    fn project(&mut self, e: &[T], out: &mut [T]);

    /// `acc += scale · X_j`.
    fn accumulate(&mut self, j: usize, scale: T, acc: &mut [T]);
}

impl<T: Real, D: Design<T> + ?Sized> Design<T> for &mut D {
    fn rows(&self) -> usize {
        (**self).rows()
    }
    fn columns(&self) -> usize {
        (**self).columns()
    }
    fn section_size(&self) -> usize {
        (**self).section_size()
    }
    fn project(&mut self, e: &[T], out: &mut [T]) {
        (**self).project(e, out)
    }
    fn accumulate(&mut self, j: usize, scale: T, acc: &mut [T]) {
        (**self).accumulate(j, scale, acc)
    }
}
