use std::cmp::Ordering;

use crate::codebook::Design;
use crate::error::{Error, Result};
use crate::scalar::{dot_native, norm, Real};

/// Z₁ = XᵀY/‖Y‖ for every column.
pub fn first_step_statistics<T: Real, D: Design<T>>(mut design: D, y: &[T]) -> Result<Vec<T>> {
    if y.len() != design.rows() {
        return Err(Error::Dimension(format!("received length {} vs {} rows", y.len(), design.rows())));
    }
    let ny = norm(y);
    if !(ny > 0.0) {
        return Err(Error::Degenerate("received vector is zero".into()));
    }
    let inv = T::of(1.0 / ny);
    let e: Vec<T> = y.iter().map(|&v| v * inv).collect();
    let mut z = vec![T::zero(); design.columns()];
    design.project(&e, &mut z);
    Ok(z)
}

/// Component of −F orthogonal to the unit vectors in `basis`, with its norm.
///
/// Classical Gram–Schmidt is applied twice, which keeps the new direction
/// orthogonal to working precision. `None` signals a degenerate step,
/// ‖G‖ ≤ 1e−10·√n.
pub fn orthogonal_component<T: Real>(basis: &[Vec<T>], fit: &[T]) -> Option<(Vec<T>, f64)> {
    let mut g: Vec<T> = fit.iter().map(|&v| -v).collect();
    for _ in 0..2 {
        for e in basis {
            let c = dot_native(&g, e);
            for (x, &b) in g.iter_mut().zip(e) {
                *x -= c * b;
            }
        }
    }
    let len = norm(&g);
    if len <= 1e-10 * (g.len() as f64).sqrt() {
        None
    } else {
        Some((g, len))
    }
}

/// Z^comb_k = √(1−λ²)·Z^comb_{k−1} + λ·Z_k, in place, over the columns in `live`.
pub fn combine_statistic<T: Real>(zcomb: &mut [T], z: &[T], lambda: f64, live: impl Fn(usize) -> bool) {
    assert!(lambda > 0.0 && lambda <= 1.0, "λ_(k,k) must lie in (0, 1], got {lambda}");
    let a = T::of((1.0 - lambda * lambda).max(0.0).sqrt());
    let b = T::of(lambda);
    for (j, (c, &zj)) in zcomb.iter_mut().zip(z).enumerate() {
        if live(j) {
            *c = a * *c + b * zj;
        }
    }
}

/// Paced selection: walk candidates by decreasing statistic (ties: lower column
/// first), adding each while the decoded size stays within `target`; stop at the
/// first one that would overshoot. Returns the selection and the new size.
pub fn pace_select<T: Real>(
    candidates: &[usize],
    stat: &[T],
    weight: impl Fn(usize) -> f64,
    target: f64,
    size: f64,
) -> (Vec<usize>, f64) {
    let mut order = candidates.to_vec();
    order.sort_by(|&i, &j| stat[j].partial_cmp(&stat[i]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    let mut size = size;
    let mut chosen = Vec::new();
    for j in order {
        let w = weight(j);
        if size + w > target + 1e-12 {
            break;
        }
        size += w;
        chosen.push(j);
    }
    (chosen, size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pacing_takes_top_three() {
        let stat = [5.0, 4.0, 6.0, 3.5, 4.5];
        let (sel, size) = pace_select(&[0, 1, 2, 3, 4], &stat, |_| 0.1, 0.5, 0.2);
        assert_eq!(sel, vec![2, 0, 4]);
        assert!((size - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pacing_empty_and_ties() {
        let stat = [1.0f64; 4];
        let (sel, size) = pace_select(&[], &stat, |_| 0.25, 1.0, 0.0);
        assert!(sel.is_empty() && size == 0.0);
        let (sel, _) = pace_select(&[3, 1, 2, 0], &stat, |_| 0.25, 0.5, 0.0);
        assert_eq!(sel, vec![0, 1]);
    }

    #[test]
    fn orthogonal_component_cases() {
        let e1 = vec![1.0, 0.0, 0.0];
        // F ∥ basis → degenerate
        assert!(orthogonal_component(std::slice::from_ref(&e1), &[2.0, 0.0, 0.0]).is_none());
        // F ⟂ basis → G = −F
        let (g, len) = orthogonal_component(&[e1], &[0.0, 3.0, 4.0]).unwrap();
        assert_eq!(g, vec![0.0, -3.0, -4.0]);
        assert!((len - 5.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_one_replaces() {
        let mut zc = vec![1.0, 2.0];
        combine_statistic(&mut zc, &[5.0, 6.0], 1.0, |_| true);
        assert_eq!(zc, vec![5.0, 6.0]);
    }
}
