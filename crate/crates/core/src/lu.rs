//! Minimal dense LU with partial pivoting for the absorption solves.
//!
//! Kept separate from the `oracle` module on purpose: the oracle is a
//! test-only reference and must stay out of production paths.

use crate::error::{Error, Result};

pub(crate) struct LuFactors {
    n: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

/// Factors a row-major `n × n` matrix in place.
pub(crate) fn lu_factor(n: usize, mut a: Vec<f64>) -> Result<LuFactors> {
    debug_assert_eq!(a.len(), n * n);
    let mut piv = vec![0usize; n];
    for col in 0..n {
        let mut best = col;
        let mut best_abs = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best_abs {
                best = r;
                best_abs = v;
            }
        }
        if !(best_abs > 1e-300) {
            return Err(Error::Internal(
                "singular system in absorption solve".into(),
            ));
        }
        piv[col] = best;
        if best != col {
            for j in 0..n {
                a.swap(col * n + j, best * n + j);
            }
        }
        let pivot = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / pivot;
            a[r * n + col] = f;
            if f != 0.0 {
                for j in col + 1..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
    }
    Ok(LuFactors { n, a, piv })
}

impl LuFactors {
    /// Solves `A x = b` in place.
    pub(crate) fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for col in 0..n {
            b.swap(col, self.piv[col]);
        }
        for i in 1..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s / self.a[i * n + i];
        }
    }
}
