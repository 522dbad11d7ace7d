use alloc::vec::Vec;

use crate::params::Params;

/// Triangular table a_{j,i}, 0 ≤ j ≤ i ≤ I_max, with
/// E^{(i)}_{α,β} = α^{-i} Σ_j a_{j,i} E_{α, i(α−1)+β+j}.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivCoeffTable {
    pub alpha: f64,
    pub beta: f64,
    i_max: usize,
    // rows[i][j]
    rows: Vec<Vec<f64>>,
}

impl DerivCoeffTable {
    pub fn i_max(&self) -> usize {
        self.i_max
    }

    /// a_{j,i}; zero for j > i.
    pub fn get(&self, j: usize, i: usize) -> f64 {
        assert!(i <= self.i_max, "order {i} beyond table size {}", self.i_max);
        self.rows[i].get(j).copied().unwrap_or(0.0)
    }
}

/// Forward recursion a_{j,i+1} = a_{j,i} + (2 − β + i(1−α) − j) a_{j−1,i}, a_{0,i} = 1.
pub fn deriv_coeffs(p: &Params, i_max: usize) -> DerivCoeffTable {
    let (a, b) = (p.alpha(), p.beta());
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(i_max + 1);
    rows.push(alloc::vec![1.0]);
    for i in 0..i_max {
        let prev = &rows[i];
        let mut next = alloc::vec![0.0; i + 2];
        next[0] = 1.0;
        for j in 1..=i + 1 {
            let same = prev.get(j).copied().unwrap_or(0.0);
            let g = 2.0 - b + i as f64 * (1.0 - a) - j as f64;
            next[j] = same + g * prev[j - 1];
        }
        rows.push(next);
    }
    DerivCoeffTable { alpha: a, beta: b, i_max, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::binom;

    #[test]
    fn low_rows_match_closed_expressions() {
        let (a, b) = (1.7, 0.35);
        let t = deriv_coeffs(&Params::new(a, b).unwrap(), 9);
        for i in 0..=9 {
            let n = i as f64;
            assert_eq!(t.get(0, i), 1.0);
            let a1 = (1.0 - b) * binom(n, 1) + (1.0 - a) * binom(n, 2);
            assert!((t.get(1, i) - a1).abs() < 1e-12 * a1.abs().max(1.0));
            let a2 = (1.0 - b) * (1.0 - a - b) * binom(n, 2)
                + (1.0 - a) * (4.0 - 2.0 * a - 3.0 * b) * binom(n, 3)
                + 3.0 * (1.0 - a) * (1.0 - a) * binom(n, 4);
            assert!((t.get(2, i) - a2).abs() < 1e-12 * a2.abs().max(1.0), "i = {i}");
            assert_eq!(t.get(i + 1, i), 0.0);
        }
    }

    #[test]
    fn exponential_has_trivial_table() {
        let t = deriv_coeffs(&Params::new(1.0, 1.0).unwrap(), 8);
        for i in 0..=8 {
            for j in 1..=i {
                assert_eq!(t.get(j, i), 0.0);
            }
        }
    }
}
