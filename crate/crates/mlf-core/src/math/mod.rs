pub mod dd;
pub mod gamma;

pub use dd::Dd;
pub use gamma::{digamma, ln_gamma, ln_gamma_dd, rgamma, trigamma};

/// Binomial coefficient C(n, k) for real `n`.
pub fn binom(n: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c *= (n - i as f64) / (i as f64 + 1.0);
    }
    c
}
