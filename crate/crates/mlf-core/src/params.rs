use crate::error::Error;

/// The pair (α, β). α > 0, β any real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    alpha: f64,
    beta: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, Error> {
        if !(alpha > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams);
        }
        Ok(Params { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Same α, different β.
    pub fn with_beta(&self, beta: f64) -> Result<Self, Error> {
        Params::new(self.alpha, beta)
    }
}
