//! Arithmetic-average Asian call under geometric Brownian motion.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::normal::ppnd16;
use super::Integrand;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsianParams {
    pub initial_price: f64,
    pub sigma: f64,
    pub rate: f64,
    pub strike: f64,
    pub maturity: f64,
    /// Number of equally spaced sampling times, which is the integrand dimension.
    pub steps: usize,
}

impl Default for AsianParams {
    fn default() -> Self {
        AsianParams {
            initial_price: 100.0,
            sigma: 0.2,
            rate: 0.05,
            strike: 100.0,
            maturity: 1.0,
            steps: 4,
        }
    }
}

impl AsianParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.initial_price > 0.0
            && self.sigma >= 0.0
            && self.maturity > 0.0
            && self.steps >= 1
            && [
                self.initial_price,
                self.sigma,
                self.rate,
                self.strike,
                self.maturity,
            ]
            .iter()
            .all(|x| x.is_finite());
        if !ok {
            return Err(Error::Invalid(format!(
                "invalid Asian option parameters {self:?}"
            )));
        }
        Ok(())
    }

    /// Overrides fields from `key=value` pairs: P0, K, sigma, r, T, S.
    pub fn with_overrides(mut self, params: &BTreeMap<String, f64>) -> Result<Self> {
        for (k, &v) in params {
            match k.as_str() {
                "P0" => self.initial_price = v,
                "K" => self.strike = v,
                "sigma" => self.sigma = v,
                "r" => self.rate = v,
                "T" => self.maturity = v,
                "S" => {
                    if v.fract() != 0.0 || v < 1.0 {
                        return Err(Error::Invalid(format!(
                            "S must be a positive integer, got {v}"
                        )));
                    }
                    self.steps = v as usize
                }
                other => return Err(Error::Invalid(format!("unknown Asian parameter '{other}'"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("P0".to_string(), self.initial_price),
            ("K".to_string(), self.strike),
            ("sigma".to_string(), self.sigma),
            ("r".to_string(), self.rate),
            ("T".to_string(), self.maturity),
            ("S".to_string(), self.steps as f64),
        ])
    }

    /// Discounted payoff of the deterministic path, exact when σ = 0.
    pub fn zero_volatility_price(&self) -> f64 {
        let s = self.steps as f64;
        let avg = (1..=self.steps)
            .map(|i| self.initial_price * (self.rate * self.maturity * i as f64 / s).exp())
            .sum::<f64>()
            / s;
        (-self.rate * self.maturity).exp() * (avg - self.strike).max(0.0)
    }

    /// Discounted payoff along the path driven by uniforms `x`.
    ///
    /// Increment i is √(T/S)·Φ⁻¹(x_i); a coordinate of exactly 0 is treated as
    /// the smallest positive double.
    pub fn payoff(&self, x: &[f64]) -> f64 {
        let s = self.steps as f64;
        let dt = self.maturity / s;
        let drift = (self.rate - 0.5 * self.sigma * self.sigma) * dt;
        let vol = self.sigma * dt.sqrt();
        let mut log_price = self.initial_price.ln();
        let mut total = 0.0;
        for &u in x {
            let u = u.max(f64::MIN_POSITIVE);
            log_price += drift + vol * ppnd16(u);
            total += log_price.exp();
        }
        (-self.rate * self.maturity).exp() * (total / s - self.strike).max(0.0)
    }
}

pub fn asian_integrand(params: AsianParams) -> Result<Integrand> {
    params.validate()?;
    let exact = (params.sigma == 0.0).then(|| params.zero_volatility_price());
    Ok(Integrand::new(
        "asian",
        params.steps,
        params.to_map(),
        exact,
        Arc::new(move |x: &[f64]| params.payoff(x)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vol_zero_rate_zero_strike() {
        let p = AsianParams {
            sigma: 0.0,
            rate: 0.0,
            strike: 0.0,
            ..AsianParams::default()
        };
        let f = asian_integrand(p).unwrap();
        assert_eq!(f.exact_integral(), Some(100.0));
        for x in [
            [0.1, 0.5, 0.9, 0.3],
            [0.0, 0.0, 0.0, 0.0],
            [0.999, 0.2, 0.7, 0.5],
        ] {
            assert!((f.eval(&x) - 100.0).abs() < 1e-12);
        }
    }

    #[test]
    fn at_the_money_zero_vol_is_worthless() {
        let p = AsianParams {
            sigma: 0.0,
            rate: 0.0,
            ..AsianParams::default()
        };
        let f = asian_integrand(p).unwrap();
        assert!(f.eval(&[0.3, 0.6, 0.1, 0.9]).abs() < 1e-12);
        assert_eq!(f.exact_integral(), Some(0.0));
    }

    #[test]
    fn single_step_matches_hand_computation() {
        let p = AsianParams {
            steps: 1,
            ..AsianParams::default()
        };
        // x = 0.5 → Φ⁻¹ = 0; price path = 100·e^{(0.05 − 0.02)·1}.
        let expected = (-0.05f64).exp() * (100.0 * 0.03f64.exp() - 100.0);
        assert!((p.payoff(&[0.5]) - expected).abs() < 1e-12);
    }

    #[test]
    fn overrides() {
        let mut m = BTreeMap::new();
        m.insert("K".to_string(), 90.0);
        m.insert("S".to_string(), 8.0);
        let p = AsianParams::default().with_overrides(&m).unwrap();
        assert_eq!(p.strike, 90.0);
        assert_eq!(p.steps, 8);
        m.insert("bogus".to_string(), 1.0);
        assert!(AsianParams::default().with_overrides(&m).is_err());
        let bad = AsianParams {
            initial_price: -1.0,
            ..AsianParams::default()
        };
        assert!(asian_integrand(bad).is_err());
    }
}
