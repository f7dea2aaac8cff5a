use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base-leaf data at one radius: integrals and volumes of the balls of radius
/// `r` and `r − R1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSample {
    pub r: f64,
    pub integral: f64,
    pub volume: f64,
    pub integral_inner: f64,
    pub volume_inner: f64,
}

impl ProductSample {
    pub fn base_average(&self) -> f64 {
        self.integral / self.volume
    }
}

/// Extended averages per radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductRow {
    pub r: f64,
    pub base: f64,
    /// Integral over the extended ball divided by `|T1|`.
    pub extended_integral: f64,
    pub extended_lower: f64,
    pub extended_upper: f64,
    pub integrals_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub r1: f64,
    pub rows: Vec<ProductRow>,
    /// Every extended integral equals the base integral bit for bit.
    pub bitwise_equal: bool,
    /// Base average series equals the lower extended bracket bit for bit.
    pub lower_equals_base: bool,
}

/// Extension by a compact factor of diameter `R1`.
///
/// With `φ` vanishing on the annulus `B_r \ B_{r−R1}`, the extended integral
/// is `|T1|·∫_{B_r} φ = |T1|·∫_{B_{r−R1}} φ`, and the extended volume lies
/// between `|T1||B_{r−R1}|` and `|T1||B_r|`.
pub fn product_extension_check(samples: &[ProductSample], r1: f64, annulus_zero: bool) -> Result<ProductReport> {
    if !annulus_zero {
        return Err(Error::Hypothesis(
            "phi must vanish on every annulus B_r \\ B_{r-R1}; caller did not verify it".into(),
        ));
    }
    if !(r1 > 0.0) {
        return Err(Error::Invalid(format!("R1 must be positive, got {r1}")));
    }
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        if s.r < r1 {
            return Err(Error::Invalid(format!("radius {} is below R1 = {r1}", s.r)));
        }
        if !(s.volume > 0.0 && s.volume_inner > 0.0 && s.volume_inner <= s.volume) {
            return Err(Error::Invalid(format!("inconsistent volumes at r = {}", s.r)));
        }
        let base = s.base_average();
        rows.push(ProductRow {
            r: s.r,
            base,
            extended_integral: s.integral_inner,
            extended_lower: s.integral / s.volume,
            extended_upper: s.integral_inner / s.volume_inner,
            integrals_equal: s.integral.to_bits() == s.integral_inner.to_bits(),
        });
    }
    let bitwise_equal = rows.iter().all(|r| r.integrals_equal);
    let lower_equals_base = rows.iter().all(|r| r.extended_lower.to_bits() == r.base.to_bits());
    Ok(ProductReport {
        r1,
        rows,
        bitwise_equal,
        lower_equals_base,
    })
}

/// Gap between the extended averages along two radius sequences, using the
/// lower bracket on `plus` and the upper bracket on `minus`.
pub fn transferred_gap(plus: &ProductReport, minus: &ProductReport) -> f64 {
    let lo = plus.rows.iter().map(|r| r.extended_lower).fold(f64::INFINITY, f64::min);
    let hi = minus.rows.iter().map(|r| r.extended_upper).fold(f64::NEG_INFINITY, f64::max);
    lo - hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_without_hypothesis() {
        assert!(matches!(product_extension_check(&[], 1.0, false), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn constant_phi_brackets_collapse() {
        let c = 0.75;
        let s = ProductSample {
            r: 5.0,
            integral: c * 10.0,
            volume: 10.0,
            integral_inner: c * 8.0,
            volume_inner: 8.0,
        };
        let rep = product_extension_check(&[s], 1.0, true).unwrap();
        assert_eq!(rep.rows[0].extended_lower, c);
        assert_eq!(rep.rows[0].extended_upper, c);
    }
}
