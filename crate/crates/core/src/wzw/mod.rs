//! Built-in modular data: SU(2)_k in closed form, SU(N)_k from Weyl-group
//! sums, and the Ising model.

mod cache;
mod sun;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::modular::{CMatrix, ModularData};

pub use cache::SunCache;
pub use sun::{dominant_weights, sun, sun_with_cap, weight_count, DEFAULT_WEIGHT_CAP};

/// SU(2) at level `k`: fields `0..=k` (twice the spin).
pub fn su2(k: u32) -> Result<ModularData> {
    if k == 0 {
        return invalid("level must be positive");
    }
    let k = k as i64;
    let n = (k + 1) as usize;
    let norm = (2.0 / (k + 2) as f64).sqrt();
    let s = CMatrix::from_fn(n, n, |a, b| {
        let arg = std::f64::consts::PI * ((a + 1) * (b + 1)) as f64 / (k + 2) as f64;
        Complex64::new(norm * arg.sin(), 0.0)
    });
    let h = (0..n as i64).map(|a| Ratio::new(a * (a + 2), 4 * (k + 2))).collect();
    ModularData::new(
        (0..n).map(|a| a.to_string()).collect(),
        h,
        Ratio::new(3 * k, k + 2),
        s,
        (0..n).collect(),
    )
}

/// The Ising model with fields `1`, `e` (the spin-1/2 current) and `s`.
pub fn ising() -> ModularData {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let s = CMatrix::from_row_slice(
        3,
        3,
        &[c(0.5), c(0.5), c(r), c(0.5), c(0.5), c(-r), c(r), c(-r), c(0.0)],
    );
    ModularData::new(
        vec!["1".into(), "e".into(), "s".into()],
        vec![Ratio::new(0, 1), Ratio::new(1, 2), Ratio::new(1, 16)],
        Ratio::new(1, 2),
        s,
        vec![0, 1, 2],
    )
    .expect("static data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::ModularSource;

    #[test]
    fn su2_values() {
        let md = su2(2).unwrap();
        assert!((md.s(0, 0).re - 0.5).abs() < 1e-15);
        let md = su2(4).unwrap();
        assert_eq!(md.h(2), Ratio::new(1, 3));
        assert_eq!(md.central_charge(), Ratio::from_integer(2));
        assert_eq!(md.t_exponent(2).to_string(), "1/4");
        for k in 1..=10 {
            assert!(su2(k).unwrap().check_modular().passes(1e-12), "k={k}");
        }
        assert!(su2(0).is_err());
    }

    #[test]
    fn ising_values() {
        let md = ising();
        assert!(md.check_modular().passes(1e-12));
        assert_eq!(md.s(2, 2), Complex64::new(0.0, 0.0));
    }
}
