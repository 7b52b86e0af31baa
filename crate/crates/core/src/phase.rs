//! Reduction of large phases `E·t` to `[-π, π]`.
//!
//! At `t ~ t_sr` the products `E_n t` reach ~10⁵ rad, so every term goes
//! through this single path: the product is formed exactly as a double-double
//! (FMA error-free transform) and reduced against a double-double 2π.

/// High and low parts of 2π.
const TAU_HI: f64 = std::f64::consts::TAU;
const TAU_LO: f64 = 2.4492935982947064e-16;

/// Returns `energy * t` reduced into `[-π, π]`.
pub fn reduced_phase(energy: f64, t: f64) -> f64 {
    let p = energy * t;
    let err = energy.mul_add(t, -p);
    let k = (p / TAU_HI).round();
    if k == 0.0 {
        return p + err;
    }
    // k * TAU_HI is exact to within the fused rounding of the subtraction.
    let r = (-k).mul_add(TAU_HI, p);
    (-k).mul_add(TAU_LO, r) + err
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn small_phases_untouched() {
        assert_eq!(reduced_phase(0.5, 2.0), 1.0);
        assert_eq!(reduced_phase(-0.5, 2.0), -1.0);
        assert_eq!(reduced_phase(0.0, 1e12), 0.0);
    }

    #[test]
    fn multiples_of_tau_reduce_to_zero() {
        let r = reduced_phase(TAU, 1000.0);
        assert!(r.abs() < 1e-12, "{r}");
    }

    #[test]
    fn result_in_principal_range() {
        for i in 0..1000 {
            let e = -1.0 / (2.0 * (30.0 + i as f64 * 0.037).powi(2));
            let t = 1.0e9 + i as f64 * 12345.678;
            let r = reduced_phase(e, t);
            assert!(r.abs() <= PI + 1e-12);
            // agrees with naive reduction to the naive product's precision
            let naive = (e * t).rem_euclid(TAU);
            let diff = (r.rem_euclid(TAU) - naive).abs();
            assert!(diff.min(TAU - diff) < 1e-9, "{r} {naive}");
        }
    }

    #[test]
    fn odd_in_time() {
        for &t in &[1.0, 3.3e5, 7.7e8, 2.0e9] {
            let e = -1.0 / (2.0 * 45.0f64.powi(2));
            assert_eq!(reduced_phase(e, -t), -reduced_phase(e, t));
        }
    }
}
