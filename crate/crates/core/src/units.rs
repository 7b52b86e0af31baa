//! Conversion from atomic units of time to SI.

/// One atomic unit of time in seconds (ħ / E_h).
pub const ATOMIC_UNIT_OF_TIME_S: f64 = 2.4188843265857e-17;

/// Converts a time in atomic units to seconds.
pub fn to_si_seconds(t_au: f64) -> f64 {
    t_au * ATOMIC_UNIT_OF_TIME_S
}

/// Converts a time in atomic units to nanoseconds.
pub fn to_nanoseconds(t_au: f64) -> f64 {
    to_si_seconds(t_au) * 1e9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(to_si_seconds(0.0), 0.0);
    }

    #[test]
    fn unit_maps_to_constant() {
        assert_eq!(to_si_seconds(1.0), 2.4188843265857e-17);
    }

    #[test]
    fn nbar_36_sixth_of_superrevival_below_one_ns() {
        // t_sr = pi * n^5 for hydrogen
        let t = std::f64::consts::PI * 36f64.powi(5) / 6.0;
        assert!((t - 3.166e7).abs() / 3.166e7 < 1e-3);
        let s = to_si_seconds(t);
        assert!((s - 7.66e-10).abs() / 7.66e-10 < 1e-3, "{s}");
        assert!(s < 1e-9);
    }
}
