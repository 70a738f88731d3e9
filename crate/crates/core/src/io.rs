//! Shared output helpers.

/// Floats in exported files carry 17 significant digits, enough to
/// round-trip any `f64`.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456789.12345679, -2.5] {
            let s = float17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(float17(0.5), "5.0000000000000000e-1");
    }
}
