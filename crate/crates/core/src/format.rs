//! Number formatting shared by the text formats.

/// Formats `x` with nine significant digits, `%.9g` style.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(45.595), "45.595");
        assert_eq!(sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(sig9(-2.0 / 3.0 * 1e-7), "-6.66666667e-8");
        assert_eq!(sig9(9.9999999999), "10");
        assert_eq!(sig9(1.23456789e12), "1.23456789e12");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(91.19), "91.19");
    }

    #[test]
    fn reparse_precision() {
        for &x in &[0.1349768, 5.27965, 45.5951234567, -0.000123456789123] {
            let back: f64 = sig9(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 5e-9);
        }
    }
}
