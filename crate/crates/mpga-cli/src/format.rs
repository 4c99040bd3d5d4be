//! Stable decimal formatting for every exported file: nine significant
//! digits, '.' separator, LF line endings.

/// Format a float with nine significant digits. NaN (undefined graph rows)
/// prints as "nan".
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let digits_after_point = 8 - exponent;
    if (-3..=11).contains(&digits_after_point) {
        format!("{:.*}", digits_after_point.max(0) as usize, x)
    } else {
        format!("{:.8e}", x)
    }
}
