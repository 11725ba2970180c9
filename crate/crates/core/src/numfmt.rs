//! Fixed-precision decimal output shared by the JSON and CSV writers.

/// Formats `v` with 17 significant digits: plain decimal notation for
/// exponents in `[-5, 16]`, scientific notation otherwise. Non-finite values
/// render as `NaN`, `inf` or `-inf`.
pub fn sig17(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..=16).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}
