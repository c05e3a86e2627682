//! Round-trip-exact float formatting shared by CSV reports and model files.

/// Format with 17 significant digits; parsing the result back yields the
/// exact same f64 bit pattern.
pub fn f64_17(x: f64) -> String {
    format!("{x:.16e}")
}
