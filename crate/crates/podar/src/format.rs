/// Six significant digits: fixed-point for magnitudes in `[1e-4, 1e15)`,
/// scientific outside.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    if !(1e-4..1e15).contains(&x.abs()) {
        return format!("{x:.5e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new digit (9.999995 -> 10.00000)
    let digits = s
        .trim_start_matches('-')
        .replace('.', "")
        .trim_start_matches('0')
        .len();
    if digits > 6 && decimals > 0 {
        let decimals = decimals - 1;
        format!("{x:.decimals$}")
    } else {
        s
    }
}
