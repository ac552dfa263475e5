//! Number formatting for byte-stable CSV output.

/// `%g`-style rendering with six significant digits. `None` and NaN become
/// `NA`, infinities `inf` / `-inf`.
pub fn sig6(x: Option<f64>) -> String {
    match x {
        None => "NA".to_string(),
        Some(v) if v.is_nan() => "NA".to_string(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.to_string(),
        Some(v) if v == 0.0 => "0".to_string(),
        Some(v) => {
            let sci = format!("{v:.5e}");
            let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
            let exp: i32 = exp.parse().expect("integer exponent");
            if (-4..6).contains(&exp) {
                trim_zeros(format!("{v:.*}", (5 - exp) as usize))
            } else {
                let sign = if exp < 0 { '-' } else { '+' };
                format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
            }
        }
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
