#![allow(dead_code)]

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn qframe_bin() -> &'static str {
    env!("CARGO_BIN_EXE_qframe")
}
