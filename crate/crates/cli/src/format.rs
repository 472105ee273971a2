//! Number formatting shared by every CSV writer.

use fractoda::CriticalOrder;

/// 17 significant digits in scientific notation, `.` as decimal separator.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn critical_order(q: &CriticalOrder) -> String {
    match q {
        CriticalOrder::Value(v) => real(*v),
        CriticalOrder::ZeroEigenvalue => "zero".to_string(),
    }
}
