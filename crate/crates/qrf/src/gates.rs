//! Builtin gate matrices and the name parser used by circuit files and the
//! command line (`H`, `X`, `Z`, `S`, `RX(θ)`, `CNOT`, `SWAP`, ...).

use num_complex::Complex64;

use crate::error::{QrfError, Result};
use crate::linalg::{C64, CMatrix};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, 0.0),
    ])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    ])
}

pub fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[
        C64::new(s, 0.0),
        C64::new(s, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
    ])
}

pub fn phase_s() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 1.0),
    ])
}

pub fn phase_t() -> CMatrix {
    let p = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        p,
    ])
}

/// `exp(-i θ X / 2)`.
pub fn rx(theta: f64) -> CMatrix {
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = C64::new(0.0, -(theta / 2.0).sin());
    CMatrix::from_row_slice(2, 2, &[c, s, s, c])
}

/// `exp(-i θ Z / 2)`.
pub fn rz(theta: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        Complex64::from_polar(1.0, -theta / 2.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        Complex64::from_polar(1.0, theta / 2.0),
    ])
}

/// CNOT with the first support label as control.
pub fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m[(1, 1)] = C64::new(1.0, 0.0);
    m[(2, 3)] = C64::new(1.0, 0.0);
    m[(3, 2)] = C64::new(1.0, 0.0);
    m
}

pub fn cz() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(3, 3)] = C64::new(-1.0, 0.0);
    m
}

pub fn swap() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 3)] = C64::new(1.0, 0.0);
    m
}

/// Parse an angle: a float literal or `pi`, `-pi`, `pi/N`, `N*pi/M`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || QrfError::BadGateSpec(text.to_string(), "cannot parse angle".to_string());
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num_val = if num.eq_ignore_ascii_case("pi") {
        std::f64::consts::PI
    } else if let Some(mult) = num.to_ascii_lowercase().strip_suffix("*pi") {
        mult.parse::<f64>().map_err(|_| bad())? * std::f64::consts::PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let den_val = match den {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None => 1.0,
    };
    if den_val == 0.0 {
        return Err(bad());
    }
    Ok(sign * num_val / den_val)
}

/// Look up a builtin gate by name. Parameterized names carry the angle in
/// parentheses, e.g. `RX(0.7)` or `RX(pi/2)`.
pub fn builtin(name: &str) -> Result<CMatrix> {
    let t = name.trim();
    let upper = t.to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix("RX(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| QrfError::BadGateSpec(name.into(), "missing `)`".into()))?;
        return Ok(rx(parse_angle(inner)?));
    }
    if let Some(rest) = upper.strip_prefix("RZ(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| QrfError::BadGateSpec(name.into(), "missing `)`".into()))?;
        return Ok(rz(parse_angle(inner)?));
    }
    match upper.as_str() {
        "I" | "ID" => Ok(CMatrix::identity(2, 2)),
        "X" => Ok(pauli_x()),
        "Y" => Ok(pauli_y()),
        "Z" => Ok(pauli_z()),
        "H" => Ok(hadamard()),
        "S" => Ok(phase_s()),
        "T" => Ok(phase_t()),
        "CNOT" | "CX" => Ok(cnot()),
        "CZ" => Ok(cz()),
        "SWAP" => Ok(swap()),
        _ => Err(QrfError::BadGateSpec(
            name.into(),
            "unknown builtin gate".into(),
        )),
    }
}
