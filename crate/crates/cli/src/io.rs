//! Parsing and serialization helpers: complex scalars, grid strings, and
//! the JSON wire formats for matrices, symbol parameters, and
//! distribution expressions.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use lame_spectra::bh::BhParams;
use lame_spectra::distribution::DistributionExpr;
use lame_spectra::elliptic::EllipticParams;
use lame_spectra::matrix::CMatrix;

use crate::CliError;

/// "re" or "re,im" -> complex.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::parse(format!("not a number: {t:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(CliError::parse(format!("expected re or re,im, got {text:?}"))),
    }
}

pub fn parse_real(text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::parse(format!("not a number: {text:?}")))
}

pub fn parse_u32(text: &str) -> Result<u32, CliError> {
    text.trim()
        .parse::<u32>()
        .map_err(|_| CliError::parse(format!("not a nonnegative integer: {text:?}")))
}

/// Half-integer spins accept "3/2" as well as "1.5".
pub fn parse_half_integer(text: &str) -> Result<f64, CliError> {
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_real(num)?;
        let d = parse_real(den)?;
        if d == 0.0 {
            return Err(CliError::parse("zero denominator".into()));
        }
        Ok(n / d)
    } else {
        parse_real(text)
    }
}

/// "start:stop:step" -> inclusive grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(CliError::parse(format!(
            "expected start:stop:step, got {text:?}"
        )));
    };
    let start = parse_real(start)?;
    let stop = parse_real(stop)?;
    let step = parse_real(step)?;
    if step <= 0.0 || stop < start {
        return Err(CliError::parse("grid needs step > 0 and stop >= start".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}

/// "1e-2,1e-3,1e-4" -> descending ladder.
pub fn parse_ladder(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(parse_real).collect()
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<Complex64, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CliError::parse("complex value must be [re, im]".into()))?;
    if arr.len() != 2 {
        return Err(CliError::parse("complex value must be [re, im]".into()));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| CliError::parse("complex parts must be numbers".into()))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| CliError::parse("complex parts must be numbers".into()))?;
    Ok(Complex64::new(re, im))
}

/// Matrix wire format: {"n": int, "re": [[...]], "im": [[...]]}.
pub fn matrix_json(m: &CMatrix) -> Value {
    let n = m.dim();
    let re: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
        .collect();
    let im: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
        .collect();
    json!({"n": n, "re": re, "im": im})
}

pub fn matrix_from_json(v: &Value) -> Result<CMatrix, CliError> {
    let n = v["n"]
        .as_u64()
        .ok_or_else(|| CliError::parse("matrix needs integer field n".into()))? as usize;
    let grab = |field: &str| -> Result<Vec<Vec<f64>>, CliError> {
        let rows = v[field]
            .as_array()
            .ok_or_else(|| CliError::parse(format!("matrix needs {field} rows")))?;
        if rows.len() != n {
            return Err(CliError::parse(format!("{field} must have {n} rows")));
        }
        rows.iter()
            .map(|row| {
                let row = row
                    .as_array()
                    .ok_or_else(|| CliError::parse("matrix rows must be arrays".into()))?;
                if row.len() != n {
                    return Err(CliError::parse(format!("{field} rows must have {n} entries")));
                }
                row.iter()
                    .map(|x| {
                        x.as_f64()
                            .ok_or_else(|| CliError::parse("matrix entries must be numbers".into()))
                    })
                    .collect()
            })
            .collect()
    };
    let re = grab("re")?;
    let im = grab("im")?;
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(re[i][j], im[i][j]);
        }
    }
    Ok(m)
}

/// BhParams wire format:
/// {"s": int, "sigma": [a, b, c], "g2": [re, im], "g3": [re, im], "A": [re, im]}.
pub fn bh_params_json(p: &BhParams) -> Value {
    json!({
        "s": p.s,
        "sigma": [p.sigma[0], p.sigma[1], p.sigma[2]],
        "g2": complex_json(p.elliptic.g2),
        "g3": complex_json(p.elliptic.g3),
        "A": complex_json(p.amplitude),
    })
}

pub fn bh_params_from_json(v: &Value) -> Result<BhParams, CliError> {
    let s = v["s"]
        .as_u64()
        .ok_or_else(|| CliError::parse("params need integer s".into()))? as u32;
    let sigma_arr = v["sigma"]
        .as_array()
        .ok_or_else(|| CliError::parse("params need sigma array".into()))?;
    if sigma_arr.len() != 3 {
        return Err(CliError::parse("sigma must have three entries".into()));
    }
    let mut sigma = [0u32; 3];
    for (slot, x) in sigma.iter_mut().zip(sigma_arr) {
        *slot = x
            .as_u64()
            .ok_or_else(|| CliError::parse("sigma entries must be integers".into()))?
            as u32;
    }
    let g2 = complex_from_json(&v["g2"])?;
    let g3 = complex_from_json(&v["g3"])?;
    let amplitude = complex_from_json(&v["A"])?;
    let elliptic = EllipticParams::from_invariants(g2, g3).map_err(CliError::domain)?;
    BhParams::new(s, sigma, elliptic, amplitude).map_err(CliError::domain)
}

/// Distribution wire format:
/// {"delta": [[w_re, w_im, c_re, c_im], ...], "delta_prime": [...],
///  "heaviside": [c_re, c_im], "infinite": bool}.
pub fn distribution_json(d: &DistributionExpr, infinite: bool) -> Value {
    let pack = |terms: &[(Complex64, Complex64)]| -> Value {
        Value::Array(
            terms
                .iter()
                .map(|(w, c)| json!([w.re, w.im, c.re, c.im]))
                .collect(),
        )
    };
    json!({
        "delta": pack(&d.delta_terms),
        "delta_prime": pack(&d.delta_prime_terms),
        "heaviside": [d.heaviside_coeff.re, d.heaviside_coeff.im],
        "infinite": infinite,
    })
}

pub fn distribution_from_json(v: &Value) -> Result<(DistributionExpr, bool), CliError> {
    let unpack = |field: &str| -> Result<Vec<(Complex64, Complex64)>, CliError> {
        v[field]
            .as_array()
            .ok_or_else(|| CliError::parse(format!("distribution needs {field} array")))?
            .iter()
            .map(|row| {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == 4)
                    .ok_or_else(|| CliError::parse("terms must be [w_re,w_im,c_re,c_im]".into()))?;
                let nums: Result<Vec<f64>, CliError> = row
                    .iter()
                    .map(|x| {
                        x.as_f64()
                            .ok_or_else(|| CliError::parse("term entries must be numbers".into()))
                    })
                    .collect();
                let nums = nums?;
                Ok((
                    Complex64::new(nums[0], nums[1]),
                    Complex64::new(nums[2], nums[3]),
                ))
            })
            .collect()
    };
    let heaviside = complex_from_json(&v["heaviside"])?;
    let infinite = v["infinite"]
        .as_bool()
        .ok_or_else(|| CliError::parse("distribution needs boolean infinite".into()))?;
    Ok((
        DistributionExpr {
            delta_terms: unpack("delta")?,
            delta_prime_terms: unpack("delta_prime")?,
            heaviside_coeff: heaviside,
            smooth: None,
        },
        infinite,
    ))
}

/// Deterministic float formatting for CSV cells (shortest round-trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Sorted params echo for headers.
pub fn params_echo_json(params: &std::collections::BTreeMap<String, String>) -> Value {
    let mut map = Map::new();
    for (k, v) in params {
        map.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(map)
}
