use crate::error::{Error, Result};
use crate::numkernel::norm2;

fn same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} entries", a.len(), b.len())));
    }
    Ok(())
}

/// Signal-to-noise ratio in dB, `10·log10(‖x − x̄‖² / ‖η‖²)`, where `x̄` is
/// the mean over all entries of `x`.
pub fn snr(x: &[f64], eta: &[f64]) -> Result<f64> {
    same_len(x, eta)?;
    let noise = norm2(eta);
    if noise == 0.0 {
        return Err(Error::ZeroNorm("noise"));
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let signal: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(10.0 * (signal / (noise * noise)).log10())
}

/// `‖x − x_true‖ / ‖x_true‖`.
pub fn relative_error(x: &[f64], x_true: &[f64]) -> Result<f64> {
    same_len(x, x_true)?;
    let denom = norm2(x_true);
    if denom == 0.0 {
        return Err(Error::ZeroNorm("reference"));
    }
    let diff: Vec<f64> = x.iter().zip(x_true).map(|(a, b)| a - b).collect();
    Ok(norm2(&diff) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_by_hand() {
        // signal deviations ±1 → 4; noise 0.1 each → 0.04; ratio 100
        let v = snr(&[1.0, -1.0, 1.0, -1.0], &[0.1, 0.1, -0.1, 0.1]).unwrap();
        assert!((v - 20.0).abs() < 1e-12);
        assert_eq!(snr(&[1.0], &[0.0]), Err(Error::ZeroNorm("noise")));
    }

    #[test]
    fn relative_error_by_hand() {
        assert_eq!(relative_error(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 0.0);
        assert!((relative_error(&[3.0, 5.0], &[3.0, 4.0]).unwrap() - 0.2).abs() < 1e-15);
        assert!(relative_error(&[1.0], &[0.0]).is_err());
        assert!(relative_error(&[1.0], &[1.0, 2.0]).is_err());
    }
}
