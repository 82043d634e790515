use super::{TimeSeries, VectorField};
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Classical fourth-order Runge–Kutta on the grid `0, h, …, t_end`.
///
/// `t_end / h` must be an integer to within `1e-9`. The first row of the
/// result is `u0`.
pub fn rk4_integrate<F: VectorField + ?Sized>(f: &F, u0: &[f64], h: f64, t_end: f64) -> Result<TimeSeries> {
    if u0.len() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state has {} entries, system has dimension {}",
            u0.len(),
            f.dim()
        )));
    }
    if u0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial state".into()));
    }
    if !(h > 0.0) || !h.is_finite() || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("need h > 0 and t_end > 0, got h={h}, t_end={t_end}")));
    }
    let ratio = t_end / h;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * steps.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end={t_end} is not an integer multiple of h={h}"
        )));
    }
    let steps = steps as usize;
    let d = u0.len();

    let axpy = |u: &[f64], k: &[f64], s: f64| -> Vec<f64> { u.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let mut data = Vec::with_capacity((steps + 1) * d);
    data.extend_from_slice(u0);
    let mut u = u0.to_vec();
    for step in 0..steps {
        let k1 = f.rhs(&u);
        let k2 = f.rhs(&axpy(&u, &k1, h / 2.0));
        let k3 = f.rhs(&axpy(&u, &k2, h / 2.0));
        let k4 = f.rhs(&axpy(&u, &k3, h));
        for i in 0..d {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp {
                time: (step + 1) as f64 * h,
            });
        }
        data.extend_from_slice(&u);
    }
    TimeSeries::new(0.0, h, DenseMatrix::new(steps + 1, d, data)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SystemId;

    fn growth() -> (usize, impl Fn(&[f64]) -> Vec<f64>) {
        (1, |u: &[f64]| vec![u[0]])
    }

    #[test]
    fn exponential_growth_closed_form() {
        let ts = rk4_integrate(&growth(), &[1.0], 0.1, 1.0).unwrap();
        assert_eq!(ts.len(), 11);
        // one RK4 step multiplies by the degree-4 Taylor polynomial of e^h
        let g: f64 = 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0 + 0.0001 / 24.0;
        let last = ts.last_state()[0];
        assert!((last - g.powi(10)).abs() < 1e-14);
        let err = (last - 1f64.exp()).abs();
        assert!(err <= 2.1e-6, "{err}");
    }

    #[test]
    fn grid_must_divide_horizon() {
        assert!(rk4_integrate(&growth(), &[1.0], 0.3, 1.0).is_err());
        assert!(rk4_integrate(&growth(), &[1.0], 0.025, 10.0).is_ok());
        assert!(rk4_integrate(&growth(), &[1.0, 2.0], 0.1, 1.0).is_err());
        assert!(rk4_integrate(&growth(), &[1.0], -0.1, 1.0).is_err());
    }

    #[test]
    fn blow_up_is_detected() {
        let quad = (1, |u: &[f64]| vec![u[0] * u[0]]);
        match rk4_integrate(&quad, &[1e100], 1.0, 10.0) {
            Err(Error::BlowUp { time }) => assert!(time > 0.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn lorenz_starts_at_initial_state() {
        let ts = rk4_integrate(&SystemId::Lorenz, &[-5.0, 10.0, 30.0], 0.025, 1.0).unwrap();
        assert_eq!(ts.states().row(0), &[-5.0, 10.0, 30.0]);
        assert_eq!(ts.len(), 41);
    }
}
