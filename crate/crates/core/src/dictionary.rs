//! Candidate-function dictionaries built from sampled states.
//!
//! Columns come in a fixed order: the constant, homogeneous monomials of
//! degree `1..=poly_order`, then `sin` and `cos` applied to the monomials of
//! degree `1..=sin_order` and `1..=cos_order`. Inside each degree the
//! monomials are graded lexicographic with `u1` most significant, so for
//! three states and degree two the order is `u1^2, u1*u2, u1*u3, u2^2,
//! u2*u3, u3^2`.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionarySpec {
    pub poly_order: u32,
    #[serde(default)]
    pub sin_order: u32,
    #[serde(default)]
    pub cos_order: u32,
    #[serde(default = "default_true")]
    pub include_constant: bool,
}

fn default_true() -> bool {
    true
}

impl DictionarySpec {
    pub fn polynomial(order: u32) -> Self {
        Self {
            poly_order: order,
            sin_order: 0,
            cos_order: 0,
            include_constant: true,
        }
    }

    pub fn with_trig(poly_order: u32, sin_order: u32, cos_order: u32) -> Self {
        Self {
            poly_order,
            sin_order,
            cos_order,
            include_constant: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.include_constant && self.poly_order == 0 && self.sin_order == 0 && self.cos_order == 0 {
            return Err(Error::InvalidParameter("dictionary would have no columns".into()));
        }
        Ok(())
    }

    /// Number of columns produced for `dim` state variables.
    pub fn column_count(&self, dim: usize) -> usize {
        let block = |order: u32| (1..=order).map(|k| binomial(dim + k as usize - 1, k as usize)).sum::<usize>();
        usize::from(self.include_constant) + block(self.poly_order) + block(self.sin_order) + block(self.cos_order)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    Constant,
    Monomial,
    Sin,
    Cos,
}

/// One dictionary column: a monomial, optionally wrapped in `sin`/`cos`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermLabel {
    pub kind: TermKind,
    /// Exponent of each state variable; all zero for the constant.
    pub exponents: Vec<u32>,
}

impl TermLabel {
    pub fn constant(dim: usize) -> Self {
        Self {
            kind: TermKind::Constant,
            exponents: vec![0; dim],
        }
    }

    pub fn monomial(exponents: Vec<u32>) -> Self {
        Self {
            kind: TermKind::Monomial,
            exponents,
        }
    }

    pub fn sin(exponents: Vec<u32>) -> Self {
        Self {
            kind: TermKind::Sin,
            exponents,
        }
    }

    pub fn cos(exponents: Vec<u32>) -> Self {
        Self {
            kind: TermKind::Cos,
            exponents,
        }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn evaluate(&self, state: &[f64]) -> f64 {
        let monomial = || {
            self.exponents
                .iter()
                .zip(state)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, &u)| u.powi(e as i32))
                .product::<f64>()
        };
        match self.kind {
            TermKind::Constant => 1.0,
            TermKind::Monomial => monomial(),
            TermKind::Sin => monomial().sin(),
            TermKind::Cos => monomial().cos(),
        }
    }

    fn monomial_string(&self) -> String {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("u{}", i + 1) } else { format!("u{}^{e}", i + 1) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Constant => write!(f, "1"),
            TermKind::Monomial => write!(f, "{}", self.monomial_string()),
            TermKind::Sin => write!(f, "sin({})", self.monomial_string()),
            TermKind::Cos => write!(f, "cos({})", self.monomial_string()),
        }
    }
}

impl Serialize for TermLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Exponent vectors of all degree-`degree` monomials in `dim` variables,
/// graded lexicographic with the first variable most significant.
pub fn monomial_exponents(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, dim: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, dim, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        fill(&mut Vec::with_capacity(dim), dim, degree, &mut out);
    }
    out
}

/// Labels for every column of the dictionary, in column order.
pub fn dictionary_labels(dim: usize, spec: &DictionarySpec) -> Vec<TermLabel> {
    let mut labels = Vec::with_capacity(spec.column_count(dim));
    if spec.include_constant {
        labels.push(TermLabel::constant(dim));
    }
    let blocks: [(u32, fn(Vec<u32>) -> TermLabel); 3] = [
        (spec.poly_order, TermLabel::monomial),
        (spec.sin_order, TermLabel::sin),
        (spec.cos_order, TermLabel::cos),
    ];
    for (order, make) in blocks {
        for degree in 1..=order {
            labels.extend(monomial_exponents(dim, degree).into_iter().map(make));
        }
    }
    labels
}

fn evaluate_columns(states: &DenseMatrix, labels: &[TermLabel]) -> DenseMatrix {
    DenseMatrix::from_fn(states.rows(), labels.len(), |i, j| labels[j].evaluate(states.row(i)))
}

/// All degree-`degree` monomials of the state columns, one column each.
pub fn monomial_columns(states: &DenseMatrix, degree: u32) -> Result<(DenseMatrix, Vec<TermLabel>)> {
    if degree == 0 {
        return Err(Error::InvalidParameter("monomial degree must be >= 1".into()));
    }
    let labels: Vec<TermLabel> = monomial_exponents(states.cols(), degree)
        .into_iter()
        .map(TermLabel::monomial)
        .collect();
    Ok((evaluate_columns(states, &labels), labels))
}

/// Dictionary matrix (one row per sample) and its column labels.
pub fn assemble_dictionary(states: &DenseMatrix, spec: &DictionarySpec) -> Result<(DenseMatrix, Vec<TermLabel>)> {
    spec.validate()?;
    let labels = dictionary_labels(states.cols(), spec);
    if states.rows() < labels.len() {
        return Err(Error::TooFewSamples {
            samples: states.rows(),
            columns: labels.len(),
        });
    }
    Ok((evaluate_columns(states, &labels), labels))
}

/// Right-hand side `f(state)` of a model whose `i`-th equation has
/// coefficients `coeffs[i]` over `labels`.
pub fn evaluate_model(coeffs: &[Vec<f64>], labels: &[TermLabel], state: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = coeffs.iter().find(|c| c.len() != labels.len()) {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} dictionary terms",
            bad.len(),
            labels.len()
        )));
    }
    if let Some(l) = labels.iter().find(|l| l.exponents.len() != state.len()) {
        return Err(Error::DimensionMismatch(format!(
            "term {l} expects {} state variables, got {}",
            l.exponents.len(),
            state.len()
        )));
    }
    let terms: Vec<f64> = labels.iter().map(|l| l.evaluate(state)).collect();
    Ok(coeffs
        .iter()
        .map(|c| c.iter().zip(&terms).filter(|(&w, _)| w != 0.0).map(|(w, t)| w * t).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(labels: &[TermLabel]) -> Vec<String> {
        labels.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn degree_two_order() {
        let s = DenseMatrix::from_rows(&[vec![2.0, 3.0, 5.0]]).unwrap();
        let (m, labels) = monomial_columns(&s, 2).unwrap();
        assert_eq!(names(&labels), ["u1^2", "u1*u2", "u1*u3", "u2^2", "u2*u3", "u3^2"]);
        assert_eq!(m.row(0), &[4.0, 6.0, 10.0, 9.0, 15.0, 25.0]);
    }

    #[test]
    fn degree_one_and_three_order() {
        let s = DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap();
        assert_eq!(names(&monomial_columns(&s, 1).unwrap().1), ["u1", "u2", "u3"]);
        let cubic = names(&monomial_columns(&s, 3).unwrap().1);
        assert_eq!(&cubic[..4], ["u1^3", "u1^2*u2", "u1^2*u3", "u1*u2^2"]);
        assert_eq!(cubic.last().unwrap(), "u3^3");
        assert!(monomial_columns(&s, 0).is_err());
    }

    #[test]
    fn column_counts_match_enumeration() {
        for (spec, expect) in [
            (DictionarySpec::polynomial(5), 56),
            (DictionarySpec::with_trig(3, 1, 1), 26),
            (DictionarySpec::polynomial(0), 1),
        ] {
            assert_eq!(spec.column_count(3), expect);
            assert_eq!(dictionary_labels(3, &spec).len(), expect);
        }
    }

    #[test]
    fn trig_block_layout() {
        let labels = names(&dictionary_labels(3, &DictionarySpec::with_trig(3, 1, 1)));
        assert_eq!(labels[0], "1");
        assert_eq!(labels[19], "u3^3");
        assert_eq!(&labels[20..], ["sin(u1)", "sin(u2)", "sin(u3)", "cos(u1)", "cos(u2)", "cos(u3)"]);
        let cross = names(&dictionary_labels(3, &DictionarySpec::with_trig(0, 2, 0)));
        assert!(cross.contains(&"sin(u1*u3)".to_string()));
    }

    #[test]
    fn zero_state_row() {
        let s = DenseMatrix::from_rows(&vec![vec![0.0; 3]; 16]).unwrap();
        let (a, _) = assemble_dictionary(&s, &DictionarySpec::with_trig(2, 1, 1)).unwrap();
        let mut expect = vec![1.0];
        expect.extend([0.0; 9]);
        expect.extend([0.0; 3]);
        expect.extend([1.0; 3]);
        assert_eq!(a.row(0), expect.as_slice());
    }

    #[test]
    fn too_few_samples() {
        let s = DenseMatrix::from_rows(&vec![vec![1.0, 2.0, 3.0]; 10]).unwrap();
        assert_eq!(
            assemble_dictionary(&s, &DictionarySpec::polynomial(5)),
            Err(Error::TooFewSamples { samples: 10, columns: 56 })
        );
    }

    #[test]
    fn empty_spec_rejected() {
        let spec = DictionarySpec {
            poly_order: 0,
            sin_order: 0,
            cos_order: 0,
            include_constant: false,
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn lorenz_model_evaluation() {
        let labels = dictionary_labels(3, &DictionarySpec::polynomial(5));
        let idx = |s: &str| labels.iter().position(|l| l.to_string() == s).unwrap();
        let mut c = vec![vec![0.0; labels.len()]; 3];
        c[0][idx("u1")] = -10.0;
        c[0][idx("u2")] = 10.0;
        c[1][idx("u1")] = 28.0;
        c[1][idx("u2")] = -1.0;
        c[1][idx("u1*u3")] = -1.0;
        c[2][idx("u3")] = -8.0 / 3.0;
        c[2][idx("u1*u2")] = 1.0;
        let f = evaluate_model(&c, &labels, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], 26.0);
        assert!((f[2] + 5.0 / 3.0).abs() < 1e-15);

        let zero = vec![vec![0.0; labels.len()]; 3];
        assert_eq!(evaluate_model(&zero, &labels, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
        assert!(evaluate_model(&[vec![1.0]], &labels, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn identified_lorenz_hand_evaluation() {
        let labels = dictionary_labels(3, &DictionarySpec::polynomial(2));
        let idx = |s: &str| labels.iter().position(|l| l.to_string() == s).unwrap();
        let mut c = vec![vec![0.0; labels.len()]; 3];
        c[0][idx("u1")] = -9.8122;
        c[0][idx("u2")] = 9.8163;
        c[1][idx("u1")] = 27.1441;
        c[1][idx("u2")] = -0.8893;
        c[1][idx("u1*u3")] = -0.9733;
        c[2][idx("u3")] = -2.6238;
        c[2][idx("u1*u2")] = 0.9841;
        let f = evaluate_model(&c, &labels, &[1.0, 2.0, 3.0]).unwrap();
        // -9.8122 + 19.6326; 27.1441 - 1.7786 - 2.9199; -7.8714 + 1.9682
        let expect = [9.8204, 22.4456, -5.9032];
        for (v, e) in f.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12, "{v} vs {e}");
        }
    }
}
