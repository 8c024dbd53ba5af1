use num_complex::Complex64;

use crate::error::{Error, Result};

/// Denominators below this magnitude are treated as poles.
const POLE_TOLERANCE: f64 = 1e-14;

/// R-transform of one rectangular Gaussian block inside a larger Gram matrix.
///
/// `Plain`: a block with aspect ratio `beta` and per-entry variance `q`
/// filling the whole matrix, `R(w) = q / (1 - beta q w)`.
///
/// `ZeroPadded`: the same block occupying a fraction `k` of the columns, the
/// rest zero. Its R-transform is the root of a quadratic that tends to `k q`
/// at the origin; with `k = 1` it coincides with `Plain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RTransformTerm {
    Plain { beta: f64, q: f64 },
    ZeroPadded { k: f64, beta: f64, q: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {v}")))
    }
}

impl RTransformTerm {
    pub fn plain(beta: f64, q: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("q", q)?;
        Ok(Self::Plain { beta, q })
    }

    pub fn zero_padded(k: f64, beta: f64, q: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("q", q)?;
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::InvalidParams(format!("k must lie in (0, 1], got {k}")));
        }
        Ok(Self::ZeroPadded { k, beta, q })
    }

    /// `(k, beta, q)` with `k = 1` for `Plain`.
    pub fn parts(&self) -> (f64, f64, f64) {
        match *self {
            RTransformTerm::Plain { beta, q } => (1.0, beta, q),
            RTransformTerm::ZeroPadded { k, beta, q } => (k, beta, q),
        }
    }

    /// First moment of the term's spectral law.
    pub fn mean(&self) -> f64 {
        let (k, _, q) = self.parts();
        k * q
    }

    /// Largest point of the term's support.
    pub fn support_bound(&self) -> f64 {
        let (_, beta, q) = self.parts();
        q * (1.0 + beta.sqrt()).powi(2)
    }

    /// Mass the term's law puts at zero.
    pub fn zero_weight(&self) -> f64 {
        let (k, beta, _) = self.parts();
        (1.0 - k) + k * (1.0 - 1.0 / beta).max(0.0)
    }

    /// Quadratic `A R^2 + B R + C` whose physical root is `R(w)`.
    pub fn quadratic(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let (k, beta, q) = self.parts();
        let a = w * (w * (beta * q) - k);
        let b = w * (q * k * (beta + 1.0)) - k;
        let c = Complex64::new(q * k * k, 0.0);
        (a, b, c)
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        match *self {
            RTransformTerm::Plain { beta, q } => {
                let den = 1.0 - w * (beta * q);
                if den.norm() < POLE_TOLERANCE {
                    return Err(Error::PoleEncountered { re: w.re, im: w.im });
                }
                Ok(q / den)
            }
            RTransformTerm::ZeroPadded { k, q, .. } => {
                if w == Complex64::new(0.0, 0.0) {
                    return Ok(Complex64::new(k * q, 0.0));
                }
                let (a, b, c) = self.quadratic(w);
                let mut root = (b * b - 4.0 * a * c).sqrt();
                // Branch that continues to k q at the origin.
                if (root * (-b).conj()).re < 0.0 {
                    root = -root;
                }
                let den = -b + root;
                if den.norm() < POLE_TOLERANCE {
                    return Err(Error::PoleEncountered { re: w.re, im: w.im });
                }
                Ok(2.0 * c / den)
            }
        }
    }
}

/// Free additive sum of independent terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RTransformSum {
    terms: Vec<RTransformTerm>,
}

impl RTransformSum {
    pub fn new(terms: Vec<RTransformTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Empty("R-transform sum has no terms"));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[RTransformTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, t| Ok(acc + t.eval(w)?))
    }

    pub fn mean(&self) -> f64 {
        self.terms.iter().map(RTransformTerm::mean).sum()
    }

    /// Upper end of the sum's support: supports add under free convolution
    /// of positive laws, so the bound is the sum of the term bounds.
    pub fn support_bound(&self) -> f64 {
        self.terms.iter().map(RTransformTerm::support_bound).sum()
    }

    /// Atom at zero of the free sum: the fractions of the space left empty by
    /// the terms, minus what must overlap.
    pub fn zero_mass(&self) -> f64 {
        let m = self.terms.len() as f64;
        let total: f64 = self.terms.iter().map(RTransformTerm::zero_weight).sum();
        (total - (m - 1.0)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_padding_collapses_to_plain() {
        let plain = RTransformTerm::plain(2.5, 0.8).unwrap();
        let padded = RTransformTerm::zero_padded(1.0, 2.5, 0.8).unwrap();
        for &(re, im) in &[(-0.3, 0.1), (0.05, 0.02), (-2.0, 0.5), (0.1, -0.3)] {
            let w = Complex64::new(re, im);
            let d = (plain.eval(w).unwrap() - padded.eval(w).unwrap()).norm();
            assert!(d < 1e-10, "w={w}: {d}");
        }
    }

    #[test]
    fn origin_value_is_the_mean() {
        let t = RTransformTerm::zero_padded(0.3, 4.0, 2.0).unwrap();
        assert_eq!(t.eval(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.6, 0.0));
        let near = t.eval(Complex64::new(1e-9, 1e-9)).unwrap();
        assert!((near - 0.6).norm() < 1e-7);
    }

    #[test]
    fn plain_pole_is_reported() {
        let t = RTransformTerm::plain(2.0, 0.5).unwrap();
        let err = t.eval(Complex64::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PoleEncountered { .. }));
    }

    #[test]
    fn invalid_terms_rejected() {
        assert!(RTransformTerm::zero_padded(0.0, 1.0, 1.0).is_err());
        assert!(RTransformTerm::zero_padded(1.5, 1.0, 1.0).is_err());
        assert!(RTransformTerm::plain(-1.0, 1.0).is_err());
        assert!(RTransformSum::new(vec![]).is_err());
    }

    #[test]
    fn ia_like_sum_has_expected_atom() {
        let (m, k) = (4.0, 5.0);
        let d = m * k + m - k;
        let terms = vec![
            RTransformTerm::zero_padded((k + 2.0) / d, k / (k + 1.0) + k, 1.0).unwrap(),
            RTransformTerm::zero_padded((m - 1.0) * (k + 1.0) / d, (m - 1.0) * k / (m - 2.0), 1.0)
                .unwrap(),
            RTransformTerm::zero_padded((k + 1.0) / d, k + 1.0, 1.0).unwrap(),
        ];
        let sum = RTransformSum::new(terms).unwrap();
        assert!((sum.zero_mass() - (1.0 - 23.0 / 95.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn padded_root_satisfies_its_quadratic(
            k in 0.05f64..1.0, beta in 0.1f64..8.0, q in 0.1f64..4.0,
            re in -0.2f64..0.2, im in 0.001f64..0.2,
        ) {
            let t = RTransformTerm::zero_padded(k, beta, q).unwrap();
            let w = Complex64::new(re, im) / (beta * q);
            let r = t.eval(w).unwrap();
            let (a, b, c) = t.quadratic(w);
            let res = (a * r * r + b * r + c).norm();
            prop_assert!(res < 1e-9 * (1.0 + c.norm()));
        }

        #[test]
        fn collapse_holds_everywhere(
            beta in 0.1f64..8.0, q in 0.1f64..4.0,
            re in -0.45f64..0.45, im in 0.01f64..0.45,
        ) {
            let w = Complex64::new(re, im) / ((beta + 1.0) * q);
            let p = RTransformTerm::plain(beta, q).unwrap().eval(w).unwrap();
            let z = RTransformTerm::zero_padded(1.0, beta, q).unwrap().eval(w).unwrap();
            prop_assert!((p - z).norm() < 1e-10 * (1.0 + p.norm()));
        }

        #[test]
        fn zero_mass_is_a_probability(
            k in 0.01f64..1.0, beta in 0.1f64..8.0, k2 in 0.01f64..1.0, beta2 in 0.1f64..8.0,
        ) {
            let sum = RTransformSum::new(vec![
                RTransformTerm::zero_padded(k, beta, 1.0).unwrap(),
                RTransformTerm::zero_padded(k2, beta2, 2.0).unwrap(),
            ]).unwrap();
            let z = sum.zero_mass();
            prop_assert!((0.0..=1.0).contains(&z));
        }
    }
}
