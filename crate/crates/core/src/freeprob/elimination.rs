use nalgebra::Schur;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

use super::rtransform::{RTransformSum, RTransformTerm};

type Poly = Vec<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![c(0.0); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn eval(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(c(0.0), |acc, a| acc * x + a)
}

fn derivative(p: &[Complex64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect()
}

/// Polynomial in `s` (ascending coefficients) whose roots contain the
/// Stieltjes transform of `sum` at `z`.
///
/// Supported for sums with at most one zero-padded term; the plain terms are
/// rational in `s` and are cleared by multiplication.
pub fn cleared_polynomial(sum: &RTransformSum, z: Complex64) -> Result<Poly> {
    let mut padded = None;
    let mut plain = Vec::new();
    for term in sum.terms() {
        match *term {
            RTransformTerm::Plain { beta, q } => plain.push((beta, q)),
            RTransformTerm::ZeroPadded { k, .. } if k == 1.0 => {
                let (_, beta, q) = term.parts();
                plain.push((beta, q));
            }
            RTransformTerm::ZeroPadded { .. } => {
                if padded.replace(*term).is_some() {
                    return Err(Error::InvalidParams(
                        "elimination handles at most one zero-padded term".into(),
                    ));
                }
            }
        }
    }

    // z + 1/s - sum_j q_j / (1 + beta_j q_j s) = num / den.
    let mut num: Poly = vec![c(1.0), z];
    let mut den: Poly = vec![c(0.0), c(1.0)];
    for &(beta, q) in &plain {
        let factor = [c(1.0), c(beta * q)];
        num = add(&mul(&num, &factor), &mul(&den, &[c(-q)]));
        den = mul(&den, &factor);
    }

    let poly = match padded {
        None => num,
        Some(term) => {
            let (k, beta, q) = term.parts();
            // Coefficients of the term's quadratic at w = -s.
            let a = [c(0.0), c(k), c(beta * q)];
            let b = [c(-k), c(-q * k * (beta + 1.0))];
            let cc = [c(q * k * k)];
            let t2 = mul(&mul(&a, &num), &num);
            let t1 = mul(&mul(&b, &num), &den);
            let t0 = mul(&mul(&cc, &den), &den);
            add(&add(&t2, &t1), &t0)
        }
    };
    Ok(trim(poly))
}

/// Drops negligible leading coefficients and factors out roots at zero,
/// which clearing `1/s` introduces and which are never Stieltjes values.
fn trim(mut p: Poly) -> Poly {
    let scale = p.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let tiny = |a: &Complex64| a.norm() <= 1e-13 * scale;
    while p.len() > 1 && p.last().is_some_and(tiny) {
        p.pop();
    }
    let zeros = p.iter().take_while(|a| tiny(a)).count().min(p.len() - 1);
    p.drain(..zeros);
    p
}

/// All roots of an ascending-coefficient polynomial via the eigenvalues of
/// its companion matrix, each refined by a few Newton steps.
pub fn polynomial_roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trim(p.to_vec());
    let degree = p.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = p[degree];
    let mut companion = CMatrix::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = c(1.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -p[i] / lead;
    }
    let (_, t) = Schur::new(companion).unpack();
    let dp = derivative(&p);
    t.diagonal()
        .iter()
        .map(|&r0| {
            let mut r = r0;
            for _ in 0..3 {
                let d = eval(&dp, r);
                if d.norm() == 0.0 {
                    break;
                }
                let next = r - eval(&p, r) / d;
                if !next.is_finite() {
                    break;
                }
                r = next;
            }
            r
        })
        .collect()
}

/// Stieltjes transform at `z` picked among the roots of the cleared
/// polynomial: the unique root in the upper half plane whose subordination
/// points all lie above `z`.
pub fn stieltjes_by_elimination(sum: &RTransformSum, z: Complex64) -> Result<Complex64> {
    let poly = cleared_polynomial(sum, z)?;
    let floor = z.im * (1.0 - 1e-6);
    let physical = |s: Complex64| -> bool {
        if s.im <= 0.0 {
            return false;
        }
        // The padded term, if any, takes whatever the plain terms leave.
        let mut padded_r = z + 1.0 / s;
        let mut padded = None;
        for term in sum.terms() {
            let (k, _, _) = term.parts();
            if k != 1.0 {
                padded = Some(term);
                continue;
            }
            match term.eval(-s) {
                Ok(r) if (r - 1.0 / s).im >= floor => padded_r -= r,
                _ => return false,
            }
        }
        match padded {
            None => true,
            // Both branches of the padded quadratic survive clearing; keep
            // the one continuing from the origin.
            Some(term) => match term.eval(-s) {
                Ok(r) => {
                    (padded_r - r).norm() <= 1e-6 * (1.0 + r.norm())
                        && (padded_r - 1.0 / s).im >= floor
                }
                Err(_) => false,
            },
        }
    };
    let candidates: Vec<Complex64> = polynomial_roots(&poly)
        .into_iter()
        .filter(|&s| physical(s))
        .collect();
    match candidates.as_slice() {
        [s] => Ok(*s),
        [] => Err(Error::NoPhysicalRoot { x: z.re }),
        _ => Err(Error::SolverDiverged { x: z.re }),
    }
}
