//! The selective polynomial `f_n^(m)`: one at `x = m`, zero at every other
//! integer in `[1, n−1]`. Evaluated at the total number operator it picks out
//! the `N = m` sector among the sectors `1..n−1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficients of `f_n^(m)(x)`, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectivePolynomial {
    n: usize,
    m: usize,
    coeffs: Vec<BigRational>,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl SelectivePolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().expect("finite rational"))
            .collect()
    }

    /// Exact value at an integer point (Horner).
    pub fn eval(&self, x: i64) -> BigRational {
        let x = int(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs_f64()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

/// Expands `f_n^(m)(x) = Π_{i ∈ [1, n−1], i ≠ m} (x − i)/(m − i)`.
pub fn selective_function(n: usize, m: usize) -> Result<SelectivePolynomial> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "selective function needs n >= 2, got {n}"
        )));
    }
    if m < 1 || m > n - 1 {
        return Err(Error::Argument(format!("m = {m} outside 1..={}", n - 1)));
    }
    let mut coeffs = vec![BigRational::one()];
    for i in (1..n).filter(|&i| i != m) {
        let denom = int(m as i64 - i as i64);
        let shift = int(-(i as i64)) / &denom;
        let lead = BigRational::one() / &denom;
        // multiply by (x − i)/(m − i) = lead·x + shift
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c * &shift;
            next[k + 1] += c * &lead;
        }
        coeffs = next;
    }
    Ok(SelectivePolynomial { n, m, coeffs })
}

impl fmt::Display for SelectivePolynomial {
    /// Writes the polynomial in `x`, highest power first, e.g. `-x^2 + 4x - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mag_text = if mag.is_integer() {
                mag.to_integer().to_string()
            } else {
                format!("({}/{})", mag.numer(), mag.denom())
            };
            match power {
                0 => write!(f, "{mag_text}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_text}")?;
                    }
                    write!(f, "x")?;
                    if power > 1 {
                        write!(f, "^{power}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &SelectivePolynomial) -> Vec<i64> {
        p.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.to_integer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn three_mode_selectors() {
        assert_eq!(ints(&selective_function(3, 1).unwrap()), vec![2, -1]);
        assert_eq!(ints(&selective_function(3, 2).unwrap()), vec![-1, 1]);
    }

    #[test]
    fn four_mode_pair_selector() {
        let p = selective_function(4, 2).unwrap();
        assert_eq!(ints(&p), vec![-3, 4, -1]);
        assert_eq!(p.to_string(), "-x^2 + 4x - 3");
    }

    #[test]
    fn display_forms() {
        assert_eq!(selective_function(3, 1).unwrap().to_string(), "-x + 2");
        assert_eq!(selective_function(3, 2).unwrap().to_string(), "x - 1");
        assert_eq!(selective_function(2, 1).unwrap().to_string(), "1");
        // f_4^(1) = (x−2)(x−3)/2
        assert_eq!(
            selective_function(4, 1).unwrap().to_string(),
            "(1/2)x^2 - (5/2)x + 3"
        );
    }

    #[test]
    fn selects_exactly_one_integer() {
        for n in 2..=12 {
            for m in 1..n {
                let p = selective_function(n, m).unwrap();
                assert_eq!(p.degree(), n - 2);
                for k in 1..n {
                    let want = if k == m { int(1) } else { int(0) };
                    assert_eq!(p.eval(k as i64), want, "n={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(selective_function(1, 1).is_err());
        assert!(selective_function(4, 0).is_err());
        assert!(selective_function(4, 4).is_err());
    }
}
