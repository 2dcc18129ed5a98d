//! Polynomials with multiprecision complex coefficients.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::util::{cabs, czero};

#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex>,
    prec: u32,
}

impl CPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Complex>, prec: u32) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        for c in &mut coeffs {
            c.set_prec(prec);
        }
        CPoly { coeffs, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.imag().is_zero())
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        let mut acc = czero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// `(f(z), f'(z), Σ|a_k||z|^k)`; the last value bounds rounding error.
    pub fn eval_with_derivative(&self, z: &Complex) -> (Complex, Complex, Float) {
        let mut f = czero(self.prec);
        let mut df = czero(self.prec);
        let mut mag = Float::new(self.prec);
        let az = cabs(z);
        for c in self.coeffs.iter().rev() {
            df *= z;
            df += &f;
            f *= z;
            f += c;
            mag *= &az;
            mag += cabs(c);
        }
        (f, df, mag)
    }

    pub fn dilate(&self, c: &Complex) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroDilation);
        }
        let mut pow = Complex::with_val(self.prec, 1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = Complex::with_val(self.prec, a * &pow);
                pow *= c;
                v
            })
            .collect();
        Ok(Self::new(coeffs, self.prec))
    }

    pub fn translate(&self, c: &Complex) -> Self {
        let mut a = self.coeffs.clone();
        if a.len() >= 2 {
            let n = a.len() - 1;
            for i in 0..n {
                for j in (i..n).rev() {
                    let t = Complex::with_val(self.prec, &a[j + 1] * c);
                    a[j] += t;
                }
            }
        }
        Self::new(a, self.prec)
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = czero(self.prec);
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                Complex::with_val(self.prec, a - b)
            })
            .collect();
        CPoly::new(coeffs, self.prec)
    }

    pub fn scale(&self, c: &Complex) -> CPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| Complex::with_val(self.prec, a * c))
            .collect();
        CPoly::new(coeffs, self.prec)
    }

    pub fn sup_norm(&self) -> Float {
        let mut best = Float::new(self.prec);
        for c in &self.coeffs {
            let a = cabs(c);
            if a > best {
                best = a;
            }
        }
        best
    }
}
