//! Complex polynomials in one variable.

use num_complex::Complex;

use crate::scalar::{Cplx, Real};

/// Polynomial with ascending coefficients: `c[0] + c[1] z + ... + c[n] z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Cplx<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Trailing zero coefficients are dropped; an empty list is the zero polynomial.
    pub fn new(mut coeffs: Vec<Cplx<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(T::zero(), T::zero()));
        }
        Self { coeffs }
    }

    pub fn constant(c: Cplx<T>) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn zero() -> Self {
        Self::constant(Complex::new(T::zero(), T::zero()))
    }

    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm_sqr() == T::zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, z: Cplx<T>) -> Cplx<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_count(k))
                .collect(),
        )
    }

    /// Coefficient-wise conjugate: `conj(p(conj z))`.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&zero) + *other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// All roots by Aberth-Ehrlich iteration followed by Newton polishing.
    /// Returns an empty list for constants.
    pub fn roots(&self) -> Vec<Cplx<T>> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[n];
        let monic = self.scale(Complex::new(T::one(), T::zero()) / lead);
        let dp = monic.derivative();
        // Cauchy bound for the initial circle
        let bound = T::one() + monic.coeffs[..n].iter().map(|c| c.norm()).fold(T::zero(), T::max);
        let radius = bound.min(T::lit(1e3)) * T::lit(0.5);
        let tau = T::lit(std::f64::consts::TAU);
        let mut z: Vec<Cplx<T>> = (0..n)
            .map(|k| {
                let ang = tau * (T::from_count(k) + T::lit(0.25)) / T::from_count(n) + T::lit(0.4);
                Complex::from_polar(radius, ang)
            })
            .collect();
        let eps = T::epsilon();
        for _ in 0..500 {
            let mut moved = T::zero();
            for i in 0..n {
                let p = monic.eval(z[i]);
                let d = dp.eval(z[i]);
                if p.norm() == T::zero() {
                    continue;
                }
                let ratio = p / d;
                let mut s = Complex::new(T::zero(), T::zero());
                for j in 0..n {
                    if j != i {
                        s = s + Complex::new(T::one(), T::zero()) / (z[i] - z[j]);
                    }
                }
                let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] = z[i] - step;
                    moved = moved.max(step.norm() / (T::one() + z[i].norm()));
                }
            }
            if moved < eps * T::lit(4.0) {
                break;
            }
        }
        for zi in &mut z {
            for _ in 0..3 {
                let d = dp.eval(*zi);
                if d.norm() == T::zero() {
                    break;
                }
                let step = monic.eval(*zi) / d;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                *zi = *zi - step;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn eval_and_derivative() {
        let p = Polynomial::new(vec![c64::<f64>(2.0, 0.0), c64(1.0, 0.0)]);
        assert_eq!(p.eval(c64(0.0, 1.0)), c64(2.0, 1.0));
        assert_eq!(p.derivative().coeffs(), &[c64(1.0, 0.0)]);
        let sq = p.mul(&p);
        assert_eq!(sq.coeffs(), &[c64(4.0, 0.0), c64(4.0, 0.0), c64(1.0, 0.0)]);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![c64::<f64>(1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(p.degree(), 0);
        assert!(p.roots().is_empty());
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (z - 1)(z + 2)(z - i)
        let f = Polynomial::new(vec![c64::<f64>(-1.0, 0.0), c64(1.0, 0.0)])
            .mul(&Polynomial::new(vec![c64(2.0, 0.0), c64(1.0, 0.0)]))
            .mul(&Polynomial::new(vec![c64(0.0, -1.0), c64(1.0, 0.0)]));
        let mut r = f.roots();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        let expect = [c64(-2.0, 0.0), c64(0.0, 1.0), c64(1.0, 0.0)];
        for (a, b) in r.iter().zip(expect) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn double_root() {
        let p = Polynomial::new(vec![c64::<f64>(2.0, 0.0), c64(1.0, 0.0)]);
        let r = p.mul(&p).roots();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z - c64(-2.0, 0.0)).norm() < 1e-6);
        }
    }
}
