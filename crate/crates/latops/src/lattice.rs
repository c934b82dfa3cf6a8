//! Lattices x(s) and their structure sequences.
//!
//! Two kinds: q-quadratic x(s) = c1 q^{-s} + c2 q^s + c3 (q represented
//! through its exact square root Q, so half-integer powers stay rational)
//! and quadratic x(s) = 4*beta*s^2 + c5 s + c6. The quadratic case with
//! beta = 0 and c5 != 0 is the linear lattice.

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{rat, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lattice {
    QQuadratic {
        /// Q = q^{1/2}, rational, positive, != 1.
        q_half: Rational,
        c1: Scalar,
        c2: Scalar,
        c3: Scalar,
    },
    Quadratic {
        /// beta = c4/4 in x(s) = c4 s^2 + c5 s + c6.
        beta: Scalar,
        c5: Scalar,
        c6: Scalar,
    },
}

/// Structure values (alpha_n, beta_n, gamma_n) at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSeq {
    pub n: i64,
    pub alpha_n: Scalar,
    pub beta_n: Scalar,
    pub gamma_n: Scalar,
}

impl Lattice {
    pub fn q_quadratic(q_half: Rational, c1: Scalar, c2: Scalar, c3: Scalar) -> Result<Self> {
        if !q_half.is_positive() {
            return Err(Error::InvalidLattice("Q must be positive".into()));
        }
        if q_half.is_one() {
            return Err(Error::InvalidLattice("Q must differ from 1".into()));
        }
        if c1.is_zero() && c2.is_zero() {
            return Err(Error::InvalidLattice("(c1, c2) must not both be zero".into()));
        }
        Ok(Lattice::QQuadratic { q_half, c1, c2, c3 })
    }

    pub fn quadratic(beta: Scalar, c5: Scalar, c6: Scalar) -> Result<Self> {
        if beta.is_zero() && c5.is_zero() {
            return Err(Error::InvalidLattice(
                "(beta, c5) must not both be zero".into(),
            ));
        }
        Ok(Lattice::Quadratic { beta, c5, c6 })
    }

    /// Linear lattice x(s) = c5 s + c6.
    pub fn linear(c5: Scalar, c6: Scalar) -> Result<Self> {
        Lattice::quadratic(Scalar::zero(), c5, c6)
    }

    pub fn is_q_case(&self) -> bool {
        matches!(self, Lattice::QQuadratic { .. })
    }

    /// q^k as an exact scalar (q-quadratic only).
    pub fn q_pow(&self, k: i64) -> Scalar {
        match self {
            Lattice::QQuadratic { q_half, .. } => {
                let q = Scalar::from_rational(q_half * q_half);
                q.pow(k).expect("q is nonzero")
            }
            Lattice::Quadratic { .. } => panic!("q_pow on a quadratic lattice"),
        }
    }

    /// Q^k = q^{k/2} as an exact scalar (q-quadratic only).
    fn q_half_pow(&self, k: i64) -> Scalar {
        match self {
            Lattice::QQuadratic { q_half, .. } => Scalar::from_rational(q_half.clone())
                .pow(k)
                .expect("Q is nonzero"),
            Lattice::Quadratic { .. } => panic!("q_half_pow on a quadratic lattice"),
        }
    }

    /// alpha = (q^{1/2} + q^{-1/2})/2, or 1 on quadratic lattices.
    pub fn alpha(&self) -> Scalar {
        self.seq(1).alpha_n
    }

    /// beta = (1-alpha) c3 (q-quadratic) or the stored c4/4.
    pub fn beta(&self) -> Scalar {
        match self {
            Lattice::QQuadratic { c3, .. } => {
                &(&Scalar::one() - &self.alpha()) * c3
            }
            Lattice::Quadratic { beta, .. } => beta.clone(),
        }
    }

    /// Exact (alpha_n, beta_n, gamma_n); the closed forms extend to n < 0
    /// with alpha_{-n} = alpha_n and gamma_{-n} = -gamma_n.
    pub fn seq(&self, n: i64) -> LatticeSeq {
        match self {
            Lattice::QQuadratic { c3, .. } => {
                let qp = self.q_half_pow(n);
                let qm = self.q_half_pow(-n);
                let half = Scalar::from_frac(1, 2);
                let alpha_n = &(&qp + &qm) * &half;
                let gamma_n = if n == 0 {
                    Scalar::zero()
                } else {
                    let num = &qp - &qm;
                    let den = &self.q_half_pow(1) - &self.q_half_pow(-1);
                    num.checked_div(&den).expect("Q != 1")
                };
                let beta_n = &(&Scalar::one() - &alpha_n) * c3;
                LatticeSeq {
                    n,
                    alpha_n,
                    beta_n,
                    gamma_n,
                }
            }
            Lattice::Quadratic { beta, .. } => LatticeSeq {
                n,
                alpha_n: Scalar::one(),
                beta_n: beta * &Scalar::from_int(n * n),
                gamma_n: Scalar::from_int(n),
            },
        }
    }

    pub fn alpha_n(&self, n: i64) -> Scalar {
        self.seq(n).alpha_n
    }

    pub fn gamma_n(&self, n: i64) -> Scalar {
        self.seq(n).gamma_n
    }

    /// gamma_n! = gamma_1 ... gamma_n (n >= 0), empty product for n = 0.
    pub fn gamma_factorial(&self, n: i64) -> Scalar {
        let mut acc = Scalar::one();
        for k in 1..=n {
            acc = &acc * &self.gamma_n(k);
        }
        acc
    }

    /// Structural polynomials (U1, U2) entering the product rules.
    pub fn structural_polys(&self) -> (Poly, Poly) {
        match self {
            Lattice::QQuadratic { c1, c2, c3, .. } => {
                let alpha = self.alpha();
                let a2m1 = &(&alpha * &alpha) - &Scalar::one();
                let zc = &Poly::var() - &Poly::constant(c3.clone());
                let u1 = zc.scale(&a2m1);
                let four_c1c2 = &(c1 * c2) * &Scalar::from_int(4);
                let u2 = (&(&zc * &zc) - &Poly::constant(four_c1c2)).scale(&a2m1);
                (u1, u2)
            }
            Lattice::Quadratic { beta, c5, c6 } => {
                let u1 = Poly::constant(beta * &Scalar::from_int(2));
                let four_beta = beta * &Scalar::from_int(4);
                let zc = &Poly::var() - &Poly::constant(c6.clone());
                let c5sq_quarter = &(c5 * c5) * &Scalar::from_frac(1, 4);
                let u2 = &zc.scale(&four_beta) + &Poly::constant(c5sq_quarter);
                (u1, u2)
            }
        }
    }

    /// Exact x(s); on q-quadratic lattices s must be a half-integer so
    /// q^s = Q^{2s} stays rational. Used by the pointwise oracle.
    pub fn x_eval(&self, s: &Rational) -> Result<Scalar> {
        match self {
            Lattice::QQuadratic { c1, c2, c3, .. } => {
                let two_s = s * rat(2, 1);
                if !two_s.denom().is_one() {
                    return Err(Error::NonHalfIntegerPoint(s.to_string()));
                }
                let k: i64 = two_s
                    .numer()
                    .try_into()
                    .map_err(|_| Error::NonHalfIntegerPoint(s.to_string()))?;
                let qs = self.q_half_pow(k); // q^s
                let qms = self.q_half_pow(-k);
                Ok(&(&(c1 * &qms) + &(c2 * &qs)) + c3)
            }
            Lattice::Quadratic { beta, c5, c6 } => {
                let ss = Scalar::from_rational(s.clone());
                let four_beta = beta * &Scalar::from_int(4);
                Ok(&(&(&(&four_beta * &ss) * &ss) + &(c5 * &ss)) + c6)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Lattice::QQuadratic { q_half, c1, c2, c3 } => json!({
                "kind": "q",
                "Q": Scalar::from_rational(q_half.clone()).to_string(),
                "c1": c1.to_string(),
                "c2": c2.to_string(),
                "c3": c3.to_string(),
            }),
            Lattice::Quadratic { beta, c5, c6 } => json!({
                "kind": "quadratic",
                "beta": beta.to_string(),
                "c5": c5.to_string(),
                "c6": c6.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_sample() -> Lattice {
        // Q = 1/2, c1 = c2 = 1, c3 = 0
        Lattice::q_quadratic(rat(1, 2), Scalar::one(), Scalar::one(), Scalar::zero()).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Lattice::q_quadratic(rat(1, 1), Scalar::one(), Scalar::one(), Scalar::zero())
            .is_err());
        assert!(Lattice::q_quadratic(rat(-1, 2), Scalar::one(), Scalar::one(), Scalar::zero())
            .is_err());
        assert!(
            Lattice::q_quadratic(rat(1, 2), Scalar::zero(), Scalar::zero(), Scalar::one())
                .is_err()
        );
        assert!(Lattice::quadratic(Scalar::zero(), Scalar::zero(), Scalar::one()).is_err());
    }

    #[test]
    fn q_sequence_values() {
        let l = q_sample();
        let s2 = l.seq(2);
        assert_eq!(s2.alpha_n, Scalar::from_frac(17, 8));
        assert_eq!(s2.gamma_n, Scalar::from_frac(5, 2));
        let s0 = l.seq(0);
        assert_eq!(s0.alpha_n, Scalar::one());
        assert_eq!(s0.gamma_n, Scalar::zero());
        assert_eq!(s0.beta_n, Scalar::zero());
    }

    #[test]
    fn quadratic_sequence_values() {
        let l = Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap();
        let s3 = l.seq(3);
        assert_eq!(s3.beta_n, Scalar::from_int(9));
        assert_eq!(s3.gamma_n, Scalar::from_int(3));
    }

    #[test]
    fn negative_index_extension() {
        let l = q_sample();
        assert_eq!(l.seq(-1).gamma_n, Scalar::from_int(-1));
        assert_eq!(l.seq(-1).alpha_n, l.alpha());
        assert_eq!(l.seq(-2).alpha_n, l.seq(2).alpha_n);
        assert_eq!(l.seq(-2).gamma_n, -l.seq(2).gamma_n);
    }

    #[test]
    fn structure_identity_2_5() {
        // alpha + alpha_n gamma_n = alpha_{n-1} gamma_{n+1}
        let lattices = [
            q_sample(),
            Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap(),
            Lattice::linear(Scalar::from_int(2), Scalar::zero()).unwrap(),
        ];
        for l in &lattices {
            let alpha = l.alpha();
            for n in 0..=12 {
                let lhs = &alpha + &(&l.alpha_n(n) * &l.gamma_n(n));
                let rhs = &l.alpha_n(n - 1) * &l.gamma_n(n + 1);
                assert_eq!(lhs, rhs, "identity fails at n = {n}");
            }
        }
    }

    #[test]
    fn structural_polys_match_hand_values() {
        let (u1, u2) = q_sample().structural_polys();
        assert_eq!(u1, Poly::new(vec![Scalar::zero(), Scalar::from_frac(9, 16)]));
        assert_eq!(
            u2,
            Poly::new(vec![
                Scalar::from_frac(-9, 4),
                Scalar::zero(),
                Scalar::from_frac(9, 16)
            ])
        );

        let lin = Lattice::linear(Scalar::from_int(2), Scalar::zero()).unwrap();
        let (u1, u2) = lin.structural_polys();
        assert_eq!(u1, Poly::zero());
        assert_eq!(u2, Poly::one());

        let quad = Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap();
        let (u1, u2) = quad.structural_polys();
        assert_eq!(u1, Poly::constant(Scalar::from_int(2)));
        assert_eq!(u2, Poly::new(vec![Scalar::zero(), Scalar::from_int(4)]));
    }

    #[test]
    fn x_eval_cases() {
        let l = q_sample();
        assert_eq!(l.x_eval(&rat(0, 1)).unwrap(), Scalar::from_int(2));
        assert_eq!(l.x_eval(&rat(1, 2)).unwrap(), Scalar::from_frac(5, 2));
        assert!(l.x_eval(&rat(1, 3)).is_err());

        let quad = Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap();
        assert_eq!(quad.x_eval(&rat(1, 1)).unwrap(), Scalar::from_int(4));

        let lin = Lattice::linear(Scalar::from_int(2), Scalar::zero()).unwrap();
        assert_eq!(lin.x_eval(&rat(3, 2)).unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn half_step_average_identity() {
        let lattices = [
            q_sample(),
            Lattice::quadratic(Scalar::one(), Scalar::from_int(3), Scalar::from_int(-1)).unwrap(),
            Lattice::linear(Scalar::from_int(2), Scalar::one()).unwrap(),
        ];
        let two = Scalar::from_int(2);
        for l in &lattices {
            let alpha = l.alpha();
            let beta = l.beta();
            for k in -4..=4i64 {
                let s = rat(k, 2);
                let lhs = &l.x_eval(&(&s + rat(1, 2))).unwrap()
                    + &l.x_eval(&(&s - rat(1, 2))).unwrap();
                let rhs = &(&(&alpha * &l.x_eval(&s).unwrap()) + &beta) * &two;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn beta_conventions() {
        // c3 = 0 forces beta = 0 on the q-lattice
        assert_eq!(q_sample().beta(), Scalar::zero());
        // quadratic stored beta is c4/4: x(s) = 4 beta s^2 + ...
        let quad = Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap();
        assert_eq!(quad.x_eval(&rat(1, 1)).unwrap(), Scalar::from_int(4));
    }
}
