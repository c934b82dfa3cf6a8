//! Exact action of D_x and S_x on polynomials.
//!
//! Columns of the monomial-basis tables are built from the product rules
//! alone: D_x z^{n+1} = (D_x z)(S_x z^n) + (S_x z)(D_x z^n) and
//! S_x z^{n+1} = U2 (D_x z)(D_x z^n) + (S_x z)(S_x z^n), seeded with
//! D_x z = 1 and S_x z = alpha z + beta. The pointwise oracle evaluates the
//! defining difference quotients at lattice points without the tables, so
//! the two routes certify each other.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poly::Poly;
use crate::scalar::{rat, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Dx,
    Sx,
}

/// Monomial-basis matrices of D_x and S_x up to a degree bound.
#[derive(Clone, Debug)]
pub struct OperatorTables {
    lattice: Lattice,
    /// d_cols[n] = D_x z^n (degree <= n-1).
    d_cols: Vec<Poly>,
    /// s_cols[n] = S_x z^n (degree n).
    s_cols: Vec<Poly>,
}

impl OperatorTables {
    /// Builds both tables for monomials z^0 .. z^{n_max}.
    pub fn build(lattice: &Lattice, n_max: usize) -> Self {
        let alpha = lattice.alpha();
        let beta = lattice.beta();
        let sx_z = Poly::new(vec![beta, alpha]);
        let (_, u2) = lattice.structural_polys();

        let mut d_cols = vec![Poly::zero()];
        let mut s_cols = vec![Poly::one()];
        for n in 0..n_max {
            let d_next = &s_cols[n] + &(&sx_z * &d_cols[n]);
            let s_next = &(&u2 * &d_cols[n]) + &(&sx_z * &s_cols[n]);
            d_cols.push(d_next);
            s_cols.push(s_next);
        }
        OperatorTables {
            lattice: lattice.clone(),
            d_cols,
            s_cols,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn degree_bound(&self) -> usize {
        self.d_cols.len() - 1
    }

    /// D_x z^n as a polynomial.
    pub fn dx_monomial(&self, n: usize) -> &Poly {
        &self.d_cols[n]
    }

    /// S_x z^n as a polynomial.
    pub fn sx_monomial(&self, n: usize) -> &Poly {
        &self.s_cols[n]
    }

    /// Applies D_x or S_x by an exact matrix-vector product.
    pub fn apply(&self, op: Op, p: &Poly) -> Result<Poly> {
        let deg = match p.degree() {
            None => return Ok(Poly::zero()),
            Some(d) => d,
        };
        if deg > self.degree_bound() {
            return Err(Error::DegreeExceedsTables {
                deg,
                max: self.degree_bound(),
            });
        }
        let cols = match op {
            Op::Dx => &self.d_cols,
            Op::Sx => &self.s_cols,
        };
        let mut out = Poly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = &out + &cols[k].scale(c);
            }
        }
        Ok(out)
    }

    /// k-fold D_x.
    pub fn apply_dx_power(&self, p: &Poly, k: usize) -> Result<Poly> {
        let mut out = p.clone();
        for _ in 0..k {
            out = self.apply(Op::Dx, &out)?;
        }
        Ok(out)
    }

    /// Monic derived sequence P_n^{[k]} = (gamma_n!/gamma_{n+k}!) D_x^k P_{n+k}.
    ///
    /// Input covers degrees 0..=M; output covers 0..=M-k.
    pub fn derived_sequence(&self, p: &[Poly], k: usize) -> Result<Vec<Poly>> {
        if k == 0 {
            return Ok(p.to_vec());
        }
        let lat = &self.lattice;
        let mut out = Vec::new();
        for n in 0..p.len().saturating_sub(k) {
            let num = lat.gamma_factorial(n as i64);
            let den = lat.gamma_factorial((n + k) as i64);
            let factor = num.checked_div(&den).map_err(|_| {
                Error::InvalidLattice("vanishing gamma-factorial quotient".into())
            })?;
            out.push(self.apply_dx_power(&p[n + k], k)?.scale(&factor));
        }
        Ok(out)
    }
}

/// Difference-quotient evaluation of D_x or S_x at a single lattice point,
/// computed from x(s +- 1/2) directly.
pub fn pointwise_oracle(op: Op, lattice: &Lattice, p: &Poly, s: &Rational) -> Result<Scalar> {
    let x_plus = lattice.x_eval(&(s + rat(1, 2)))?;
    let x_minus = lattice.x_eval(&(s - rat(1, 2)))?;
    let f_plus = p.eval(&x_plus);
    let f_minus = p.eval(&x_minus);
    match op {
        Op::Dx => {
            let dx = &x_plus - &x_minus;
            if dx.is_zero() {
                return Err(Error::DegenerateStep(s.to_string()));
            }
            (&f_plus - &f_minus).checked_div(&dx)
        }
        Op::Sx => Ok(&(&f_plus + &f_minus) * &Scalar::from_frac(1, 2)),
    }
}

/// Sample points s = 1/2, 1, 3/2, ... skipping degenerate steps.
pub fn oracle_sample_points(lattice: &Lattice, count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut k: i64 = 1;
    while out.len() < count {
        let s = rat(k, 2);
        let ok = match (
            lattice.x_eval(&(&s + rat(1, 2))),
            lattice.x_eval(&(&s - rat(1, 2))),
        ) {
            (Ok(a), Ok(b)) => !(&a - &b).is_zero(),
            _ => false,
        };
        if ok {
            out.push(s);
        }
        k += 1;
    }
    out
}

/// Expected subleading coefficient of D_x z^n: u_n (q-case) or v_n.
pub fn expected_dx_subleading(lattice: &Lattice, n: i64) -> Scalar {
    match lattice {
        Lattice::QQuadratic { c3, .. } => {
            // u_n = (n gamma_{n-1} - (n-1) gamma_n) c3
            let t = &(&lattice.gamma_n(n - 1) * &Scalar::from_int(n))
                - &(&lattice.gamma_n(n) * &Scalar::from_int(n - 1));
            &t * c3
        }
        Lattice::Quadratic { beta, .. } => {
            // v_n = beta n(n-1)(2n-1)/3
            let t = Rational::new((n * (n - 1) * (2 * n - 1)).into(), 3.into());
            beta * &Scalar::from_rational(t)
        }
    }
}

/// Expected subleading coefficient of S_x z^n: u-hat_n (q-case) or v-hat_n.
pub fn expected_sx_subleading(lattice: &Lattice, n: i64) -> Scalar {
    match lattice {
        Lattice::QQuadratic { c3, .. } => {
            // u-hat_n = n (alpha_{n-1} - alpha_n) c3
            let t = &(&lattice.alpha_n(n - 1) - &lattice.alpha_n(n)) * &Scalar::from_int(n);
            &t * c3
        }
        Lattice::Quadratic { beta, .. } => {
            // v-hat_n = beta n(2n-1)
            beta * &Scalar::from_int(n * (2 * n - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_sample() -> Lattice {
        Lattice::q_quadratic(rat(1, 2), Scalar::one(), Scalar::one(), Scalar::zero()).unwrap()
    }

    fn linear_sample() -> Lattice {
        Lattice::linear(Scalar::from_int(2), Scalar::zero()).unwrap()
    }

    fn quad_sample() -> Lattice {
        Lattice::quadratic(Scalar::one(), Scalar::zero(), Scalar::zero()).unwrap()
    }

    #[test]
    fn base_columns() {
        for l in [q_sample(), linear_sample(), quad_sample()] {
            let t = OperatorTables::build(&l, 3);
            assert_eq!(t.dx_monomial(0), &Poly::zero());
            assert_eq!(t.sx_monomial(0), &Poly::one());
            assert_eq!(t.dx_monomial(1), &Poly::one());
        }
    }

    #[test]
    fn q_lattice_degree_two_columns() {
        let t = OperatorTables::build(&q_sample(), 2);
        // D_x z^2 = (5/2) z
        assert_eq!(
            t.dx_monomial(2),
            &Poly::new(vec![Scalar::zero(), Scalar::from_frac(5, 2)])
        );
        // S_x z^2 = (17/8) z^2 - 9/4
        assert_eq!(
            t.sx_monomial(2),
            &Poly::new(vec![
                Scalar::from_frac(-9, 4),
                Scalar::zero(),
                Scalar::from_frac(17, 8)
            ])
        );
    }

    #[test]
    fn quadratic_lattice_sx_z2() {
        // beta = 1, c5 = c6 = 0: S_x z^2 = z^2 + 6z + 1
        let t = OperatorTables::build(&quad_sample(), 2);
        assert_eq!(
            t.sx_monomial(2),
            &Poly::new(vec![Scalar::one(), Scalar::from_int(6), Scalar::one()])
        );
    }

    #[test]
    fn apply_cases() {
        let t = OperatorTables::build(&linear_sample(), 4);
        assert_eq!(t.apply(Op::Dx, &Poly::one()).unwrap(), Poly::zero());
        // D_x (z^2 - 1/2) = 2z on the linear lattice with c5 = 2
        let p = Poly::new(vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()]);
        assert_eq!(
            t.apply(Op::Dx, &p).unwrap(),
            Poly::new(vec![Scalar::zero(), Scalar::from_int(2)])
        );

        let tq = OperatorTables::build(&q_sample(), 2);
        assert_eq!(
            tq.apply(Op::Sx, &Poly::var()).unwrap(),
            Poly::new(vec![Scalar::zero(), Scalar::from_frac(5, 4)])
        );

        assert!(matches!(
            tq.apply(Op::Dx, &Poly::monomial(Scalar::one(), 5)),
            Err(Error::DegreeExceedsTables { deg: 5, max: 2 })
        ));
    }

    #[test]
    fn dx_power_cases() {
        let t = OperatorTables::build(&linear_sample(), 4);
        let p = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(t.apply_dx_power(&p, 0).unwrap(), p);
        // D_x^2 z^2 = 2 on the linear lattice
        assert_eq!(
            t.apply_dx_power(&Poly::monomial(Scalar::one(), 2), 2).unwrap(),
            Poly::constant(Scalar::from_int(2))
        );
        assert_eq!(t.apply_dx_power(&p, 3).unwrap(), Poly::zero());
    }

    #[test]
    fn oracle_cases() {
        let q = q_sample();
        // D_x z^2 at s = 1/2: value of (5/2) z at x(1/2) = 5/2 is 25/4
        let sq = Poly::monomial(Scalar::one(), 2);
        assert_eq!(
            pointwise_oracle(Op::Dx, &q, &sq, &rat(1, 2)).unwrap(),
            Scalar::from_frac(25, 4)
        );

        let quad = quad_sample();
        assert_eq!(
            pointwise_oracle(Op::Sx, &quad, &sq, &rat(1, 2)).unwrap(),
            Scalar::from_int(8)
        );
        // vertex of x(s) = 4 s^2 is a degenerate step at s = 0
        assert!(matches!(
            pointwise_oracle(Op::Dx, &quad, &sq, &rat(0, 1)),
            Err(Error::DegenerateStep(_))
        ));

        assert_eq!(
            pointwise_oracle(Op::Dx, &q, &Poly::constant(Scalar::from_int(7)), &rat(3, 2))
                .unwrap(),
            Scalar::zero()
        );
    }

    #[test]
    fn oracle_agrees_with_tables() {
        for l in [q_sample(), linear_sample(), quad_sample()] {
            let t = OperatorTables::build(&l, 8);
            let p = Poly::from_ints(&[3, -1, 0, 2, 0, 0, 0, 0, 1]);
            for op in [Op::Dx, Op::Sx] {
                let table_image = t.apply(op, &p).unwrap();
                for s in oracle_sample_points(&l, 10) {
                    let x = l.x_eval(&s).unwrap();
                    assert_eq!(
                        table_image.eval(&x),
                        pointwise_oracle(op, &l, &p, &s).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn leading_and_subleading_structure() {
        // also exercise a q-lattice with c3 != 0 so u_n, u-hat_n are nonzero
        let shifted =
            Lattice::q_quadratic(rat(1, 2), Scalar::one(), Scalar::one(), Scalar::from_int(3))
                .unwrap();
        for l in [q_sample(), shifted, quad_sample(), linear_sample()] {
            let t = OperatorTables::build(&l, 10);
            for n in 1..=10usize {
                let d = t.dx_monomial(n);
                let s = t.sx_monomial(n);
                assert_eq!(d.degree(), Some(n - 1));
                assert_eq!(s.degree(), Some(n));
                assert_eq!(d.coeff(n - 1), l.gamma_n(n as i64));
                assert_eq!(s.coeff(n), l.alpha_n(n as i64));
                if n >= 2 {
                    assert_eq!(d.coeff(n - 2), expected_dx_subleading(&l, n as i64));
                }
                assert_eq!(s.coeff(n - 1), expected_sx_subleading(&l, n as i64));
            }
        }
    }

    #[test]
    fn derived_sequence_cases() {
        let l = linear_sample();
        let t = OperatorTables::build(&l, 6);
        // linear-lattice solution family: P_1 = z, P_2 = z^2 - 1/2
        let p = vec![
            Poly::one(),
            Poly::var(),
            Poly::new(vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()]),
        ];
        assert_eq!(t.derived_sequence(&p, 0).unwrap(), p);
        let d1 = t.derived_sequence(&p, 1).unwrap();
        assert_eq!(d1[1], Poly::var()); // D_x P_2 / gamma_2 = 2z/2
        assert_eq!(d1[0], Poly::one());
    }
}
