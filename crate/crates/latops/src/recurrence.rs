//! Monic three-term recurrences and the polynomial sequences they generate.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Coefficients (B_0..B_{N-1}, C_1..C_{N-1}) of a monic TTRR
/// P_{n+1} = (z - B_n) P_n - C_n P_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrencePair {
    pub b: Vec<Scalar>,
    pub c: Vec<Scalar>,
}

impl RecurrencePair {
    pub fn new(b: Vec<Scalar>, c: Vec<Scalar>) -> Self {
        RecurrencePair { b, c }
    }

    /// Builds the monic sequence P_0..P_N.
    ///
    /// Requires B_0..B_{N-1} and C_1..C_{N-1}, all C_n nonzero.
    pub fn build(&self, n_max: usize) -> Result<Vec<Poly>> {
        if n_max > 0 && (self.b.len() < n_max || self.c.len() < n_max - 1) {
            return Err(Error::MissingRecurrenceData {
                need_b: n_max - 1,
                need_c: n_max - 1,
            });
        }
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(Poly::one());
        let z = Poly::var();
        for n in 0..n_max {
            let shifted = &(&z - &Poly::constant(self.b[n].clone())) * &out[n];
            let next = if n == 0 {
                shifted
            } else {
                let c_n = &self.c[n - 1];
                if c_n.is_zero() {
                    return Err(Error::ZeroRecurrenceC(n));
                }
                &shifted - &out[n - 1].scale(c_n)
            };
            out.push(next);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn one_step_by_hand() {
        // B = 0, C_1 = 1/2 -> P_2 = z^2 - 1/2
        let rec = RecurrencePair::new(
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::from_frac(1, 2)],
        );
        let p = rec.build(2).unwrap();
        assert_eq!(
            p[2],
            Poly::new(vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()])
        );
    }

    #[test]
    fn n_zero_gives_constant_one() {
        let rec = RecurrencePair::new(vec![], vec![]);
        assert_eq!(rec.build(0).unwrap(), vec![Poly::one()]);
    }

    #[test]
    fn meixner_coefficients_first_step() {
        // B_n = -b1(2n+b2), C_n = (b1^2+1) n (n+b2-1) with b1=0, b2=1/2:
        // P_2 = z^2 - C_1 = z^2 - 1/2.
        let c1 = Scalar::from_frac(1, 2); // (0+1)*1*(1+1/2-1)
        let rec = RecurrencePair::new(vec![Scalar::zero(), Scalar::zero()], vec![c1]);
        let p = rec.build(2).unwrap();
        assert_eq!(
            p[2],
            Poly::new(vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()])
        );
    }

    #[test]
    fn zero_c_reports_index() {
        let rec = RecurrencePair::new(
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero()],
        );
        assert_eq!(rec.build(2), Err(Error::ZeroRecurrenceC(1)));
    }

    #[test]
    fn missing_data_detected() {
        let rec = RecurrencePair::new(vec![Scalar::zero()], vec![]);
        assert!(rec.build(3).is_err());
    }
}
