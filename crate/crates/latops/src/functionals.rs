//! Truncated moment functionals and the dual operator calculus.
//!
//! A functional is a finite moment vector m_k = <u, z^k> with explicit
//! validity bookkeeping: every operation records how many leading moments
//! remain trustworthy, so a shrunken comparison range is always visible.

use crate::ddops::{Op, OperatorTables};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrence::RecurrencePair;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentFunctional {
    moments: Vec<Scalar>,
    valid_len: usize,
}

/// Pearson data (phi, psi) of D_x(phi u) = S_x(psi u), deg phi <= 2,
/// deg psi = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PearsonData {
    pub phi: Poly,
    pub psi: Poly,
}

impl PearsonData {
    pub fn new(phi: Poly, psi: Poly) -> Result<Self> {
        if phi.degree().is_some_and(|d| d > 2) {
            return Err(Error::InvalidParams("phi must have degree <= 2".into()));
        }
        if psi.degree() != Some(1) {
            return Err(Error::InvalidParams("psi must have degree exactly 1".into()));
        }
        Ok(PearsonData { phi, psi })
    }
}

impl MomentFunctional {
    pub fn new(moments: Vec<Scalar>) -> Self {
        let valid_len = moments.len();
        MomentFunctional { moments, valid_len }
    }

    pub fn with_valid_len(moments: Vec<Scalar>, valid_len: usize) -> Self {
        assert!(valid_len <= moments.len());
        MomentFunctional { moments, valid_len }
    }

    pub fn from_ints(moments: &[i64]) -> Self {
        MomentFunctional::new(moments.iter().map(|&m| Scalar::from_int(m)).collect())
    }

    pub fn moments(&self) -> &[Scalar] {
        &self.moments[..self.valid_len]
    }

    pub fn moment(&self, k: usize) -> &Scalar {
        &self.moments[k]
    }

    pub fn valid_len(&self) -> usize {
        self.valid_len
    }

    /// <u, p>; requires deg p < valid_len.
    pub fn act(&self, p: &Poly) -> Result<Scalar> {
        match p.degree() {
            None => Ok(Scalar::zero()),
            Some(d) => {
                if d >= self.valid_len {
                    return Err(Error::InsufficientMoments {
                        need: d + 1,
                        have: self.valid_len,
                    });
                }
                let mut acc = Scalar::zero();
                for (k, c) in p.coeffs().iter().enumerate() {
                    acc += &(c * &self.moments[k]);
                }
                Ok(acc)
            }
        }
    }

    /// Left multiplication (f u)_k = <u, f z^k>; costs deg f valid moments.
    pub fn left_multiply(&self, f: &Poly) -> MomentFunctional {
        let deg = match f.degree() {
            None => return MomentFunctional::new(vec![]),
            Some(d) => d,
        };
        let new_len = self.valid_len.saturating_sub(deg);
        let mut moments = Vec::with_capacity(new_len);
        for k in 0..new_len {
            let mut acc = Scalar::zero();
            for (j, c) in f.coeffs().iter().enumerate() {
                acc += &(c * &self.moments[k + j]);
            }
            moments.push(acc);
        }
        MomentFunctional::new(moments)
    }

    /// Dual action: (D_x u)_k = -<u, D_x z^k>, (S_x u)_k = <u, S_x z^k>.
    /// Valid length is preserved (capped by the table bound).
    pub fn transform(&self, op: Op, tables: &OperatorTables) -> Result<MomentFunctional> {
        let len = self.valid_len.min(tables.degree_bound() + 1);
        let mut moments = Vec::with_capacity(len);
        for k in 0..len {
            let image = match op {
                Op::Dx => tables.dx_monomial(k),
                Op::Sx => tables.sx_monomial(k),
            };
            let v = self.act(image)?;
            moments.push(match op {
                Op::Dx => -v,
                Op::Sx => v,
            });
        }
        Ok(MomentFunctional::new(moments))
    }

    pub fn scale(&self, c: &Scalar) -> MomentFunctional {
        MomentFunctional::new(self.moments().iter().map(|m| m * c).collect())
    }

    /// Componentwise sum on the common valid range.
    pub fn add(&self, other: &MomentFunctional) -> MomentFunctional {
        let len = self.valid_len.min(other.valid_len);
        MomentFunctional::new(
            (0..len)
                .map(|k| &self.moments[k] + &other.moments[k])
                .collect(),
        )
    }

    /// Componentwise difference on the common valid range.
    pub fn sub(&self, other: &MomentFunctional) -> MomentFunctional {
        let len = self.valid_len.min(other.valid_len);
        MomentFunctional::new(
            (0..len)
                .map(|k| &self.moments[k] - &other.moments[k])
                .collect(),
        )
    }

    /// Componentwise difference on the common valid range, with that range.
    pub fn compare(&self, other: &MomentFunctional) -> (usize, Option<(usize, Scalar, Scalar)>) {
        let len = self.valid_len.min(other.valid_len);
        for k in 0..len {
            if self.moments[k] != other.moments[k] {
                return (len, Some((k, self.moments[k].clone(), other.moments[k].clone())));
            }
        }
        (len, None)
    }
}

/// The unique truncated functional a_n with <a_n, P_m> = delta_{nm} for
/// 0 <= m <= depth, found by triangular solve in the monomial basis.
pub fn dual_basis(p: &[Poly], n: usize, depth: usize) -> Result<MomentFunctional> {
    let mut moments: Vec<Scalar> = Vec::with_capacity(depth + 1);
    for m in 0..=depth {
        let pm = p.get(m).ok_or(Error::NotSimpleSet(m))?;
        if pm.degree() != Some(m) {
            return Err(Error::NotSimpleSet(m));
        }
        let target = if m == n { Scalar::one() } else { Scalar::zero() };
        let mut partial = Scalar::zero();
        for k in 0..m {
            partial += &(&pm.coeff(k) * &moments[k]);
        }
        let lead = pm.leading().expect("degree checked");
        moments.push((&target - &partial).checked_div(lead)?);
    }
    Ok(MomentFunctional::new(moments))
}

/// Solves D_x(phi u) = S_x(psi u) for the truncated moments m_0..m_n_max,
/// normalized to m_0 = 1.
///
/// The k-th relation <u, phi D_x z^k + psi S_x z^k> = 0 has degree k+1 with
/// leading coefficient d_k; a vanishing d_k is reported with its index.
pub fn pearson_moments(
    pd: &PearsonData,
    tables: &OperatorTables,
    n_max: usize,
) -> Result<MomentFunctional> {
    let mut moments = vec![Scalar::one()];
    for k in 0..n_max {
        let rel = &(&pd.phi * tables.dx_monomial(k)) + &(&pd.psi * tables.sx_monomial(k));
        if rel.degree() != Some(k + 1) {
            return Err(Error::PearsonLeadingZero(k as i64));
        }
        let lead = rel.leading().expect("degree checked").clone();
        let mut partial = Scalar::zero();
        for (j, c) in rel.coeffs().iter().enumerate().take(k + 1) {
            partial += &(c * &moments[j]);
        }
        moments.push(-partial.checked_div(&lead)?);
    }
    Ok(MomentFunctional::new(moments))
}

/// <D_x(phi u) - S_x(psi u), z^k> up to sign: returns
/// <u, phi D_x z^k + psi S_x z^k>, which vanishes iff the k-th Pearson
/// relation holds.
pub fn pearson_residual(
    pd: &PearsonData,
    tables: &OperatorTables,
    u: &MomentFunctional,
    k: usize,
) -> Result<Scalar> {
    if k + 2 > u.valid_len() {
        return Err(Error::InsufficientMoments {
            need: k + 2,
            have: u.valid_len(),
        });
    }
    let rel = &(&pd.phi * tables.dx_monomial(k)) + &(&pd.psi * tables.sx_monomial(k));
    u.act(&rel)
}

/// Recovers (B_0..B_{n_max-1}, C_1..C_{n_max-1}) from moments by incremental
/// Gram-Schmidt; reports the exact depth at which u fails to be regular.
pub fn recurrence_from_moments(u: &MomentFunctional, n_max: usize) -> Result<RecurrencePair> {
    if n_max == 0 {
        return Ok(RecurrencePair::new(vec![], vec![]));
    }
    if u.valid_len() < 2 * n_max {
        return Err(Error::InsufficientMoments {
            need: 2 * n_max,
            have: u.valid_len(),
        });
    }
    let z = Poly::var();
    let mut b = Vec::with_capacity(n_max);
    let mut c = Vec::with_capacity(n_max - 1);
    let mut prev = Poly::one(); // P_{n-1}
    let mut curr = Poly::one(); // P_n
    let mut norm_prev = Scalar::one(); // <u, P_{n-1}^2>, unused at n = 0
    for n in 0..n_max {
        let norm_curr = u.act(&(&curr * &curr))?;
        if norm_curr.is_zero() {
            return Err(Error::NotRegular(n));
        }
        let b_n = u
            .act(&(&(&z * &curr) * &curr))?
            .checked_div(&norm_curr)?;
        if n > 0 {
            c.push(norm_curr.checked_div(&norm_prev)?);
        }
        let next = if n == 0 {
            &(&z - &Poly::constant(b_n.clone())) * &curr
        } else {
            let c_n = c.last().expect("pushed above");
            &(&(&z - &Poly::constant(b_n.clone())) * &curr) - &prev.scale(c_n)
        };
        b.push(b_n);
        prev = std::mem::replace(&mut curr, next);
        norm_prev = norm_curr;
    }
    Ok(RecurrencePair::new(b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::scalar::rat;

    fn linear_lattice() -> Lattice {
        Lattice::linear(Scalar::from_int(2), Scalar::zero()).unwrap()
    }

    fn half_scalar() -> Scalar {
        Scalar::from_frac(1, 2)
    }

    #[test]
    fn act_cases() {
        let u = MomentFunctional::new(vec![Scalar::one(), Scalar::zero(), half_scalar()]);
        assert_eq!(
            u.act(&Poly::monomial(Scalar::one(), 2)).unwrap(),
            half_scalar()
        );
        assert_eq!(u.act(&Poly::zero()).unwrap(), Scalar::zero());
        assert_eq!(u.act(&Poly::one()).unwrap(), Scalar::one());
        assert!(u.act(&Poly::monomial(Scalar::one(), 3)).is_err());
    }

    #[test]
    fn left_multiply_cases() {
        let u = MomentFunctional::new(vec![
            Scalar::one(),
            Scalar::zero(),
            half_scalar(),
            Scalar::zero(),
        ]);
        let shifted = u.left_multiply(&Poly::var());
        assert_eq!(
            shifted.moments(),
            &[Scalar::zero(), half_scalar(), Scalar::zero()]
        );
        assert_eq!(shifted.valid_len(), 3);
        assert_eq!(u.left_multiply(&Poly::one()), u);
        // f = z - B_0 with B_0 = m_1/m_0 zeroes the first moment
        let v = MomentFunctional::from_ints(&[2, 6, 1, 0]);
        let b0 = Scalar::from_int(3);
        let f = &Poly::var() - &Poly::constant(b0);
        assert_eq!(v.left_multiply(&f).moment(0), &Scalar::zero());
    }

    #[test]
    fn transform_cases() {
        let t = OperatorTables::build(&linear_lattice(), 6);
        let u = MomentFunctional::new(vec![Scalar::one(), Scalar::zero(), half_scalar()]);
        let du = u.transform(Op::Dx, &t).unwrap();
        assert_eq!(du.moment(0), &Scalar::zero());
        // (D_x u)_2 = -<u, 2z> = 0
        assert_eq!(du.moment(2), &Scalar::zero());
        // (S_x u)_2 = <u, z^2 + 1> = 3/2
        let su = u.transform(Op::Sx, &t).unwrap();
        assert_eq!(su.moment(2), &Scalar::from_frac(3, 2));
        assert_eq!(su.valid_len(), 3);
    }

    #[test]
    fn dual_basis_cases() {
        // monomial basis: a_n has moments delta_{n,k}
        let mono: Vec<Poly> = (0..4).map(|k| Poly::monomial(Scalar::one(), k)).collect();
        let a2 = dual_basis(&mono, 2, 3).unwrap();
        assert_eq!(
            a2.moments(),
            &[Scalar::zero(), Scalar::zero(), Scalar::one(), Scalar::zero()]
        );

        // family {1, z, z^2 - 1/2}: a_1 has <a_1, z> = 1 and m_2 = m_0/2 = 0
        let p2 = Poly::new(vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()]);
        let fam = vec![Poly::one(), Poly::var(), p2];
        let a1 = dual_basis(&fam, 1, 2).unwrap();
        assert_eq!(
            a1.moments(),
            &[Scalar::zero(), Scalar::one(), Scalar::zero()]
        );

        // a_0 of an OPS is u itself when m_0 = 1
        let a0 = dual_basis(&fam, 0, 2).unwrap();
        assert_eq!(a0.moment(0), &Scalar::one());

        assert!(dual_basis(&[Poly::one(), Poly::one()], 0, 1).is_err());
    }

    #[test]
    fn pearson_moments_linear_example() {
        // phi = -1/2, psi = z on the linear lattice c5 = 2
        let t = OperatorTables::build(&linear_lattice(), 8);
        let pd = PearsonData::new(
            Poly::constant(Scalar::from_frac(-1, 2)),
            Poly::var(),
        )
        .unwrap();
        let u = pearson_moments(&pd, &t, 4).unwrap();
        assert_eq!(
            u.moments(),
            &[
                Scalar::one(),
                Scalar::zero(),
                half_scalar(),
                Scalar::zero(),
                Scalar::from_frac(-1, 4)
            ]
        );
        // every constructed relation has zero residual
        for k in 0..3 {
            assert_eq!(pearson_residual(&pd, &t, &u, k).unwrap(), Scalar::zero());
        }
    }

    #[test]
    fn pearson_moments_trivial_depth() {
        let t = OperatorTables::build(&linear_lattice(), 2);
        let pd = PearsonData::new(Poly::constant(Scalar::from_int(-1)), Poly::var()).unwrap();
        let u = pearson_moments(&pd, &t, 0).unwrap();
        assert_eq!(u.moments(), &[Scalar::one()]);
    }

    #[test]
    fn pearson_residual_detects_mismatch() {
        let t = OperatorTables::build(&linear_lattice(), 6);
        let pd = PearsonData::new(
            Poly::constant(Scalar::from_frac(-1, 2)),
            Poly::var(),
        )
        .unwrap();
        // Gaussian-like moments [1, 0, 1, 0, 3]
        let u = MomentFunctional::from_ints(&[1, 0, 1, 0, 3]);
        assert_eq!(
            pearson_residual(&pd, &t, &u, 1).unwrap(),
            half_scalar()
        );
        // perturbing one moment of a valid functional breaks the residual
        let good = pearson_moments(&pd, &t, 4).unwrap();
        let mut m = good.moments().to_vec();
        m[2] = &m[2] + &Scalar::one();
        let bad = MomentFunctional::new(m);
        assert_ne!(pearson_residual(&pd, &t, &bad, 1).unwrap(), Scalar::zero());
    }

    #[test]
    fn recurrence_from_moments_example() {
        let m = vec![
            Scalar::one(),
            Scalar::zero(),
            half_scalar(),
            Scalar::zero(),
            Scalar::from_frac(-1, 4),
        ];
        let rec = recurrence_from_moments(&MomentFunctional::new(m), 2).unwrap();
        assert_eq!(rec.b, vec![Scalar::zero(), Scalar::zero()]);
        assert_eq!(rec.c, vec![half_scalar()]);
        // one more moment level exposes C_2 = -1
        let m = vec![
            Scalar::one(),
            Scalar::zero(),
            half_scalar(),
            Scalar::zero(),
            Scalar::from_frac(-1, 4),
            Scalar::zero(),
        ];
        let rec = recurrence_from_moments(&MomentFunctional::new(m), 3).unwrap();
        assert_eq!(rec.c, vec![half_scalar(), Scalar::from_int(-1)]);
    }

    #[test]
    fn non_regular_functional_detected() {
        let u = MomentFunctional::from_ints(&[1, 0, 0, 0]);
        assert_eq!(recurrence_from_moments(&u, 2), Err(Error::NotRegular(1)));
    }

    #[test]
    fn meixner_round_trip() {
        // forward: build moments from the Meixner-II recurrence via the dual
        // basis of the TTRR polynomials; inverse: recover the recurrence.
        let n_max = 5;
        let mut b = Vec::new();
        let mut c = Vec::new();
        // b1 = 0, b2 = 1/2
        for n in 0..2 * n_max as i64 {
            b.push(Scalar::zero());
            if n >= 1 {
                // C_n = (b1^2+1) n (n + b2 - 1)
                c.push(Scalar::from_rational(
                    rat(n, 1) * (rat(n, 1) - rat(1, 2)),
                ));
            }
        }
        let full = RecurrencePair::new(b.clone(), c.clone());
        let polys = full.build(2 * n_max).unwrap();
        // a_0 is u normalized to m_0 = 1
        let u = dual_basis(&polys, 0, 2 * n_max - 1).unwrap();
        let back = recurrence_from_moments(&u, n_max).unwrap();
        b.truncate(n_max);
        c.truncate(n_max - 1);
        assert_eq!(back, RecurrencePair::new(b, c));
    }

    #[test]
    fn duality_consistency() {
        // act(D_x u, p) = -act(u, D_x p), same without sign for S_x
        let l = linear_lattice();
        let t = OperatorTables::build(&l, 6);
        let u = MomentFunctional::from_ints(&[1, 2, -3, 5, 7, -1, 4]);
        let p = Poly::from_ints(&[2, 0, -1, 3]);
        let du = u.transform(Op::Dx, &t).unwrap();
        assert_eq!(
            du.act(&p).unwrap(),
            -u.act(&t.apply(Op::Dx, &p).unwrap()).unwrap()
        );
        let su = u.transform(Op::Sx, &t).unwrap();
        assert_eq!(
            su.act(&p).unwrap(),
            u.act(&t.apply(Op::Sx, &p).unwrap()).unwrap()
        );
    }
}
