//! Eisenstein polynomials `E(u) ∈ W(k)[u]` with rational-integer coefficients,
//! and the derived data `e`, `c₀ = E(0)/p`, `F = (E − u^e)/p`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith;
use crate::error::{EisensteinDefect, Error, Result};
use crate::galois::{Elem, GaloisRing};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EisensteinPoly {
    p: u64,
    /// Ascending, monic.
    coeffs: Vec<i128>,
}

/// Validates `E = Σ coeffs[i]·u^i` against the Eisenstein criteria for `p`.
pub fn eisenstein_validate(p: u64, coeffs: &[i128]) -> Result<EisensteinPoly> {
    EisensteinPoly::new(p, coeffs)
}

impl EisensteinPoly {
    pub fn new(p: u64, coeffs: &[i128]) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let defect = |d| Err(Error::NotEisenstein(d));
        let Some(&lead) = coeffs.last() else {
            return defect(EisensteinDefect::Empty);
        };
        if lead != 1 {
            return defect(EisensteinDefect::NotMonic);
        }
        if coeffs.len() < 2 {
            return defect(EisensteinDefect::ConstantPolynomial);
        }
        let pi = p as i128;
        let e = coeffs.len() - 1;
        if let Some(i) = (0..e).find(|&i| coeffs[i] % pi != 0) {
            return defect(EisensteinDefect::CoefficientNotDivisible(i));
        }
        if coeffs[0] % (pi * pi) == 0 {
            return defect(EisensteinDefect::ConstantDivisibleByP2);
        }
        Ok(EisensteinPoly { p, coeffs: coeffs.to_vec() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree, i.e. the ramification index.
    pub fn e(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// `E(0)/p` as an integer.
    pub fn c0_int(&self) -> i128 {
        self.coeffs[0] / self.p as i128
    }

    fn check(&self, ring: &GaloisRing) -> Result<()> {
        if ring.p() == self.p {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// `c₀` in `ring` (a unit).
    pub fn c0(&self, ring: &GaloisRing) -> Result<Elem> {
        self.check(ring)?;
        Ok(ring.from_int(self.c0_int()))
    }

    pub fn c0_inverse(&self, ring: &GaloisRing) -> Result<Elem> {
        Ok(ring.inverse(&self.c0(ring)?).expect("c0 is a unit"))
    }

    /// `E` as an exact series over `ring`.
    pub fn series(&self, ring: &Arc<GaloisRing>) -> Result<Series> {
        self.check(ring)?;
        Ok(Series::polynomial(ring, &self.coeffs))
    }

    /// `F = (E − u^e)/p` as an exact series over `ring`.
    pub fn f_series(&self, ring: &Arc<GaloisRing>) -> Result<Series> {
        self.check(ring)?;
        let pi = self.p as i128;
        let low: Vec<i128> = self.coeffs[..self.e()].iter().map(|c| c / pi).collect();
        Ok(Series::polynomial(ring, &low))
    }
}

/// `((u+1)^{p^n} − 1)/((u+1)^{p^{n−1}} − 1) = Σ_{i<p} (u+1)^{i·p^{n−1}}`.
pub fn cyclotomic_eisenstein(p: u64, n: u32) -> Result<EisensteinPoly> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1"));
    }
    let overflow = Error::NotEisenstein(EisensteinDefect::Overflow);
    let step = arith::checked_pow(p, n - 1).ok_or(overflow.clone())? as usize;
    let degree = step.checked_mul(p as usize - 1).ok_or(overflow.clone())?;
    if degree > 4096 {
        return Err(Error::ScaleExceeded);
    }
    // binomial rows of (u+1)^m, built incrementally
    let mut row: Vec<i128> = vec![1];
    let mut total = vec![0i128; degree + 1];
    for i in 0..p as usize {
        if i > 0 {
            for _ in 0..step {
                let mut next = vec![0i128; row.len() + 1];
                for (k, &c) in row.iter().enumerate() {
                    next[k] = next[k].checked_add(c).ok_or(overflow.clone())?;
                    next[k + 1] = next[k + 1].checked_add(c).ok_or(overflow.clone())?;
                }
                row = next;
            }
        }
        for (k, &c) in row.iter().enumerate() {
            total[k] = total[k].checked_add(c).ok_or(overflow.clone())?;
        }
    }
    EisensteinPoly::new(p, &total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldDesc;

    #[test]
    fn validation_examples() {
        let e = eisenstein_validate(3, &[3, 3, 1]).unwrap();
        assert_eq!((e.e(), e.c0_int()), (2, 1));
        let k = Arc::new(GaloisRing::field(&FieldDesc::prime(3).unwrap()));
        assert_eq!(e.f_series(&k).unwrap(), Series::polynomial(&k, &[1, 1]));
        let e4 = eisenstein_validate(3, &[-3, 0, 0, 0, 1]).unwrap();
        assert_eq!((e4.e(), e4.c0_int()), (4, -1));
        assert_eq!(
            eisenstein_validate(3, &[9, 0, 1]),
            Err(Error::NotEisenstein(EisensteinDefect::ConstantDivisibleByP2))
        );
        assert_eq!(
            eisenstein_validate(3, &[3, 1, 1]),
            Err(Error::NotEisenstein(EisensteinDefect::CoefficientNotDivisible(1)))
        );
        assert_eq!(eisenstein_validate(3, &[3, 2]), Err(Error::NotEisenstein(EisensteinDefect::NotMonic)));
        assert_eq!(eisenstein_validate(3, &[]), Err(Error::NotEisenstein(EisensteinDefect::Empty)));
        assert_eq!(eisenstein_validate(4, &[2, 1]), Err(Error::NotPrime(4)));
    }

    #[test]
    fn c0_in_rings() {
        let z9 = GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap();
        let e8 = eisenstein_validate(3, &[-3, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e8.c0(&z9).unwrap(), z9.from_int(8));
        assert_eq!(e8.c0_inverse(&z9).unwrap(), z9.from_int(8));
        let z4 = GaloisRing::new(&FieldDesc::prime(2).unwrap(), 2).unwrap();
        assert_eq!(e8.c0(&z4), Err(Error::RingMismatch));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_eisenstein(3, 1).unwrap().coeffs(), &[3, 3, 1]);
        assert_eq!(cyclotomic_eisenstein(2, 1).unwrap().coeffs(), &[2, 1]);
        assert_eq!(cyclotomic_eisenstein(2, 2).unwrap().coeffs(), &[2, 2, 1]);
        for (p, n) in [(2, 3), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let e = cyclotomic_eisenstein(p, n).unwrap();
            assert_eq!(e.c0_int(), 1);
            assert_eq!(e.e() as u64, (p - 1) * p.pow(n - 1));
        }
    }

    #[test]
    fn cyclotomic_by_division() {
        // independent check: multiply back by (u+1)^{p^{n-1}} − 1
        for (p, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
            let e = cyclotomic_eisenstein(p, n).unwrap();
            let binom = |m: usize| {
                let mut r = vec![1i128];
                for _ in 0..m {
                    let mut nx = vec![0; r.len() + 1];
                    for (k, &c) in r.iter().enumerate() {
                        nx[k] += c;
                        nx[k + 1] += c;
                    }
                    r = nx;
                }
                r
            };
            let mut den = binom(p.pow(n - 1) as usize);
            den[0] -= 1;
            let mut prod = vec![0i128; e.coeffs().len() + den.len() - 1];
            for (i, &a) in e.coeffs().iter().enumerate() {
                for (j, &b) in den.iter().enumerate() {
                    prod[i + j] += a * b;
                }
            }
            let mut num = binom(p.pow(n) as usize);
            num[0] -= 1;
            assert_eq!(prod, num);
        }
    }
}
