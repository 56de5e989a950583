//! Laurent-series parameters for Hopf orders: the `KC_p` monomials, the
//! `n = 1` membership test, the tuple identity `f = A·c₀^{−1}φ(f)`, and the
//! cyclotomic isomorphism check.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::eisenstein::{cyclotomic_eisenstein, EisensteinPoly};
use crate::error::{Error, Result};
use crate::galois::{FieldDesc, GaloisRing};
use crate::kcp2::{Kcp2Module, Kcp2Setting};
use crate::series::{same_ring, Series, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KcpLaurentEntry {
    /// `u^{−j}` over the residue field.
    pub f: Series,
    pub r: u32,
    pub j: u32,
}

/// `{u^{−j} : 0 ≤ j ≤ ⌊e/(p−1)⌋}` with `r = e − (p−1)j`.
pub fn kcp_laurent_set(eis: &EisensteinPoly, k: &Arc<GaloisRing>) -> Vec<KcpLaurentEntry> {
    let e = eis.e() as u32;
    let pm1 = eis.p() as u32 - 1;
    (0..=e / pm1)
        .map(|j| KcpLaurentEntry { f: Series::u_pow(k, -(j as i64)), r: e - pm1 * j, j })
        .collect()
}

/// `f = a·u^j + (higher)` with `j ≤ 0` and `a ∈ (k^×)^{p−1}`.
pub fn check_n1_laurent(f: &Series) -> Result<bool> {
    let v = f.valuation().exact()?;
    if v > 0 {
        return Ok(false);
    }
    f.ring().is_pm1_power(&f.coeff(v))
}

/// `n` Laurent series over `W_n` and an `n×n` matrix over `W_n[[u]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralTuple {
    pub f: Vec<Series>,
    pub a: Vec<Vec<Series>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleVerdict {
    /// Degrees `[lo, hi)` on which every row identity was compared; `hi` is
    /// `None` when all identities hold exactly.
    pub verified_window: (i64, Option<i64>),
    /// `c₀^{−1}E·φ(fᵢ)`, the images `φ(eᵢ)` in the coordinates of `W_n((u))`.
    pub phi_images: Vec<Series>,
}

/// Checks `fᵢ = Σⱼ sᵢⱼ·c₀^{−1}·φ(fⱼ)` for every row, together with
/// `v(sᵢⱼ) ≥ 0` and that not every `fᵢ` lies in `pW_n((u))`.
pub fn verify_general_tuple(t: &GeneralTuple, eis: &EisensteinPoly) -> Result<TupleVerdict> {
    let n = t.f.len();
    let Some(first) = t.f.first() else {
        return Err(Error::DimensionMismatch);
    };
    let ring = first.ring().clone();
    if ring.n() as usize != n || t.a.len() != n || t.a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch);
    }
    if t.f.iter().chain(t.a.iter().flatten()).any(|s| !same_ring(s.ring(), &ring)) {
        return Err(Error::RingMismatch);
    }
    // Some entry must generate W_n((u)). The rank-two tuples put the
    // p-divisible entry first, so this is not pinned to position 1.
    let mut undecided = None;
    let mut generator = false;
    for fi in &t.f {
        match fi.reduce_mod_p().valuation() {
            Valuation::Exact(_) => generator = true,
            Valuation::Infinite => {}
            v @ Valuation::AtLeast(_) => undecided = Some(v.exact().unwrap_err()),
        }
    }
    if !generator {
        return Err(undecided.unwrap_or(Error::F1DivisibleByP));
    }
    for (i, row) in t.a.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            if !s.valuation().at_least(0)? {
                return Err(Error::NegativeValuationEntry { row: i, col: j });
            }
        }
    }
    let c0_inv = eis.c0_inverse(&ring)?;
    let images: Vec<Series> = t.f.iter().map(|fj| fj.phi().scale(c0_inv)).collect();
    let mut lo = i64::MAX;
    let mut hi: Option<i64> = None;
    for (i, row) in t.a.iter().enumerate() {
        let mut rhs = Series::zero(&ring);
        for (s, img) in row.iter().zip(&images) {
            rhs = &rhs + &(s * img);
        }
        let diff = &t.f[i] - &rhs;
        if matches!(diff.valuation(), Valuation::Exact(_)) {
            return Err(Error::IdentityFails { row: i });
        }
        for side in [&t.f[i], &rhs] {
            if let Some((d, _)) = side.leading() {
                lo = lo.min(d);
            }
        }
        if let Some(pr) = diff.precision() {
            hi = Some(hi.map_or(pr, |h: i64| h.min(pr)));
        }
    }
    if lo == i64::MAX {
        lo = hi.unwrap_or(0);
    }
    let big_e = eis.series(&ring)?;
    let phi_images = images.iter().map(|img| img * &big_e).collect();
    Ok(TupleVerdict { verified_window: (lo, hi), phi_images })
}

/// The tuple `(p·u^{−j₁}, u^{−j₂} + p·f)` with the matrix
/// `[[c₀u^{(p−1)j₁}, 0], [−c₀b′u^{(p−1)j₂}, c₀u^{(p−1)j₂}]]`.
pub fn tuple_from_kcp2(setting: &Kcp2Setting, module: &Kcp2Module) -> Result<GeneralTuple> {
    let w = setting.witt2();
    let params = &module.params;
    let p = w.p() as i64;
    let c0 = setting.eisenstein().c0(w)?;
    let (j1, j2) = (params.j1 as i64, params.j2 as i64);
    let s11 = Series::monomial(w, c0, (p - 1) * j1);
    let s22 = Series::monomial(w, c0, (p - 1) * j2);
    let s21 = module.bprime.lift_to(w).scale(w.neg(c0)).shift((p - 1) * j2);
    Ok(GeneralTuple {
        f: vec![setting.alpha_e1(params), setting.alpha_e2(params)],
        a: vec![vec![s11, Series::zero(w)], vec![s21, s22]],
    })
}

/// With `E` the cyclotomic polynomial for `(p, n)` and `t = (u+1)^{p^{n−1}}`,
/// checks `E·φ(x) = x` for `x = (1−t)^{−1}` in `W_n((u))` through `prec`:
/// multiplication by `x` intertwines the trivial Frobenius with `φ_E`.
pub fn verify_cyclotomic_iso(p: u64, n: u32, prec: i64) -> Result<bool> {
    let eis = cyclotomic_eisenstein(p, n)?;
    let w = Arc::new(GaloisRing::new(&FieldDesc::prime(p)?, n)?);
    let step = crate::arith::checked_pow(p, n - 1).ok_or(Error::ScaleExceeded)? as usize;
    let mut t = Series::one(&w);
    let base = Series::polynomial(&w, &[1, 1]);
    for _ in 0..step {
        t = &t * &base;
    }
    let one_minus_t = &Series::one(&w) - &t;
    let x = one_minus_t.laurent_inverse(prec)?;
    let lhs = &x.phi() * &eis.series(&w)?;
    Ok(lhs.agrees_with(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::eisenstein_validate;
    use crate::kcp2::Family;
    use crate::cyclic::CyclicN1;

    fn f3() -> Arc<GaloisRing> {
        Arc::new(GaloisRing::field(&FieldDesc::prime(3).unwrap()))
    }

    #[test]
    fn kcp_sets() {
        let k = f3();
        let e2 = eisenstein_validate(3, &[3, 3, 1]).unwrap();
        let fs: Vec<Series> = kcp_laurent_set(&e2, &k).into_iter().map(|x| x.f).collect();
        assert_eq!(fs, vec![Series::one(&k), Series::u_pow(&k, -1)]);
        let e4 = eisenstein_validate(3, &[-3, 0, 0, 0, 1]).unwrap();
        let rs: Vec<(u32, u32)> = kcp_laurent_set(&e4, &k).into_iter().map(|x| (x.r, x.j)).collect();
        assert_eq!(rs, vec![(4, 0), (2, 1), (0, 2)]);
        let k2 = Arc::new(GaloisRing::field(&FieldDesc::prime(2).unwrap()));
        let e1 = eisenstein_validate(2, &[2, 1]).unwrap();
        assert_eq!(kcp_laurent_set(&e1, &k2).len(), 2);
    }

    #[test]
    fn laurent_set_matches_larson_enumeration() {
        for (p, coeffs) in [(3u64, vec![3i128, 3, 1]), (3, vec![-3, 0, 0, 0, 1]), (2, vec![2, 0, 0, 1]), (5, vec![5, 0, 0, 0, 0, 0, 0, 0, 1])] {
            let eis = eisenstein_validate(p, &coeffs).unwrap();
            let field = FieldDesc::prime(p).unwrap();
            let ctx = CyclicN1::new(&eis, &field).unwrap();
            let set = kcp_laurent_set(&eis, ctx.ring());
            let orders = ctx.enumerate_kcp_orders();
            assert_eq!(set.len(), orders.len());
            for (entry, (form, larson)) in set.iter().zip(&orders) {
                assert_eq!((entry.r, entry.j), (form.r, larson.j));
                assert!(check_n1_laurent(&entry.f).unwrap());
            }
        }
    }

    #[test]
    fn n1_membership() {
        let k = f3();
        assert!(check_n1_laurent(&Series::u_pow(&k, -1)).unwrap());
        assert!(!check_n1_laurent(&Series::from_ints(&k, &[(-1, 2)], None)).unwrap());
        assert!(!check_n1_laurent(&Series::u_pow(&k, 1)).unwrap());
        assert_eq!(check_n1_laurent(&Series::zero(&k)), Err(Error::ZeroInput));
    }

    #[test]
    fn tuple_examples() {
        let k = f3();
        // entry c₀u^{e−(p−1)} for f = u^{−1} needs e = 2(p−1)
        let e4 = eisenstein_validate(3, &[-3, 0, 0, 0, 1]).unwrap();
        let c0 = e4.c0(&k).unwrap();
        let t = GeneralTuple { f: vec![Series::u_pow(&k, -1)], a: vec![vec![Series::monomial(&k, c0, 2)]] };
        let v = verify_general_tuple(&t, &e4).unwrap();
        assert_eq!(v.verified_window, (-1, None));
        let e2 = eisenstein_validate(3, &[3, 3, 1]).unwrap();
        let t = GeneralTuple { f: vec![Series::u_pow(&k, -1)], a: vec![vec![Series::monomial(&k, c0, 0)]] };
        assert_eq!(verify_general_tuple(&t, &e2), Err(Error::IdentityFails { row: 0 }));

        // in general the entry is c₀u^{(p−1)j} for f = u^{−j}
        for j in 0..=2i64 {
            let t = GeneralTuple { f: vec![Series::u_pow(&k, -j)], a: vec![vec![Series::monomial(&k, c0, 2 * j)]] };
            assert!(verify_general_tuple(&t, &e4).is_ok());
        }

        let w = Arc::new(GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap());
        let e8 = eisenstein_validate(3, &[-3, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        let c0 = e8.c0(&w).unwrap();
        let t = GeneralTuple {
            f: vec![Series::monomial(&w, w.from_int(3), -3), Series::u_pow(&w, -1)],
            a: vec![
                vec![Series::monomial(&w, c0, 6), Series::zero(&w)],
                vec![Series::zero(&w), Series::monomial(&w, c0, 2)],
            ],
        };
        let v = verify_general_tuple(&t, &e8).unwrap();
        assert_eq!(v.phi_images.len(), 2);

        let mut bad = t.clone();
        bad.f[1] = Series::monomial(&w, w.from_int(3), -1);
        assert_eq!(verify_general_tuple(&bad, &e8), Err(Error::F1DivisibleByP));
        let zero = GeneralTuple { f: vec![Series::zero(&k)], a: vec![vec![Series::one(&k)]] };
        assert_eq!(verify_general_tuple(&zero, &e4), Err(Error::F1DivisibleByP));
        let mut bad = t.clone();
        bad.a[1][0] = Series::u_pow(&w, -1);
        assert_eq!(verify_general_tuple(&bad, &e8), Err(Error::NegativeValuationEntry { row: 1, col: 0 }));
        let mut bad = t.clone();
        bad.a[1][1] = Series::monomial(&w, c0, 1);
        assert_eq!(verify_general_tuple(&bad, &e8), Err(Error::IdentityFails { row: 1 }));
        let mut bad = t;
        bad.f.pop();
        assert_eq!(verify_general_tuple(&bad, &e8), Err(Error::DimensionMismatch));
    }

    #[test]
    fn kcp2_round_trip() {
        let eis = eisenstein_validate(3, &[-3, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        let s = Kcp2Setting::new(&eis, &FieldDesc::prime(3).unwrap()).unwrap();
        for c in s.enumerate(Family::Monomials { max_m: 4 }).entries {
            let m = s.build_module(&c.params).unwrap();
            let t = tuple_from_kcp2(&s, &m).unwrap();
            let v = verify_general_tuple(&t, &eis).unwrap();
            // φ-images agree with the module's φ(eᵢ) under α
            assert!(s.alpha(&c.params, &m.phi_e1).agrees_with(&v.phi_images[0]));
            assert!(s.alpha(&c.params, &m.phi_e2).agrees_with(&v.phi_images[1]));
        }
    }

    #[test]
    fn cyclotomic_examples() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 1)] {
            assert!(verify_cyclotomic_iso(p, n, 30).unwrap(), "p={p} n={n}");
            assert!(verify_cyclotomic_iso(p, n, 60).unwrap(), "p={p} n={n}");
        }
    }
}
