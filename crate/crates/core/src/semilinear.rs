//! Frobenius-semilinear equations `f·g = φ(g)·h`.
//!
//! Over the residue field the equation is solved degree by degree once the
//! leading coefficient is fixed: writing `g = Σ g_m u^m` with `v(g) = j`, the
//! coefficient of `g_{j+i}` enters the degree-`(v(f)+j+i)` equation through
//! `f_{v(f)}·g_{j+i}` on the left, while on the right `σ(g_m)` only appears in
//! degrees `≥ p·m`, which exceed the current degree for every `m > j` when
//! `i >= 1`. So each step solves a linear equation with the unit `f_{v(f)}`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::galois::{Elem, GaloisRing};
use crate::series::{Series, Valuation};

/// Outcome of the feasibility test, naming the first failed condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feasibility {
    Ok,
    /// `v(f) < v(h)`.
    ValuationOrder,
    /// `v(f) ≢ v(h) (mod p−1)`.
    ValuationCongruence,
    /// The ratio of leading coefficients is not a `(p−1)`-th power.
    ResidueClass,
}

impl Feasibility {
    pub fn is_ok(self) -> bool {
        self == Feasibility::Ok
    }

    pub fn reason_code(self) -> &'static str {
        match self {
            Feasibility::Ok => "OK",
            Feasibility::ValuationOrder => "ValuationOrder",
            Feasibility::ValuationCongruence => "ValuationCongruence",
            Feasibility::ResidueClass => "ResidueClass",
        }
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.reason_code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Absolute precision requested for `g`.
    pub prec: i64,
    /// Leading coefficient of `g`; must be a `(p−1)`-th root of the ratio of
    /// leading coefficients. Defaults to the canonical root.
    pub leading: Option<Elem>,
}

impl SolveOptions {
    pub fn with_prec(prec: i64) -> Self {
        SolveOptions { prec, leading: None }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self::with_prec(20)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub g: Series,
    /// The residual `f·g − φ(g)·h` is known to vanish below this degree;
    /// `None` when the identity holds exactly (then `g` is exact too).
    pub verified_to: Option<i64>,
}

fn require_field(ring: &GaloisRing) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated("series must lie over the residue field"))
    }
}

fn leading(s: &Series) -> Result<(i64, Elem)> {
    let v = s.valuation().exact()?;
    Ok((v, s.coeff(v)))
}

fn check_laurent(f: &Series, h: &Series, order: bool) -> Result<Feasibility> {
    require_field(f.ring())?;
    let ring = f.ring();
    let (vf, lf) = leading(f)?;
    let (vh, lh) = leading(h)?;
    let p = ring.p() as i64;
    if order && vf < vh {
        return Ok(Feasibility::ValuationOrder);
    }
    if (vf - vh).rem_euclid(p - 1) != 0 {
        return Ok(Feasibility::ValuationCongruence);
    }
    let ratio = ring.mul(lf, ring.inverse(&lh).expect("nonzero field element"));
    if !ring.is_pm1_power(&ratio)? {
        return Ok(Feasibility::ResidueClass);
    }
    Ok(Feasibility::Ok)
}

/// Whether `f·g = φ(g)·h` has a nonzero solution `g ∈ k[[u]]`.
pub fn feasible_k(f: &Series, h: &Series) -> Result<Feasibility> {
    check_laurent(f, h, true)
}

/// Solves `f·g = φ(g)·h` in `k[[u]]`.
pub fn solve_k(f: &Series, h: &Series, opts: &SolveOptions) -> Result<Solution> {
    solve_field(f, h, opts, true)
}

/// Like [`solve_k`] but in `k((u))`: `v(f) < v(h)` is allowed and `g` may have
/// negative valuation.
pub fn solve_laurent(f: &Series, h: &Series, opts: &SolveOptions) -> Result<Solution> {
    solve_field(f, h, opts, false)
}

fn solve_field(f: &Series, h: &Series, opts: &SolveOptions, order: bool) -> Result<Solution> {
    let verdict = check_laurent(f, h, order)?;
    if !verdict.is_ok() {
        return Err(Error::Infeasible(verdict));
    }
    let ring = f.ring().clone();
    let r = &*ring;
    let p = r.p() as i64;
    let (vf, lf) = leading(f)?;
    let (vh, lh) = leading(h)?;
    let v = vf - vh;
    let j = v / (p - 1);

    let ratio = r.mul(lf, r.inverse(&lh).expect("unit"));
    let g0 = match opts.leading {
        Some(c) if r.pow(c, (p - 1) as u64) == ratio => c,
        Some(_) => return Err(Error::PreconditionViolated("leading coefficient is not a root of the leading ratio")),
        None => r.pm1_root(&ratio)?,
    };

    // f and h shifted down by v(h): F has valuation v, H valuation 0.
    let f_rel = |i: i64| f.coeff(vf + i);
    let h_rel = |i: i64| h.coeff(vh + i);
    let known_f = f.precision().map_or(i64::MAX, |pf| pf - vf);
    let known_h = h.precision().map_or(i64::MAX, |ph| ph - vh);
    let count = known_f.min(known_h).min(opts.prec.saturating_sub(j)).max(0);

    let lf_inv = r.inverse(&lf).expect("unit");
    let mut g: Vec<Elem> = Vec::with_capacity(count as usize);
    for i in 0..count {
        if i == 0 {
            g.push(g0);
            continue;
        }
        // the σ-terms only reach back to g_{j + i/p}, already known
        let mut rhs = Elem::ZERO;
        let mut k = 0;
        while p * k <= i {
            debug_assert!(k < i);
            rhs = r.add(rhs, r.mul(r.frobenius(&g[k as usize]), h_rel(i - p * k)));
            k += 1;
        }
        for a in 1..=i {
            rhs = r.sub(rhs, r.mul(f_rel(a), g[(i - a) as usize]));
        }
        g.push(r.mul(lf_inv, rhs));
    }
    let terms = g.into_iter().enumerate().map(|(i, c)| (j + i as i64, c));
    finish(f, h, Series::new(&ring, terms, Some(j + count)))
}

/// Checks the residual, promoting `g` to an exact solution when `f`, `h` are
/// exact and the truncated `g` already satisfies the equation identically.
fn finish(f: &Series, h: &Series, g: Series) -> Result<Solution> {
    let ring = g.ring().clone();
    if f.is_exact() && h.is_exact() {
        let exact = Series::new(&ring, g.terms(), None);
        let residual = &(f * &exact) - &(&exact.phi() * h);
        if residual.valuation() == Valuation::Infinite {
            return Ok(Solution { g: exact, verified_to: None });
        }
    }
    let residual = &(f * &g) - &(&g.phi() * h);
    assert!(
        !matches!(residual.valuation(), Valuation::Exact(_)),
        "semilinear recursion produced a nonzero residual"
    );
    Ok(Solution { g, verified_to: residual.precision() })
}

/// For a unit `f ∈ W_n[[u]]` with `f(0) = b`, the unit `g` with `g(0) = 1` and
/// `f·g = φ(g)·b`, i.e. the change of basis from `φ_f` to `φ_b`.
pub fn solve_w_unit(f: &Series, b: &Elem, opts: &SolveOptions) -> Result<Solution> {
    let ring: Arc<GaloisRing> = f.ring().clone();
    let r = &*ring;
    if !r.is_unit(b) {
        return Err(Error::PreconditionViolated("b must be a unit"));
    }
    match f.leading() {
        Some((d, _)) if d < 0 => return Err(Error::PreconditionViolated("f must be a power series")),
        _ => {}
    }
    if f.precision().is_some_and(|pf| pf <= 0) {
        return Err(Error::InsufficientPrecision { needed: 1, available: f.precision().unwrap_or(0) });
    }
    if f.coeff(0) != *b {
        return Err(Error::PreconditionViolated("f(0) must equal b"));
    }
    let count = f.precision().unwrap_or(i64::MAX).min(opts.prec).max(0);
    let b_inv = r.inverse(b).expect("unit");
    let p = r.p() as i64;
    let mut g: Vec<Elem> = Vec::with_capacity(count as usize);
    for i in 0..count {
        if i == 0 {
            g.push(r.one());
            continue;
        }
        let mut rhs = Elem::ZERO;
        if i % p == 0 {
            rhs = r.mul(*b, r.frobenius(&g[(i / p) as usize]));
        }
        for a in 1..=i {
            rhs = r.sub(rhs, r.mul(f.coeff(a), g[(i - a) as usize]));
        }
        g.push(r.mul(b_inv, rhs));
    }
    let terms = g.into_iter().enumerate().map(|(i, c)| (i as i64, c));
    let g = Series::new(&ring, terms, Some(count));
    finish(f, &Series::constant(&ring, *b), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldDesc;
    use proptest::prelude::*;

    fn k(p: u64, d: usize) -> Arc<GaloisRing> {
        Arc::new(GaloisRing::field(&FieldDesc::standard(p, d).unwrap()))
    }

    fn z9() -> Arc<GaloisRing> {
        Arc::new(GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap())
    }

    /// Independent oracle: brute-force the coefficients of g one degree at a
    /// time by trying every field element and keeping the one that makes the
    /// truncated residual vanish through the next degree.
    fn brute_force(f: &Series, h: &Series, g0: Elem, j: i64, n: i64) -> Vec<Elem> {
        let ring = f.ring().clone();
        let mut coeffs = alloc::vec![g0];
        let vf = f.valuation().exact().unwrap();
        for i in 1..n {
            let hits: Vec<Elem> = ring
                .elements()
                .filter(|&c| {
                    let mut trial = coeffs.clone();
                    trial.push(c);
                    let g = Series::new(&ring, trial.iter().enumerate().map(|(m, &x)| (j + m as i64, x)), Some(j + i + 1));
                    let res = &(f * &g) - &(&g.phi() * h);
                    // all degrees up to vf + j + i must vanish
                    let ok = res.terms().all(|(d, _)| d > vf + j + i);
                    ok
                })
                .collect();
            assert_eq!(hits.len(), 1, "degree {i} should be uniquely determined");
            coeffs.push(hits[0]);
        }
        coeffs
    }

    #[test]
    fn feasibility_examples() {
        let f3 = k(3, 1);
        let s = |t: &[(i64, i128)]| Series::from_ints(&f3, t, None);
        assert_eq!(feasible_k(&s(&[(1, 1)]), &s(&[(0, 1)])), Ok(Feasibility::ValuationCongruence));
        assert_eq!(feasible_k(&s(&[(0, 1)]), &s(&[(1, 1)])), Ok(Feasibility::ValuationOrder));
        assert_eq!(feasible_k(&s(&[(2, 1)]), &s(&[(0, 1)])), Ok(Feasibility::Ok));
        assert_eq!(feasible_k(&s(&[(2, 2)]), &s(&[(0, 1)])), Ok(Feasibility::ResidueClass));
        assert_eq!(feasible_k(&Series::zero(&f3), &s(&[(0, 1)])), Err(Error::ZeroInput));
        assert!(matches!(
            feasible_k(&Series::zero_to(&f3, 4), &s(&[(0, 1)])),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let f3 = k(3, 1);
        let one = Series::one(&f3);
        let sol = solve_k(&one, &one, &SolveOptions::default()).unwrap();
        assert_eq!(sol.g, one);
        assert_eq!(sol.verified_to, None);

        let u2 = Series::u_pow(&f3, 2);
        assert_eq!(solve_k(&u2, &one, &SolveOptions::default()).unwrap().g, Series::u_pow(&f3, 1));

        let f = Series::polynomial(&f3, &[1, 1]);
        let sol = solve_k(&f, &one, &SolveOptions::with_prec(5)).unwrap();
        assert_eq!(sol.g, Series::polynomial(&f3, &[1, 2, 1, 1, 2]).truncate(5));
        assert_eq!(sol.verified_to, Some(5));

        let infeasible = solve_k(&Series::u_pow(&f3, 1), &one, &SolveOptions::default());
        assert_eq!(infeasible, Err(Error::Infeasible(Feasibility::ValuationCongruence)));
    }

    #[test]
    fn laurent_examples() {
        let f3 = k(3, 1);
        let one = Series::one(&f3);
        let u2 = Series::u_pow(&f3, 2);
        let sol = solve_laurent(&one, &u2, &SolveOptions::default()).unwrap();
        assert_eq!(sol.g.valuation(), Valuation::Exact(-1));
        assert_eq!(sol.g, Series::u_pow(&f3, -1));
        let f = Series::polynomial(&f3, &[2, 1, 1]);
        assert_eq!(solve_laurent(&f, &f, &SolveOptions::default()).unwrap().g, one);
        assert_eq!(
            solve_laurent(&one, &Series::u_pow(&f3, 1), &SolveOptions::default()),
            Err(Error::Infeasible(Feasibility::ValuationCongruence))
        );
    }

    #[test]
    fn w_unit_examples() {
        let z = z9();
        let one = Series::one(&z);
        assert_eq!(solve_w_unit(&one, &z.one(), &SolveOptions::default()).unwrap().g, one);
        let f = Series::polynomial(&z, &[1, 3]);
        let sol = solve_w_unit(&f, &z.one(), &SolveOptions::with_prec(5)).unwrap();
        assert_eq!(sol.g, Series::polynomial(&z, &[1, 6, 0, 6]).truncate(5));
        let f = Series::polynomial(&z, &[2, 1]);
        let sol = solve_w_unit(&f, &z.from_int(2), &SolveOptions::with_prec(2)).unwrap();
        assert_eq!(sol.g, Series::polynomial(&z, &[1, 4]).truncate(2));
        assert!(matches!(
            solve_w_unit(&f, &z.one(), &SolveOptions::default()),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            solve_w_unit(&Series::polynomial(&z, &[3, 1]), &z.from_int(3), &SolveOptions::default()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn leading_override_and_oracle() {
        let f9 = k(3, 2);
        let y = f9.generator();
        // f = y^2 u^2 (1 + u + y u^3), h = 1 + y u
        let f = Series::new(&f9, [(2, f9.pow(y, 2)), (3, f9.pow(y, 2)), (5, f9.pow(y, 3))], None);
        let h = Series::new(&f9, [(0, f9.one()), (1, y)], None);
        for root in f9.pm1_roots(&f9.pow(y, 2)).unwrap() {
            let opts = SolveOptions { prec: 9, leading: Some(root) };
            let sol = solve_k(&f, &h, &opts).unwrap();
            let oracle = brute_force(&f, &h, root, 1, 8);
            let got: Vec<Elem> = (1..9).map(|d| sol.g.coeff(d)).collect();
            assert_eq!(got, oracle);
        }
        let bad = SolveOptions { prec: 9, leading: Some(f9.one()) };
        assert!(solve_k(&f, &h, &bad).is_err());
    }

    fn field_series(ring: &Arc<GaloisRing>, v: i64, lead: u64, tail: &[u64], prec: Option<i64>) -> Series {
        let d = ring.d();
        let elem = |x: u64| {
            let mut c = [0i128; 4];
            let mut x = x;
            for slot in c.iter_mut().take(d) {
                *slot = (x % ring.p()) as i128;
                x /= ring.p();
            }
            ring.from_coords(&c[..d]).unwrap()
        };
        let mut terms = alloc::vec![(v, elem(lead))];
        terms.extend(tail.iter().enumerate().map(|(i, &x)| (v + 1 + i as i64, elem(x))));
        Series::new(ring, terms, prec)
    }

    proptest! {
        #[test]
        fn substitution_and_valuation_law(
            d in 1usize..3,
            vh in 0i64..4,
            jmul in 0i64..4,
            lf in 1u64..9, lh in 1u64..9,
            tf in prop::collection::vec(0u64..9, 0..10),
            th in prop::collection::vec(0u64..9, 0..10),
            exact in any::<bool>(),
        ) {
            let ring = k(3, d);
            let q = ring.q();
            let (lf, lh) = (1 + lf % (q - 1), 1 + lh % (q - 1));
            let prec = if exact { None } else { Some(30) };
            let f = field_series(&ring, vh + 2 * jmul, lf, &tf, prec);
            let h = field_series(&ring, vh, lh, &th, prec);
            match solve_k(&f, &h, &SolveOptions::with_prec(25)) {
                Ok(sol) => {
                    prop_assert_eq!(sol.g.valuation(), Valuation::Exact(jmul));
                    let res = &(&f * &sol.g) - &(&sol.g.phi() * &h);
                    prop_assert!(!matches!(res.valuation(), Valuation::Exact(_)));
                }
                Err(e) => prop_assert_eq!(e, Error::Infeasible(Feasibility::ResidueClass)),
            }
        }

        #[test]
        fn uniqueness_across_precisions(
            tf in prop::collection::vec(0u64..3, 0..8),
            th in prop::collection::vec(0u64..3, 0..8),
        ) {
            let ring = k(3, 1);
            let f = field_series(&ring, 2, 1, &tf, None);
            let h = field_series(&ring, 0, 1, &th, None);
            let lo = solve_k(&f, &h, &SolveOptions::with_prec(10)).unwrap();
            let hi = solve_k(&f, &h, &SolveOptions::with_prec(30)).unwrap();
            prop_assert!(hi.g.agrees_with(&lo.g));
        }

        #[test]
        fn units_give_units(
            tf in prop::collection::vec(0u64..3, 0..8),
            th in prop::collection::vec(0u64..3, 0..8),
            lf in 1u64..3,
        ) {
            let ring = k(3, 1);
            // lead ratio must be a square in F_3, so take lf = lh
            let f = field_series(&ring, 0, lf, &tf, None);
            let h = field_series(&ring, 0, lf, &th, None);
            let sol = solve_k(&f, &h, &SolveOptions::with_prec(20)).unwrap();
            prop_assert_eq!(sol.g.valuation(), Valuation::Exact(0));
        }

        #[test]
        fn w_unit_substitution(tail in prop::collection::vec(0i128..9, 0..8), b in prop::sample::select(alloc::vec![1i128, 2, 4, 5, 7, 8])) {
            let z = z9();
            let mut coeffs = alloc::vec![b];
            coeffs.extend(tail);
            let f = Series::polynomial(&z, &coeffs);
            let sol = solve_w_unit(&f, &z.from_int(b), &SolveOptions::with_prec(15)).unwrap();
            let res = &(&f * &sol.g) - (&sol.g.phi().scale(z.from_int(b)));
            prop_assert!(!matches!(res.valuation(), Valuation::Exact(_)));
            prop_assert_eq!(sol.g.coeff(0), z.one());
        }
    }
}
