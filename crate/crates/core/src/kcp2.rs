//! Rank-two Breuil-Kisin modules `𝔐 = 𝔖₂e₁ + 𝔖₂e₂` with `pe₁ = 0` and
//! `pe₂ = u^{j₁−j₂}e₁`, built from `(j₁, j₂, f)` with `f ∈ k((u))`.
//!
//! Elements are kept in the normal form `a·e₁ + [b]·e₂` with `a, b ∈ k((u))`
//! and `[·]` the coefficientwise Teichmüller lift; any multiple of `p` in the
//! `e₂`-coefficient is moved onto `e₁` through the relation. The embedding
//! `α: 𝔐[1/u] → W₂((u))` sends `e₁ ↦ p·u^{−j₁}` and `e₂ ↦ u^{−j₂} + p·f`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::eisenstein::EisensteinPoly;
use crate::error::{Error, Result};
use crate::galois::{Elem, FieldDesc, GaloisRing};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kcp2Params {
    pub j1: u32,
    pub j2: u32,
    /// Over the residue field.
    pub f: Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conditions {
    /// `v(D) ≥ e − (p−1)(j₁+j₂)` for `D = u^{e+j₁}φ(f) − u^{e+j₁−(p−1)j₂}f`.
    pub cond1: bool,
    /// `v(u^{j₁−pj₂}F̄ + D) ≥ 0`.
    pub cond2: bool,
}

impl Conditions {
    pub fn both(&self) -> bool {
        self.cond1 && self.cond2
    }
}

/// `a·e₁ + [b]·e₂`, both coordinates over the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModElem {
    pub a: Series,
    pub b: Series,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kcp2Module {
    pub params: Kcp2Params,
    pub phi_e1: ModElem,
    pub phi_e2: ModElem,
    /// `D = u^{e−(p−1)j₁}·b′`.
    pub d: Series,
    pub bprime: Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RemarkVerdict {
    /// `e − (p−1)(j₁+j₂) ≥ 0`, so `cond2 ⟺ j₁ ≥ p·j₂`; carries that value.
    Applicable(bool),
    NotApplicable,
}

/// When `e − (p−1)(j₁+j₂) ≥ 0`, the first condition already forces
/// `v(D) ≥ 0`, and `F̄` is a unit, so the second condition reduces to
/// `j₁ ≥ p·j₂`.
pub fn remark_shortcut(e: u32, p: u64, j1: u32, j2: u32) -> RemarkVerdict {
    let slack = e as i64 - (p as i64 - 1) * (j1 as i64 + j2 as i64);
    if slack >= 0 {
        RemarkVerdict::Applicable(j1 as u64 >= p * j2 as u64)
    } else {
        RemarkVerdict::NotApplicable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `0` and `a·u^{−m}` for `0 ≤ m ≤ max_m`, `a ∈ k^×`.
    Monomials { max_m: u32 },
    /// The monomials plus `a·u^{−m} + a′·u^{−m′}` for `m < m′ ≤ max_m`,
    /// stopping after `budget` candidates per `(j₁, j₂)`.
    TwoTerm { max_m: u32, budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kcp2Candidate {
    pub params: Kcp2Params,
    pub conditions: Conditions,
    pub j1_ge_pj2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kcp2Enumeration {
    pub entries: Vec<Kcp2Candidate>,
    /// The two-term budget cut the sweep short for some `(j₁, j₂)`.
    pub truncated: bool,
}

/// Fixed data for a given `E` and residue field.
#[derive(Clone, Debug)]
pub struct Kcp2Setting {
    k: Arc<GaloisRing>,
    w: Arc<GaloisRing>,
    eis: EisensteinPoly,
    c0: Elem,
    c0_inv: Elem,
    c0_bar: Elem,
    c0_inv_bar: Elem,
    /// `F mod p`.
    f_bar: Series,
    /// `E` over `W₂`.
    big_e: Series,
}

impl Kcp2Setting {
    pub fn new(eis: &EisensteinPoly, field: &FieldDesc) -> Result<Self> {
        let k = Arc::new(GaloisRing::field(field));
        let w = Arc::new(GaloisRing::new(field, 2)?);
        let c0 = eis.c0(&w)?;
        let c0_inv = eis.c0_inverse(&w)?;
        Ok(Kcp2Setting {
            c0_bar: eis.c0(&k)?,
            c0_inv_bar: eis.c0_inverse(&k)?,
            f_bar: eis.f_series(&k)?,
            big_e: eis.series(&w)?,
            k,
            w,
            eis: eis.clone(),
            c0,
            c0_inv,
        })
    }

    pub fn residue_field(&self) -> &Arc<GaloisRing> {
        &self.k
    }

    pub fn witt2(&self) -> &Arc<GaloisRing> {
        &self.w
    }

    pub fn eisenstein(&self) -> &EisensteinPoly {
        &self.eis
    }

    fn e(&self) -> i64 {
        self.eis.e() as i64
    }

    fn p(&self) -> i64 {
        self.k.p() as i64
    }

    /// `⌊e/(p−1)⌋`, the largest admissible `j₁`.
    pub fn max_j(&self) -> u32 {
        (self.e() / (self.p() - 1)) as u32
    }

    fn validate(&self, params: &Kcp2Params) -> Result<()> {
        if params.j2 >= params.j1 || params.j1 > self.max_j() {
            return Err(Error::InvalidParameters("need 0 ≤ j2 < j1 ≤ e/(p−1)"));
        }
        if !crate::series::same_ring(params.f.ring(), &self.k) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// `u^{e+j₁}φ(f) − u^{e+j₁−(p−1)j₂}f`.
    fn d_series(&self, params: &Kcp2Params) -> Series {
        let (j1, j2) = (params.j1 as i64, params.j2 as i64);
        let f = &params.f;
        &f.phi().shift(self.e() + j1) - &f.shift(self.e() + j1 - (self.p() - 1) * j2)
    }

    pub fn check_conditions(&self, params: &Kcp2Params) -> Result<Conditions> {
        self.validate(params)?;
        let (j1, j2) = (params.j1 as i64, params.j2 as i64);
        let d = self.d_series(params);
        let cond1 = d.valuation().at_least(self.e() - (self.p() - 1) * (j1 + j2))?;
        let second = &self.f_bar.shift(j1 - self.p() * j2) + &d;
        let cond2 = second.valuation().at_least(0)?;
        Ok(Conditions { cond1, cond2 })
    }

    pub fn zero(&self) -> ModElem {
        ModElem { a: Series::zero(&self.k), b: Series::zero(&self.k) }
    }

    pub fn e1(&self) -> ModElem {
        ModElem { a: Series::one(&self.k), b: Series::zero(&self.k) }
    }

    pub fn e2(&self) -> ModElem {
        ModElem { a: Series::zero(&self.k), b: Series::one(&self.k) }
    }

    /// Normal form of `a·e₁ + B·e₂` for `a ∈ k((u))`, `B ∈ W₂((u))`: with
    /// `b = B mod p` and `B = [b] + p·y`, the result is `(a + y·u^{j₁−j₂}, b)`.
    pub fn normalize(&self, params: &Kcp2Params, a: &Series, big_b: &Series) -> ModElem {
        let b = big_b.reduce_to(&self.k);
        let rest = big_b - &b.teichmuller_lift(&self.w);
        let y = rest.divide_by_p(&self.k).expect("B − [B mod p] is divisible by p");
        let shift = params.j1 as i64 - params.j2 as i64;
        ModElem { a: a + &y.shift(shift), b }
    }

    pub fn add(&self, params: &Kcp2Params, x: &ModElem, y: &ModElem) -> ModElem {
        let big_b = &x.b.teichmuller_lift(&self.w) + &y.b.teichmuller_lift(&self.w);
        self.normalize(params, &(&x.a + &y.a), &big_b)
    }

    /// `s·x` for `s ∈ W₂((u))`.
    pub fn scalar_mul(&self, params: &Kcp2Params, s: &Series, x: &ModElem) -> ModElem {
        let a = &s.reduce_to(&self.k) * &x.a;
        let big_b = s * &x.b.teichmuller_lift(&self.w);
        self.normalize(params, &a, &big_b)
    }

    /// Both coordinates known to have valuation `≥ 0`.
    pub fn is_integral(&self, x: &ModElem) -> Result<bool> {
        Ok(x.a.valuation().at_least(0)? && x.b.valuation().at_least(0)?)
    }

    /// Coordinatewise agreement through the known precision.
    pub fn agrees(&self, x: &ModElem, y: &ModElem) -> bool {
        x.a.agrees_with(&y.a) && x.b.agrees_with(&y.b)
    }

    pub fn alpha_e1(&self, params: &Kcp2Params) -> Series {
        Series::monomial(&self.w, self.w.from_int(self.p() as i128), -(params.j1 as i64))
    }

    pub fn alpha_e2(&self, params: &Kcp2Params) -> Series {
        let pf = params.f.lift_to(&self.w).scale(self.w.from_int(self.p() as i128));
        &Series::u_pow(&self.w, -(params.j2 as i64)) + &pf
    }

    /// `α(a·e₁ + [b]·e₂)` for given images of `e₁`, `e₂`.
    pub fn alpha_with(&self, x: &ModElem, alpha1: &Series, alpha2: &Series) -> Series {
        &(&x.a.teichmuller_lift(&self.w) * alpha1) + &(&x.b.teichmuller_lift(&self.w) * alpha2)
    }

    pub fn alpha(&self, params: &Kcp2Params, x: &ModElem) -> Series {
        self.alpha_with(x, &self.alpha_e1(params), &self.alpha_e2(params))
    }

    /// Inverse of `α`: the normal-form coordinates of `x ∈ W₂((u))`.
    /// `b = (x mod p)·u^{j₂}`, then `x − [b]·α(e₂) = p·z` and `a = z·u^{j₁}`.
    pub fn coordinates(&self, params: &Kcp2Params, x: &Series) -> Result<ModElem> {
        self.validate(params)?;
        if !crate::series::same_ring(x.ring(), &self.w) {
            return Err(Error::RingMismatch);
        }
        let b = x.reduce_to(&self.k).shift(params.j2 as i64);
        let rest = x - &(&b.teichmuller_lift(&self.w) * &self.alpha_e2(params));
        let z = rest.divide_by_p(&self.k).expect("x − [b]α(e₂) is divisible by p");
        Ok(ModElem { a: z.shift(params.j1 as i64), b })
    }

    /// Whether `x ∈ W₂((u))` lies in `α(𝔐)`.
    pub fn contains(&self, params: &Kcp2Params, x: &Series) -> Result<bool> {
        let m = self.coordinates(params, x)?;
        self.is_integral(&m)
    }

    pub fn build_module(&self, params: &Kcp2Params) -> Result<Kcp2Module> {
        let conditions = self.check_conditions(params)?;
        if !conditions.both() {
            return Err(Error::ConditionsFailed { cond1: conditions.cond1, cond2: conditions.cond2 });
        }
        let (e, p) = (self.e(), self.p());
        let (j1, j2) = (params.j1 as i64, params.j2 as i64);
        let k = &self.k;
        let phi_e1 = ModElem { a: Series::monomial(k, self.c0_inv_bar, e - (p - 1) * j1), b: Series::zero(k) };
        let d = self.d_series(params);
        let big_b = self.big_e.shift(-(p - 1) * j2).scale(self.c0_inv);
        let phi_e2 = self.normalize(params, &d.scale(self.c0_inv_bar), &big_b);
        let bprime = d.shift(-(e - (p - 1) * j1));
        Ok(Kcp2Module { params: params.clone(), phi_e1, phi_e2, d, bprime })
    }

    /// The Breuil-Kisin identities, as normal-form equalities:
    /// `φ(e₁), φ(e₂) ∈ 𝔐`, `E·e₁ = c₀u^{(p−1)j₁}·φ(e₁)`, and
    /// `E·e₂ = x·φ(e₁) + c₀u^{(p−1)j₂}·φ(e₂)` with `x = −c₀·b′·u^{(p−1)j₂}`
    /// integral.
    pub fn verify_bk(&self, module: &Kcp2Module) -> Result<bool> {
        let params = &module.params;
        let p = self.p();
        let (j1, j2) = (params.j1 as i64, params.j2 as i64);
        if !self.is_integral(&module.phi_e1)? || !self.is_integral(&module.phi_e2)? {
            return Ok(false);
        }
        let lhs1 = self.scalar_mul(params, &self.big_e, &self.e1());
        let rhs1 = self.scalar_mul(params, &Series::monomial(&self.w, self.c0, (p - 1) * j1), &module.phi_e1);
        if !self.agrees(&lhs1, &rhs1) {
            return Ok(false);
        }
        let x = module.bprime.scale(self.k.neg(self.c0_bar)).shift((p - 1) * j2);
        if !x.valuation().at_least(0)? {
            return Ok(false);
        }
        let lhs2 = self.scalar_mul(params, &self.big_e, &self.e2());
        let t1 = self.scalar_mul(params, &x.lift_to(&self.w), &module.phi_e1);
        let t2 = self.scalar_mul(params, &Series::monomial(&self.w, self.c0, (p - 1) * j2), &module.phi_e2);
        Ok(self.agrees(&lhs2, &self.add(params, &t1, &t2)))
    }

    /// `α(φ(eᵢ)) = c₀^{−1}E·φ(α(eᵢ))` in `W₂((u))` for `i = 1, 2`.
    pub fn generic_fiber_witness(&self, module: &Kcp2Module) -> Result<bool> {
        let params = &module.params;
        self.generic_fiber_witness_with(module, &self.alpha_e1(params), &self.alpha_e2(params))
    }

    pub fn generic_fiber_witness_with(&self, module: &Kcp2Module, alpha1: &Series, alpha2: &Series) -> Result<bool> {
        let phi0 = |x: &Series| (&x.phi() * &self.big_e).scale(self.c0_inv);
        let ok1 = self.alpha_with(&module.phi_e1, alpha1, alpha2).agrees_with(&phi0(alpha1));
        let ok2 = self.alpha_with(&module.phi_e2, alpha1, alpha2).agrees_with(&phi0(alpha2));
        Ok(ok1 && ok2)
    }

    fn family_members(&self, family: Family) -> (Vec<Series>, bool) {
        let k = &self.k;
        let units: Vec<Elem> = k.units().collect();
        let mut out = alloc::vec![Series::zero(k)];
        let max_m = match family {
            Family::Monomials { max_m } | Family::TwoTerm { max_m, .. } => max_m as i64,
        };
        for m in 0..=max_m {
            for &a in &units {
                out.push(Series::monomial(k, a, -m));
            }
        }
        let mut truncated = false;
        if let Family::TwoTerm { budget, .. } = family {
            'outer: for m in 0..=max_m {
                for m2 in m + 1..=max_m {
                    for &a in &units {
                        for &a2 in &units {
                            if out.len() >= budget {
                                truncated = true;
                                break 'outer;
                            }
                            out.push(Series::new(k, [(-m2, a2), (-m, a)], None));
                        }
                    }
                }
            }
        }
        (out, truncated)
    }

    /// All `(j₁, j₂, f)` over the admissible range and the family that pass
    /// both conditions, ordered by `(j₁, j₂)` and then family order.
    pub fn enumerate(&self, family: Family) -> Kcp2Enumeration {
        let (members, truncated) = self.family_members(family);
        let p = self.k.p() as u32;
        let mut entries = Vec::new();
        for j1 in 1..=self.max_j() {
            for j2 in 0..j1 {
                for f in &members {
                    let params = Kcp2Params { j1, j2, f: f.clone() };
                    // exact inputs: valuations are always decided
                    let conditions = self.check_conditions(&params).expect("exact family member");
                    if conditions.both() {
                        entries.push(Kcp2Candidate { params, conditions, j1_ge_pj2: j1 >= p * j2 });
                    }
                }
            }
        }
        Kcp2Enumeration { entries, truncated }
    }
}
