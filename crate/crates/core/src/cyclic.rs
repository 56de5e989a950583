//! Cyclic Breuil-Kisin modules `(𝔖_n e₁, φ(e₁) = f e₁)`.
//!
//! For `n = 1` every such module is isomorphic to one with `f = b·u^r`; for
//! `n ≥ 2` the reduction of `f` has valuation `0` or `e`, giving `f ~ b` or
//! `f ~ b·E`. The shapes are called [`CyclicShape::UnitType`] and
//! [`CyclicShape::EUnitType`] here rather than by group-scheme type.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::eisenstein::EisensteinPoly;
use crate::error::{Error, Result};
use crate::galois::{Elem, FieldDesc, GaloisRing};
use crate::semilinear::{solve_k, solve_w_unit, Solution, SolveOptions};
use crate::series::{Series, Valuation};

/// `φ(e₁) = b·u^r·e₁` over the residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicN1Form {
    pub b: Elem,
    pub r: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CyclicShape {
    /// `φ(e₁) = b·e₁`.
    UnitType,
    /// `φ(e₁) = b·E·e₁`.
    EUnitType,
}

impl fmt::Display for CyclicShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CyclicShape::UnitType => "UnitType",
            CyclicShape::EUnitType => "EUnitType",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicNForm {
    pub shape: CyclicShape,
    /// A unit of `W_n`.
    pub b: Elem,
}

/// The Breuil module `M(r̃, a)` attached to an `n = 1` form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BreuilLabel {
    pub r_tilde: u32,
    pub a: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderName {
    /// The label `M(0, 1)`: the group ring order itself.
    RCp,
    /// The form `(1, 0)`.
    DualRCp,
    Other,
}

impl fmt::Display for OrderName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderName::RCp => "RC_p",
            OrderName::DualRCp => "(RC_p)*",
            OrderName::Other => "other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BreuilResult {
    pub label: BreuilLabel,
    pub name: OrderName,
    /// For the dual form, the value `c₀^{−p}` that is sometimes printed in
    /// place of the formula value `c₀^p`. Both are reported; the label uses
    /// the formula.
    pub printed_alternative: Option<Elem>,
}

/// Larson order parameter `j = (e − r)/(p − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LarsonParam {
    pub j: u32,
}

impl LarsonParam {
    pub fn presentation(&self) -> String {
        format!("R[(σ−1)/π^{}]", self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Containment {
    LeftInRight,
    RightInLeft,
    Equal,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenericRelation {
    pub generically_iso: bool,
    pub containment: Containment,
}

/// Two `n = 1` forms have isomorphic generic fibers iff `r ≡ r′ (mod p−1)`
/// (the accompanying condition on `b/b′` holds for all nonzero `b, b′`). In
/// that case the first sits inside the second iff `r ≥ r′`.
pub fn generic_relation_n1(p: u64, m: &CyclicN1Form, m2: &CyclicN1Form) -> GenericRelation {
    let iso = (m.r as i64 - m2.r as i64).rem_euclid(p as i64 - 1) == 0;
    let containment = match (iso, m.r.cmp(&m2.r)) {
        (false, _) => Containment::None,
        (true, core::cmp::Ordering::Equal) => Containment::Equal,
        (true, core::cmp::Ordering::Greater) => Containment::LeftInRight,
        (true, core::cmp::Ordering::Less) => Containment::RightInLeft,
    };
    GenericRelation { generically_iso: iso, containment }
}

/// `n = 1` classification context: residue field, `E`, and `c₀ mod p`.
#[derive(Clone, Debug)]
pub struct CyclicN1 {
    k: Arc<GaloisRing>,
    eis: EisensteinPoly,
    c0: Elem,
}

impl CyclicN1 {
    pub fn new(eis: &EisensteinPoly, field: &FieldDesc) -> Result<Self> {
        let k = Arc::new(GaloisRing::field(field));
        let c0 = eis.c0(&k)?;
        Ok(CyclicN1 { k, eis: eis.clone(), c0 })
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.k
    }

    pub fn eisenstein(&self) -> &EisensteinPoly {
        &self.eis
    }

    pub fn c0(&self) -> Elem {
        self.c0
    }

    /// Writes `f = u^r·h` and returns `(h(0), r)` together with the unit `g`
    /// satisfying `h·g = φ(g)·h(0)`, so that `e₁ ↦ g·e₁` intertwines `φ_f` with
    /// `φ_{bu^r}`.
    pub fn normalize(&self, f: &Series, opts: &SolveOptions) -> Result<(CyclicN1Form, Solution)> {
        if !crate::series::same_ring(f.ring(), &self.k) {
            return Err(Error::RingMismatch);
        }
        let r = f.valuation().exact()?;
        if r < 0 {
            return Err(Error::PreconditionViolated("f must be a power series"));
        }
        if r > self.eis.e() as i64 {
            return Err(Error::NotAFactor);
        }
        let h = f.shift(-r);
        let b = h.coeff(0);
        let sol = solve_k(&h, &Series::constant(&self.k, b), opts)?;
        Ok((CyclicN1Form { b, r: r as u32 }, sol))
    }

    /// `Some(g)` with `g^{p−1} = b/b′` when the forms are isomorphic (`e₁ ↦ g e₁′`).
    pub fn iso(&self, m: &CyclicN1Form, m2: &CyclicN1Form) -> Option<Elem> {
        if m.r != m2.r {
            return None;
        }
        let k = &self.k;
        let ratio = k.mul(m.b, k.inverse(&m2.b)?);
        k.pm1_root(&ratio).ok()
    }

    pub fn is_kcp_order(&self, m: &CyclicN1Form) -> bool {
        let k = &self.k;
        let p = k.p() as i64;
        let congruent = (self.eis.e() as i64 - m.r as i64).rem_euclid(p - 1) == 0;
        let bc0 = k.mul(m.b, self.c0);
        congruent && m.r as usize <= self.eis.e() && k.is_pm1_power(&bc0).unwrap_or(false)
    }

    pub fn generic_relation(&self, m: &CyclicN1Form, m2: &CyclicN1Form) -> GenericRelation {
        generic_relation_n1(self.k.p(), m, m2)
    }

    /// `(c₀^{−1}, e − (p−1)j)` for `j = 0, 1, ..., ⌊e/(p−1)⌋`.
    pub fn enumerate_kcp_orders(&self) -> Vec<(CyclicN1Form, LarsonParam)> {
        let e = self.eis.e() as u32;
        let pm1 = self.k.p() as u32 - 1;
        let b = self.k.inverse(&self.c0).expect("c0 unit");
        (0..=e / pm1).map(|j| (CyclicN1Form { b, r: e - pm1 * j }, LarsonParam { j })).collect()
    }

    /// Same `r`, `b` replaced by the fixed representative of its class modulo
    /// `(k^×)^{p−1}`; isomorphic forms have equal canonical forms.
    pub fn canonical(&self, m: &CyclicN1Form) -> CyclicN1Form {
        let b = self.k.pm1_class_representative(&m.b).expect("b nonzero");
        CyclicN1Form { b, r: m.r }
    }

    /// `M(e − r, (b·c₀)^p)`.
    pub fn breuil_label(&self, m: &CyclicN1Form) -> BreuilResult {
        let k = &self.k;
        let p = k.p();
        let a = k.pow(k.mul(m.b, self.c0), p);
        let label = BreuilLabel { r_tilde: self.eis.e() as u32 - m.r.min(self.eis.e() as u32), a };
        let (name, printed_alternative) = if label.r_tilde == 0 && a == k.one() {
            (OrderName::RCp, None)
        } else if m.b == k.one() && m.r == 0 {
            let alt = k.inverse(&k.pow(self.c0, p)).expect("unit");
            (OrderName::DualRCp, Some(alt))
        } else {
            (OrderName::Other, None)
        };
        BreuilResult { label, name, printed_alternative }
    }
}

/// `n ≥ 2` classification context over `W_n`.
#[derive(Clone, Debug)]
pub struct CyclicN {
    w: Arc<GaloisRing>,
    eis: EisensteinPoly,
    c0: Elem,
}

/// Verdict of the `KC_{p^n}` order test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderVerdict {
    pub is_order: bool,
    /// `"RC_{p^n}"` when the module is an order (necessarily the trivial one).
    pub name: Option<&'static str>,
}

impl CyclicN {
    pub fn new(eis: &EisensteinPoly, field: &FieldDesc, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters("Witt length must be at least 2"));
        }
        let w = Arc::new(GaloisRing::new(field, n)?);
        let c0 = eis.c0(&w)?;
        Ok(CyclicN { w, eis: eis.clone(), c0 })
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.w
    }

    pub fn c0(&self) -> Elem {
        self.c0
    }

    /// Normal form of `φ(e₁) = f·e₁` with the witness `g` intertwining `φ_f`
    /// and the normal form: `f·g = φ(g)·b` or `f·g = φ(g)·b·E`.
    ///
    /// In the second case `f` must be `s^{−1}E` for a unit `s`; `f/E` is
    /// computed in `W_n((u))` and rejected if it is not a power series.
    pub fn classify(&self, f: &Series, opts: &SolveOptions) -> Result<(CyclicNForm, Solution)> {
        if !crate::series::same_ring(f.ring(), &self.w) {
            return Err(Error::RingMismatch);
        }
        if f.leading().is_some_and(|(d, _)| d < 0) {
            return Err(Error::PreconditionViolated("f must be a power series"));
        }
        let e = self.eis.e() as i64;
        match f.reduce_mod_p().valuation() {
            Valuation::Exact(0) => {
                let b = f.coeff(0);
                let sol = solve_w_unit(f, &b, opts)?;
                Ok((CyclicNForm { shape: CyclicShape::UnitType, b }, sol))
            }
            Valuation::Exact(v) if v == e => {
                let big_e = self.eis.series(&self.w)?;
                let work = opts.prec + self.w.n() as i64 * e + 8;
                let s_inv = f.mul_series(&big_e.laurent_inverse(work)?);
                if s_inv.leading().is_some_and(|(d, _)| d < 0) {
                    return Err(Error::NotAFactor);
                }
                let b = s_inv.coeff(0);
                if !self.w.is_unit(&b) {
                    return Err(Error::NotAFactor);
                }
                let sol = solve_w_unit(&s_inv.truncate(opts.prec), &b, opts)?;
                Ok((CyclicNForm { shape: CyclicShape::EUnitType, b }, sol))
            }
            Valuation::Exact(_) | Valuation::Infinite => Err(Error::NotAFactor),
            v @ Valuation::AtLeast(_) => Err(v.exact().unwrap_err()),
        }
    }

    /// Same shape and `b/b′ ∈ (W_n^×)^{p−1}`.
    pub fn iso(&self, m: &CyclicNForm, m2: &CyclicNForm) -> bool {
        if m.shape != m2.shape {
            return false;
        }
        let w = &self.w;
        match w.inverse(&m2.b) {
            Some(inv) => w.is_unit_pm1_power(&w.mul(m.b, inv)).unwrap_or(false),
            None => false,
        }
    }

    pub fn is_kcpn_order(&self, m: &CyclicNForm) -> OrderVerdict {
        let w = &self.w;
        let ok = m.shape == CyclicShape::EUnitType
            && w.is_unit_pm1_power(&w.mul(m.b, self.c0)).unwrap_or(false);
        OrderVerdict { is_order: ok, name: ok.then_some("RC_{p^n}") }
    }
}
