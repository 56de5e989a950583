//! Truncated Laurent series over a [`GaloisRing`] with absolute precision.
//!
//! A [`Series`] stores its nonzero coefficients sparsely by degree together
//! with a precision: either exact (finitely supported and known completely) or
//! `O(u^N)`, meaning every coefficient of degree `>= N` is unknown. Power series
//! are the Laurent series without negative-degree terms.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::galois::{Elem, GaloisRing};

/// u-adic valuation of a possibly truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(i64),
    /// No nonzero coefficient below the precision `N`.
    AtLeast(i64),
    /// The exact zero series.
    Infinite,
}

impl Valuation {
    /// Decides `v >= bound`. An `AtLeast(N)` valuation only answers when
    /// `N >= bound`; otherwise the answer is not determined by the known terms.
    pub fn at_least(self, bound: i64) -> Result<bool> {
        match self {
            Valuation::Exact(v) => Ok(v >= bound),
            Valuation::Infinite => Ok(true),
            Valuation::AtLeast(n) if n >= bound => Ok(true),
            Valuation::AtLeast(n) => Err(Error::InsufficientPrecision { needed: bound, available: n }),
        }
    }

    /// The finite valuation, or `InsufficientPrecision`/`ZeroInput`.
    pub fn exact(self) -> Result<i64> {
        match self {
            Valuation::Exact(v) => Ok(v),
            Valuation::Infinite => Err(Error::ZeroInput),
            Valuation::AtLeast(n) => Err(Error::InsufficientPrecision { needed: n + 1, available: n }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    ring: Arc<GaloisRing>,
    terms: BTreeMap<i64, Elem>,
    /// `None` for exact series.
    prec: Option<i64>,
}

pub(crate) fn same_ring(a: &Arc<GaloisRing>, b: &Arc<GaloisRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Series {
    /// Builds a series from `(degree, coefficient)` pairs; repeated degrees are
    /// summed, zeros and terms at or beyond the precision are dropped.
    pub fn new(ring: &Arc<GaloisRing>, terms: impl IntoIterator<Item = (i64, Elem)>, prec: Option<i64>) -> Self {
        let mut map = BTreeMap::new();
        for (deg, c) in terms {
            if prec.is_some_and(|p| deg >= p) {
                continue;
            }
            let slot = map.entry(deg).or_insert(Elem::ZERO);
            *slot = ring.add(*slot, c);
        }
        map.retain(|_, c| !ring.is_zero(c));
        Series { ring: ring.clone(), terms: map, prec }
    }

    /// Integer coefficients `(degree, c)` reduced into the ring.
    pub fn from_ints(ring: &Arc<GaloisRing>, terms: &[(i64, i128)], prec: Option<i64>) -> Self {
        Self::new(ring, terms.iter().map(|&(d, c)| (d, ring.from_int(c))), prec)
    }

    /// Exact polynomial with ascending integer coefficients.
    pub fn polynomial(ring: &Arc<GaloisRing>, coeffs: &[i128]) -> Self {
        Self::new(ring, coeffs.iter().enumerate().map(|(i, &c)| (i as i64, ring.from_int(c))), None)
    }

    pub fn zero(ring: &Arc<GaloisRing>) -> Self {
        Self::new(ring, [], None)
    }

    /// `O(u^prec)`.
    pub fn zero_to(ring: &Arc<GaloisRing>, prec: i64) -> Self {
        Self::new(ring, [], Some(prec))
    }

    pub fn one(ring: &Arc<GaloisRing>) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn constant(ring: &Arc<GaloisRing>, c: Elem) -> Self {
        Self::monomial(ring, c, 0)
    }

    pub fn monomial(ring: &Arc<GaloisRing>, c: Elem, deg: i64) -> Self {
        Self::new(ring, [(deg, c)], None)
    }

    /// `u^deg`.
    pub fn u_pow(ring: &Arc<GaloisRing>, deg: i64) -> Self {
        Self::monomial(ring, ring.one(), deg)
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    /// Absolute precision; `None` when exact.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Nonzero terms in ascending degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, Elem)> + '_ {
        self.terms.iter().map(|(&d, &c)| (d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `u^deg` (zero when absent). Degrees beyond the precision
    /// are reported as zero; check [`Series::precision`] first.
    pub fn coeff(&self, deg: i64) -> Elem {
        self.terms.get(&deg).copied().unwrap_or(Elem::ZERO)
    }

    /// Lowest-degree nonzero term.
    pub fn leading(&self) -> Option<(i64, Elem)> {
        self.terms.iter().next().map(|(&d, &c)| (d, c))
    }

    pub fn valuation(&self) -> Valuation {
        match (self.leading(), self.prec) {
            (Some((d, _)), _) => Valuation::Exact(d),
            (None, None) => Valuation::Infinite,
            (None, Some(n)) => Valuation::AtLeast(n),
        }
    }

    /// Lower bound for the degree of any nonzero term; `None` for exact zero.
    fn degree_floor(&self) -> Option<i64> {
        self.leading().map(|(d, _)| d).or(self.prec)
    }

    fn is_exact_zero(&self) -> bool {
        self.prec.is_none() && self.terms.is_empty()
    }

    /// Forgets every coefficient of degree `>= prec` (no-op when coarser).
    pub fn truncate(&self, prec: i64) -> Self {
        let p = min_prec(self.prec, Some(prec));
        Self::new(&self.ring, self.terms(), p)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        Series {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&d, &c)| (d + k, c)).collect(),
            prec: self.prec.map(|p| p + k),
        }
    }

    pub fn scale(&self, c: Elem) -> Self {
        let r = &self.ring;
        Self::new(r, self.terms().map(|(d, x)| (d, r.mul(x, c))), self.prec)
    }

    /// Coefficientwise map into another ring, keeping precision.
    pub fn map_coeffs(&self, target: &Arc<GaloisRing>, f: impl Fn(&Elem) -> Elem) -> Self {
        Self::new(target, self.terms().map(|(d, c)| (d, f(&c))), self.prec)
    }

    fn check_ring(&self, other: &Series) {
        assert!(same_ring(&self.ring, &other.ring), "series over different rings");
    }

    pub fn add_series(&self, other: &Series) -> Self {
        self.check_ring(other);
        let prec = min_prec(self.prec, other.prec);
        Self::new(&self.ring, self.terms().chain(other.terms()), prec)
    }

    pub fn sub_series(&self, other: &Series) -> Self {
        self.add_series(&other.negate())
    }

    pub fn negate(&self) -> Self {
        let r = &self.ring;
        Self::new(r, self.terms().map(|(d, c)| (d, r.neg(c))), self.prec)
    }

    pub fn mul_series(&self, other: &Series) -> Self {
        self.check_ring(other);
        let r = &self.ring;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Series::zero(r);
        }
        let mut prec: Option<i64> = None;
        if let Some(po) = other.prec {
            prec = min_prec(prec, self.degree_floor().map(|v| v + po));
        }
        if let Some(ps) = self.prec {
            prec = min_prec(prec, other.degree_floor().map(|v| v + ps));
        }
        let mut acc: BTreeMap<i64, Elem> = BTreeMap::new();
        for (&da, &ca) in &self.terms {
            for (&db, &cb) in &other.terms {
                let deg = da + db;
                if prec.is_some_and(|p| deg >= p) {
                    break;
                }
                let slot = acc.entry(deg).or_insert(Elem::ZERO);
                *slot = r.add(*slot, r.mul(ca, cb));
            }
        }
        Self::new(r, acc, prec)
    }

    /// The semilinear Frobenius: `c·u^i ↦ σ(c)·u^{p·i}`; precision scales by `p`.
    pub fn phi(&self) -> Self {
        let r = &self.ring;
        let p = r.p() as i64;
        Series {
            ring: r.clone(),
            terms: self.terms.iter().map(|(&d, c)| (p * d, r.frobenius(c))).collect(),
            prec: self.prec.map(|n| p * n),
        }
    }

    /// Inverse of a series whose lowest-degree coefficient is a unit, to absolute
    /// precision `prec` (an inexact input can cap this further).
    pub fn inverse(&self, prec: i64) -> Result<Self> {
        let r = &self.ring;
        let (v, c) = match self.leading() {
            Some(t) => t,
            None if self.is_exact() => return Err(Error::ZeroInput),
            None => {
                return Err(Error::InsufficientPrecision {
                    needed: self.prec.unwrap_or(0) + 1,
                    available: self.prec.unwrap_or(0),
                })
            }
        };
        let c_inv = r.inverse(&c).ok_or(Error::NotAUnit)?;
        let out_prec = match self.prec {
            None => prec,
            Some(p) => prec.min(p - 2 * v),
        };
        let count = (out_prec + v).max(0) as usize;
        let mut g: Vec<Elem> = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                g.push(c_inv);
                continue;
            }
            let mut s = Elem::ZERO;
            for (&deg, &fc) in self.terms.range(v + 1..=v + k as i64) {
                let i = (deg - v) as usize;
                s = r.add(s, r.mul(fc, g[k - i]));
            }
            g.push(r.neg(r.mul(c_inv, s)));
        }
        Ok(Self::new(r, g.into_iter().enumerate().map(|(k, x)| (k as i64 - v, x)), Some(out_prec)))
    }

    /// Inverse in `W_n((u))`, where a series is a unit exactly when its
    /// reduction mod `p` is nonzero. Terms below the first unit coefficient are
    /// divisible by `p`, so the geometric series for them stops after `n` terms.
    pub fn laurent_inverse(&self, prec: i64) -> Result<Self> {
        let r = &self.ring;
        if r.n() == 1 {
            return self.inverse(prec);
        }
        let unit_term = self.terms().find(|(_, c)| r.is_unit(c));
        let (m, _) = match unit_term {
            Some(t) => t,
            None if self.is_exact() => return Err(Error::NotAUnit),
            None => {
                let avail = self.prec.unwrap_or(0);
                return Err(Error::InsufficientPrecision { needed: avail + 1, available: avail });
            }
        };
        let low = Series::new(r, self.terms().filter(|&(d, _)| d < m), None);
        let unit_part = self.sub_series(&low);
        let floor = low.leading().map(|(d, _)| d).unwrap_or(m);
        let depth = m - floor;
        let mut work = prec + r.n() as i64 * depth + 2 * (m.abs() + floor.abs()) + 16;
        for _ in 0..8 {
            let uinv = unit_part.inverse(work)?;
            let t = low.mul_series(&uinv).negate();
            let mut sum = Series::one(r);
            let mut term = Series::one(r);
            for _ in 1..r.n() {
                term = term.mul_series(&t);
                sum = sum.add_series(&term);
            }
            let res = uinv.mul_series(&sum);
            let reached = res.prec.unwrap_or(i64::MAX);
            if reached >= prec || !self.is_exact() {
                return Ok(res.truncate(prec));
            }
            work += (prec - reached) + 16;
        }
        Err(Error::InsufficientPrecision { needed: prec, available: work })
    }

    /// Coefficientwise reduction into `target`, a reduction of this ring.
    pub fn reduce_to(&self, target: &Arc<GaloisRing>) -> Self {
        assert!(target.n() <= self.ring.n() && target.field_desc() == self.ring.field_desc());
        self.map_coeffs(target, |c| self.ring.reduce_into(c, target))
    }

    /// Reduction mod `p`, landing in the residue field.
    pub fn reduce_mod_p(&self) -> Self {
        self.reduce_to(&Arc::new(self.ring.residue_field()))
    }

    /// Coefficientwise Teichmüller lift of a series over the residue field.
    pub fn teichmuller_lift(&self, target: &Arc<GaloisRing>) -> Self {
        assert!(self.ring.is_field() && target.field_desc() == self.ring.field_desc());
        self.map_coeffs(target, |c| target.teichmuller(c))
    }

    /// Coordinatewise lift from a reduction into `target`.
    pub fn lift_to(&self, target: &Arc<GaloisRing>) -> Self {
        assert!(target.n() >= self.ring.n() && target.field_desc() == self.ring.field_desc());
        self.map_coeffs(target, |c| target.lift_from(c, &self.ring))
    }

    /// For a series with coefficients in `pW_n`, the quotient by `p` in
    /// `W_{n-1}((u))` (given as `target`).
    pub fn divide_by_p(&self, target: &Arc<GaloisRing>) -> Result<Self> {
        assert!(target.n() + 1 == self.ring.n() && target.field_desc() == self.ring.field_desc());
        let mut out = Vec::with_capacity(self.terms.len());
        for (d, c) in self.terms() {
            let q = self
                .ring
                .divide_by_p(&c)
                .ok_or(Error::PreconditionViolated("coefficient not divisible by p"))?;
            out.push((d, q));
        }
        // a p-multiple known mod u^N has its quotient known mod u^N only as an
        // element of W_{n-1}; precision is unchanged
        Ok(Self::new(target, out, self.prec))
    }

    /// Whether `self − other` has no nonzero known coefficient.
    pub fn agrees_with(&self, other: &Series) -> bool {
        !matches!(self.sub_series(other).valuation(), Valuation::Exact(_))
    }

    /// Precision of `self − other` (`None` when both exact).
    pub fn common_precision(&self, other: &Series) -> Option<i64> {
        min_prec(self.prec, other.prec)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_series(rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.sub_series(rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_series(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.negate()
    }
}

/// Writes a ring element: a base-10 integer when `d = 1` (or the element is a
/// constant), otherwise the coordinate tuple `(c0,c1,...)`.
pub fn fmt_elem(ring: &GaloisRing, c: &Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let coords = ring.coords(c);
    if coords[1..].iter().all(|&x| x == 0) {
        return write!(f, "{}", coords[0]);
    }
    write!(f, "(")?;
    for (i, x) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Text form `c*u^k + ... + O(u^N)`, ascending by degree.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = self.ring.one();
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if d == 0 {
                fmt_elem(&self.ring, &c, f)?;
                continue;
            }
            if c != one {
                fmt_elem(&self.ring, &c, f)?;
                write!(f, "*")?;
            }
            if d == 1 {
                write!(f, "u")?;
            } else {
                write!(f, "u^{d}")?;
            }
        }
        match self.prec {
            Some(n) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(u^{n})")
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}
