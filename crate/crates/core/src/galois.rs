//! The residue field `k = F_{p^d}` and the Witt vectors `W_n(k)`, realized as
//! the Galois ring `GR(p^n, d) = Z/p^n[y]/(h(y))` with `y` a Teichmüller root.
//!
//! The residue field is simply the case `n = 1`. Elements are plain coordinate
//! vectors in the power basis `1, y, ..., y^{d-1}`; every operation goes through
//! the owning [`GaloisRing`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::{self, add_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 4;

/// Coordinates of a ring element in the power basis. Unused coordinates are 0.
///
/// The derived ordering is lexicographic with coordinate 0 (the constant term)
/// compared first; this is the fixed order used for canonical choices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) [u64; MAX_DEGREE]);

impl Elem {
    pub const ZERO: Elem = Elem([0; MAX_DEGREE]);

    pub fn coords(&self) -> [u64; MAX_DEGREE] {
        self.0
    }
}

/// Descriptor of `F_{p^d} = F_p[y]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    d: usize,
    /// Monic, ascending, length `d + 1`.
    modulus: Vec<u64>,
}

impl FieldDesc {
    /// Validates primality of `p`, the degree bound, and that `modulus` is a
    /// primitive polynomial (its root generates `F_q^×`), which also makes it
    /// irreducible.
    pub fn new(p: u64, d: usize, modulus: &[u64]) -> Result<Self> {
        Self::check_scale(p, d)?;
        if modulus.len() != d + 1 {
            return Err(Error::InvalidModulus("length must be d + 1"));
        }
        if modulus[d] != 1 {
            return Err(Error::InvalidModulus("not monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficients must lie in 0..p"));
        }
        let desc = FieldDesc { p, d, modulus: modulus.to_vec() };
        if !desc.is_primitive() {
            return Err(Error::InvalidModulus("not a primitive polynomial"));
        }
        Ok(desc)
    }

    /// The first primitive polynomial in Conway's ordering: coefficients of
    /// `y^{d-1}, ..., y^0` are compared after multiplying the coefficient of
    /// `y^i` by `(-1)^{d-i}`. For `d = 1` this picks `y - g` with `g` the least
    /// primitive root; for `F_9` it picks `y^2 + 2y + 2`.
    pub fn standard(p: u64, d: usize) -> Result<Self> {
        Self::check_scale(p, d)?;
        let mut transformed = alloc::vec![0u64; d];
        loop {
            let mut modulus = alloc::vec![0u64; d + 1];
            modulus[d] = 1;
            for (pos, &t) in transformed.iter().enumerate() {
                let i = d - 1 - pos;
                modulus[i] = if (d - i).is_multiple_of(2) { t } else { (p - t) % p };
            }
            let desc = FieldDesc { p, d, modulus };
            if desc.modulus[0] != 0 && desc.is_primitive() {
                return Ok(desc);
            }
            // odometer increment, last position fastest
            let mut pos = d;
            loop {
                if pos == 0 {
                    return Err(Error::InvalidModulus("no primitive polynomial found"));
                }
                pos -= 1;
                transformed[pos] += 1;
                if transformed[pos] < p {
                    break;
                }
                transformed[pos] = 0;
            }
        }
    }

    /// `F_p` with its standard generator.
    pub fn prime(p: u64) -> Result<Self> {
        Self::standard(p, 1)
    }

    fn check_scale(p: u64, d: usize) -> Result<()> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(d));
        }
        match arith::checked_pow(p, d as u32) {
            Some(q) if q < (1 << 62) => Ok(()),
            _ => Err(Error::ScaleExceeded),
        }
    }

    fn is_primitive(&self) -> bool {
        let ring = GaloisRing::raw(self.clone(), 1, &self.modulus);
        let g = ring.generator();
        let order = ring.q - 1;
        if ring.pow(g, order) != ring.one() {
            return false;
        }
        arith::prime_factors(order)
            .into_iter()
            .all(|l| ring.pow(g, order / l) != ring.one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.d as u32)
    }
}

/// `W_n(F_{p^d})` as `Z/p^n[y]/(h)`, where `h` lifts the field modulus and its
/// root `y` satisfies `y^q = y`. Frobenius is the ring map `y ↦ y^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisRing {
    field: FieldDesc,
    n: u32,
    pn: u64,
    q: u64,
    modulus: [u64; MAX_DEGREE + 1],
    frob: [Elem; MAX_DEGREE],
}

impl GaloisRing {
    /// Builds `W_n(k)`. The Teichmüller lift of the field modulus is found as
    /// the minimal polynomial of `ỹ^{q^{n-1}}` for an arbitrary lift `ỹ`.
    pub fn new(field: &FieldDesc, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("Witt length must be at least 1"));
        }
        match arith::checked_pow(field.p, n) {
            Some(pn) if pn < (1 << 62) => {}
            _ => return Err(Error::ScaleExceeded),
        }
        if n == 1 {
            return Ok(Self::raw(field.clone(), 1, &field.modulus));
        }
        let naive = Self::raw(field.clone(), n, &field.modulus);
        let mut t = naive.generator();
        for _ in 1..n {
            t = naive.pow(t, naive.q);
        }
        let h = naive.minimal_polynomial(t)?;
        Ok(Self::raw(field.clone(), n, &h))
    }

    /// Residue field `F_q` itself.
    pub fn field(field: &FieldDesc) -> Self {
        Self::raw(field.clone(), 1, &field.modulus)
    }

    fn raw(field: FieldDesc, n: u32, modulus: &[u64]) -> Self {
        let d = field.d;
        let pn = field.p.pow(n);
        let q = field.q();
        let mut m = [0u64; MAX_DEGREE + 1];
        for (i, &c) in modulus.iter().enumerate() {
            m[i] = c % pn;
        }
        let mut ring = GaloisRing { field, n, pn, q, modulus: m, frob: [Elem::ZERO; MAX_DEGREE] };
        let yp = ring.pow(ring.generator(), ring.field.p);
        let mut acc = ring.one();
        for i in 0..d {
            ring.frob[i] = acc;
            acc = ring.mul(acc, yp);
        }
        ring
    }

    /// Monic minimal polynomial of `t`, assuming `1, t, ..., t^{d-1}` is a basis
    /// (true whenever `t` reduces to a generator of the residue field).
    fn minimal_polynomial(&self, t: Elem) -> Result<Vec<u64>> {
        let d = self.d();
        let pn = self.pn;
        let mut powers = Vec::with_capacity(d + 1);
        let mut acc = self.one();
        for _ in 0..=d {
            powers.push(acc);
            acc = self.mul(acc, t);
        }
        // rows = coordinates, columns = powers t^0..t^{d-1}, augmented with -t^d
        let mut mat: Vec<Vec<u64>> = (0..d)
            .map(|row| {
                let mut r: Vec<u64> = (0..d).map(|col| powers[col].0[row]).collect();
                r.push((pn - powers[d].0[row]) % pn);
                r
            })
            .collect();
        let p = self.field.p;
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !mat[r][col].is_multiple_of(p))
                .ok_or(Error::InvalidModulus("powers of the lifted root are not a basis"))?;
            mat.swap(col, pivot);
            let inv = arith::inv_mod(mat[col][col], pn).ok_or(Error::NotAUnit)?;
            for x in mat[col].iter_mut() {
                *x = mul_mod(*x, inv, pn);
            }
            let pivot_row = mat[col].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                let factor = row[col];
                if r != col && factor != 0 {
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = sub_mod(*x, mul_mod(factor, y, pn), pn);
                    }
                }
            }
        }
        let mut h: Vec<u64> = (0..d).map(|r| mat[r][d]).collect();
        h.push(1);
        Ok(h)
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.field.d
    }

    /// `p^n`, the characteristic.
    pub fn pn(&self) -> u64 {
        self.pn
    }

    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field_desc(&self) -> &FieldDesc {
        &self.field
    }

    /// Lifted modulus `h`, ascending and monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus[..=self.d()]
    }

    pub fn is_field(&self) -> bool {
        self.n == 1
    }

    /// `W_m(k)` for `m <= n`, sharing the Teichmüller generator.
    pub fn reduction(&self, m: u32) -> Self {
        assert!(m >= 1 && m <= self.n, "reduction length out of range");
        Self::raw(self.field.clone(), m, self.modulus())
    }

    pub fn residue_field(&self) -> Self {
        self.reduction(1)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i128) -> Elem {
        let mut e = Elem::ZERO;
        e.0[0] = c.rem_euclid(self.pn as i128) as u64;
        e
    }

    /// Element with the given power-basis coordinates (extra coordinates must be
    /// absent; missing ones are zero).
    pub fn from_coords(&self, coords: &[i128]) -> Result<Elem> {
        if coords.len() > self.d() {
            return Err(Error::InvalidParameters("too many coordinates for this ring"));
        }
        let mut e = Elem::ZERO;
        for (i, &c) in coords.iter().enumerate() {
            e.0[i] = c.rem_euclid(self.pn as i128) as u64;
        }
        Ok(e)
    }

    /// Coordinates actually in use (length `d`).
    pub fn coords<'a>(&self, a: &'a Elem) -> &'a [u64] {
        &a.0[..self.d()]
    }

    /// The Teichmüller root `y` of the modulus; it generates the residue units.
    pub fn generator(&self) -> Elem {
        if self.d() == 1 {
            let mut e = Elem::ZERO;
            e.0[0] = (self.pn - self.modulus[0]) % self.pn;
            e
        } else {
            let mut e = Elem::ZERO;
            e.0[1] = 1;
            e
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        *a == Elem::ZERO
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        let p = self.p();
        self.coords(a).iter().any(|&c| c % p != 0)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let mut out = Elem::ZERO;
        for i in 0..self.d() {
            out.0[i] = add_mod(a.0[i], b.0[i], self.pn);
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let mut out = Elem::ZERO;
        for i in 0..self.d() {
            out.0[i] = sub_mod(a.0[i], b.0[i], self.pn);
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(Elem::ZERO, a)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let d = self.d();
        let pn = self.pn;
        if d == 1 {
            let mut out = Elem::ZERO;
            out.0[0] = mul_mod(a.0[0], b.0[0], pn);
            return out;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = add_mod(prod[i + j], mul_mod(a.0[i], b.0[j], pn), pn);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let s = mul_mod(top, self.modulus[i], pn);
                prod[k - d + i] = sub_mod(prod[k - d + i], s, pn);
            }
        }
        let mut out = Elem::ZERO;
        out.0[..d].copy_from_slice(&prod[..d]);
        out
    }

    pub fn pow(&self, mut base: Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a unit: invert modulo `p` by Fermat, then lift
    /// with Newton's iteration `x ← x(2 − ax)`.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        let mut x = self.pow(*a, self.q - 2);
        let two = self.from_int(2);
        let mut correct = 1u32;
        while correct < self.n {
            x = self.mul(x, self.sub(two, self.mul(*a, x)));
            correct *= 2;
        }
        debug_assert_eq!(self.mul(*a, x), self.one());
        Some(x)
    }

    /// Witt vector Frobenius; on the residue field this is `a ↦ a^p`.
    pub fn frobenius(&self, a: &Elem) -> Elem {
        let d = self.d();
        if d == 1 {
            return *a;
        }
        let mut out = Elem::ZERO;
        for i in 0..d {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                out.0[j] = add_mod(out.0[j], mul_mod(c, self.frob[i].0[j], self.pn), self.pn);
            }
        }
        out
    }

    /// Reduces an element of `self` into a reduction `target` (`target.n <= n`).
    pub fn reduce_into(&self, a: &Elem, target: &GaloisRing) -> Elem {
        debug_assert!(target.n <= self.n && target.field == self.field);
        let mut out = Elem::ZERO;
        for i in 0..self.d() {
            out.0[i] = a.0[i] % target.pn;
        }
        out
    }

    /// Lifts an element of a reduction coordinatewise (representatives in
    /// `0..p^m`). Not multiplicative; see [`GaloisRing::teichmuller`].
    pub fn lift_from(&self, a: &Elem, source: &GaloisRing) -> Elem {
        debug_assert!(source.n <= self.n && source.field == self.field);
        *a
    }

    /// The unique `x ∈ W_n` with `x^q = x` reducing to `a ∈ k`.
    pub fn teichmuller(&self, a: &Elem) -> Elem {
        let mut x = *a;
        for _ in 1..self.n {
            x = self.pow(x, self.q);
        }
        x
    }

    /// For `a ∈ pW_n`, the element `a/p ∈ W_{n-1}` (coordinates in `0..p^{n-1}`).
    pub fn divide_by_p(&self, a: &Elem) -> Option<Elem> {
        let p = self.p();
        if self.n < 2 || self.coords(a).iter().any(|&c| c % p != 0) {
            return None;
        }
        let target = self.pn / p;
        let mut out = Elem::ZERO;
        for i in 0..self.d() {
            out.0[i] = (a.0[i] / p) % target;
        }
        Some(out)
    }

    /// Largest `k` with `a ∈ p^k W_n`; `None` for zero.
    pub fn p_valuation(&self, a: &Elem) -> Option<u32> {
        let p = self.p();
        self.coords(a)
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| arith::multiplicity(c, p))
            .min()
    }

    /// All elements, in the [`Elem`] order. Only sensible for small rings.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let d = self.d();
        let total = (self.pn as u128).pow(d as u32);
        (0..total).map(move |mut idx| {
            let mut e = Elem::ZERO;
            for i in (0..d).rev() {
                e.0[i] = (idx % self.pn as u128) as u64;
                idx /= self.pn as u128;
            }
            e
        })
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(move |a| self.is_unit(a))
    }

    // ---- residue-field operations ----------------------------------------

    fn require_field(&self) -> Result<()> {
        if self.n == 1 {
            Ok(())
        } else {
            Err(Error::PreconditionViolated("operation requires the residue field"))
        }
    }

    /// Whether `a ∈ (k^×)^{p-1}`, tested as `a^{(q-1)/(p-1)} = 1`.
    pub fn is_pm1_power(&self, a: &Elem) -> Result<bool> {
        self.require_field()?;
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        let m = (self.q - 1) / (self.p() - 1);
        Ok(self.pow(*a, m) == self.one())
    }

    /// Canonical `x` with `x^{p-1} = a`. The solutions form one orbit under
    /// `F_p^×`, and the lexicographically least one (constant coordinate first)
    /// is the one whose first nonzero coordinate equals 1.
    pub fn pm1_root(&self, a: &Elem) -> Result<Elem> {
        if !self.is_pm1_power(a)? {
            return Err(Error::NoRoot);
        }
        let p = self.p();
        let x = if p == 2 { *a } else { self.nth_root(a, p - 1) };
        debug_assert_eq!(self.pow(x, p - 1), *a);
        let lead = self.coords(&x).iter().copied().find(|&c| c != 0).expect("nonzero root");
        let scale = arith::inv_mod(lead, p).expect("p prime");
        Ok(self.mul(x, self.from_int(scale as i128)))
    }

    /// All solutions of `x^{p-1} = a`, ascending.
    pub fn pm1_roots(&self, a: &Elem) -> Result<Vec<Elem>> {
        let x = self.pm1_root(a)?;
        let mut roots: Vec<Elem> =
            (1..self.p()).map(|c| self.mul(x, self.from_int(c as i128))).collect();
        roots.sort();
        Ok(roots)
    }

    /// A fixed representative of the coset `a·(k^×)^{p-1}`: the power `y^s`,
    /// `0 <= s < p-1`, of the generator lying in the same coset.
    pub fn pm1_class_representative(&self, a: &Elem) -> Result<Elem> {
        self.require_field()?;
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        let p = self.p();
        if p == 2 {
            return Ok(self.one());
        }
        let m = (self.q - 1) / (p - 1);
        let z = self.pow(self.generator(), m);
        let target = self.pow(*a, m);
        let s = self.discrete_log(z, target, p - 1, &arith::prime_factors(p - 1));
        Ok(self.pow(self.generator(), s))
    }

    /// An `r`-th root of `a` in `F_q^×` (`r | q-1`, `a` an `r`-th power).
    ///
    /// Write `q-1 = S·t` with `S` the part supported on primes of `r`. With
    /// `w·r ≡ 1 (mod t)`, `x₁ = a^w` satisfies `x₁^r = a·ε` where `ε` lies in the
    /// order-`S` subgroup; a Pohlig-Hellman logarithm of `ε` then corrects `x₁`.
    fn nth_root(&self, a: &Elem, r: u64) -> Elem {
        let order = self.q - 1;
        let primes = arith::prime_factors(r);
        let mut s = 1u64;
        for &l in &primes {
            s *= l.pow(arith::multiplicity(order, l));
        }
        let t = order / s;
        let w = if t == 1 { 0 } else { arith::inv_mod(r % t, t).expect("r coprime to t") };
        let x1 = self.pow(*a, w);
        let a_inv = self.inverse(a).expect("nonzero");
        let eps = self.mul(self.pow(x1, r), a_inv);
        let z = self.pow(self.generator(), t);
        let m = self.discrete_log(z, eps, s, &primes);
        debug_assert_eq!(m % r, 0, "a is an r-th power");
        let k = (m / r) % s;
        self.mul(x1, self.pow(z, (s - k) % s))
    }

    /// `log_base(target)` in the cyclic group generated by `base`, of the given
    /// `order` whose prime factors are `primes`.
    fn discrete_log(&self, base: Elem, target: Elem, order: u64, primes: &[u64]) -> u64 {
        let mut residue: u128 = 0;
        let mut modulus: u128 = 1;
        for &l in primes {
            let k = arith::multiplicity(order, l);
            if k == 0 {
                continue;
            }
            let lk = l.pow(k);
            let cofactor = order / lk;
            let g = self.pow(base, cofactor);
            let h = self.pow(target, cofactor);
            let gamma = self.pow(g, lk / l);
            let g_inv = self.inverse(&g).expect("unit");
            let mut x: u64 = 0;
            let mut lpow = 1u64;
            for i in 0..k {
                let stripped = self.mul(self.pow(g_inv, x), h);
                let hi = self.pow(stripped, l.pow(k - 1 - i));
                let digit = self.baby_giant(gamma, hi, l);
                x += digit * lpow;
                lpow = lpow.saturating_mul(l);
            }
            // CRT merge of (residue mod modulus) with (x mod lk)
            let lk128 = lk as u128;
            let mut combined = residue;
            while combined % lk128 != x as u128 {
                combined += modulus;
            }
            residue = combined;
            modulus *= lk128;
        }
        (residue % order as u128) as u64
    }

    fn baby_giant(&self, base: Elem, target: Elem, order: u64) -> u64 {
        let mut m = 1u64;
        while m * m < order {
            m += 1;
        }
        let mut table = BTreeMap::new();
        let mut acc = self.one();
        for j in 0..m {
            table.entry(acc).or_insert(j);
            acc = self.mul(acc, base);
        }
        let giant = self.inverse(&acc).expect("unit");
        let mut gamma = target;
        for i in 0..m {
            if let Some(&j) = table.get(&gamma) {
                return (i * m + j) % order;
            }
            gamma = self.mul(gamma, giant);
        }
        unreachable!("target not in the subgroup generated by base")
    }

    // ---- Witt-ring operations ---------------------------------------------

    /// Whether a unit `b ∈ W_n^×` lies in `(W_n^×)^{p-1}`. Since `1 + pW_n` is a
    /// pro-`p` group and `gcd(p, p-1) = 1`, this reduces to the residue test.
    pub fn is_unit_pm1_power(&self, b: &Elem) -> Result<bool> {
        if !self.is_unit(b) {
            return Err(Error::NotAUnit);
        }
        let k = self.residue_field();
        let bar = self.reduce_into(b, &k);
        k.is_pm1_power(&bar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn f9() -> GaloisRing {
        GaloisRing::field(&FieldDesc::standard(3, 2).unwrap())
    }

    fn omega(k: &GaloisRing) -> Elem {
        k.generator()
    }

    #[test]
    fn standard_moduli() {
        assert_eq!(FieldDesc::standard(3, 2).unwrap().modulus(), &[2, 2, 1]);
        // y + 1 over F_3: root 2, the least primitive root
        assert_eq!(FieldDesc::standard(3, 1).unwrap().modulus(), &[1, 1]);
        assert_eq!(FieldDesc::standard(2, 1).unwrap().modulus(), &[1, 1]);
        assert!(FieldDesc::standard(4, 1).is_err());
        assert_eq!(FieldDesc::standard(3, 5), Err(Error::UnsupportedDegree(5)));
        // y^2 + 1 is irreducible over F_3 but not primitive
        assert!(FieldDesc::new(3, 2, &[1, 0, 1]).is_err());
        assert!(FieldDesc::new(3, 2, &[2, 1, 1]).is_ok());
    }

    #[test]
    fn frobenius_on_field() {
        let f3 = GaloisRing::field(&FieldDesc::prime(3).unwrap());
        assert_eq!(f3.frobenius(&f3.from_int(2)), f3.from_int(2));
        let k = f9();
        let w = omega(&k);
        // ω^3 = 2ω + 1 in F_3[ω]/(ω² + 2ω + 2)
        assert_eq!(k.frobenius(&w), k.from_coords(&[1, 2]).unwrap());
        assert_eq!(k.frobenius(&w), k.pow(w, 3));
        assert_eq!(k.frobenius(&k.frobenius(&w)), w);
    }

    #[test]
    fn power_residues_in_f9() {
        let k = f9();
        let w = omega(&k);
        let squares: BTreeSet<Elem> = k.units().map(|x| k.mul(x, x)).collect();
        for a in k.units() {
            assert_eq!(k.is_pm1_power(&a).unwrap(), squares.contains(&a));
        }
        let w2 = k.mul(w, w);
        assert!(k.is_pm1_power(&w2).unwrap());
        assert_eq!(k.pm1_root(&w2).unwrap(), w);
        assert_eq!(k.pm1_roots(&w2).unwrap(), [w, k.mul(w, k.from_int(2))]);
        assert_eq!(k.is_pm1_power(&Elem::ZERO), Err(Error::ZeroInput));
    }

    #[test]
    fn power_residues_in_f3() {
        let k = GaloisRing::field(&FieldDesc::prime(3).unwrap());
        assert!(k.is_pm1_power(&k.one()).unwrap());
        assert!(!k.is_pm1_power(&k.from_int(2)).unwrap());
        assert_eq!(k.pm1_root(&k.one()).unwrap(), k.one());
        assert_eq!(k.pm1_root(&k.from_int(2)), Err(Error::NoRoot));
    }

    #[test]
    fn roots_in_larger_fields() {
        for (p, d) in [(5, 2), (7, 2), (3, 4), (2, 3), (5, 3), (13, 2)] {
            let k = GaloisRing::field(&FieldDesc::standard(p, d).unwrap());
            for x in k.units().step_by(7) {
                let a = k.pow(x, p - 1);
                let r = k.pm1_root(&a).unwrap();
                assert_eq!(k.pow(r, p - 1), a, "p={p} d={d}");
                let roots = k.pm1_roots(&a).unwrap();
                assert_eq!(roots[0], r);
                assert!(roots.contains(&x));
            }
        }
    }

    #[test]
    fn class_representatives_match_cosets() {
        let k = GaloisRing::field(&FieldDesc::standard(5, 2).unwrap());
        let units: Vec<Elem> = k.units().collect();
        for a in units.iter().step_by(3) {
            for b in units.iter().step_by(5) {
                let same = k.pm1_class_representative(a).unwrap()
                    == k.pm1_class_representative(b).unwrap();
                let ratio = k.mul(*a, k.inverse(b).unwrap());
                assert_eq!(same, k.is_pm1_power(&ratio).unwrap());
            }
        }
    }

    #[test]
    fn witt_ring_of_prime_field() {
        let z9 = GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap();
        assert_eq!(z9.pn(), 9);
        let five = z9.from_int(5);
        assert_eq!(z9.frobenius(&five), five);
        let squares: BTreeSet<Elem> = z9.units().map(|x| z9.mul(x, x)).collect();
        assert_eq!(squares.len(), 3);
        assert!(z9.is_unit_pm1_power(&z9.one()).unwrap());
        assert!(z9.is_unit_pm1_power(&z9.from_int(4)).unwrap());
        assert!(!z9.is_unit_pm1_power(&z9.from_int(2)).unwrap());
        assert_eq!(z9.is_unit_pm1_power(&z9.from_int(3)), Err(Error::NotAUnit));
    }

    #[test]
    fn teichmuller_lifts() {
        let z9 = GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap();
        let f3 = z9.residue_field();
        assert_eq!(z9.teichmuller(&f3.one()), z9.one());
        assert_eq!(z9.teichmuller(&f3.from_int(2)), z9.from_int(8));
        assert_eq!(z9.teichmuller(&Elem::ZERO), Elem::ZERO);
    }

    #[test]
    fn galois_ring_generator_is_teichmuller() {
        for (p, d, n) in [(3, 2, 2), (2, 2, 3), (5, 2, 2), (3, 3, 2), (2, 4, 2)] {
            let field = FieldDesc::standard(p, d).unwrap();
            let w = GaloisRing::new(&field, n).unwrap();
            let y = w.generator();
            assert_eq!(w.pow(y, w.q()), y);
            assert_eq!(w.frobenius(&y), w.pow(y, p));
            // reduction mod p recovers the field modulus
            let lifted: Vec<u64> = w.modulus().iter().map(|c| c % p).collect();
            assert_eq!(lifted, field.modulus());
            // Frobenius has order d on every power of y
            let mut x = y;
            for _ in 0..w.q() {
                let mut img = x;
                for _ in 0..d {
                    img = w.frobenius(&img);
                }
                assert_eq!(img, x);
                x = w.mul(x, y);
            }
        }
    }

    #[test]
    fn gr9_frobenius_is_a_ring_map() {
        let w = GaloisRing::new(&FieldDesc::standard(3, 2).unwrap(), 2).unwrap();
        let k = w.residue_field();
        let y = w.generator();
        let fy = w.frobenius(&y);
        assert_eq!(fy, w.pow(y, 3));
        assert_eq!(w.reduce_into(&fy, &k), k.frobenius(&k.generator()));
        let elems: Vec<Elem> = w.elements().step_by(11).collect();
        for a in &elems {
            for b in elems.iter().step_by(3) {
                assert_eq!(w.frobenius(&w.mul(*a, *b)), w.mul(w.frobenius(a), w.frobenius(b)));
                assert_eq!(w.frobenius(&w.add(*a, *b)), w.add(w.frobenius(a), w.frobenius(b)));
            }
        }
    }

    #[test]
    fn inverses() {
        let w = GaloisRing::new(&FieldDesc::standard(2, 2).unwrap(), 3).unwrap();
        for a in w.units() {
            let inv = w.inverse(&a).unwrap();
            assert_eq!(w.mul(a, inv), w.one());
        }
        assert_eq!(w.inverse(&w.from_int(2)), None);
        let f2 = GaloisRing::field(&FieldDesc::prime(2).unwrap());
        assert_eq!(f2.inverse(&f2.one()), Some(f2.one()));
    }

    #[test]
    fn divide_by_p_and_valuation() {
        let z27 = GaloisRing::new(&FieldDesc::prime(3).unwrap(), 3).unwrap();
        let a = z27.from_int(18);
        assert_eq!(z27.p_valuation(&a), Some(2));
        assert_eq!(z27.divide_by_p(&a).unwrap().coords()[0], 6);
        assert_eq!(z27.divide_by_p(&z27.from_int(4)), None);
    }
}
