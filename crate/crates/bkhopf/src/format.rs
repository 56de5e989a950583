//! Text and JSON encodings: series, ring descriptors, Eisenstein specs,
//! module spec files and tuples.
//!
//! The series text grammar is the one `Display` prints — `c*u^k` terms joined
//! by `+`, an optional trailing `O(u^N)` — extended with `-` and `u^(k)` for
//! hand-written input. Whitespace is ignored everywhere.

use std::fmt;
use std::sync::Arc;

use bkhopf_core::{
    cyclotomic_eisenstein, eisenstein_validate, EisensteinPoly, Elem, FieldDesc, GaloisRing, GeneralTuple, Series,
    TupleVerdict,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Version stamp carried by every record written.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Offset into the input with whitespace removed.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    s: Vec<char>,
    i: usize,
    ring: &'a GaloisRing,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.i, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i128, ParseError> {
        let start = self.i;
        let neg = self.eat('-');
        let digits = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if self.i == digits {
            self.i = start;
            return self.fail("expected an integer");
        }
        let text: String = self.s[digits..self.i].iter().collect();
        match text.parse::<i128>() {
            Ok(v) => Ok(if neg { -v } else { v }),
            Err(_) => {
                self.i = start;
                self.fail("integer out of range")
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat('(');
        let start = self.i;
        let k = self.int()?;
        if paren {
            self.expect(')')?;
        }
        i64::try_from(k).or_else(|_| {
            self.i = start;
            self.fail("exponent out of range")
        })
    }

    fn coefficient(&mut self) -> Result<Elem, ParseError> {
        if self.eat('(') {
            let mut coords = vec![self.int()?];
            while self.eat(',') {
                coords.push(self.int()?);
            }
            self.expect(')')?;
            if coords.len() > self.ring.d() {
                return self.fail(format!("{} coordinates for a degree-{} ring", coords.len(), self.ring.d()));
            }
            Ok(self.ring.from_coords(&coords).expect("length checked"))
        } else {
            Ok(self.ring.from_int(self.int()?))
        }
    }

    /// `[coeff][*]u[^k]` or a bare coefficient.
    fn term(&mut self) -> Result<(i64, Elem), ParseError> {
        let c = match self.peek() {
            Some('u') => self.ring.one(),
            Some('(') | Some('0'..='9') => self.coefficient()?,
            _ => return self.fail("expected a term"),
        };
        let star = self.eat('*');
        if !self.eat('u') {
            return if star { self.fail("expected 'u' after '*'") } else { Ok((0, c)) };
        }
        let k = if self.eat('^') { self.exponent()? } else { 1 };
        Ok((k, c))
    }

    fn big_o(&mut self) -> Result<i64, ParseError> {
        self.expect('O')?;
        self.expect('(')?;
        self.expect('u')?;
        let k = if self.eat('^') { self.exponent()? } else { 1 };
        self.expect(')')?;
        Ok(k)
    }
}

/// Parses the series text form over `ring`. Without an `O(u^N)` term the
/// result is exact.
pub fn parse_series(ring: &Arc<GaloisRing>, text: &str) -> Result<Series, ParseError> {
    let mut cur = Cursor { s: text.chars().filter(|c| !c.is_whitespace()).collect(), i: 0, ring };
    if cur.s.is_empty() {
        return cur.fail("empty series");
    }
    let mut terms: Vec<(i64, Elem)> = Vec::new();
    let mut prec = None;
    let mut negative = cur.eat('-');
    loop {
        if cur.peek() == Some('O') {
            if negative || prec.is_some() {
                return cur.fail("misplaced O-term");
            }
            prec = Some(cur.big_o()?);
        } else {
            if prec.is_some() {
                return cur.fail("terms after the O-term");
            }
            let (k, c) = cur.term()?;
            terms.push((k, if negative { ring.neg(c) } else { c }));
        }
        if cur.peek().is_none() {
            break;
        }
        negative = if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return cur.fail("expected '+' or '-'");
        };
    }
    // repeated degrees add up
    let mut sum = Series::new(ring, [], prec);
    for (k, c) in terms {
        sum = sum.add_series(&Series::monomial(ring, c, k));
    }
    Ok(sum)
}

/// A ring element as JSON: an integer for prime fields and `Z/p^n`, the
/// coordinate list otherwise.
pub fn elem_to_json(ring: &GaloisRing, c: &Elem) -> Value {
    let coords = ring.coords(c);
    if ring.d() == 1 {
        json!(coords[0])
    } else {
        json!(coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Coords(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    /// `[degree, coefficient]`, ascending.
    pub terms: Vec<(i64, CoeffJson)>,
    pub prec: Option<i64>,
    pub exact: bool,
}

pub fn series_to_json(s: &Series) -> SeriesJson {
    let ring = s.ring();
    let terms = s
        .terms()
        .map(|(k, c)| {
            let coords = ring.coords(&c);
            let coeff = if ring.d() == 1 {
                CoeffJson::Int(coords[0] as i64)
            } else {
                CoeffJson::Coords(coords.iter().map(|&x| x as i64).collect())
            };
            (k, coeff)
        })
        .collect();
    SeriesJson { terms, prec: s.precision(), exact: s.is_exact() }
}

pub fn series_from_json(ring: &Arc<GaloisRing>, js: &SeriesJson) -> Result<Series, String> {
    if js.exact != js.prec.is_none() {
        return Err("'exact' must be true exactly when 'prec' is null".into());
    }
    let mut terms = Vec::with_capacity(js.terms.len());
    for (k, c) in &js.terms {
        let coords: Vec<i128> = match c {
            CoeffJson::Int(v) => vec![*v as i128],
            CoeffJson::Coords(v) => v.iter().map(|&x| x as i128).collect(),
        };
        if coords.len() > ring.d() {
            return Err(format!("coefficient of u^{k} has {} coordinates", coords.len()));
        }
        terms.push((*k, ring.from_coords(&coords).map_err(|e| e.to_string())?));
    }
    let mut sum = Series::new(ring, [], js.prec);
    for (k, c) in terms {
        sum = sum.add_series(&Series::monomial(ring, c, k));
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub p: u64,
    pub d: usize,
    pub n: u32,
    /// Ascending coefficients of the residue-field modulus, monic.
    pub modulus: Vec<u64>,
}

pub fn ring_to_json(ring: &GaloisRing) -> RingJson {
    RingJson { p: ring.p(), d: ring.d(), n: ring.n(), modulus: ring.modulus().to_vec() }
}

pub fn ring_from_json(js: &RingJson) -> Result<Arc<GaloisRing>, String> {
    let field = FieldDesc::new(js.p, js.d, &js.modulus).map_err(|e| e.to_string())?;
    GaloisRing::new(&field, js.n).map(Arc::new).map_err(|e| e.to_string())
}

/// `"c0,c1,...,1"` (ascending) or `"cyclotomic"` / `"cyclotomic:N"`.
pub fn parse_eisenstein(p: u64, text: &str) -> Result<EisensteinPoly, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = t.strip_prefix("cyclotomic") {
        let n = match rest.strip_prefix(':') {
            Some(level) => level.parse::<u32>().map_err(|_| format!("bad cyclotomic level '{level}'"))?,
            None if rest.is_empty() => 1,
            None => return Err(format!("unrecognised Eisenstein spec '{text}'")),
        };
        return cyclotomic_eisenstein(p, n).map_err(|e| e.to_string());
    }
    let coeffs = t
        .split(',')
        .map(|c| c.parse::<i128>().map_err(|_| format!("bad coefficient '{c}'")))
        .collect::<Result<Vec<_>, _>>()?;
    eisenstein_validate(p, &coeffs).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EisensteinJson {
    Coeffs(Vec<i64>),
    Named(String),
}

impl EisensteinJson {
    pub fn resolve(&self, p: u64) -> Result<EisensteinPoly, String> {
        match self {
            EisensteinJson::Coeffs(c) => {
                let c: Vec<i128> = c.iter().map(|&x| x as i128).collect();
                eisenstein_validate(p, &c).map_err(|e| e.to_string())
            }
            EisensteinJson::Named(s) => parse_eisenstein(p, s),
        }
    }
}

fn one() -> usize {
    1
}

fn zero_text() -> String {
    "0".into()
}

/// Input of `check`: one `(j₁, j₂, f)` over a given `E` and residue field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub schema: u32,
    pub p: u64,
    #[serde(default = "one")]
    pub d: usize,
    /// Residue-field modulus; the standard one when absent.
    #[serde(default)]
    pub modulus: Option<Vec<u64>>,
    pub eisenstein: EisensteinJson,
    pub j1: u32,
    pub j2: u32,
    /// Series text over `k`.
    #[serde(default = "zero_text")]
    pub f: String,
}

impl ModuleSpec {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let spec: ModuleSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if spec.schema != SCHEMA {
            return Err(format!("unsupported schema {}", spec.schema));
        }
        Ok(spec)
    }

    pub fn field(&self) -> Result<FieldDesc, String> {
        match &self.modulus {
            Some(m) => FieldDesc::new(self.p, self.d, m),
            None => FieldDesc::standard(self.p, self.d),
        }
        .map_err(|e| e.to_string())
    }
}

/// `{n, f, A, verified_window}` for a tuple that has been verified.
pub fn tuple_to_json(t: &GeneralTuple, verdict: &TupleVerdict) -> Value {
    let (lo, hi) = verdict.verified_window;
    json!({
        "n": t.f.first().map_or(0, |s| s.ring().n()),
        "f": t.f.iter().map(series_to_json).collect::<Vec<_>>(),
        "A": t.a.iter().map(|row| row.iter().map(series_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "verified_window": [lo, hi],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Arc<GaloisRing> {
        Arc::new(GaloisRing::field(&FieldDesc::prime(3).unwrap()))
    }

    fn z9() -> Arc<GaloisRing> {
        Arc::new(GaloisRing::new(&FieldDesc::prime(3).unwrap(), 2).unwrap())
    }

    #[test]
    fn parses_printed_forms() {
        let k = f3();
        let s = parse_series(&k, "2*u^-2 + 1 + u + 2*u^3 + O(u^5)").unwrap();
        assert_eq!(s, Series::from_ints(&k, &[(-2, 2), (0, 1), (1, 1), (3, 2)], Some(5)));
        assert_eq!(parse_series(&k, "0").unwrap(), Series::zero(&k));
        assert_eq!(parse_series(&k, "O(u^4)").unwrap(), Series::zero_to(&k, 4));
        assert_eq!(parse_series(&k, "u").unwrap(), Series::u_pow(&k, 1));
    }

    #[test]
    fn parses_hand_written_forms() {
        let w = z9();
        assert_eq!(parse_series(&w, "u^8 - 3").unwrap(), Series::from_ints(&w, &[(0, 6), (8, 1)], None));
        assert_eq!(parse_series(&w, "-u^(-1)+ 2 u").unwrap(), Series::from_ints(&w, &[(-1, 8), (1, 2)], None));
        assert_eq!(parse_series(&w, "u + u").unwrap(), Series::from_ints(&w, &[(1, 2)], None));
        assert_eq!(parse_series(&w, "3*u^2 + 6*u^2").unwrap(), Series::zero(&w));
    }

    #[test]
    fn coordinate_coefficients() {
        let k9 = Arc::new(GaloisRing::field(&FieldDesc::standard(3, 2).unwrap()));
        let s = parse_series(&k9, "(0,1)*u + (2,1)").unwrap();
        assert_eq!(s.coeff(1), k9.generator());
        assert_eq!(k9.coords(&s.coeff(0)), &[2, 1]);
        assert!(parse_series(&k9, "(1,1,1)").is_err());
    }

    #[test]
    fn rejects_malformed() {
        let k = f3();
        for bad in ["", "u^", "2*", "O(u^3) + u", "u +", "u2", "O(u^2) + O(u^3)", "-O(u^2)", "x", "u^(2"] {
            assert!(parse_series(&k, bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn display_roundtrip_examples() {
        let w = z9();
        for s in [
            Series::from_ints(&w, &[(-3, 3), (0, 8), (5, 1)], Some(9)),
            Series::from_ints(&w, &[(2, 4)], None),
            Series::zero_to(&w, -2),
        ] {
            assert_eq!(parse_series(&w, &s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn json_roundtrips() {
        let k9 = Arc::new(GaloisRing::field(&FieldDesc::standard(3, 2).unwrap()));
        let s = Series::new(&k9, [(-1, k9.generator()), (2, k9.one())], Some(6));
        let js = series_to_json(&s);
        let text = serde_json::to_string(&js).unwrap();
        assert_eq!(text, r#"{"terms":[[-1,[0,1]],[2,[1,0]]],"prec":6,"exact":false}"#);
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(series_from_json(&k9, &back).unwrap(), s);

        let ring = ring_to_json(&z9());
        assert_eq!(ring, RingJson { p: 3, d: 1, n: 2, modulus: vec![1, 1] });
        assert_eq!(ring_from_json(&ring).unwrap().pn(), 9);

        let bad = SeriesJson { terms: vec![], prec: None, exact: false };
        assert!(series_from_json(&k9, &bad).is_err());
    }

    #[test]
    fn eisenstein_specs() {
        assert_eq!(parse_eisenstein(3, "3, 3, 1").unwrap().coeffs(), &[3, 3, 1]);
        assert_eq!(parse_eisenstein(3, "cyclotomic").unwrap().coeffs(), &[3, 3, 1]);
        assert_eq!(parse_eisenstein(2, "cyclotomic:2").unwrap().coeffs(), &[2, 2, 1]);
        assert!(parse_eisenstein(3, "9,0,1").unwrap_err().contains("NotEisenstein"));
        assert!(parse_eisenstein(3, "3,x").is_err());
        assert!(parse_eisenstein(3, "cyclotomicX").is_err());
    }

    #[test]
    fn module_spec_file() {
        let spec = ModuleSpec::from_json(r#"{"schema":1,"p":3,"eisenstein":[-3,0,0,0,0,0,0,0,1],"j1":3,"j2":1}"#).unwrap();
        assert_eq!((spec.d, spec.f.as_str()), (1, "0"));
        assert_eq!(spec.eisenstein.resolve(3).unwrap().e(), 8);
        assert!(ModuleSpec::from_json(r#"{"schema":2,"p":3,"eisenstein":"cyclotomic","j1":1,"j2":0}"#).is_err());
        assert!(ModuleSpec::from_json(r#"{"schema":1,"p":3,"eisenstein":"cyclotomic","j1":1}"#).is_err());
        assert!(ModuleSpec::from_json(r#"{"schema":1,"p":3,"eisenstein":[3,3,1],"j1":1,"j2":0,"x":0}"#).is_err());
    }
}
