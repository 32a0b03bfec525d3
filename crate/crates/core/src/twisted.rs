//! Exact arithmetic in the twisted torus: Laurent polynomials and fractions
//! in twisted characters `x_γ` with `x_a · x_b = (−1)^{⟨a,b⟩} x_{a+b}`.
//!
//! The lattice has rank four with `⟨γ₁,γ₂⟩ = 1` and kernel spanned by `γ₃`,
//! `γ₄`. For display only, `x_n` is rewritten as `(−1)^{n₁n₂} x₁^{n₁}⋯x₄^{n₄}`,
//! which is a ring isomorphism onto ordinary Laurent polynomials.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeClass(pub [i32; 4]);

impl LatticeClass {
    pub const ZERO: LatticeClass = LatticeClass([0; 4]);

    pub fn basis(i: usize) -> LatticeClass {
        let mut c = [0; 4];
        c[i] = 1;
        LatticeClass(c)
    }

    pub fn add(self, o: LatticeClass) -> LatticeClass {
        LatticeClass(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn neg(self) -> LatticeClass {
        LatticeClass(self.0.map(|x| -x))
    }

    pub fn scale(self, k: i32) -> LatticeClass {
        LatticeClass(self.0.map(|x| k * x))
    }

    /// Order-three action of the cover automorphism.
    pub fn sigma(self) -> LatticeClass {
        const IMAGES: [[i32; 4]; 4] = [[-1, 1, 1, 1], [-1, 0, 1, 0], [0, 0, 0, 1], [0, 0, -1, -1]];
        let mut out = [0; 4];
        for (i, img) in IMAGES.iter().enumerate() {
            for j in 0..4 {
                out[j] += self.0[i] * img[j];
            }
        }
        LatticeClass(out)
    }

    /// `{γ, σγ, σ²γ}`.
    pub fn orbit(self) -> [LatticeClass; 3] {
        let a = self.sigma();
        [self, a, a.sigma()]
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// `⟨a,b⟩ = a₁b₂ − a₂b₁`.
pub fn pairing(a: LatticeClass, b: LatticeClass) -> i32 {
    a.0[0] * b.0[1] - a.0[1] * b.0[0]
}

/// The pairing as a matrix on the basis.
pub fn pairing_matrix() -> [[i32; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| pairing(LatticeClass::basis(i), LatticeClass::basis(j))))
}

fn twist(a: LatticeClass, b: LatticeClass) -> i128 {
    if pairing(a, b).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Finite integer combination of twisted characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    pub terms: BTreeMap<LatticeClass, i128>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Laurent {
        Laurent::monomial(LatticeClass::ZERO, 1)
    }

    pub fn monomial(c: LatticeClass, coeff: i128) -> Laurent {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(c, coeff);
        }
        Laurent { terms }
    }

    /// `x_γ`.
    pub fn x(c: LatticeClass) -> Laurent {
        Laurent::monomial(c, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, c: LatticeClass, v: i128) {
        let e = self.terms.entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.terms.remove(&c);
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (&c, &v) in &o.terms {
            r.add_term(c, v);
        }
        r
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&c, &v)| (c, -v)).collect() }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (&a, &u) in &self.terms {
            for (&b, &v) in &o.terms {
                r.add_term(a.add(b), twist(a, b) * u * v);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Laurent {
        (0..k).fold(Laurent::one(), |acc, _| acc.mul(self))
    }

    fn lead(&self) -> Option<(LatticeClass, i128)> {
        self.terms.iter().next_back().map(|(&c, &v)| (c, v))
    }

    pub fn as_monomial(&self) -> Option<(LatticeClass, i128)> {
        if self.terms.len() == 1 {
            self.lead()
        } else {
            None
        }
    }

    fn content(&self) -> i128 {
        self.terms.values().fold(0, |g, &v| gcd(g, v.abs()))
    }

    fn div_scalar(&self, k: i128) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&c, &v)| (c, v / k)).collect() }
    }

    fn bounds(&self) -> ([i32; 4], [i32; 4]) {
        let mut lo = [i32::MAX; 4];
        let mut hi = [i32::MIN; 4];
        for c in self.terms.keys() {
            for i in 0..4 {
                lo[i] = lo[i].min(c.0[i]);
                hi[i] = hi[i].max(c.0[i]);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / d` when it exists.
    pub fn exact_div(&self, d: &Laurent) -> Option<Laurent> {
        let (dl, dv) = d.lead()?;
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (nlo, nhi) = self.bounds();
        let (dlo, dhi) = d.bounds();
        let mut q = Laurent::zero();
        let mut r = self.clone();
        while let Some((rl, rv)) = r.lead() {
            let e = LatticeClass(std::array::from_fn(|i| rl.0[i] - dl.0[i]));
            if (0..4).any(|i| e.0[i] < nlo[i] - dlo[i] || e.0[i] > nhi[i] - dhi[i]) {
                return None;
            }
            let s = twist(e, dl) * dv;
            if rv % s != 0 {
                return None;
            }
            let t = Laurent::monomial(e, rv / s);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Display rewriting: coefficient of `x₁^{n₁}⋯x₄^{n₄}` for each term.
    pub fn untwisted(&self) -> BTreeMap<[i32; 4], i128> {
        self.terms.iter().map(|(c, &v)| (c.0, if (c.0[0] * c.0[1]).rem_euclid(2) == 0 { v } else { -v })).collect()
    }

    pub fn from_untwisted(m: &BTreeMap<[i32; 4], i128>) -> Laurent {
        let mut r = Laurent::zero();
        for (&n, &v) in m {
            r.add_term(LatticeClass(n), if (n[0] * n[1]).rem_euclid(2) == 0 { v } else { -v });
        }
        r
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fraction of twisted Laurent polynomials, kept with coprime integer
/// content and a denominator whose lexicographically least class has a
/// positive coefficient; reduced to a Laurent polynomial whenever the
/// division is exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistedRational {
    pub numerator: Laurent,
    pub denominator: Laurent,
}

impl PartialEq for TwistedRational {
    fn eq(&self, o: &TwistedRational) -> bool {
        self.numerator.mul(&o.denominator) == o.numerator.mul(&self.denominator)
    }
}

impl Eq for TwistedRational {}

impl From<Laurent> for TwistedRational {
    fn from(l: Laurent) -> TwistedRational {
        TwistedRational { numerator: l, denominator: Laurent::one() }
    }
}

impl TwistedRational {
    pub fn x(c: LatticeClass) -> TwistedRational {
        Laurent::x(c).into()
    }

    pub fn new(numerator: Laurent, denominator: Laurent) -> TwistedRational {
        assert!(!denominator.is_zero(), "zero denominator");
        let mut r = TwistedRational { numerator, denominator };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if let Some(q) = self.numerator.exact_div(&self.denominator) {
            self.numerator = q;
            self.denominator = Laurent::one();
            return;
        }
        let g = gcd(self.numerator.content(), self.denominator.content());
        let first = *self.denominator.terms.values().next().unwrap();
        let g = if first < 0 { -g } else { g };
        if g != 0 && g != 1 {
            self.numerator = self.numerator.div_scalar(g);
            self.denominator = self.denominator.div_scalar(g);
        }
    }

    pub fn mul(&self, o: &TwistedRational) -> TwistedRational {
        TwistedRational::new(self.numerator.mul(&o.numerator), self.denominator.mul(&o.denominator))
    }

    pub fn div(&self, o: &TwistedRational) -> TwistedRational {
        TwistedRational::new(self.numerator.mul(&o.denominator), self.denominator.mul(&o.numerator))
    }

    pub fn add(&self, o: &TwistedRational) -> TwistedRational {
        if self.denominator == o.denominator {
            return TwistedRational::new(self.numerator.add(&o.numerator), self.denominator.clone());
        }
        TwistedRational::new(
            self.numerator.mul(&o.denominator).add(&o.numerator.mul(&self.denominator)),
            self.denominator.mul(&o.denominator),
        )
    }

    pub fn neg(&self) -> TwistedRational {
        TwistedRational { numerator: self.numerator.neg(), denominator: self.denominator.clone() }
    }

    pub fn sub(&self, o: &TwistedRational) -> TwistedRational {
        self.add(&o.neg())
    }

    pub fn pow(&self, k: i32) -> TwistedRational {
        let p = TwistedRational::new(self.numerator.pow(k.unsigned_abs()), self.denominator.pow(k.unsigned_abs()));
        if k < 0 {
            TwistedRational::from(Laurent::one()).div(&p)
        } else {
            p
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.denominator == Laurent::one()
    }

    /// Fixed display in the generators `x1..x4`.
    pub fn display(&self) -> String {
        if self.is_laurent() {
            display_laurent(&self.numerator)
        } else {
            format!("({})/({})", display_laurent(&self.numerator), display_laurent(&self.denominator))
        }
    }
}

/// `x_β ↦ x_β ∏ (1 − x_γ)^{Ω(γ)⟨γ,β⟩}` for the classes on one ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub classes: Vec<(LatticeClass, i32)>,
}

impl Automorphism {
    fn monomial_image(&self, n: LatticeClass, coeff: i128, shift: &[i32]) -> Laurent {
        let mut out = Laurent::monomial(n, coeff);
        for (k, &(g, omega)) in self.classes.iter().enumerate() {
            let e = omega * pairing(g, n) + shift[k];
            debug_assert!(e >= 0);
            let f = Laurent::one().sub(&Laurent::x(g));
            out = out.mul(&f.pow(e as u32));
        }
        out
    }

    /// Image of a Laurent polynomial as a fraction with denominator
    /// `∏ (1 − x_γ)^{m_γ}`.
    fn apply_laurent(&self, p: &Laurent) -> (Laurent, Laurent) {
        let shift: Vec<i32> = self
            .classes
            .iter()
            .map(|&(g, omega)| p.terms.keys().map(|&n| (-omega * pairing(g, n)).max(0)).max().unwrap_or(0))
            .collect();
        let mut num = Laurent::zero();
        for (&n, &v) in &p.terms {
            num = num.add(&self.monomial_image(n, v, &shift));
        }
        let mut den = Laurent::one();
        for (k, &(g, _)) in self.classes.iter().enumerate() {
            den = den.mul(&Laurent::one().sub(&Laurent::x(g)).pow(shift[k] as u32));
        }
        (num, den)
    }

    pub fn apply(&self, f: &TwistedRational) -> TwistedRational {
        let (n1, d1) = self.apply_laurent(&f.numerator);
        let (n2, d2) = self.apply_laurent(&f.denominator);
        TwistedRational::new(n1.mul(&d2), d1.mul(&n2))
    }

    pub fn apply_x(&self, target: LatticeClass) -> TwistedRational {
        self.apply(&TwistedRational::x(target))
    }
}

/// `S_ℓ*(x_target)` for the classes on a single ray.
pub fn bps_automorphism(ray_classes: &[(LatticeClass, i32)], target: LatticeClass) -> TwistedRational {
    Automorphism { classes: ray_classes.to_vec() }.apply_x(target)
}

fn display_monomial(n: &[i32; 4]) -> String {
    let mut parts = vec![];
    for (i, &e) in n.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Terms in decreasing lexicographic order of exponent.
pub fn display_laurent(p: &Laurent) -> String {
    let u = p.untwisted();
    if u.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (n, &v)) in u.iter().rev().enumerate() {
        let mono = display_monomial(n);
        let (sign, mag) = if v < 0 { ("-", -v) } else { ("+", v) };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        match (mag, mono.is_empty()) {
            (_, true) => out.push_str(&mag.to_string()),
            (1, false) => out.push_str(&mono),
            (_, false) => out.push_str(&format!("{mag}*{mono}")),
        }
    }
    out
}

/// Parses printed expressions in the display variables, e.g.
/// `x₁(1 + x₁/(x₂x₃²x₄))`, into twisted fractions. Accepts `x1`/`x₁`,
/// `^k` or superscript exponents, implicit products, `+ − * /` and
/// parentheses.
pub fn parse_display(s: &str) -> Result<TwistedRational, String> {
    let norm: String = s
        .chars()
        .map(|c| match c {
            '₁' => '1',
            '₂' => '2',
            '₃' => '3',
            '₄' => '4',
            '−' => '-',
            '·' => '*',
            _ => c,
        })
        .collect();
    let mut p = Parser { s: norm.chars().filter(|c| !c.is_whitespace()).collect(), i: 0 };
    let r = p.expr()?;
    if p.i != p.s.len() {
        return Err(format!("unexpected '{}' at {}", p.s[p.i], p.i));
    }
    Ok(r)
}

struct Parser {
    s: Vec<char>,
    i: usize,
}

fn sup_digit(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c).map(|p| p as u32)
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<TwistedRational, String> {
        let mut neg = false;
        if self.peek() == Some('-') {
            neg = true;
            self.i += 1;
        } else if self.peek() == Some('+') {
            self.i += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TwistedRational, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.i += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some('/') => {
                    self.i += 1;
                    acc = acc.div(&self.factor()?);
                }
                Some(c) if c == '(' || c == 'x' || c.is_ascii_digit() => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<i32, String> {
        if self.peek() == Some('^') {
            self.i += 1;
            let neg = if self.peek() == Some('-') {
                self.i += 1;
                true
            } else {
                false
            };
            let v = self.number()? as i32;
            return Ok(if neg { -v } else { v });
        }
        let mut v = None;
        while let Some(d) = self.peek().and_then(sup_digit) {
            v = Some(v.unwrap_or(0) * 10 + d as i32);
            self.i += 1;
        }
        Ok(v.unwrap_or(1))
    }

    fn number(&mut self) -> Result<i128, String> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(format!("expected a number at {start}"));
        }
        self.s[start..self.i].iter().collect::<String>().parse().map_err(|e| format!("{e}"))
    }

    fn factor(&mut self) -> Result<TwistedRational, String> {
        let base = match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(format!("expected ')' at {}", self.i));
                }
                self.i += 1;
                e
            }
            Some('x') => {
                self.i += 1;
                let k = self.peek().and_then(|c| c.to_digit(10)).ok_or("expected generator index")? as usize;
                if !(1..=4).contains(&k) {
                    return Err(format!("no generator x{k}"));
                }
                self.i += 1;
                TwistedRational::x(LatticeClass::basis(k - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Laurent::monomial(LatticeClass::ZERO, v).into()
            }
            other => return Err(format!("unexpected {other:?} at {}", self.i)),
        };
        let e = self.exponent()?;
        Ok(if e == 1 { base } else { base.pow(e) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: [i32; 4]) -> LatticeClass {
        LatticeClass(a)
    }

    #[test]
    fn twisted_products() {
        let x1 = TwistedRational::x(g([1, 0, 0, 0]));
        let x2 = TwistedRational::x(g([0, 1, 0, 0]));
        assert_eq!(x1.mul(&x2), TwistedRational::x(g([1, 1, 0, 0])).neg());
        let x3 = TwistedRational::x(g([0, 0, 1, 0]));
        let x4 = TwistedRational::x(g([0, 0, 0, 1]));
        assert_eq!(x3.mul(&x4), TwistedRational::x(g([0, 0, 1, 1])));
        let a = g([2, -1, 3, 0]);
        assert_eq!(TwistedRational::x(a).mul(&TwistedRational::x(a.neg())), Laurent::one().into());
    }

    #[test]
    fn pairing_kernel() {
        let m = pairing_matrix();
        assert_eq!(m[0][1], 1);
        assert_eq!(m[1][0], -1);
        for i in 2..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], 0);
                assert_eq!(m[j][i], 0);
            }
        }
    }

    #[test]
    fn sigma_has_order_three() {
        for i in 0..4 {
            let b = LatticeClass::basis(i);
            assert_eq!(b.sigma().sigma().sigma(), b);
        }
        assert_eq!(g([1, 0, 0, 0]).orbit(), [g([1, 0, 0, 0]), g([-1, 1, 1, 1]), g([0, -1, -1, -1])]);
    }

    #[test]
    fn single_ray_automorphisms() {
        let x2 = bps_automorphism(&[(g([1, 0, 0, 0]), 1)], g([0, 1, 0, 0]));
        assert_eq!(x2, parse_display("x2(1 - x1)").unwrap());
        let x1 = bps_automorphism(&[(g([1, -1, -2, -1]), 1)], g([1, 0, 0, 0]));
        assert_eq!(x1, parse_display("x₁(1 + x₁/(x₂x₃²x₄))").unwrap());
        for k in [2, 3] {
            let b = LatticeClass::basis(k);
            assert_eq!(bps_automorphism(&[(g([1, -1, -2, -1]), 1)], b), TwistedRational::x(b));
        }
    }

    #[test]
    fn exact_division() {
        let p = parse_display("(1 + x1)*(x2 - x3^2)").unwrap().numerator;
        let d = parse_display("x2 - x3^2").unwrap().numerator;
        assert_eq!(p.exact_div(&d).unwrap(), parse_display("1 + x1").unwrap().numerator);
        assert!(parse_display("1 + x1").unwrap().numerator.exact_div(&d).is_none());
    }

    #[test]
    fn display_roundtrip() {
        let e = parse_display("x1 + x1^2/(x2*x3^2*x4) - 3").unwrap();
        assert_eq!(parse_display(&e.display()).unwrap(), e);
    }
}
