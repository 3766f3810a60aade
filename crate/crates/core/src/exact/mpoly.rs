//! Sparse multivariate polynomials over the rationals in named parameters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::param::Param;
use super::rat::Rat;

/// A power product of parameters, sorted by parameter handle.
///
/// Ordered graded-lexicographically, which is a monomial order, so the
/// leading term of a product is the product of leading terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Param, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(p: Param) -> Monomial {
        let mut v = SmallVec::new();
        v.push((p, 1));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, p: Param) -> u32 {
        self.0.iter().find(|(q, _)| *q == p).map_or(0, |&(_, e)| e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Param, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn has_algebraic(&self) -> bool {
        self.0.iter().any(|(p, _)| p.is_algebraic())
    }

    /// Product of two monomials with algebraic relations applied; returns
    /// the reduced monomial and the rational factor the relations produced.
    pub fn mul(&self, other: &Monomial) -> (Monomial, Option<Rat>) {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(Param, u32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let mut factor: Option<Rat> = None;
        let (mut i, mut j) = (0, 0);
        let mut push = |p: Param, e: u32, out: &mut SmallVec<[(Param, u32); 4]>| {
            if e >= 2 && p.is_algebraic() {
                let r = p.relation().expect("algebraic parameter has a relation");
                let f = r.pow((e / 2) as i32);
                factor = Some(match factor.take() {
                    Some(g) => g * f,
                    None => f,
                });
                if e % 2 == 1 {
                    out.push((p, 1));
                }
            } else {
                out.push((p, e));
            }
        };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    push(a[i].0, a[i].1, &mut out);
                    i += 1;
                }
                Ordering::Greater => {
                    push(b[j].0, b[j].1, &mut out);
                    j += 1;
                }
                Ordering::Equal => {
                    push(a[i].0, a[i].1 + b[j].1, &mut out);
                    i += 1;
                    j += 1;
                }
            }
        }
        for &(p, e) in &a[i..] {
            push(p, e, &mut out);
        }
        for &(p, e) in &b[j..] {
            push(p, e, &mut out);
        }
        (Monomial(out), factor)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(Param, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for &(p, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == p {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((p, e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < p {
                return None;
            } else {
                out.push((p, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn without(&self, p: Param) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(q, _)| *q != p).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].0 != b[j].0 {
                // The side holding the smaller variable has a positive exponent the other lacks.
                return if a[i].0 < b[j].0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if a[i].1 != b[j].1 {
                return a[i].1.cmp(&b[j].1);
            }
            i += 1;
            j += 1;
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Multivariate polynomial with rational coefficients. No zero coefficient is
/// ever stored, and algebraic parameters appear with exponent at most one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn var(p: Param) -> MPoly {
        MPoly::monomial(Monomial::var(p), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> MPoly {
        // Route through multiplication so relations apply to hand-built monomials.
        let (m, f) = Monomial::one().mul(&m);
        let c = match f {
            Some(f) => c * f,
            None => c,
        };
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// The value when the polynomial has no parameters.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(p, _)| p))
            .collect()
    }

    pub fn has_algebraic(&self) -> bool {
        self.terms.keys().any(Monomial::has_algebraic)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, p: Param) -> u32 {
        self.terms.keys().map(|m| m.exponent(p)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MPoly {
        let mut out = MPoly::zero();
        for (n, v) in &self.terms {
            let (prod, f) = n.mul(m);
            let mut coeff = v * c;
            if let Some(f) = f {
                coeff = coeff * f;
            }
            out.add_term(prod, coeff);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rat {
        let mut g = Rat::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            Rat::one()
        } else {
            g
        }
    }

    /// Sign of the leading coefficient (false for zero).
    pub fn leading_is_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    /// Replaces `p` by `-p` (the Galois conjugate for an algebraic parameter).
    pub fn conjugate(&self, p: Param) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if m.exponent(p) % 2 == 1 {
                        (m.clone(), -c)
                    } else {
                        (m.clone(), c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (mut num, mut den) = (self.clone(), d.clone());
        // Rationalize algebraic parameters out of the divisor.
        while let Some(p) = den.params().into_iter().find(|p| p.is_algebraic()) {
            let conj = den.conjugate(p);
            num = &num * &conj;
            den = &den * &conj;
        }
        if let Some(c) = den.constant_value() {
            return Some(num.scale(&c.recip()));
        }
        let (lm, lc) = {
            let (m, c) = den.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = num;
        let mut quot = MPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(&lm)?;
            let qc = rc / &lc;
            rem = &rem - &den.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Substitutes rational values for the given parameters.
    pub fn specialize(&self, values: &HashMap<Param, Rat>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (p, e) in m.factors() {
                match values.get(&p) {
                    Some(v) => coeff = coeff * v.pow(e as i32),
                    None => {
                        let (r, f) = rest.mul(&Monomial(SmallVec::from_elem((p, e), 1)));
                        rest = r;
                        if let Some(f) = f {
                            coeff = coeff * f;
                        }
                    }
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Substitutes the polynomial `value` for parameter `p`.
    pub fn subst(&self, p: Param, value: &MPoly) -> MPoly {
        let max = self.degree_in(p);
        let mut powers = vec![MPoly::one()];
        for i in 1..=max as usize {
            let next = &powers[i - 1] * value;
            powers.push(next);
        }
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(p);
            let rest = MPoly::monomial(m.without(p), c.clone());
            out = &out + &(&rest * &powers[e as usize]);
        }
        out
    }

    /// Coefficients with respect to one parameter: `self = sum_i c_i * p^i`.
    pub fn coefficients_in(&self, p: Param) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(p);
            out.entry(e).or_default().add_term(m.without(p), c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rat> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (m, f) = ma.mul(mb);
                let mut c = ca * cb;
                if let Some(f) = f {
                    c = c * f;
                }
                use std::collections::hash_map::Entry;
                match acc.entry(m) {
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += &c;
                    }
                }
            }
        }
        MPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Rat> for MPoly {
    fn from(c: Rat) -> MPoly {
        MPoly::constant(c)
    }
}

impl From<Param> for MPoly {
    fn from(p: Param) -> MPoly {
        MPoly::var(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> MPoly {
        MPoly::var(Param::of("k"))
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(Rat::int(n))
    }

    #[test]
    fn difference_of_squares_expands_to_zero() {
        let lhs = &(&k() * &k()) - &c(4);
        let rhs = &(&k() - &c(2)) * &(&k() + &c(2));
        assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = MPoly::var(Param::of("sqrt2"));
        assert_eq!(&s * &s, c(2));
        let i = MPoly::var(Param::of("i"));
        assert_eq!(i.pow(3), -&i);
        assert_eq!(i.pow(4), c(1));
    }

    #[test]
    fn exact_division() {
        let num = &(&k() * &k()) - &c(4);
        assert_eq!(num.div_exact(&(&k() - &c(2))).unwrap(), &k() + &c(2));
        assert!(num.div_exact(&(&k() - &c(3))).is_none());
        let a = MPoly::var(Param::of("a"));
        let p = &(&a * &k()) + &(&a * &a);
        assert_eq!(p.div_exact(&a).unwrap(), &k() + &a);
    }

    #[test]
    fn division_by_algebraic_divisor() {
        // (2 - sqrt2 k)... (sqrt2 + 1) * (sqrt2 - 1) = 1, so 1 / (sqrt2 + 1) = sqrt2 - 1.
        let s = MPoly::var(Param::of("sqrt2"));
        let q = c(1).div_exact(&(&s + &c(1))).unwrap();
        assert_eq!(q, &s - &c(1));
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        let a = Monomial::var(Param::of("a"));
        let b = Monomial::var(Param::of("b"));
        let (ab, _) = a.mul(&b);
        let (aa, _) = a.mul(&a);
        assert!(ab > a && ab > b);
        let cmp1 = aa.cmp(&ab);
        let (aab, _) = aa.mul(&b);
        let (abb, _) = ab.mul(&b);
        assert_eq!(cmp1, aab.cmp(&abb));
    }

    #[test]
    fn substitution() {
        let kk = Param::of("k");
        let p = &(&k() * &k()) + &k();
        let s = p.subst(kk, &(&k() + &c(1)));
        let expect = &(&(&k() * &k()) + &k().scale(&Rat::int(3))) + &c(2);
        assert_eq!(s, expect);
        let mut vals = HashMap::new();
        vals.insert(kk, Rat::int(3));
        assert_eq!(p.specialize(&vals), c(12));
    }

    #[test]
    fn content_is_positive() {
        let p = &k().scale(&Rat::new(-4, 3)) + &c(2);
        assert_eq!(p.content(), Rat::new(2, 3));
    }
}
