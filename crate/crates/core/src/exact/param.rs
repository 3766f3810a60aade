//! Named parameters of the coefficient field.
//!
//! Parameters are interned process-wide; a [`Param`] is a copyable handle.
//! A parameter may carry a quadratic relation `p^2 = r` with rational `r`,
//! which is how `sqrt2`, `sqrt3` and `i` enter the field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use super::rat::Rat;
use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(u32);

// Set on handles of relation-bearing parameters so hot paths can skip the registry.
const ALGEBRAIC_BIT: u32 = 1 << 31;

struct Entry {
    name: Arc<str>,
    relation: Option<Rat>,
}

#[derive(Default)]
struct Registry {
    entries: Vec<Entry>,
    by_name: HashMap<Arc<str>, u32>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// Relation implied by a reserved name: `i` squares to -1, `sqrtN` to N.
fn reserved_relation(name: &str) -> Option<Rat> {
    if name == "i" {
        return Some(Rat::int(-1));
    }
    let digits = name.strip_prefix("sqrt")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let n: i64 = digits.parse().ok()?;
    is_prime(n).then(|| Rat::int(n))
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|f| f * f <= n).all(|f| n % f != 0)
}

/// Names of the form `sqrtN` with `N` composite, which would alias products
/// of the prime roots.
fn is_composite_root(name: &str) -> bool {
    name.strip_prefix("sqrt").is_some_and(|d| {
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && reserved_relation(name).is_none()
    })
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn intern(name: &str, relation: Option<Rat>) -> Result<Param, Error> {
    if !is_identifier(name) || name == "x" || name == "D" || name == "exp" || name == "sqrt" {
        return Err(Error::InvalidParam(format!(
            "`{name}` is not a usable parameter name"
        )));
    }
    {
        let reg = registry().read().unwrap();
        if let Some(&id) = reg.by_name.get(name) {
            let existing = &reg.entries[(id & !ALGEBRAIC_BIT) as usize].relation;
            if existing != &relation {
                return Err(Error::InvalidParam(format!(
                    "parameter `{name}` already declared with a different relation"
                )));
            }
            return Ok(Param(id));
        }
    }
    let mut reg = registry().write().unwrap();
    if let Some(&id) = reg.by_name.get(name) {
        return Ok(Param(id));
    }
    let mut id = reg.entries.len() as u32;
    if relation.is_some() {
        id |= ALGEBRAIC_BIT;
    }
    let name: Arc<str> = Arc::from(name);
    reg.entries.push(Entry {
        name: name.clone(),
        relation,
    });
    reg.by_name.insert(name, id);
    Ok(Param(id))
}

impl Param {
    /// Interns a parameter by name. Reserved names (`i` and `sqrtP` for primes `P`)
    /// are algebraic; every other identifier is transcendental.
    pub fn named(name: &str) -> Result<Param, Error> {
        if is_composite_root(name) {
            return Err(Error::InvalidParam(format!(
                "`{name}` is reserved; use sqrt(n) or products of prime roots"
            )));
        }
        intern(name, reserved_relation(name))
    }

    /// Declares an algebraic parameter with `p^2 = r`.
    pub fn algebraic(name: &str, r: Rat) -> Result<Param, Error> {
        if r.is_zero() {
            return Err(Error::InvalidParam(format!(
                "relation for `{name}` must be nonzero"
            )));
        }
        intern(name, Some(r))
    }

    /// Algebraic parameter for the square root of an integer, extracting
    /// square factors. Returns `(coefficient, param)` with
    /// `sqrt(n) = coefficient * param`, or `param = None` when `n` is a square.
    pub fn sqrt_of(n: i64) -> (i64, Option<Vec<Param>>) {
        assert!(n != 0);
        let neg = n < 0;
        let mut m = n.unsigned_abs();
        let mut coeff: i64 = 1;
        let mut f = 2u64;
        while f * f <= m {
            while m.is_multiple_of(f * f) {
                m /= f * f;
                coeff *= f as i64;
            }
            f += 1;
        }
        let mut params = Vec::new();
        let mut p = 2u64;
        while m > 1 {
            if m.is_multiple_of(p) {
                params.push(Param::named(&format!("sqrt{p}")).expect("reserved name"));
                m /= p;
            }
            p += 1;
        }
        if neg {
            params.push(Param::named("i").expect("reserved name"));
        }
        if params.is_empty() {
            (coeff, None)
        } else {
            (coeff, Some(params))
        }
    }

    pub fn name(&self) -> Arc<str> {
        registry().read().unwrap().entries[self.index()]
            .name
            .clone()
    }

    pub fn relation(&self) -> Option<Rat> {
        if !self.is_algebraic() {
            return None;
        }
        registry().read().unwrap().entries[self.index()]
            .relation
            .clone()
    }

    pub fn is_algebraic(&self) -> bool {
        self.0 & ALGEBRAIC_BIT != 0
    }

    fn index(&self) -> usize {
        (self.0 & !ALGEBRAIC_BIT) as usize
    }

    /// Shorthand used by the built-in catalog; panics on invalid names.
    pub fn of(name: &str) -> Param {
        Param::named(name).expect("valid parameter name")
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
