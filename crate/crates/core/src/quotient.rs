//! Arithmetic in `B_n/Γ_k(P_n)` for `k ∈ {2,3}`.
//!
//! An element is stored as `(π, P)` meaning `P · s(π)`, where `s(π)` is the
//! positive section word of `π` and `P` is a pure normal form.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde_json::{Map, Value};

use crate::braid::{perm_of, section_word, BraidWord};
use crate::error::{Error, Result};
use crate::nilpotent::{check_class, Basis, Conjugator, PureNf, Walker};
use crate::perm::Perm;

/// Version string recorded with every serialised element and certificate.
pub const CONVENTION: &str = "braidq-conv/1: perms compose left-to-right; tau.A(i,j)=A(tau^-1 i,tau^-1 j); \
[x,y]=xyx^-1y^-1; a(i,j,k)=[A(i,j),A(j,k)]; section=insertion-sort positive word; pure part left of section";

/// Memo entries per quotient before the caches are dropped and rebuilt.
const CACHE_LIMIT: usize = 1 << 18;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QElem {
    pi: Perm,
    p: PureNf,
}

/// Order of an element: finite, or infinite (the kernel is torsion free).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

struct Quotient {
    basis: Arc<Basis>,
    k: u8,
    conj: RwLock<HashMap<Perm, Arc<Conjugator>>>,
    cocycles: RwLock<HashMap<(Perm, Perm), PureNf>>,
}

type QuotientCache = RwLock<HashMap<(usize, u8), Arc<Quotient>>>;

fn quotient(n: usize, k: u8) -> Arc<Quotient> {
    static CACHE: OnceLock<QuotientCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(q) = cache.read().expect("quotient cache poisoned").get(&(n, k)) {
        return q.clone();
    }
    let q = Arc::new(Quotient {
        basis: Basis::of(n),
        k,
        conj: RwLock::new(HashMap::new()),
        cocycles: RwLock::new(HashMap::new()),
    });
    cache.write().expect("quotient cache poisoned").entry((n, k)).or_insert(q).clone()
}

impl Quotient {
    fn conjugator(&self, pi: &Perm) -> Arc<Conjugator> {
        if let Some(c) = self.conj.read().expect("conjugator cache poisoned").get(pi) {
            return c.clone();
        }
        let c = Arc::new(Conjugator::for_perm(&self.basis, self.k, pi));
        let mut map = self.conj.write().expect("conjugator cache poisoned");
        if map.len() >= CACHE_LIMIT {
            map.clear();
        }
        map.entry(pi.clone()).or_insert(c).clone()
    }

    fn cocycle(&self, pi: &Perm, rho: &Perm) -> PureNf {
        let key = (pi.clone(), rho.clone());
        if let Some(f) = self.cocycles.read().expect("cocycle cache poisoned").get(&key) {
            return f.clone();
        }
        let start = PureNf::identity(self.basis.n(), self.k);
        let mut walker = Walker::starting_at(&start, (*self.conjugator(pi)).clone());
        walker.push_word(&section_word(rho));
        let f = walker.nf();
        let mut map = self.cocycles.write().expect("cocycle cache poisoned");
        if map.len() >= CACHE_LIMIT {
            map.clear();
        }
        map.entry(key).or_insert(f).clone()
    }
}

impl QElem {
    pub fn identity(n: usize, k: u8) -> Result<QElem> {
        check_class(k)?;
        Ok(QElem { pi: Perm::identity(n), p: PureNf::identity(n, k) })
    }

    /// `P · s(π)`.
    pub fn from_parts(pi: Perm, p: PureNf) -> Result<QElem> {
        if pi.n() != p.n() {
            return Err(Error::SizeMismatch(pi.n(), p.n()));
        }
        Ok(QElem { pi, p })
    }

    /// The section element `s(π)`.
    pub fn section(pi: &Perm, k: u8) -> Result<QElem> {
        check_class(k)?;
        Ok(QElem { pi: pi.clone(), p: PureNf::identity(pi.n(), k) })
    }

    /// A pure element.
    pub fn pure(p: PureNf) -> QElem {
        QElem { pi: Perm::identity(p.n()), p }
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }

    pub fn k(&self) -> u8 {
        self.p.k()
    }

    pub fn perm(&self) -> &Perm {
        &self.pi
    }

    pub fn pure_part(&self) -> &PureNf {
        &self.p
    }

    pub fn is_identity(&self) -> bool {
        self.pi.is_identity() && self.p.is_identity()
    }

    pub fn mul(&self, other: &QElem) -> Result<QElem> {
        q_mul(self, other)
    }

    pub fn inv(&self) -> QElem {
        q_inv(self)
    }

    pub fn pow(&self, e: i64) -> QElem {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut m = e.unsigned_abs();
        let mut acc = QElem { pi: Perm::identity(self.n()), p: PureNf::identity(self.n(), self.k()) };
        while m > 0 {
            if m & 1 == 1 {
                acc = mul_unchecked(&acc, &base);
            }
            m >>= 1;
            if m > 0 {
                base = mul_unchecked(&base, &base);
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let pure = self.p.to_json();
        let mut out = Map::new();
        out.insert("n".into(), Value::from(self.n()));
        out.insert("k".into(), Value::from(self.k()));
        out.insert("perm".into(), Value::from(self.pi.to_string()));
        out.insert("a".into(), pure["a"].clone());
        out.insert("c".into(), pure["c"].clone());
        out.insert("convention".into(), Value::from(CONVENTION));
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<QElem> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("element is missing '{name}'")));
        let n = field("n")?.as_u64().ok_or_else(|| Error::Parse("'n' must be a positive integer".into()))? as usize;
        if n == 0 {
            return Err(Error::Parse("'n' must be a positive integer".into()));
        }
        let k = field("k")?.as_u64().ok_or_else(|| Error::Parse("'k' must be 2 or 3".into()))?;
        let k = u8::try_from(k).map_err(|_| Error::UnsupportedClass(u8::MAX))?;
        check_class(k)?;
        let conv = field("convention")?.as_str().unwrap_or_default();
        if conv != CONVENTION {
            return Err(Error::Parse(format!("unknown convention '{conv}'")));
        }
        let perm = field("perm")?.as_str().ok_or_else(|| Error::Parse("'perm' must be a string".into()))?;
        let pi = Perm::parse(n, perm)?;
        let p = PureNf::from_json(n, k, field("a")?, field("c")?)?;
        Ok(QElem { pi, p })
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] · s{}", self.p, self.pi)
    }
}

/// Image of a braid word in `B_n/Γ_k(P_n)`.
pub fn q_of_word(w: &BraidWord, k: u8) -> Result<QElem> {
    check_class(k)?;
    let mut walker = Walker::new(w.n(), k);
    walker.push_word(w);
    let pi = walker.conj.tau.clone();
    debug_assert_eq!(pi, perm_of(w));
    Ok(QElem { pi, p: walker.nf() })
}

fn check_same(g: &QElem, h: &QElem) -> Result<()> {
    if g.n() != h.n() || g.k() != h.k() {
        return Err(Error::QuotientMismatch(g.n(), g.k(), h.n(), h.k()));
    }
    Ok(())
}

/// `(P s(π))(Q s(ρ)) = P · s(π) Q s(π)⁻¹ · f(π,ρ) · s(πρ)`.
pub fn q_mul(g: &QElem, h: &QElem) -> Result<QElem> {
    check_same(g, h)?;
    Ok(mul_unchecked(g, h))
}

fn mul_unchecked(g: &QElem, h: &QElem) -> QElem {
    let q = quotient(g.n(), g.k());
    let pi = g.pi.then(&h.pi);
    let moved = if g.pi.is_identity() { h.p.clone() } else { q.conjugator(&g.pi).apply(&q.basis, &h.p) };
    let mut p = g.p.mul_unchecked(&moved);
    if !g.pi.is_identity() && !h.pi.is_identity() {
        p = p.mul_unchecked(&q.cocycle(&g.pi, &h.pi));
    }
    QElem { pi, p }
}

pub fn q_inv(g: &QElem) -> QElem {
    let back = q_of_word(&section_word(&g.pi).inverse(), g.k()).expect("class already checked");
    mul_unchecked(&back, &QElem::pure(g.p.inv()))
}

/// Order of `g`: with `r` the order of its permutation, `g` has finite order
/// iff `g^r = 1`, and then the order is the least divisor `d` of `r` with `g^d = 1`.
pub fn q_order(g: &QElem) -> Order {
    let r = g.pi.order();
    if !g.pow(r as i64).is_identity() {
        return Order::Infinite;
    }
    let mut divisors: Vec<u64> = (1..=r).filter(|d| r.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for d in divisors {
        if g.pow(d as i64).is_identity() {
            return Order::Finite(d);
        }
    }
    unreachable!("g^r is the identity")
}

/// The cocycle `f(π,ρ) = s(π) s(ρ) s(πρ)⁻¹` as a pure normal form.
pub fn cocycle(pi: &Perm, rho: &Perm, k: u8) -> Result<PureNf> {
    check_class(k)?;
    if pi.n() != rho.n() {
        return Err(Error::SizeMismatch(pi.n(), rho.n()));
    }
    Ok(quotient(pi.n(), k).cocycle(pi, rho))
}

/// `s(π) · p · s(π)⁻¹` for a pure normal form `p`. For `k = 2` this is
/// the permutation action on the pair basis; for `k = 3` it differs from
/// that action by a `Γ₂/Γ₃` correction linear in the `a`-part of `p`.
pub fn conjugate_by_section(pi: &Perm, p: &PureNf) -> Result<PureNf> {
    if pi.n() != p.n() {
        return Err(Error::SizeMismatch(pi.n(), p.n()));
    }
    let q = quotient(p.n(), p.k());
    Ok(q.conjugator(pi).apply(&q.basis, p))
}

/// `u · p · u⁻¹` for `u` in the quotient and `p` pure.
pub fn conjugate_pure(u: &QElem, p: &PureNf) -> Result<PureNf> {
    check_same(u, &QElem::pure(p.clone()))?;
    let moved = conjugate_by_section(&u.pi, p)?;
    Ok(u.p.mul_unchecked(&moved).mul_unchecked(&u.p.inv()))
}
