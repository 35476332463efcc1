//! Normal forms in `P_n/Γ₂(P_n)` and `P_n/Γ₃(P_n)`.
//!
//! An element of `P_n/Γ₃(P_n)` is written uniquely as
//! `∏_{(i,j) lex} A_{i,j}^{a_{ij}} · ∏ α_{i,j,k}^{c_{ijk}}`, with the
//! `α`-part central. Commutators are `[x,y] = x y x⁻¹ y⁻¹`, and modulo `Γ₃`
//! the commutator of two generators sharing one strand is `±α` of their
//! sorted union: `[A_ij,A_jk] = [A_jk,A_ik] = [A_ik,A_ij] = α_ijk` and the
//! reversed orders give `α_ijk⁻¹`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde_json::{Map, Value};

use crate::braid::{crossing_numbers, perm_of, AWord, BraidWord};
use crate::error::{Error, Result};
use crate::perm::{act_triple_with_inverse, PairIdx, Perm, SignedTriple, TripleIdx};

/// Sparse integer vector over the triple basis, sorted by index.
pub(crate) type Sparse = Vec<(u32, i64)>;

/// The commutator `[A_e, A_f]` modulo `Γ₃` as a signed basis triple, or
/// `None` when `e` and `f` are equal or disjoint.
pub fn comm_sign(e: PairIdx, f: PairIdx) -> Option<(TripleIdx, i8)> {
    let shared = [e.i, e.j].into_iter().filter(|x| *x == f.i || *x == f.j).count();
    if shared != 1 {
        return None;
    }
    let t = TripleIdx::sorted([e.i as usize, e.j as usize, if f.i == e.i || f.i == e.j { f.j } else { f.i } as usize]);
    let ij = PairIdx { i: t.i, j: t.j };
    let jk = PairIdx { i: t.j, j: t.k };
    let ik = PairIdx { i: t.i, j: t.k };
    let sign = if (e, f) == (ij, jk) || (e, f) == (jk, ik) || (e, f) == (ik, ij) { 1 } else { -1 };
    Some((t, sign))
}

/// Index tables for the pair and triple bases of a fixed strand count,
/// the commutator table, and the conjugation action of each `σ_j`.
pub struct Basis {
    n: usize,
    pairs: Vec<PairIdx>,
    triples: Vec<TripleIdx>,
    pair_lookup: Vec<u32>,
    triple_lookup: HashMap<TripleIdx, u32>,
    /// `comm[e*P + f]` = `±(t+1)` for `[A_e,A_f] = α_t^{±1}`, 0 when trivial.
    comm: Vec<i32>,
    /// per pair `f`: pairs `e` sharing one strand with it, with `comm(e, f)`.
    neighbours: Vec<Vec<(u32, i32)>>,
    steps: Vec<GeneratorStep>,
}

/// How conjugation by `σ_j^{±1}` moves the pair generators:
/// `σ_j^{ε} A_e σ_j^{−ε} = A_{swap[e]} · y_ε[e]` with `y_ε[e]` central.
pub(crate) struct GeneratorStep {
    pub(crate) swap: Vec<u32>,
    pub(crate) words: [Vec<Vec<(u32, i8)>>; 2],
    pub(crate) central: [Vec<(u32, Sparse)>; 2],
}

type BasisCache = RwLock<HashMap<usize, Arc<Basis>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl Basis {
    pub fn of(n: usize) -> Arc<Basis> {
        if let Some(b) = basis_cache().read().expect("basis cache poisoned").get(&n) {
            return b.clone();
        }
        let b = Arc::new(Basis::build(n));
        basis_cache().write().expect("basis cache poisoned").entry(n).or_insert(b).clone()
    }

    fn build(n: usize) -> Basis {
        let mut pairs = Vec::new();
        let mut pair_lookup = vec![u32::MAX; (n + 1) * (n + 1)];
        for i in 1..=n {
            for j in i + 1..=n {
                pair_lookup[i * (n + 1) + j] = pairs.len() as u32;
                pair_lookup[j * (n + 1) + i] = pairs.len() as u32;
                pairs.push(PairIdx { i: i as u16, j: j as u16 });
            }
        }
        let mut triples = Vec::new();
        let mut triple_lookup = HashMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let t = TripleIdx { i: i as u16, j: j as u16, k: k as u16 };
                    triple_lookup.insert(t, triples.len() as u32);
                    triples.push(t);
                }
            }
        }
        let np = pairs.len();
        let mut comm = vec![0i32; np * np];
        let mut neighbours = vec![Vec::new(); np];
        for (e_idx, &e) in pairs.iter().enumerate() {
            for (f_idx, &f) in pairs.iter().enumerate() {
                if let Some((t, s)) = comm_sign(e, f) {
                    let code = s as i32 * (triple_lookup[&t] as i32 + 1);
                    comm[e_idx * np + f_idx] = code;
                    neighbours[f_idx].push((e_idx as u32, code));
                }
            }
        }
        let mut basis = Basis { n, pairs, triples, pair_lookup, triple_lookup, comm, neighbours, steps: Vec::new() };
        basis.steps = (1..n).map(|j| basis.generator_step(j)).collect();
        basis
    }

    /// Words for `σ_j A_{r,s} σ_j⁻¹` and `σ_j⁻¹ A_{r,s} σ_j` in the `A`-generators.
    fn conjugation_word(&self, j: usize, inverse: bool, e: PairIdx) -> Vec<(u32, i8)> {
        let (r, s) = (e.i as usize, e.j as usize);
        let idx = |a: usize, b: usize| self.pair_lookup[a * (self.n + 1) + b];
        if !inverse {
            if s == j && r < j {
                vec![(idx(r, j + 1), 1)]
            } else if r == j && s > j + 1 {
                vec![(idx(j + 1, s), 1)]
            } else if r == j + 1 {
                vec![(idx(j + 1, s), -1), (idx(j, s), 1), (idx(j + 1, s), 1)]
            } else if s == j + 1 && r < j {
                vec![(idx(j, j + 1), 1), (idx(r, j), 1), (idx(j, j + 1), -1)]
            } else {
                vec![(idx(r, s), 1)]
            }
        } else if s == j + 1 && r < j {
            vec![(idx(r, j), 1)]
        } else if r == j + 1 {
            vec![(idx(j, s), 1)]
        } else if r == j && s > j + 1 {
            vec![(idx(j, s), 1), (idx(j + 1, s), 1), (idx(j, s), -1)]
        } else if s == j && r < j {
            vec![(idx(j, j + 1), -1), (idx(r, j + 1), 1), (idx(j, j + 1), 1)]
        } else {
            vec![(idx(r, s), 1)]
        }
    }

    fn generator_step(&self, j: usize) -> GeneratorStep {
        let t = Perm::adjacent(self.n, j);
        let swap: Vec<u32> = self
            .pairs
            .iter()
            .map(|&e| self.pair_index(PairIdx::unordered(t.apply(e.i as usize), t.apply(e.j as usize))) as u32)
            .collect();
        let mut words = [Vec::new(), Vec::new()];
        let mut central = [Vec::new(), Vec::new()];
        for (slot, inverse) in [(0usize, false), (1usize, true)] {
            for (e_idx, &e) in self.pairs.iter().enumerate() {
                let word = self.conjugation_word(j, inverse, e);
                if word.len() > 1 {
                    let mut a = vec![0i64; self.pairs.len()];
                    let mut c = vec![0i64; self.triples.len()];
                    for &(f, x) in &word {
                        self.mul_generator_raw(&mut a, &mut c, f as usize, x as i64, &[]);
                    }
                    debug_assert!(a.iter().enumerate().all(|(g, &v)| v == if g == swap[e_idx] as usize { 1 } else { 0 }));
                    central[slot].push((e_idx as u32, to_sparse(&c)));
                }
                words[slot].push(word);
            }
        }
        GeneratorStep { swap, words, central }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[PairIdx] {
        &self.pairs
    }

    pub fn triples(&self) -> &[TripleIdx] {
        &self.triples
    }

    #[inline]
    pub fn pair_index(&self, e: PairIdx) -> usize {
        self.pair_lookup[e.i as usize * (self.n + 1) + e.j as usize] as usize
    }

    #[inline]
    pub(crate) fn pair_index_of(&self, a: usize, b: usize) -> usize {
        self.pair_lookup[a * (self.n + 1) + b] as usize
    }

    pub fn triple_index(&self, t: TripleIdx) -> usize {
        self.triple_lookup[&t] as usize
    }

    #[inline]
    pub(crate) fn comm_code(&self, e: usize, f: usize) -> i32 {
        self.comm[e * self.pairs.len() + f]
    }

    pub(crate) fn step(&self, j: usize) -> &GeneratorStep {
        &self.steps[j - 1]
    }

    /// `(a, c) ← (a, c) · A_f^x · central`, collecting `A_f^x` into place.
    #[inline]
    pub(crate) fn mul_generator_raw(&self, a: &mut [i64], c: &mut [i64], f: usize, x: i64, central: &[(u32, i64)]) {
        if !c.is_empty() {
            for &(e, code) in &self.neighbours[f] {
                let e = e as usize;
                if e > f && a[e] != 0 {
                    add_code(c, code, a[e] * x);
                }
            }
            for &(t, v) in central {
                c[t as usize] += v * x;
            }
        }
        a[f] += x;
    }

    /// Signed action of `τ` (given by its inverse) on a triple index.
    #[inline]
    pub(crate) fn act_triple_index(&self, tau_inv: &Perm, t: usize) -> (usize, i64) {
        let st = act_triple_with_inverse(tau_inv, SignedTriple::plus(self.triples[t]));
        (self.triple_index(st.idx), st.sign as i64)
    }
}

#[inline]
fn add_code(c: &mut [i64], code: i32, v: i64) {
    if code > 0 {
        c[(code - 1) as usize] += v;
    } else {
        c[(-code - 1) as usize] -= v;
    }
}

fn to_sparse(c: &[i64]) -> Sparse {
    c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(t, &v)| (t as u32, v)).collect()
}

fn sparse_add(into: &mut Sparse, other: &[(u32, i64)]) {
    if other.is_empty() {
        return;
    }
    let mut merged = Vec::with_capacity(into.len() + other.len());
    let (mut x, mut y) = (0, 0);
    while x < into.len() || y < other.len() {
        let pick = match (into.get(x), other.get(y)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                x += 1;
                y += 1;
                (a.0, a.1 + b.1)
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                x += 1;
                *a
            }
            (Some(a), None) => {
                x += 1;
                *a
            }
            (_, Some(b)) => {
                y += 1;
                *b
            }
            (None, None) => unreachable!(),
        };
        if pick.1 != 0 {
            merged.push(pick);
        }
    }
    *into = merged;
}

/// An integer vector over the pair basis (`a_{ij}`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairVec {
    n: usize,
    exps: Vec<i64>,
}

impl PairVec {
    pub fn zero(n: usize) -> Self {
        PairVec { n, exps: vec![0; n * n.saturating_sub(1) / 2] }
    }

    pub fn from_dense(n: usize, exps: Vec<i64>) -> Self {
        assert_eq!(exps.len(), n * n.saturating_sub(1) / 2, "pair vector length");
        PairVec { n, exps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dense(&self) -> &[i64] {
        &self.exps
    }

    pub fn get(&self, e: PairIdx) -> i64 {
        self.exps[Basis::of(self.n).pair_index(e)]
    }

    pub fn set(&mut self, e: PairIdx, v: i64) {
        let idx = Basis::of(self.n).pair_index(e);
        self.exps[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }

    /// Nonzero entries in lexicographic pair order.
    pub fn nonzero(&self) -> Vec<(PairIdx, i64)> {
        let basis = Basis::of(self.n);
        self.exps.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (basis.pairs()[i], v)).collect()
    }
}

/// An integer vector over the triple basis (`c_{ijk}`). Empty storage means zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TripleVec {
    n: usize,
    exps: Vec<i64>,
}

impl TripleVec {
    pub fn zero(n: usize) -> Self {
        TripleVec { n, exps: vec![0; Basis::of(n).triples().len()] }
    }

    pub(crate) fn empty(n: usize) -> Self {
        TripleVec { n, exps: Vec::new() }
    }

    pub fn from_dense(n: usize, exps: Vec<i64>) -> Self {
        TripleVec { n, exps }
    }

    pub fn dense(&self) -> &[i64] {
        &self.exps
    }

    pub fn get(&self, t: TripleIdx) -> i64 {
        if self.exps.is_empty() {
            return 0;
        }
        self.exps[Basis::of(self.n).triple_index(t)]
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }

    pub fn nonzero(&self) -> Vec<(TripleIdx, i64)> {
        let basis = Basis::of(self.n);
        self.exps.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (basis.triples()[i], v)).collect()
    }
}

/// `[A_e, A_f]` modulo `Γ₃` in the `α`-basis.
pub fn comm_pairs(n: usize, e: PairIdx, f: PairIdx) -> TripleVec {
    let mut v = TripleVec::zero(n);
    if let Some((t, s)) = comm_sign(e, f) {
        let idx = Basis::of(n).triple_index(t);
        v.exps[idx] = s as i64;
    }
    v
}

/// Normal form of an element of `P_n/Γ_k(P_n)`, `k ∈ {2,3}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PureNf {
    k: u8,
    a: PairVec,
    c: TripleVec,
}

pub(crate) fn check_class(k: u8) -> Result<()> {
    if k == 2 || k == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(k))
    }
}

impl PureNf {
    pub fn identity(n: usize, k: u8) -> Self {
        let c = if k == 3 { TripleVec::zero(n) } else { TripleVec::empty(n) };
        PureNf { k, a: PairVec::zero(n), c }
    }

    pub fn from_parts(k: u8, a: PairVec, c: Option<TripleVec>) -> Result<Self> {
        check_class(k)?;
        let n = a.n;
        let c = match (k, c) {
            (2, _) => TripleVec::empty(n),
            (_, None) => TripleVec::zero(n),
            (_, Some(c)) => {
                if c.n != n {
                    return Err(Error::SizeMismatch(n, c.n));
                }
                if c.exps.is_empty() {
                    TripleVec::zero(n)
                } else {
                    c
                }
            }
        };
        Ok(PureNf { k, a, c })
    }

    pub(crate) fn from_raw(n: usize, k: u8, a: Vec<i64>, c: Vec<i64>) -> Self {
        PureNf { k, a: PairVec { n, exps: a }, c: TripleVec { n, exps: if k == 3 { c } else { Vec::new() } } }
    }

    pub fn n(&self) -> usize {
        self.a.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn a(&self) -> &PairVec {
        &self.a
    }

    pub fn c(&self) -> &TripleVec {
        &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    fn check_compatible(&self, other: &PureNf) -> Result<()> {
        if self.n() != other.n() || self.k != other.k {
            return Err(Error::QuotientMismatch(self.n(), self.k, other.n(), other.k));
        }
        Ok(())
    }

    pub fn mul(&self, other: &PureNf) -> Result<PureNf> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PureNf) -> PureNf {
        let mut out = self.clone();
        for (x, y) in out.a.exps.iter_mut().zip(&other.a.exps) {
            *x += y;
        }
        if self.k == 3 {
            let basis = Basis::of(self.n());
            for (x, y) in out.c.exps.iter_mut().zip(&other.c.exps) {
                *x += y;
            }
            // A_f^{p} A_e^{q} = A_e^{q} A_f^{p} [A_f,A_e]^{pq} for f after e
            for (e, &q) in other.a.exps.iter().enumerate() {
                if q == 0 {
                    continue;
                }
                for &(f, code) in &basis.neighbours[e] {
                    let f = f as usize;
                    if f > e && self.a.exps[f] != 0 {
                        add_code(&mut out.c.exps, code, self.a.exps[f] * q);
                    }
                }
            }
        }
        out
    }

    pub fn inv(&self) -> PureNf {
        let mut out = self.clone();
        for x in out.a.exps.iter_mut() {
            *x = -*x;
        }
        if self.k == 3 {
            let basis = Basis::of(self.n());
            for x in out.c.exps.iter_mut() {
                *x = -*x;
            }
            for (e, &q) in self.a.exps.iter().enumerate() {
                if q == 0 {
                    continue;
                }
                for &(f, code) in &basis.neighbours[e] {
                    let f = f as usize;
                    if f > e && self.a.exps[f] != 0 {
                        add_code(&mut out.c.exps, code, self.a.exps[f] * q);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, m: i64) -> PureNf {
        let base = if m < 0 { self.inv() } else { self.clone() };
        let mut acc = PureNf::identity(self.n(), self.k);
        for _ in 0..m.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// Projection `P_n/Γ₃ → P_n/Γ₂`.
    pub fn to_class2(&self) -> PureNf {
        PureNf { k: 2, a: self.a.clone(), c: TripleVec::empty(self.n()) }
    }

    /// Sparse JSON form: `{"a": {"A1,2": 1, …}, "c": {"a1,2,3": -1, …}}`.
    pub fn to_json(&self) -> Value {
        let mut a = Map::new();
        for (e, v) in self.a.nonzero() {
            a.insert(e.to_string(), Value::from(v));
        }
        let mut c = Map::new();
        for (t, v) in self.c.nonzero() {
            c.insert(t.to_string(), Value::from(v));
        }
        let mut out = Map::new();
        out.insert("a".into(), Value::Object(a));
        out.insert("c".into(), Value::Object(c));
        Value::Object(out)
    }

    pub fn from_json(n: usize, k: u8, a: &Value, c: &Value) -> Result<PureNf> {
        check_class(k)?;
        let basis = Basis::of(n);
        let mut out = PureNf::identity(n, k);
        let a = a.as_object().ok_or_else(|| Error::Parse("pure part 'a' must be an object".into()))?;
        for (key, v) in a {
            let e: PairIdx = key.parse()?;
            if !e.fits(n) {
                return Err(Error::OutOfRange(format!("{e} in P_{n}")));
            }
            let v = v.as_i64().ok_or_else(|| Error::Parse(format!("non-integer coefficient for {key}")))?;
            out.a.exps[basis.pair_index(e)] = v;
        }
        let c = c.as_object().ok_or_else(|| Error::Parse("pure part 'c' must be an object".into()))?;
        if k == 2 && !c.is_empty() {
            return Err(Error::Parse("class-2 element with a nonzero Γ₂/Γ₃ part".into()));
        }
        for (key, v) in c {
            let t: TripleIdx = key.parse()?;
            if !t.fits(n) {
                return Err(Error::OutOfRange(format!("{t} in P_{n}")));
            }
            let v = v.as_i64().ok_or_else(|| Error::Parse(format!("non-integer coefficient for {key}")))?;
            out.c.exps[basis.triple_index(t)] = v;
        }
        Ok(out)
    }
}

impl fmt::Display for PureNf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.a.nonzero().iter().map(|(e, v)| format!("{e}^{v}")).collect();
        parts.extend(self.c.nonzero().iter().map(|(t, v)| format!("{t}^{v}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Collects an `A`-word into normal form.
pub fn collect(aw: &AWord, k: u8) -> Result<PureNf> {
    check_class(k)?;
    let n = aw.n();
    let basis = Basis::of(n);
    let mut out = PureNf::identity(n, k);
    for &(e, x) in aw.letters() {
        let f = basis.pair_index(e);
        basis.mul_generator_raw(&mut out.a.exps, &mut out.c.exps, f, x as i64, &[]);
    }
    Ok(out)
}

pub fn nf_mul(p: &PureNf, q: &PureNf) -> Result<PureNf> {
    p.mul(q)
}

pub fn nf_inv(p: &PureNf) -> PureNf {
    p.inv()
}

/// The automorphism `A_e ↦ A_{τ·e}` of `P_n/Γ_k(P_n)`: `act_pair` on the
/// `a`-part and `act_triple` on the `c`-part, re-collected.
pub fn act_nf(t: &Perm, p: &PureNf) -> Result<PureNf> {
    if t.n() != p.n() {
        return Err(Error::SizeMismatch(t.n(), p.n()));
    }
    Ok(substitute(&Basis::of(p.n()), &t.inverse(), None, p))
}

/// Image of `p` under `A_e ↦ A_{τ·e} · z_e` (`z_e` central, absent = 0).
pub(crate) fn substitute(basis: &Basis, tau_inv: &Perm, z: Option<&[Sparse]>, p: &PureNf) -> PureNf {
    let n = p.n();
    let np = basis.pairs.len();
    let mut a = vec![0i64; np];
    let support: Vec<(usize, usize, i64)> = p
        .a
        .exps
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(e, &v)| {
            let pe = basis.pairs[e];
            (e, basis.pair_index_of(tau_inv.apply(pe.i as usize), tau_inv.apply(pe.j as usize)), v)
        })
        .collect();
    for &(_, img, v) in &support {
        a[img] = v;
    }
    if p.k == 2 {
        return PureNf::from_raw(n, 2, a, Vec::new());
    }
    let mut c = vec![0i64; basis.triples.len()];
    for (t, &v) in p.c.exps.iter().enumerate() {
        if v != 0 {
            let (t2, s) = basis.act_triple_index(tau_inv, t);
            c[t2] += s * v;
        }
    }
    if let Some(z) = z {
        for &(e, _, v) in &support {
            for &(t, w) in &z[e] {
                c[t as usize] += v * w;
            }
        }
    }
    for (x, &(_, ie, ve)) in support.iter().enumerate() {
        for &(_, jf, vf) in &support[x + 1..] {
            if ie > jf {
                let code = basis.comm_code(ie, jf);
                if code != 0 {
                    add_code(&mut c, code, ve * vf);
                }
            }
        }
    }
    PureNf::from_raw(n, 3, a, c)
}

/// Conjugation by the positive permutation braid `s(τ)` on `P_n/Γ_k(P_n)`:
/// `s(τ) A_e s(τ)⁻¹ = A_{τ·e} · z_e` with `z_e ∈ Γ₂/Γ₃` (absent for `k = 2`).
#[derive(Clone, Debug)]
pub(crate) struct Conjugator {
    pub(crate) k: u8,
    pub(crate) tau: Perm,
    pub(crate) tau_inv: Perm,
    pub(crate) z: Vec<Sparse>,
}

impl Conjugator {
    pub(crate) fn identity(n: usize, k: u8) -> Self {
        let np = n * n.saturating_sub(1) / 2;
        Conjugator {
            k,
            tau: Perm::identity(n),
            tau_inv: Perm::identity(n),
            z: if k == 3 { vec![Vec::new(); np] } else { Vec::new() },
        }
    }

    /// Replaces conjugation by `b` with conjugation by `b σ_j^{ε}`.
    pub(crate) fn step(&mut self, basis: &Basis, j: usize, eps: i8) {
        if self.k == 3 {
            let st = basis.step(j);
            for (e, &f) in st.swap.iter().enumerate() {
                if (f as usize) > e {
                    self.z.swap(e, f as usize);
                }
            }
            let slot = if eps > 0 { 0 } else { 1 };
            for (e, y) in &st.central[slot] {
                let moved: Sparse = {
                    let mut v: Vec<(u32, i64)> = y
                        .iter()
                        .map(|&(t, w)| {
                            let (t2, s) = basis.act_triple_index(&self.tau_inv, t as usize);
                            (t2 as u32, s * w)
                        })
                        .collect();
                    v.sort_unstable_by_key(|x| x.0);
                    v
                };
                sparse_add(&mut self.z[*e as usize], &moved);
            }
        }
        let s = Perm::adjacent(self.tau.n(), j);
        self.tau = self.tau.then(&s);
        self.tau_inv = s.then(&self.tau_inv);
    }

    pub(crate) fn for_perm(basis: &Basis, k: u8, p: &Perm) -> Self {
        let mut c = Conjugator::identity(p.n(), k);
        for (j, _) in crate::braid::section_word(p).letters() {
            c.step(basis, j, 1);
        }
        debug_assert_eq!(&c.tau, p);
        c
    }

    pub(crate) fn apply(&self, basis: &Basis, p: &PureNf) -> PureNf {
        let z = if self.k == 3 { Some(self.z.as_slice()) } else { None };
        substitute(basis, &self.tau_inv, z, p)
    }
}

/// Right multiplication of `P · s(τ)` by Artin letters, keeping the pure
/// part `P` in normal form and the section `s(τ)` implicit.
pub(crate) struct Walker {
    basis: Arc<Basis>,
    pub(crate) a: Vec<i64>,
    pub(crate) c: Vec<i64>,
    pub(crate) conj: Conjugator,
}

impl Walker {
    pub(crate) fn new(n: usize, k: u8) -> Self {
        let basis = Basis::of(n);
        let np = basis.pairs.len();
        let nt = if k == 3 { basis.triples.len() } else { 0 };
        Walker { basis, a: vec![0; np], c: vec![0; nt], conj: Conjugator::identity(n, k) }
    }

    pub(crate) fn starting_at(p: &PureNf, conj: Conjugator) -> Self {
        let basis = Basis::of(p.n());
        Walker { basis, a: p.a.exps.clone(), c: p.c.exps.clone(), conj }
    }

    pub(crate) fn push(&mut self, j: usize, eps: i8) {
        let lower = self.conj.tau_inv.apply(j);
        let upper = self.conj.tau_inv.apply(j + 1);
        let ascent = lower < upper;
        // s(τ) A_{j,j+1} s(τ)⁻¹ = A_{τ⁻¹(j),τ⁻¹(j+1)} · z
        let hop = |w: &mut Walker, x: i64| {
            let f = w.basis.pair_index_of(lower, upper);
            let e = w.basis.pair_index_of(j, j + 1);
            let z: &[(u32, i64)] = if w.conj.k == 3 { &w.conj.z[e] } else { &[] };
            w.basis.mul_generator_raw(&mut w.a, &mut w.c, f, x, z);
        };
        match (eps > 0, ascent) {
            (true, true) => self.conj.step(&self.basis, j, 1),
            (true, false) => {
                hop(self, 1);
                self.conj.step(&self.basis, j, -1);
            }
            (false, false) => self.conj.step(&self.basis, j, -1),
            (false, true) => {
                hop(self, -1);
                self.conj.step(&self.basis, j, 1);
            }
        }
    }

    pub(crate) fn push_word(&mut self, w: &BraidWord) {
        for (j, e) in w.letters() {
            self.push(j, e);
        }
    }

    pub(crate) fn nf(&self) -> PureNf {
        PureNf::from_raw(self.basis.n, self.conj.k, self.a.clone(), self.c.clone())
    }
}

/// Rewrites a pure braid word as a word in the `A_{i,j}`, exactly (not only
/// modulo `Γ_k`). The word is scanned left to right as `P · s(τ)`; every
/// letter that closes a crossing contributes a conjugate of `A_{j,j+1}` by a
/// positive permutation braid, spelled with the `σ_j`-conjugation formulas.
pub fn pure_to_aword(w: &BraidWord) -> Result<AWord> {
    let perm = perm_of(w);
    if !perm.is_identity() {
        return Err(Error::NonPureWord(perm.to_string()));
    }
    let n = w.n();
    let basis = Basis::of(n);
    let np = basis.pairs.len();
    let mut images: Vec<Vec<(u32, i8)>> = (0..np).map(|e| vec![(e as u32, 1)]).collect();
    let mut tau_inv = Perm::identity(n);
    let mut out: Vec<(u32, i8)> = Vec::new();
    for (j, eps) in w.letters() {
        let ascent = tau_inv.apply(j) < tau_inv.apply(j + 1);
        let e = basis.pair_index_of(j, j + 1);
        let step_sign: i8 = match (eps > 0, ascent) {
            (true, true) => 1,
            (true, false) => {
                append_reduced(&mut out, &images[e]);
                -1
            }
            (false, false) => -1,
            (false, true) => {
                let inv: Vec<(u32, i8)> = images[e].iter().rev().map(|&(f, x)| (f, -x)).collect();
                append_reduced(&mut out, &inv);
                1
            }
        };
        let st = basis.step(j);
        let slot = if step_sign > 0 { 0 } else { 1 };
        let next: Vec<Vec<(u32, i8)>> = (0..np)
            .map(|e| {
                let mut img = Vec::new();
                for &(f, x) in &st.words[slot][e] {
                    if x > 0 {
                        append_reduced(&mut img, &images[f as usize]);
                    } else {
                        let inv: Vec<(u32, i8)> = images[f as usize].iter().rev().map(|&(g, y)| (g, -y)).collect();
                        append_reduced(&mut img, &inv);
                    }
                }
                img
            })
            .collect();
        images = next;
        let s = Perm::adjacent(n, j);
        tau_inv = s.then(&tau_inv);
    }
    let letters = out.into_iter().map(|(f, x)| (basis.pairs[f as usize], x)).collect();
    Ok(AWord::from_letters_unchecked(n, letters))
}

fn append_reduced(out: &mut Vec<(u32, i8)>, word: &[(u32, i8)]) {
    for &(f, x) in word {
        if out.last() == Some(&(f, -x)) {
            out.pop();
        } else {
            out.push((f, x));
        }
    }
}

/// Normal form of a pure braid word in `P_n/Γ_k(P_n)`. For `k = 2` these
/// are the crossing numbers; for `k = 3` the word is collected through the
/// same rewriting as [`pure_to_aword`], done directly on normal forms.
pub fn nf_of_pure_word(w: &BraidWord, k: u8) -> Result<PureNf> {
    check_class(k)?;
    if k == 2 {
        let a = crossing_numbers(w)?;
        return PureNf::from_parts(2, a, None);
    }
    let perm = perm_of(w);
    if !perm.is_identity() {
        return Err(Error::NonPureWord(perm.to_string()));
    }
    let mut walker = Walker::new(w.n(), k);
    walker.push_word(w);
    Ok(walker.nf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{a_word_expand, artin_equal};

    fn pair(i: usize, j: usize) -> PairIdx {
        PairIdx::new(i, j).unwrap()
    }

    #[test]
    fn commutator_table() {
        let t123 = TripleIdx::new(1, 2, 3).unwrap();
        assert_eq!(comm_sign(pair(1, 2), pair(2, 3)), Some((t123, 1)));
        assert_eq!(comm_sign(pair(1, 2), pair(3, 4)), None);
        assert_eq!(comm_sign(pair(1, 2), pair(1, 2)), None);
        assert_eq!(comm_sign(pair(1, 3), pair(1, 2)), Some((t123, 1)));
        assert_eq!(comm_sign(pair(2, 3), pair(1, 3)), Some((t123, 1)));
        assert_eq!(comm_sign(pair(2, 3), pair(1, 2)), Some((t123, -1)));
        assert_eq!(comm_pairs(4, pair(1, 2), pair(3, 4)), TripleVec::zero(4));
    }

    #[test]
    fn commutator_table_is_antisymmetric_and_zero_on_disjoint() {
        for n in 2..=9 {
            let basis = Basis::of(n);
            for &e in basis.pairs() {
                for &f in basis.pairs() {
                    let ef = comm_sign(e, f);
                    let fe = comm_sign(f, e);
                    match (ef, fe) {
                        (None, None) => {
                            let shared = [e.i, e.j].iter().filter(|x| f.contains(**x as usize)).count();
                            assert!(shared != 1);
                        }
                        (Some((t, s)), Some((t2, s2))) => {
                            assert_eq!(t, t2);
                            assert_eq!(s, -s2);
                        }
                        _ => panic!("asymmetric support for {e} {f}"),
                    }
                }
            }
        }
    }

    #[test]
    fn collect_examples() {
        let w = AWord::parse(3, "A1,2 A2,3 A1,2^-1 A2,3^-1").unwrap();
        let nf = collect(&w, 3).unwrap();
        assert!(nf.a().is_zero());
        assert_eq!(nf.c().get(TripleIdx::new(1, 2, 3).unwrap()), 1);
        let nf2 = collect(&w, 2).unwrap();
        assert!(nf2.is_identity());
        let w = AWord::parse(3, "A1,3 A1,2").unwrap();
        let nf = collect(&w, 3).unwrap();
        assert_eq!(nf.a().dense(), &[1, 1, 0]);
        assert_eq!(nf.c().get(TripleIdx::new(1, 2, 3).unwrap()), 1);
    }

    #[test]
    fn multiplication_basics() {
        let id = PureNf::identity(4, 3);
        let p = collect(&AWord::parse(4, "A1,3 A2,4^-1 A1,2 A3,4").unwrap(), 3).unwrap();
        assert_eq!(id.mul(&p).unwrap(), p);
        assert!(p.mul(&p.inv()).unwrap().is_identity());
        assert!(p.inv().mul(&p).unwrap().is_identity());
        let x = collect(&AWord::parse(4, "A1,2").unwrap(), 2).unwrap();
        let y = collect(&AWord::parse(4, "A1,3").unwrap(), 2).unwrap();
        assert_eq!(x.mul(&y).unwrap().a().dense(), &[1, 1, 0, 0, 0, 0]);
        assert!(matches!(x.mul(&p), Err(Error::QuotientMismatch(..))));
    }

    #[test]
    fn act_nf_examples() {
        let p = collect(&AWord::parse(3, "A1,2").unwrap(), 3).unwrap();
        assert_eq!(act_nf(&Perm::identity(3), &p).unwrap(), p);
        let t = Perm::parse(3, "(1,2,3)").unwrap();
        let q = act_nf(&t, &p).unwrap();
        assert_eq!(q.a().dense(), &[0, 1, 0]);
        assert!(q.c().is_zero());
    }

    #[test]
    fn sigma_conjugation_formulas_hold_in_the_braid_group() {
        for n in 2..=6 {
            let basis = Basis::of(n);
            for j in 1..n {
                for (slot, eps) in [(0usize, 1i8), (1usize, -1i8)] {
                    for (e_idx, &e) in basis.pairs().iter().enumerate() {
                        let mut lhs = BraidWord::empty(n);
                        lhs.push(j, eps).unwrap();
                        let lhs = lhs
                            .concat(&a_word_expand(&AWord::new(n, vec![(e, 1)]).unwrap()))
                            .unwrap()
                            .concat(&BraidWord::new(n, vec![(j, -eps)]).unwrap())
                            .unwrap();
                        let word = &basis.step(j).words[slot][e_idx];
                        let aw = AWord::new(n, word.iter().map(|&(f, x)| (basis.pairs()[f as usize], x)).collect())
                            .unwrap();
                        assert!(artin_equal(&lhs, &a_word_expand(&aw)), "σ_{j}^{eps} {e} σ_{j}^{}", -eps);
                    }
                }
            }
        }
    }

    #[test]
    fn pure_to_aword_examples() {
        let w = BraidWord::parse(3, "s1 s1").unwrap();
        assert_eq!(pure_to_aword(&w).unwrap().to_string(), "A1,2");
        let w = BraidWord::parse(3, "s2 s2").unwrap();
        assert_eq!(pure_to_aword(&w).unwrap().to_string(), "A2,3");
        let w = BraidWord::parse(3, "s1 s2 s2 s1^-1").unwrap();
        let aw = pure_to_aword(&w).unwrap();
        assert!(artin_equal(&a_word_expand(&aw), &w));
        assert_eq!(collect(&aw, 2).unwrap().a().dense(), &[0, 1, 0]);
        assert!(matches!(pure_to_aword(&BraidWord::parse(3, "s1").unwrap()), Err(Error::NonPureWord(_))));
    }

    #[test]
    fn nf_of_pure_word_examples() {
        let w = BraidWord::parse(9, "s1 s1").unwrap();
        let nf = nf_of_pure_word(&w, 2).unwrap();
        assert_eq!(nf.a().get(pair(1, 2)), 1);
        assert_eq!(nf.a().nonzero().len(), 1);
        let nf3 = nf_of_pure_word(&w, 3).unwrap();
        assert_eq!(nf3.to_class2(), nf);
        assert!(nf3.c().is_zero());
        let comm = BraidWord::parse(3, "A1,2 A2,3 A1,2^-1 A2,3^-1").unwrap();
        let nf = nf_of_pure_word(&comm, 3).unwrap();
        assert!(nf.a().is_zero());
        assert_eq!(nf.c().get(TripleIdx::new(1, 2, 3).unwrap()), 1);
    }

    #[test]
    fn json_round_trip() {
        let p = collect(&AWord::parse(4, "A1,3 A2,4^-1 A1,2 A3,4 A2,3").unwrap(), 3).unwrap();
        let v = p.to_json();
        let back = PureNf::from_json(4, 3, &v["a"], &v["c"]).unwrap();
        assert_eq!(back, p);
        let keys: Vec<&String> = v["a"].as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["A1,2", "A1,3", "A2,3", "A2,4", "A3,4"]);
    }
}
