//! Embedding pipelines: Cayley-type embeddings of groups of order prime to
//! `k!`, affine semidirect products `Z_n ⋊ Z_m`, the prime-power family,
//! torsion search by cycle type, and the two groups of order 27 in `B₉/Γ₂`.

use num_integer::Integer;

use crate::braid::{artin_equal, perm_of, BraidWord};
use crate::cert::EmbeddingCert;
use crate::error::{Error, Obstruction, Result};
use crate::groups::{fixed_point_profile, from_perm_gens, orbit_basis, regular_rep, BasisLabel, FinGroup, Level, PermRep};
use crate::nilpotent::check_class;
use crate::perm::{PairIdx, Perm};
use crate::quotient::{q_order, QElem, Order, q_of_word};
use crate::splitting::{build_section, lifts_from_generators, split_stage, verify_section, ModuleSelector};

fn factorial(k: u8) -> u64 {
    (1..=k as u64).product()
}

/// `G = Z_n ⋊ Z_m` with the generator of `Z_m` acting by multiplication by `t`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SemidirectSpec {
    pub n: u64,
    pub m: u64,
    pub t: u64,
}

fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    acc
}

fn multiplicative_order(t: u64, n: u64) -> u64 {
    let mut x = t % n;
    let mut d = 1;
    while x != 1 % n {
        x = x * t % n;
        d += 1;
    }
    d
}

impl SemidirectSpec {
    pub fn new(n: u64, m: u64, t: u64) -> Result<SemidirectSpec> {
        if n < 3 || m < 1 || t < 1 || t >= n {
            return Err(Error::OutOfRange(format!("need n ≥ 3, m ≥ 1 and 1 ≤ t < n (got n={n}, m={m}, t={t})")));
        }
        if t.gcd(&n) != 1 {
            return Err(Error::OutOfRange(format!("t={t} is not a unit modulo {n}")));
        }
        if pow_mod(t, m, n) != 1 {
            return Err(Error::OutOfRange(format!("t^m = {t}^{m} is not 1 modulo {n}")));
        }
        Ok(SemidirectSpec { n, m, t })
    }

    pub fn order(&self) -> u64 {
        self.n * self.m
    }

    /// The first `l` in `1..m` with `gcd(t^l − 1, n) ≠ 1`, and that gcd.
    pub fn hypothesis_violation(&self) -> Option<(u64, u64)> {
        (1..self.m).find_map(|l| {
            let g = (pow_mod(self.t, l, self.n) + self.n - 1).gcd(&self.n);
            (g != 1).then_some((l, g))
        })
    }
}

/// The affine action of `Z_n ⋊ Z_m` on `Z_n`.
#[derive(Clone, Debug)]
pub struct AffineRep {
    pub spec: SemidirectSpec,
    /// Element `(u, v)` is numbered `u + n·v`; `(u,v)·(u',v') = (t^{v'}u + u', v + v')`.
    pub group: FinGroup,
    /// `(u, v) ↦ (z ↦ t^v z + u)`, point `z` relabelled `z + 1`.
    pub images: Vec<Perm>,
    pub injective: bool,
    /// `gcd(t^l − 1, n) = 1` for all `1 ≤ l < m`.
    pub hypothesis: bool,
}

impl AffineRep {
    pub fn perm_rep(&self) -> Result<PermRep> {
        if !self.injective {
            return Err(Error::InvalidGroup("the affine action is not faithful".into()));
        }
        PermRep::new(self.group.clone(), self.images.clone())
    }
}

pub fn affine_perm_rep(spec: &SemidirectSpec) -> AffineRep {
    let (n, m, t) = (spec.n as usize, spec.m as usize, spec.t);
    let order = n * m;
    let tp: Vec<u64> = (0..m).map(|v| pow_mod(t, v as u64, spec.n)).collect();
    let table: Vec<Vec<usize>> = (0..order)
        .map(|x| {
            let (u, v) = (x % n, x / n);
            (0..order)
                .map(|y| {
                    let (u2, v2) = (y % n, y / n);
                    let nu = (tp[v2] as usize * u + u2) % n;
                    nu + n * ((v + v2) % m)
                })
                .collect()
        })
        .collect();
    let gens = if n > 1 && m > 1 { vec![1, n] } else { vec![1] };
    let group = FinGroup::from_table(table, gens).expect("affine group table");
    let images: Vec<Perm> = (0..order)
        .map(|x| {
            let (u, v) = (x % n, x / n);
            Perm::from_images((0..n).map(|z| ((tp[v] as usize * z + u) % n) + 1).collect()).expect("affine bijection")
        })
        .collect();
    let distinct: std::collections::HashSet<&Perm> = images.iter().collect();
    let injective = distinct.len() == order;
    AffineRep { spec: *spec, group, images, injective, hypothesis: spec.hypothesis_violation().is_none() }
}

fn certify(description: String, rep: &PermRep, k: u8) -> Result<EmbeddingCert> {
    let section = build_section(rep, k)?;
    EmbeddingCert::new(description, rep, &section)
}

/// Embeds `G` in `B_{|G|}/Γ_k(P_{|G|})` through its regular representation.
pub fn cayley_embed(group: &FinGroup, description: &str, k: u8) -> Result<EmbeddingCert> {
    check_class(k)?;
    let order = group.order() as u64;
    let g = order.gcd(&factorial(k));
    if g != 1 {
        return Err(Error::Obstruction(Obstruction::Gcd { order, factorial: factorial(k), gcd: g }));
    }
    let rep = regular_rep(group);
    certify(format!("{description}, regular representation"), &rep, k)
}

/// Embeds `Z_n ⋊ Z_m` in `B_n/Γ_k(P_n)` through the affine action.
pub fn semidirect_embed(spec: &SemidirectSpec, k: u8) -> Result<EmbeddingCert> {
    check_class(k)?;
    if let Some((l, g)) = spec.hypothesis_violation() {
        return Err(Error::Obstruction(Obstruction::Hypothesis(format!(
            "gcd(t^l − 1, n) = gcd({}^{l} − 1, {}) = {g} ≠ 1 for l = {l}",
            spec.t, spec.n
        ))));
    }
    let mn = spec.order();
    if k == 2 && mn.is_multiple_of(2) {
        return Err(Error::Obstruction(Obstruction::Hypothesis(format!("mn = {mn} must be odd for k = 2"))));
    }
    if k == 3 && mn.gcd(&6) != 1 {
        return Err(Error::Obstruction(Obstruction::Hypothesis(format!("gcd(mn, 6) = gcd({mn}, 6) must be 1 for k = 3"))));
    }
    let affine = affine_perm_rep(spec);
    let rep = affine.perm_rep()?;
    debug_assert!(fixed_point_profile(&rep) <= 1);
    certify(format!("Z_{} ⋊ Z_{} with t = {}, affine action", spec.n, spec.m, spec.t), &rep, k)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The smallest `t` of multiplicative order exactly `d1` modulo `p^r`.
pub fn prime_power_spec(p: u64, r: u32, d1: u64) -> Result<SemidirectSpec> {
    if !is_prime(p) || p == 2 {
        return Err(Error::OutOfRange(format!("p = {p} must be an odd prime")));
    }
    if r == 0 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    if d1 == 0 || d1.is_multiple_of(2) || !(p - 1).is_multiple_of(d1) {
        return Err(Error::OutOfRange(format!("d1 = {d1} must be an odd divisor of p − 1 = {}", p - 1)));
    }
    let n = p.checked_pow(r).ok_or(Error::Overflow)?;
    if n < 3 {
        return Err(Error::OutOfRange("p^r must be at least 3".into()));
    }
    let t = (1..n)
        .find(|&t| t.gcd(&n) == 1 && multiplicative_order(t, n) == d1)
        .ok_or_else(|| Error::Verification(format!("no t of order {d1} modulo {n}")))?;
    let spec = SemidirectSpec::new(n, d1, t)?;
    if let Some((l, g)) = spec.hypothesis_violation() {
        return Err(Error::Verification(format!("gcd(t^{l} − 1, {n}) = {g} for t = {t}")));
    }
    Ok(spec)
}

/// Partitions of `n` into parts, largest first.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A permutation with the given cycle type, cycles on consecutive points.
fn canonical_perm(n: usize, cycle_type: &[usize]) -> Perm {
    let mut cycles = Vec::new();
    let mut next = 1;
    for &len in cycle_type {
        if len > 1 {
            cycles.push((next..next + len).collect::<Vec<_>>());
        }
        next += len;
    }
    Perm::from_cycles(n, &cycles).expect("consecutive cycles")
}

/// An element of exact order `m` in `B_n/Γ_k(P_n)`, or `None`.
///
/// Such an element maps to a permutation `π` of order `m`, and it exists over
/// `π` iff the extension restricted to `⟨π⟩` splits; that depends only on
/// the conjugacy class, so one permutation per cycle type is tried.
pub fn torsion_element(n: usize, k: u8, m: u64) -> Result<Option<QElem>> {
    check_class(k)?;
    if m < 2 {
        return Err(Error::OutOfRange("order must be at least 2".into()));
    }
    for cycle_type in partitions(n) {
        let lcm = cycle_type.iter().fold(1u64, |acc, &c| acc.lcm(&(c as u64)));
        if lcm != m {
            continue;
        }
        let pi = canonical_perm(n, &cycle_type);
        let (_, rep) = from_perm_gens(n, std::slice::from_ref(&pi))?;
        match build_section(&rep, k) {
            Ok(section) => {
                let g = rep.group().gens()[0];
                let elem = section[g].clone();
                if q_order(&elem) != Order::Finite(m) {
                    return Err(Error::Verification(format!("split element over {pi} does not have order {m}")));
                }
                return Ok(Some(elem));
            }
            Err(Error::Unsolvable(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Which of the two non-abelian groups of order 27.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// `Z₉ ⋊ Z₃`, generator acting by multiplication by 4.
    A,
    /// The Heisenberg group mod 3.
    B,
}

/// A named identity checked along the order-27 pipeline.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct Example27 {
    pub variant: Variant,
    pub checks: Vec<NamedCheck>,
    pub cert: EmbeddingCert,
}

/// The nine-element orbit of `A_{1,2}`, listed along the powers of the 9-cycle.
pub fn orbit_o() -> Vec<PairIdx> {
    [(1, 2), (8, 9), (5, 6), (2, 3), (7, 8), (4, 5), (1, 3), (7, 9), (4, 6)]
        .iter()
        .map(|&(i, j)| PairIdx::new(i, j).expect("valid pair"))
        .collect()
}

/// Normalises a multiplier for `Z₉ ⋊ Z₃`. Any unit `t` whose cyclic subgroup
/// contains the order-3 subgroup `{1, 4, 7}` of `Z₉^*` gives a group isomorphic
/// to the one with `t = 4`, which is returned.
pub fn normalise_order27_multiplier(t: u64) -> Result<u64> {
    let t9 = t % 9;
    if t9.gcd(&9) != 1 || !multiplicative_order(t9, 9).is_multiple_of(3) {
        return Err(Error::OutOfRange(format!("multiplication by {t} does not give a non-abelian Z_9 ⋊ Z_3")));
    }
    Ok(4)
}

fn word(s: &str) -> BraidWord {
    BraidWord::parse(9, s).expect("static word")
}

fn comm(a: &BraidWord, b: &BraidWord) -> BraidWord {
    a.concat(b).and_then(|x| x.concat(&a.inverse())).and_then(|x| x.concat(&b.inverse())).expect("same strand count")
}

fn conj(w: &BraidWord, x: &BraidWord) -> BraidWord {
    w.concat(x).and_then(|y| y.concat(&w.inverse())).expect("same strand count")
}

/// Exponents of a pure element on the orbit `O`.
fn on_o(q: &QElem) -> Vec<i64> {
    orbit_o().iter().map(|&e| q.pure_part().a().get(e)).collect()
}

fn record(checks: &mut Vec<NamedCheck>, name: &str, passed: bool) -> Result<()> {
    checks.push(NamedCheck { name: name.to_string(), passed });
    if passed {
        Ok(())
    } else {
        Err(Error::Verification(format!("identity failed: {name}")))
    }
}

/// The verification pipeline for the groups of order 27 in `B₉/Γ₂(P₉)`:
/// permutation group, orbit decomposition of the pair basis, the quoted
/// braid words and their relations modulo the span `H` of the 27-orbit,
/// then a splitting over `H`.
pub fn example27(variant: Variant) -> Result<Example27> {
    let mut checks = Vec::new();
    let n = 9;
    let p = |s: &str| Perm::parse(n, s).expect("static permutation");
    let (gens, lift_words): (Vec<Perm>, Vec<BraidWord>) = match variant {
        Variant::A => {
            let alpha = p("(1,2,3)(4,5,6)");
            let beta = p("(1,4,7,3,5,8,2,6,9)");
            record(&mut checks, "αβα⁻¹ = β⁴", alpha.then(&beta).then(&alpha.inverse()) == beta.pow(4))?;
            let w = word("s3 s6 s2 s3 s4 s5 s4 s3 s7 s6");
            let b = conj(&w, &word("s8 s7 s6 s5 s4^-1 s3^-1 s2^-1 s1^-1"));
            let ahat = word("s2 s1^-1 s5 s4^-1");
            let bhat = word("A1,2 A8,9^-1").concat(&b)?;
            record(&mut checks, "α̂ ↦ α", perm_of(&ahat) == alpha)?;
            record(&mut checks, "b ↦ β", perm_of(&b) == beta)?;
            record(&mut checks, "β̂ ↦ β", perm_of(&bhat) == beta)?;
            let x = conj(&ahat, &b).concat(&b.inverse().pow(4))?;
            let xq = q_of_word(&x, 2)?;
            record(
                &mut checks,
                "α̂bα̂⁻¹b⁻⁴ = A1,2 A1,3⁻¹ A7,8⁻¹ A8,9 on O",
                xq.perm().is_identity() && on_o(&xq) == vec![1, 1, 0, 0, -1, 0, -1, 0, 0],
            )?;
            let rel = q_of_word(&conj(&ahat, &bhat).concat(&bhat.inverse().pow(4))?, 2)?;
            record(&mut checks, "α̂β̂α̂⁻¹β̂⁻⁴ = 1 on O", rel.perm().is_identity() && on_o(&rel).iter().all(|&v| v == 0))?;
            (vec![alpha, beta], vec![ahat, bhat])
        }
        Variant::B => {
            let alpha = p("(1,4,7)(2,5,8)(3,6,9)");
            let beta = p("(4,5,6)(7,9,8)");
            let gamma = p("(1,2,3)(4,5,6)(7,8,9)");
            let commutator = alpha.then(&beta).then(&alpha.inverse()).then(&beta.inverse());
            record(&mut checks, "[α,β] = γ", commutator == gamma)?;
            record(
                &mut checks,
                "α³ = β³ = γ³ = 1, γ central",
                [&alpha, &beta, &gamma].iter().all(|x| x.pow(3).is_identity())
                    && gamma.then(&alpha) == alpha.then(&gamma)
                    && gamma.then(&beta) == beta.then(&gamma),
            )?;
            let wp = word("s3 s2 s4 s6 s5 s4 s3 s7 s6");
            let ghat = word("s2 s1^-1 s5 s4^-1 s8 s7^-1");
            let ahat = conj(&wp, &ghat);
            let bhat = word("s5 s4^-1 s7 s8^-1");
            record(
                &mut checks,
                "α̂ ↦ α, β̂ ↦ β, γ̂ ↦ γ",
                perm_of(&ahat) == alpha && perm_of(&bhat) == beta && perm_of(&ghat) == gamma,
            )?;
            let orders = [&ahat, &bhat, &ghat].iter().map(|w| q_of_word(w, 2).map(|q| q_order(&q))).collect::<Result<Vec<_>>>()?;
            record(&mut checks, "α̂, β̂, γ̂ have order 3", orders.iter().all(|&o| o == Order::Finite(3)))?;
            record(&mut checks, "[β̂,γ̂] = 1 in B₉", artin_equal(&comm(&bhat, &ghat), &BraidWord::empty(n)))?;
            let r1 = q_of_word(&comm(&ahat, &bhat).concat(&ghat.inverse())?, 2)?;
            record(&mut checks, "[α̂,β̂]γ̂⁻¹ = 1 on O", r1.perm().is_identity() && on_o(&r1).iter().all(|&v| v == 0))?;
            let r2 = q_of_word(&comm(&ahat, &ghat), 2)?;
            record(&mut checks, "[α̂,γ̂] = 1 on O", r2.perm().is_identity() && on_o(&r2).iter().all(|&v| v == 0))?;
            (vec![alpha, beta], vec![ahat, bhat])
        }
    };
    let (group, rep) = from_perm_gens(n, &gens)?;
    record(&mut checks, "group order 27", group.order() == 27)?;
    let orbits = orbit_basis(&rep, Level::Pairs)?;
    let o_set: std::collections::BTreeSet<PairIdx> = orbit_o().into_iter().collect();
    let first: std::collections::BTreeSet<PairIdx> = orbits.orbits[0]
        .members
        .iter()
        .filter_map(|m| if let BasisLabel::Pair(e) = m { Some(*e) } else { None })
        .collect();
    record(
        &mut checks,
        "pair orbits: O and a free orbit of size 27",
        orbits.orbits.len() == 2 && first == o_set && orbits.orbits[1].members.len() == 27 && orbits.orbits[1].free,
    )?;
    let complement: Vec<PairIdx> = orbits.orbits[1]
        .members
        .iter()
        .filter_map(|m| if let BasisLabel::Pair(e) = m { Some(*e) } else { None })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let gen_images = lift_words.iter().map(|w| q_of_word(w, 2)).collect::<Result<Vec<_>>>()?;
    let lifts = lifts_from_generators(&rep, &gen_images)?;
    let section = split_stage(&rep, &lifts, &ModuleSelector::PairSubset(complement))?;
    verify_section(&rep, &section)?;
    record(&mut checks, "split over H: 27 × 27 products", true)?;
    let name = match variant {
        Variant::A => "Z_9 ⋊ Z_3 (t = 4) = <(1,2,3)(4,5,6), (1,4,7,3,5,8,2,6,9)>",
        Variant::B => "Heisenberg group mod 3 = <(1,4,7)(2,5,8)(3,6,9), (4,5,6)(7,9,8)>",
    };
    let cert = EmbeddingCert::new(name, &rep, &section)?;
    Ok(Example27 { variant, checks, cert })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(SemidirectSpec::new(7, 3, 2).is_ok());
        assert!(SemidirectSpec::new(7, 3, 3).is_err());
        assert!(SemidirectSpec::new(9, 3, 3).is_err());
        assert_eq!(SemidirectSpec::new(9, 3, 4).unwrap().hypothesis_violation(), Some((1, 3)));
        assert_eq!(SemidirectSpec::new(11, 5, 3).unwrap().hypothesis_violation(), None);
    }

    #[test]
    fn affine_examples() {
        let rep = affine_perm_rep(&SemidirectSpec::new(7, 3, 2).unwrap());
        assert!(rep.injective && rep.hypothesis);
        // (0, 1) is z ↦ 2z: (0)(1,2,4)(3,6,5), relabelled by +1
        assert_eq!(rep.images[7], Perm::parse(7, "(2,3,5)(4,7,6)").unwrap());
        assert_eq!(rep.images[7].fixed_points(), 1);
        assert_eq!(rep.images[3].fixed_points(), 0);
        assert!(!affine_perm_rep(&SemidirectSpec::new(9, 3, 4).unwrap()).hypothesis);
        assert_eq!(fixed_point_profile(&rep.perm_rep().unwrap()), 1);
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(prime_power_spec(7, 1, 3).unwrap().t, 2);
        assert_eq!(prime_power_spec(11, 1, 5).unwrap().t, 3);
        assert_eq!(prime_power_spec(5, 2, 1).unwrap().t, 1);
        assert!(prime_power_spec(9, 1, 1).is_err());
        assert!(prime_power_spec(7, 1, 2).is_err());
    }

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(canonical_perm(5, &[3, 2]), Perm::parse(5, "(1,2,3)(4,5)").unwrap());
    }

    #[test]
    fn gcd_obstructions() {
        let err = cayley_embed(&FinGroup::cyclic(3), "Z3", 3).unwrap_err();
        assert!(matches!(err, Error::Obstruction(Obstruction::Gcd { order: 3, factorial: 6, gcd: 3 })));
        let err = semidirect_embed(&SemidirectSpec::new(9, 3, 4).unwrap(), 2).unwrap_err();
        assert!(err.to_string().contains("l = 1"));
    }

    #[test]
    fn multiplier_normalisation() {
        assert_eq!(normalise_order27_multiplier(5).unwrap(), 4);
        assert_eq!(normalise_order27_multiplier(7).unwrap(), 4);
        assert!(normalise_order27_multiplier(8).is_err());
    }

    #[test]
    fn small_torsion() {
        assert!(torsion_element(3, 2, 3).unwrap().is_some());
        assert!(torsion_element(4, 2, 2).unwrap().is_none());
    }
}
