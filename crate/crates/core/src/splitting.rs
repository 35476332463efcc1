//! Splitting extensions `0 → M → E → G → 1` with `M` a signed permutation
//! module: cocycles of lifted elements, integer coboundary solving, and
//! homomorphic sections of `B_n/Γ_k(P_n) → S_n` over a finite group.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groups::{BasisLabel, FinGroup, PermRep};
use crate::nilpotent::{Basis, PairVec, PureNf, TripleVec};
use crate::perm::{act_pair, act_triple, PairIdx, SignedTriple};
use crate::quotient::{q_inv, q_mul, QElem};
use crate::snf::solve_integer;

/// A free abelian group with basis `labels` on which `G` acts by signed
/// permutations: `g · e_i = sign · e_j` for `action[g][i] = (j, sign)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GModule {
    labels: Vec<BasisLabel>,
    action: Vec<Vec<(u32, i8)>>,
}

impl GModule {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// `g · v`.
    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                let (j, s) = self.action[g][i];
                out[j as usize] += s as i64 * x;
            }
        }
        out
    }
}

/// Values `f(g,h)` for all `g, h`, stored at `g·|G| + h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocycle {
    order: usize,
    values: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn zero(order: usize, rank: usize) -> Cocycle {
        Cocycle { order, values: vec![vec![0; rank]; order * order] }
    }

    pub fn get(&self, g: usize, h: usize) -> &[i64] {
        &self.values[g * self.order + h]
    }

    pub fn set(&mut self, g: usize, h: usize, v: Vec<i64>) {
        self.values[g * self.order + h] = v;
    }
}

/// Values `d(g)`, with `d(e) = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain {
    pub values: Vec<Vec<i64>>,
}

/// Which part of the kernel a cocycle is read in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModuleSelector {
    /// `P_n/Γ₂(P_n)` on the pair basis.
    Pairs,
    /// `Γ₂(P_n)/Γ₃(P_n)` on the triple basis, with signs.
    Triples,
    /// The coordinates of a `G`-stable set of pairs. The lifts must already
    /// multiply correctly on the remaining pair coordinates.
    PairSubset(Vec<PairIdx>),
}

fn pair_module(group: &FinGroup, rep: &PermRep, pairs: &[PairIdx]) -> Result<GModule> {
    let n = rep.degree();
    let basis = Basis::of(n);
    let mut local = vec![u32::MAX; basis.pairs().len()];
    for (i, &e) in pairs.iter().enumerate() {
        local[basis.pair_index(e)] = i as u32;
    }
    let mut action = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let t = rep.image(g);
        let mut row = Vec::with_capacity(pairs.len());
        for &e in pairs {
            let j = local[basis.pair_index(act_pair(t, e))];
            if j == u32::MAX {
                return Err(Error::ModuleNotInvariant(format!("{} moves {e} outside the selected pairs", t)));
            }
            row.push((j, 1i8));
        }
        action.push(row);
    }
    Ok(GModule { labels: pairs.iter().map(|&e| BasisLabel::Pair(e)).collect(), action })
}

fn triple_module(group: &FinGroup, rep: &PermRep) -> GModule {
    let basis = Basis::of(rep.degree());
    let action = (0..group.order())
        .map(|g| {
            let t = rep.image(g);
            basis
                .triples()
                .iter()
                .map(|&x| {
                    let st = act_triple(t, SignedTriple::plus(x));
                    (basis.triple_index(st.idx) as u32, st.sign)
                })
                .collect()
        })
        .collect();
    GModule { labels: basis.triples().iter().map(|&x| BasisLabel::Triple(SignedTriple::plus(x))).collect(), action }
}

/// The module for `selector`, with `G` acting through `rep`.
pub fn module_for(rep: &PermRep, selector: &ModuleSelector) -> Result<GModule> {
    let group = rep.group();
    match selector {
        ModuleSelector::Pairs => pair_module(group, rep, Basis::of(rep.degree()).pairs()),
        ModuleSelector::PairSubset(pairs) => pair_module(group, rep, pairs),
        ModuleSelector::Triples => Ok(triple_module(group, rep)),
    }
}

/// Cocycle `f(g,h) = ℓ(g) ℓ(h) ℓ(gh)⁻¹` of the lifts `ℓ`, read in the
/// selected module. The lifts must project to `rep`, be multiplicative on
/// every coordinate outside the module, and have `ℓ(e) = 1`.
pub fn restricted_cocycle(rep: &PermRep, lifts: &[QElem], selector: &ModuleSelector) -> Result<(GModule, Cocycle)> {
    let group = rep.group();
    let module = module_for(rep, selector)?;
    if lifts.len() != group.order() {
        return Err(Error::InvalidGroup(format!("{} lifts for a group of order {}", lifts.len(), group.order())));
    }
    if !lifts[0].is_identity() {
        return Err(Error::Verification("the identity must lift to the identity".into()));
    }
    for (g, l) in lifts.iter().enumerate() {
        if l.perm() != rep.image(g) {
            return Err(Error::Verification(format!("lift of element {g} does not project to {}", rep.image(g))));
        }
    }
    let basis = Basis::of(rep.degree());
    let inverses: Vec<QElem> = lifts.iter().map(q_inv).collect();
    let mut f = Cocycle::zero(group.order(), module.rank());
    for g in 0..group.order() {
        for h in 0..group.order() {
            let prod = q_mul(&q_mul(&lifts[g], &lifts[h])?, &inverses[group.mul(g, h)])?;
            f.set(g, h, read_in_module(&basis, selector, prod.pure_part())?);
        }
    }
    Ok((module, f))
}

fn read_in_module(basis: &Basis, selector: &ModuleSelector, p: &PureNf) -> Result<Vec<i64>> {
    match selector {
        // the pair stages work modulo Γ₂, so any Γ₂/Γ₃ part is left for the next stage
        ModuleSelector::Pairs => Ok(p.a().dense().to_vec()),
        ModuleSelector::Triples => {
            if !p.a().is_zero() {
                return Err(Error::Verification("cocycle has a pair component at the triple stage".into()));
            }
            Ok(if p.c().dense().is_empty() { vec![0; basis.triples().len()] } else { p.c().dense().to_vec() })
        }
        ModuleSelector::PairSubset(pairs) => {
            let inside: BTreeSet<usize> = pairs.iter().map(|&e| basis.pair_index(e)).collect();
            if let Some((i, _)) = p.a().dense().iter().enumerate().find(|(i, &x)| x != 0 && !inside.contains(i)) {
                return Err(Error::Verification(format!(
                    "lifts are not multiplicative outside the module (coordinate {})",
                    basis.pairs()[i]
                )));
            }
            Ok(pairs.iter().map(|&e| p.a().dense()[basis.pair_index(e)]).collect())
        }
    }
}

/// Checks `g·f(h,l) − f(gh,l) + f(g,hl) − f(g,h) = 0` for all triples.
pub fn is_cocycle(group: &FinGroup, module: &GModule, f: &Cocycle) -> bool {
    let o = group.order();
    for g in 0..o {
        for h in 0..o {
            let gh = group.mul(g, h);
            for l in 0..o {
                let acted = module.act(g, f.get(h, l));
                let hl = group.mul(h, l);
                let ok = (0..module.rank())
                    .all(|i| acted[i] - f.get(gh, l)[i] + f.get(g, hl)[i] - f.get(g, h)[i] == 0);
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks `f(g,h) = d(g) + g·d(h) − d(gh)` for all pairs.
pub fn is_coboundary_of(group: &FinGroup, module: &GModule, f: &Cocycle, d: &Cochain) -> bool {
    let o = group.order();
    (0..o).all(|g| {
        (0..o).all(|h| {
            let acted = module.act(g, &d.values[h]);
            let gh = group.mul(g, h);
            (0..module.rank()).all(|i| f.get(g, h)[i] == d.values[g][i] + acted[i] - d.values[gh][i])
        })
    })
}

/// Finds `d` with `f(g,h) = d(g) + g·d(h) − d(gh)`, or `Ok(None)` when no
/// integer solution exists. Unknowns are `d(s)` for the generators; `d` is
/// propagated along a breadth-first spanning tree and every remaining edge
/// `(x, s)` becomes a linear constraint, which by the cocycle identity
/// forces the equation for all pairs. The system splits along the orbits of
/// `G` on basis coordinates.
pub fn solve_coboundary(group: &FinGroup, module: &GModule, f: &Cocycle) -> Result<Option<Cochain>> {
    let o = group.order();
    let r = module.rank();
    let gens = group.gens().to_vec();
    let tree = group.spanning_tree();
    let mut is_tree = vec![false; o * gens.len().max(1)];
    for &(_, x, s) in &tree {
        let si = gens.iter().position(|&g| g == s).expect("tree edges use generators");
        is_tree[x * gens.len() + si] = true;
    }
    let mut d = vec![vec![0i64; r]; o];
    for coords in coordinate_orbits(module, &gens) {
        let w = coords.len();
        let mut local = vec![usize::MAX; r];
        for (li, &c) in coords.iter().enumerate() {
            local[c] = li;
        }
        let unknowns = gens.len() * w;
        // d(x) restricted to the orbit: coefficient matrix (w × unknowns) and constant
        let mut coef = vec![vec![vec![0i64; unknowns]; w]; o];
        let mut cst = vec![vec![0i64; w]; o];
        // x · d(s) in local coordinates
        let translate = |x: usize, si: usize, rowbuf: &mut Vec<Vec<i64>>| {
            for (li, &c) in coords.iter().enumerate() {
                let (j, sign) = module.action[x][c];
                rowbuf[local[j as usize]][si * w + li] += sign as i64;
            }
        };
        for &(y, x, s) in &tree {
            let si = gens.iter().position(|&g| g == s).unwrap();
            let mut row = coef[x].clone();
            translate(x, si, &mut row);
            let fx = f.get(x, s);
            let c: Vec<i64> = coords.iter().enumerate().map(|(li, &ci)| cst[x][li] - fx[ci]).collect();
            coef[y] = row;
            cst[y] = c;
        }
        let mut rows: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
        for x in 0..o {
            for (si, &s) in gens.iter().enumerate() {
                if is_tree[x * gens.len() + si] {
                    continue;
                }
                let y = group.mul(x, s);
                let mut lhs = coef[x].clone();
                translate(x, si, &mut lhs);
                let fx = f.get(x, s);
                for li in 0..w {
                    let mut row = lhs[li].clone();
                    for (a, b) in row.iter_mut().zip(&coef[y][li]) {
                        *a -= b;
                    }
                    let rhs = fx[coords[li]] - cst[x][li] + cst[y][li];
                    if row.iter().all(|&v| v == 0) {
                        if rhs != 0 {
                            return Ok(None);
                        }
                        continue;
                    }
                    rows.insert((row, rhs));
                }
            }
        }
        let (a, b): (Vec<Vec<i64>>, Vec<i64>) = rows.into_iter().unzip();
        let Some(u) = solve_integer(&a, &b, unknowns)? else { return Ok(None) };
        for x in 0..o {
            for li in 0..w {
                let v: i64 = coef[x][li].iter().zip(&u).map(|(p, q)| p * q).sum::<i64>() + cst[x][li];
                d[x][coords[li]] = v;
            }
        }
    }
    let d = Cochain { values: d };
    if !is_coboundary_of(group, module, f, &d) {
        return Err(Error::Verification("coboundary solution does not satisfy all equations".into()));
    }
    Ok(Some(d))
}

fn coordinate_orbits(module: &GModule, gens: &[usize]) -> Vec<Vec<usize>> {
    let r = module.rank();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let c = orbit[i];
            i += 1;
            for &s in gens {
                let j = module.action[s][c].0 as usize;
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// `ŝ(g) = (−d(g)) · ℓ(g)`, writing `d(g)` as a pure element in the module.
fn correct(rep: &PermRep, lifts: &[QElem], selector: &ModuleSelector, d: &Cochain, k: u8) -> Result<Vec<QElem>> {
    let n = rep.degree();
    let basis = Basis::of(n);
    lifts
        .iter()
        .enumerate()
        .map(|(g, l)| {
            let v = &d.values[g];
            let fix = match selector {
                ModuleSelector::Pairs => PureNf::from_parts(k, PairVec::from_dense(n, v.iter().map(|x| -x).collect()), None)?,
                ModuleSelector::PairSubset(pairs) => {
                    let mut a = vec![0; basis.pairs().len()];
                    for (i, &e) in pairs.iter().enumerate() {
                        a[basis.pair_index(e)] = -v[i];
                    }
                    PureNf::from_parts(k, PairVec::from_dense(n, a), None)?
                }
                ModuleSelector::Triples => PureNf::from_parts(
                    k,
                    PairVec::zero(n),
                    Some(TripleVec::from_dense(n, v.iter().map(|x| -x).collect())),
                )?,
            };
            q_mul(&QElem::pure(fix), l)
        })
        .collect()
}

/// One splitting stage: returns lifts corrected by a solution of the
/// coboundary equation in the selected module.
pub fn split_stage(rep: &PermRep, lifts: &[QElem], selector: &ModuleSelector) -> Result<Vec<QElem>> {
    let k = lifts.first().map(QElem::k).unwrap_or(2);
    let (module, f) = restricted_cocycle(rep, lifts, selector)?;
    let d = solve_coboundary(rep.group(), &module, &f)?
        .ok_or_else(|| Error::Unsolvable(format!("no integer coboundary over the {} module", selector_name(selector))))?;
    correct(rep, lifts, selector, &d, k)
}

fn selector_name(s: &ModuleSelector) -> &'static str {
    match s {
        ModuleSelector::Pairs => "pair",
        ModuleSelector::Triples => "triple",
        ModuleSelector::PairSubset(_) => "selected pair",
    }
}

/// Checks `ŝ(g)ŝ(h) = ŝ(gh)` for every pair and that `ŝ` lies over `rep`.
pub fn verify_section(rep: &PermRep, section: &[QElem]) -> Result<()> {
    let group = rep.group();
    for (g, s) in section.iter().enumerate() {
        if s.perm() != rep.image(g) {
            return Err(Error::Verification(format!("image of element {g} does not project to {}", rep.image(g))));
        }
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            if q_mul(&section[g], &section[h])? != section[group.mul(g, h)] {
                return Err(Error::Verification(format!("product of elements {g} and {h} is wrong")));
            }
        }
    }
    Ok(())
}

/// A homomorphic section over `rep` in `B_n/Γ_k(P_n)`, starting from the
/// positive section words: one stage over the pairs, then for `k = 3` a
/// second stage over the triples. Every product is verified.
pub fn build_section(rep: &PermRep, k: u8) -> Result<Vec<QElem>> {
    crate::nilpotent::check_class(k)?;
    let lifts = rep.images().iter().map(|p| QElem::section(p, k)).collect::<Result<Vec<_>>>()?;
    let mut section = split_stage(rep, &lifts, &ModuleSelector::Pairs)?;
    if k == 3 {
        section = split_stage(rep, &section, &ModuleSelector::Triples)?;
    }
    verify_section(rep, &section)?;
    Ok(section)
}

/// Lifts of every element from images of the generators, multiplied along
/// the breadth-first spanning tree.
pub fn lifts_from_generators(rep: &PermRep, gen_images: &[QElem]) -> Result<Vec<QElem>> {
    let group = rep.group();
    if gen_images.len() != group.gens().len() {
        return Err(Error::InvalidGroup("one image per generator is required".into()));
    }
    let k = gen_images.first().map(QElem::k).unwrap_or(2);
    let mut lifts = vec![QElem::identity(rep.degree(), k)?; group.order()];
    for (y, x, s) in group.spanning_tree() {
        let si = group.gens().iter().position(|&g| g == s).unwrap();
        lifts[y] = q_mul(&lifts[x], &gen_images[si])?;
    }
    Ok(lifts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{from_perm_gens, regular_rep};
    use crate::perm::Perm;

    fn rep_of(n: usize, gens: &[&str]) -> PermRep {
        let perms: Vec<Perm> = gens.iter().map(|g| Perm::parse(n, g).unwrap()).collect();
        from_perm_gens(n, &perms).unwrap().1
    }

    fn section_lifts(rep: &PermRep, k: u8) -> Vec<QElem> {
        rep.images().iter().map(|p| QElem::section(p, k).unwrap()).collect()
    }

    #[test]
    fn zero_cocycle_has_zero_solution() {
        let rep = rep_of(3, &["(1,2,3)"]);
        let module = module_for(&rep, &ModuleSelector::Pairs).unwrap();
        let f = Cocycle::zero(3, 3);
        let d = solve_coboundary(rep.group(), &module, &f).unwrap().unwrap();
        assert!(d.values.iter().all(|v| v.iter().all(|&x| x == 0)));
    }

    #[test]
    fn transposition_does_not_split() {
        let rep = rep_of(3, &["(1,2)"]);
        let (module, f) = restricted_cocycle(&rep, &section_lifts(&rep, 2), &ModuleSelector::Pairs).unwrap();
        assert!(is_cocycle(rep.group(), &module, &f));
        assert_eq!(solve_coboundary(rep.group(), &module, &f).unwrap(), None);
    }

    #[test]
    fn three_cycle_splits() {
        let rep = rep_of(3, &["(1,2,3)"]);
        let (module, f) = restricted_cocycle(&rep, &section_lifts(&rep, 2), &ModuleSelector::Pairs).unwrap();
        assert_eq!(module.rank(), 3);
        assert!(is_cocycle(rep.group(), &module, &f));
        for g in 0..3 {
            assert!(f.get(0, g).iter().all(|&x| x == 0));
            assert!(f.get(g, 0).iter().all(|&x| x == 0));
        }
        let d = solve_coboundary(rep.group(), &module, &f).unwrap().unwrap();
        assert!(is_coboundary_of(rep.group(), &module, &f, &d));
        let section = build_section(&rep, 2).unwrap();
        verify_section(&rep, &section).unwrap();
    }

    #[test]
    fn regular_z5_in_class_three() {
        let rep = regular_rep(&crate::groups::FinGroup::cyclic(5));
        let section = build_section(&rep, 3).unwrap();
        assert_eq!(section.len(), 5);
        assert_eq!(crate::quotient::q_order(&section[1]), crate::quotient::Order::Finite(5));
    }

    #[test]
    fn invariance_is_checked() {
        let rep = rep_of(4, &["(1,2,3)"]);
        let sel = ModuleSelector::PairSubset(vec![PairIdx::new(1, 2).unwrap()]);
        assert!(matches!(module_for(&rep, &sel), Err(Error::ModuleNotInvariant(_))));
    }

    #[test]
    fn lifts_from_generators_multiply_along_the_tree() {
        let rep = rep_of(3, &["(1,2,3)"]);
        let g = crate::quotient::q_of_word(&crate::braid::BraidWord::parse(3, "s1 s2").unwrap(), 2).unwrap();
        let lifts = lifts_from_generators(&rep, std::slice::from_ref(&g)).unwrap();
        assert_eq!(lifts[1], g);
        assert_eq!(lifts[2], q_mul(&g, &g).unwrap());
    }
}
