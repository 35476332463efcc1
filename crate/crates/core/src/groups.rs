//! Finite groups given by multiplication tables or permutation generators.

use std::collections::HashMap;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::perm::{orbit, PairIdx, Perm, SignedTriple};

/// Default bound on the order of groups built by closure.
pub const DEFAULT_CAP: usize = 10_000;

/// A finite group on `0..order` with `0` the identity and `table[a][b] = ab`
/// (product read left to right, matching permutation composition).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    gens: Vec<usize>,
}

impl FinGroup {
    /// Validates a multiplication table: closure, identity `0`, inverses,
    /// associativity, and that `gens` generate.
    pub fn from_table(table: Vec<Vec<usize>>, gens: Vec<usize>) -> Result<FinGroup> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > DEFAULT_CAP {
            return Err(Error::CapExceeded(DEFAULT_CAP));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {i} has {} entries, expected {order}", row.len())));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x as u32);
            }
        }
        let at = |a: usize, b: usize| flat[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let b = (0..order).find(|&b| at(a, b) == 0 && at(b, a) == 0);
            inverses[a] = b.ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))? as u32;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let group = FinGroup { order, table: flat, inverses, gens };
        if group.gens.iter().any(|&g| g >= order) {
            return Err(Error::InvalidGroup("generator index out of range".into()));
        }
        if group.generated_count() != order {
            return Err(Error::InvalidGroup("generators do not generate the table".into()));
        }
        Ok(group)
    }

    /// The cyclic group `Z_m`, generated by `1`.
    pub fn cyclic(m: usize) -> FinGroup {
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FinGroup::from_table(table, if m > 1 { vec![1] } else { vec![] }).expect("cyclic table is a group")
    }

    /// `Z_{m₁} ⊕ ⋯ ⊕ Z_{m_r}` with mixed-radix element numbering.
    pub fn abelian(moduli: &[usize]) -> FinGroup {
        let order: usize = moduli.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            moduli
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect()
        };
        let number = |ds: &[usize]| -> usize { ds.iter().zip(moduli).rev().fold(0, |acc, (&d, &m)| acc * m + d) };
        let table = (0..order)
            .map(|a| {
                let da = digits(a);
                (0..order)
                    .map(|b| {
                        let db = digits(b);
                        let s: Vec<usize> = da.iter().zip(&db).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                        number(&s)
                    })
                    .collect()
            })
            .collect();
        let mut gens = Vec::new();
        let mut unit = 1;
        for &m in moduli {
            if m > 1 {
                gens.push(unit);
            }
            unit *= m;
        }
        FinGroup::from_table(table, gens).expect("abelian table is a group")
    }

    fn generated_count(&self) -> usize {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in &self.gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        seen.iter().filter(|s| **s).count()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut m = 1;
        while x != 0 {
            x = self.mul(x, a);
            m += 1;
        }
        m
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Breadth-first spanning tree from the identity over the generators:
    /// for every `g ≠ e` a pair `(parent, generator)` with `g = parent · generator`,
    /// listed so that parents precede children.
    pub fn spanning_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = Vec::new();
        let mut head = vec![0usize];
        let mut i = 0;
        while i < head.len() {
            let x = head[i];
            i += 1;
            for &s in &self.gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    head.push(y);
                    out.push((y, x, s));
                }
            }
        }
        out
    }
}

/// A faithful permutation representation `φ: G → S_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermRep {
    group: FinGroup,
    images: Vec<Perm>,
}

impl PermRep {
    /// Checks that `images` is an injective homomorphism from `group`.
    pub fn new(group: FinGroup, images: Vec<Perm>) -> Result<PermRep> {
        if images.len() != group.order() {
            return Err(Error::InvalidGroup(format!("{} images for a group of order {}", images.len(), group.order())));
        }
        let n = images[0].n();
        if images.iter().any(|p| p.n() != n) {
            return Err(Error::InvalidGroup("images have different degrees".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if images[a].then(&images[b]) != images[group.mul(a, b)] {
                    return Err(Error::InvalidGroup(format!("not a homomorphism at ({a},{b})")));
                }
            }
        }
        let mut seen = HashMap::new();
        for (a, p) in images.iter().enumerate() {
            if let Some(b) = seen.insert(p.clone(), a) {
                return Err(Error::InvalidGroup(format!("elements {b} and {a} have the same image")));
            }
        }
        Ok(PermRep { group, images })
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.images[0].n()
    }

    pub fn image(&self, g: usize) -> &Perm {
        &self.images[g]
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn generator_images(&self) -> Vec<Perm> {
        self.group.gens.iter().map(|&g| self.images[g].clone()).collect()
    }

    /// Index of the element with the given image.
    pub fn element_of(&self, p: &Perm) -> Option<usize> {
        self.images.iter().position(|q| q == p)
    }
}

/// Closure of a set of permutations, with the group numbered in
/// breadth-first order from the identity. Fails beyond `cap` elements.
pub fn from_perm_gens_capped(n: usize, gens: &[Perm], cap: usize) -> Result<(FinGroup, PermRep)> {
    if gens.is_empty() {
        return Err(Error::InvalidGroup("no generators".into()));
    }
    if let Some(p) = gens.iter().find(|p| p.n() != n) {
        return Err(Error::SizeMismatch(n, p.n()));
    }
    let mut elements = vec![Perm::identity(n)];
    let mut index: HashMap<Perm, usize> = HashMap::from([(Perm::identity(n), 0)]);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let y = elements[i].then(g);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        i += 1;
    }
    let order = elements.len();
    let mut table = Vec::with_capacity(order * order);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.then(b)] as u32);
        }
    }
    let inverses = elements.iter().map(|p| index[&p.inverse()] as u32).collect();
    let gen_idx = gens.iter().map(|g| index[g]).collect();
    let group = FinGroup { order, table, inverses, gens: gen_idx };
    Ok((group.clone(), PermRep { group, images: elements }))
}

pub fn from_perm_gens(n: usize, gens: &[Perm]) -> Result<(FinGroup, PermRep)> {
    from_perm_gens_capped(n, gens, DEFAULT_CAP)
}

/// The regular representation on `|G|` points, `x ↦ x·g`, with point
/// `x + 1` standing for element `x`.
pub fn regular_rep(group: &FinGroup) -> PermRep {
    let images = (0..group.order())
        .map(|g| Perm::from_images((0..group.order()).map(|x| group.mul(x, g) + 1).collect()).expect("row of a group table"))
        .collect();
    PermRep { group: group.clone(), images }
}

/// Largest number of fixed points of a non-identity element (0 for the trivial group).
pub fn fixed_point_profile(rep: &PermRep) -> usize {
    rep.images.iter().skip(1).map(Perm::fixed_points).max().unwrap_or(0)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Level {
    Pairs,
    Triples,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Pairs => "pairs",
            Level::Triples => "triples",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BasisLabel {
    Pair(PairIdx),
    Triple(SignedTriple),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Pair(e) => write!(f, "{e}"),
            BasisLabel::Triple(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbit {
    pub representative: BasisLabel,
    pub members: Vec<BasisLabel>,
    pub free: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitBasis {
    pub level: Level,
    pub orbits: Vec<Orbit>,
}

impl OrbitBasis {
    pub fn all_free(&self) -> bool {
        self.orbits.iter().all(|o| o.free)
    }
}

/// Decomposes the pair basis, or the signed triple basis, into orbits under
/// the image of `rep`. Representatives are lexicographically smallest; at the
/// triples level the orbit of `+t` must not contain `−t`.
pub fn orbit_basis(rep: &PermRep, level: Level) -> Result<OrbitBasis> {
    let n = rep.degree();
    let gens = rep.generator_images();
    let order = rep.group.order();
    let basis = crate::nilpotent::Basis::of(n);
    let mut orbits = Vec::new();
    match level {
        Level::Pairs => {
            let mut seen = vec![false; basis.pairs().len()];
            for (i, &e) in basis.pairs().iter().enumerate() {
                if seen[i] {
                    continue;
                }
                let members = orbit(&gens, e);
                for m in &members {
                    seen[basis.pair_index(*m)] = true;
                }
                orbits.push(Orbit {
                    representative: BasisLabel::Pair(e),
                    free: members.len() == order,
                    members: members.into_iter().map(BasisLabel::Pair).collect(),
                });
            }
        }
        Level::Triples => {
            let mut seen = vec![false; basis.triples().len()];
            for (i, &t) in basis.triples().iter().enumerate() {
                if seen[i] {
                    continue;
                }
                let members = orbit(&gens, SignedTriple::plus(t));
                for m in &members {
                    let j = basis.triple_index(m.idx);
                    if seen[j] {
                        return Err(Error::SignObstruction(m.idx.to_string()));
                    }
                    seen[j] = true;
                }
                orbits.push(Orbit {
                    representative: BasisLabel::Triple(SignedTriple::plus(t)),
                    free: members.len() == order,
                    members: members.into_iter().map(BasisLabel::Triple).collect(),
                });
            }
        }
    }
    Ok(OrbitBasis { level, orbits })
}

/// A group read from JSON: `{"perm_gens": [...], "n": N}` or
/// `{"table": [[...]], "gens": [...]}`. Table groups get their regular
/// representation.
pub fn group_from_json(v: &Value) -> Result<(FinGroup, PermRep, String)> {
    if let Some(gens) = v.get("perm_gens") {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("'perm_gens' requires 'n'".into()))? as usize;
        let gens = gens.as_array().ok_or_else(|| Error::Parse("'perm_gens' must be a list".into()))?;
        let perms = gens
            .iter()
            .map(|g| g.as_str().ok_or_else(|| Error::Parse("generators must be strings".into())).and_then(|s| Perm::parse(n, s)))
            .collect::<Result<Vec<_>>>()?;
        let (g, rep) = from_perm_gens(n, &perms)?;
        let names: Vec<String> = perms.iter().map(Perm::to_string).collect();
        return Ok((g, rep, format!("<{}> in S_{n}", names.join(", "))));
    }
    if let Some(table) = v.get("table") {
        let rows = table.as_array().ok_or_else(|| Error::Parse("'table' must be a list of rows".into()))?;
        let table = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("table rows must be lists".into()))?
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("table entries must be integers".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let gens = v
            .get("gens")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("'table' requires 'gens'".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("generator indices must be integers".into())))
            .collect::<Result<Vec<_>>>()?;
        let g = FinGroup::from_table(table, gens)?;
        let rep = regular_rep(&g);
        let order = g.order();
        return Ok((g, rep, format!("table group of order {order}")));
    }
    Err(Error::Parse("group file needs 'perm_gens' or 'table'".into()))
}
