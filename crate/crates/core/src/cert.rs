//! Embedding certificates: a finite permutation group, one quotient element
//! per group element, and a transcript of exhaustive checks. The checker
//! recomputes everything from the element list and the images.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groups::{from_perm_gens, PermRep};
use crate::perm::Perm;
use crate::quotient::{q_mul, q_order, Order, QElem, CONVENTION};

pub const SCHEMA: &str = "braidq-cert/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub count: u64,
    pub passed: bool,
}

/// An embedding of a permutation group `G ≤ S_n` in `B_n/Γ_k(P_n)`.
/// Elements are listed in breadth-first order from the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmbeddingCert {
    pub description: String,
    pub degree: usize,
    pub elements: Vec<Perm>,
    pub generators: Vec<usize>,
    pub k: u8,
    pub images: Vec<QElem>,
    pub transcript: Vec<Check>,
}

impl EmbeddingCert {
    /// Builds and verifies a certificate from a homomorphic section over `rep`.
    pub fn new(description: impl Into<String>, rep: &PermRep, section: &[QElem]) -> Result<EmbeddingCert> {
        let n = rep.degree();
        let gens = rep.generator_images();
        let (group, ordered) = from_perm_gens(n, &gens)?;
        let mut images = Vec::with_capacity(group.order());
        for p in ordered.images() {
            let g = rep.element_of(p).ok_or_else(|| Error::Verification(format!("{p} is not in the group")))?;
            images.push(section[g].clone());
        }
        let k = section.first().map(QElem::k).unwrap_or(2);
        let mut cert = EmbeddingCert {
            description: description.into(),
            degree: n,
            elements: ordered.images().to_vec(),
            generators: group.gens().to_vec(),
            k,
            images,
            transcript: Vec::new(),
        };
        cert.transcript = run_checks(&cert.elements, &cert.images)?;
        if let Some(c) = cert.transcript.iter().find(|c| !c.passed) {
            return Err(Error::Verification(format!("check '{}' failed", c.name)));
        }
        Ok(cert)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn to_json(&self) -> Value {
        let group = json!({
            "description": self.description,
            "degree": self.degree,
            "order": self.elements.len(),
            "generators": self.generators,
            "elements": self.elements.iter().map(Perm::to_string).collect::<Vec<_>>(),
        });
        let transcript: Vec<Value> = self
            .transcript
            .iter()
            .map(|c| json!({"check": c.name, "count": c.count, "passed": c.passed}))
            .collect();
        let mut out = Map::new();
        out.insert("schema".into(), Value::from(SCHEMA));
        out.insert("tool_version".into(), Value::from(TOOL_VERSION));
        out.insert("convention".into(), Value::from(CONVENTION));
        out.insert("group".into(), group);
        out.insert("target".into(), json!({"n": self.degree, "k": self.k}));
        out.insert("images".into(), Value::Array(self.images.iter().map(QElem::to_json).collect()));
        out.insert("transcript".into(), Value::Array(transcript));
        Value::Object(out)
    }
}

fn run_checks(elements: &[Perm], images: &[QElem]) -> Result<Vec<Check>> {
    let o = elements.len() as u64;
    let index: std::collections::HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let projection = images.iter().zip(elements).all(|(q, p)| q.perm() == p);
    let identity = images[0].is_identity();
    let mut products = true;
    'outer: for (a, pa) in elements.iter().enumerate() {
        for (b, pb) in elements.iter().enumerate() {
            let ab = index[&pa.then(pb)];
            if q_mul(&images[a], &images[b])? != images[ab] {
                products = false;
                break 'outer;
            }
        }
    }
    let distinct = {
        let set: std::collections::HashSet<&QElem> = images.iter().collect();
        set.len() == images.len()
    };
    let orders = images.iter().zip(elements).all(|(q, p)| q_order(q) == Order::Finite(p.order()));
    Ok(vec![
        Check { name: "identity".into(), count: 1, passed: identity },
        Check { name: "projection".into(), count: o, passed: projection },
        Check { name: "products".into(), count: o * o, passed: products },
        Check { name: "injective".into(), count: o, passed: distinct },
        Check { name: "orders".into(), count: o, passed: orders },
    ])
}

/// Summary of an accepted certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertReport {
    pub order: usize,
    pub n: usize,
    pub k: u8,
    pub checks: Vec<Check>,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| reject(format!("missing field '{key}'")))
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| reject(format!("'{key}' must be a non-negative integer")))
}

/// Re-verifies a certificate from scratch. Any mismatch, including in the
/// recorded transcript, rejects it.
pub fn check_cert(v: &Value) -> Result<CertReport> {
    if get(v, "schema")?.as_str() != Some(SCHEMA) {
        return Err(reject("unknown schema"));
    }
    if get(v, "convention")?.as_str() != Some(CONVENTION) {
        return Err(reject("unknown convention"));
    }
    get(v, "tool_version")?.as_str().ok_or_else(|| reject("'tool_version' must be a string"))?;
    let group = get(v, "group")?;
    let target = get(v, "target")?;
    let n = get_usize(target, "n")?;
    let k = get_usize(target, "k")?;
    if k != 2 && k != 3 {
        return Err(reject("target k must be 2 or 3"));
    }
    if n == 0 || get_usize(group, "degree")? != n {
        return Err(reject("group degree and target n differ"));
    }
    let elements = get(group, "elements")?
        .as_array()
        .ok_or_else(|| reject("'elements' must be a list"))?
        .iter()
        .map(|e| e.as_str().ok_or_else(|| reject("elements must be strings")).and_then(|s| Perm::parse(n, s)))
        .collect::<Result<Vec<_>>>()?;
    if elements.is_empty() || get_usize(group, "order")? != elements.len() {
        return Err(reject("group order does not match the element list"));
    }
    let generators = get(group, "generators")?
        .as_array()
        .ok_or_else(|| reject("'generators' must be a list"))?
        .iter()
        .map(|g| g.as_u64().map(|x| x as usize).filter(|&x| x < elements.len()).ok_or_else(|| reject("bad generator index")))
        .collect::<Result<Vec<_>>>()?;
    let gen_perms: Vec<Perm> = generators.iter().map(|&g| elements[g].clone()).collect();
    let closure = if gen_perms.is_empty() {
        vec![Perm::identity(n)]
    } else {
        let (g, rep) = from_perm_gens(n, &gen_perms)?;
        if g.gens() != generators.as_slice() {
            return Err(reject("generator indices do not match the closure order"));
        }
        rep.images().to_vec()
    };
    if closure != elements {
        return Err(reject("element list is not the breadth-first closure of the generators"));
    }
    let images = get(v, "images")?
        .as_array()
        .ok_or_else(|| reject("'images' must be a list"))?
        .iter()
        .map(QElem::from_json)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| reject(format!("bad image: {e}")))?;
    if images.len() != elements.len() {
        return Err(reject("one image per element is required"));
    }
    if images.iter().any(|q| q.n() != n || q.k() as usize != k) {
        return Err(reject("image in the wrong quotient"));
    }
    let checks = run_checks(&elements, &images)?;
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(reject(format!("check '{}' failed", c.name)));
    }
    let recorded = get(v, "transcript")?.as_array().ok_or_else(|| reject("'transcript' must be a list"))?;
    let expected: Vec<Value> = checks.iter().map(|c| json!({"check": c.name, "count": c.count, "passed": c.passed})).collect();
    if recorded != &expected {
        return Err(reject("transcript does not match the recomputed checks"));
    }
    Ok(CertReport { order: elements.len(), n, k: k as u8, checks })
}
