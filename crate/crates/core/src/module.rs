//! Finite modules over a finite ring, as needed by trivial ring extensions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::ring::{Elem, FiniteRing, Value};

#[derive(Clone)]
pub enum ModuleKind {
    /// An ideal of the base ring viewed as a module.
    Ideal { ideal: Ideal, members: Vec<Elem> },
    /// The cyclic module `A/I`, carried by the quotient ring.
    Quotient { ideal: Ideal, quotient: FiniteRing },
    DirectSum(Module, Module),
}

struct ModuleData {
    base: FiniteRing,
    kind: ModuleKind,
    size: usize,
}

/// A finite module over `base`. Elements are indices `0..size`.
#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl Module {
    pub fn from_ideal(ideal: &Ideal) -> Module {
        let members: Vec<Elem> = ideal.elements().collect();
        Module(Arc::new(ModuleData {
            base: ideal.ring().clone(),
            size: members.len(),
            kind: ModuleKind::Ideal {
                ideal: ideal.clone(),
                members,
            },
        }))
    }

    /// The base ring as a module over itself.
    pub fn free_rank_one(base: &FiniteRing) -> Module {
        Self::from_ideal(&Ideal::unit(base))
    }

    pub fn quotient(ideal: &Ideal) -> Result<Module> {
        let quotient = FiniteRing::quotient(ideal.ring(), ideal)?;
        Ok(Module(Arc::new(ModuleData {
            base: ideal.ring().clone(),
            size: quotient.size(),
            kind: ModuleKind::Quotient {
                ideal: ideal.clone(),
                quotient,
            },
        })))
    }

    pub fn direct_sum(m: &Module, n: &Module) -> Result<Module> {
        if m.base() != n.base() {
            return Err(Error::RingMismatch("direct sum of modules over different rings".into()));
        }
        Ok(Module(Arc::new(ModuleData {
            base: m.base().clone(),
            size: m.size() * n.size(),
            kind: ModuleKind::DirectSum(m.clone(), n.clone()),
        })))
    }

    pub fn base(&self) -> &FiniteRing {
        &self.0.base
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.0.kind
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            ModuleKind::Ideal { members, ideal } => {
                members.binary_search(&ideal.ring().zero()).expect("ideal contains zero") as Elem
            }
            ModuleKind::Quotient { quotient, .. } => quotient.zero(),
            ModuleKind::DirectSum(m, n) => m.zero() * n.size() as Elem + n.zero(),
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.kind {
            ModuleKind::Ideal { members, .. } => {
                let x = self.0.base.add(members[a as usize], members[b as usize]);
                members.binary_search(&x).expect("ideal closed under addition") as Elem
            }
            ModuleKind::Quotient { quotient, .. } => quotient.add(a, b),
            ModuleKind::DirectSum(m, n) => {
                let k = n.size() as Elem;
                m.add(a / k, b / k) * k + n.add(a % k, b % k)
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.kind {
            ModuleKind::Ideal { members, .. } => {
                let x = self.0.base.neg(members[a as usize]);
                members.binary_search(&x).expect("ideal closed under negation") as Elem
            }
            ModuleKind::Quotient { quotient, .. } => quotient.neg(a),
            ModuleKind::DirectSum(m, n) => {
                let k = n.size() as Elem;
                m.neg(a / k) * k + n.neg(a % k)
            }
        }
    }

    /// Scalar action `r . m` of a base ring element.
    pub fn act(&self, r: Elem, a: Elem) -> Elem {
        match &self.0.kind {
            ModuleKind::Ideal { members, .. } => {
                let x = self.0.base.mul(r, members[a as usize]);
                members.binary_search(&x).expect("ideal absorbs multiplication") as Elem
            }
            ModuleKind::Quotient { quotient, .. } => {
                let rq = project(quotient, r);
                quotient.mul(rq, a)
            }
            ModuleKind::DirectSum(m, n) => {
                let k = n.size() as Elem;
                m.act(r, a / k) * k + n.act(r, a % k)
            }
        }
    }

    pub fn encode(&self, a: Elem) -> Value {
        match &self.0.kind {
            ModuleKind::Ideal { members, .. } => self.0.base.encode(members[a as usize]),
            ModuleKind::Quotient { quotient, .. } => quotient.encode(a),
            ModuleKind::DirectSum(m, n) => {
                let k = n.size() as Elem;
                Value::pair(m.encode(a / k), n.encode(a % k))
            }
        }
    }

    pub fn decode(&self, v: &Value) -> Result<Elem> {
        match &self.0.kind {
            ModuleKind::Ideal { members, .. } => {
                let x = self.0.base.decode(v)?;
                members
                    .binary_search(&x)
                    .map(|i| i as Elem)
                    .map_err(|_| Error::NotAnElement(v.to_string()))
            }
            ModuleKind::Quotient { quotient, .. } => quotient.decode(v),
            ModuleKind::DirectSum(m, n) => match v {
                Value::Tuple(items) if items.len() == 2 => {
                    Ok(m.decode(&items[0])? * n.size() as Elem + n.decode(&items[1])?)
                }
                _ => Err(Error::NotAnElement(v.to_string())),
            },
        }
    }

    /// Check bilinearity, associativity and unitality of the action exhaustively.
    pub fn check_action(&self) -> Result<()> {
        let r = &self.0.base;
        let n = self.size() as Elem;
        for m in 0..n {
            if self.act(r.one(), m) != m {
                return Err(Error::InvalidDescriptor("action is not unital".into()));
            }
        }
        for a in r.elements() {
            for b in r.elements() {
                for m in 0..n {
                    if self.act(r.mul(a, b), m) != self.act(a, self.act(b, m)) {
                        return Err(Error::InvalidDescriptor("action is not associative".into()));
                    }
                    if self.act(r.add(a, b), m) != self.add(self.act(a, m), self.act(b, m)) {
                        return Err(Error::InvalidDescriptor("action is not additive in the scalar".into()));
                    }
                }
            }
            for m in 0..n {
                for k in 0..n {
                    if self.act(a, self.add(m, k)) != self.add(self.act(a, m), self.act(a, k)) {
                        return Err(Error::InvalidDescriptor("action is not additive in the vector".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match &self.0.kind {
            ModuleKind::Ideal { ideal, .. } => format!("ideal<{} elements>", ideal.len()),
            ModuleKind::Quotient { quotient, .. } => format!("quot<{} elements>", quotient.size()),
            ModuleKind::DirectSum(m, n) => format!("{}+{}", m.describe(), n.describe()),
        }
    }

    pub fn canonical_form(&self) -> String {
        match &self.0.kind {
            ModuleKind::Ideal { ideal, .. } => format!("ideal({})", ideal.canonical_form()),
            ModuleKind::Quotient { ideal, .. } => format!("quot({})", ideal.canonical_form()),
            ModuleKind::DirectSum(m, n) => format!("sum({},{})", m.canonical_form(), n.canonical_form()),
        }
    }
}

fn project(quotient: &FiniteRing, r: Elem) -> Elem {
    match quotient.structure() {
        crate::ring::Structure::Quotient { class_of, .. } => class_of[r as usize],
        _ => unreachable!("quotient module carried by a quotient ring"),
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.kind, &other.0.kind) {
            (ModuleKind::Ideal { ideal: i, .. }, ModuleKind::Ideal { ideal: j, .. }) => i == j,
            (ModuleKind::Quotient { ideal: i, .. }, ModuleKind::Quotient { ideal: j, .. }) => i == j,
            (ModuleKind::DirectSum(a, b), ModuleKind::DirectSum(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
