//! Ideals, ideal arithmetic, lattice enumeration and the maximal spectrum.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::ring::{Caps, Elem, FiniteRing, Structure, Value};

/// An ideal, identified by its element set.
#[derive(Clone)]
pub struct Ideal {
    ring: FiniteRing,
    members: FixedBitSet,
}

impl Ideal {
    pub(crate) fn from_members_unchecked(ring: &FiniteRing, members: FixedBitSet) -> Ideal {
        debug_assert_eq!(members.len(), ring.size());
        Ideal {
            ring: ring.clone(),
            members,
        }
    }

    /// Wrap an explicit member set, checking the ideal axioms.
    pub fn from_members(ring: &FiniteRing, members: FixedBitSet) -> Result<Ideal> {
        if members.len() != ring.size() || !members.contains(ring.zero() as usize) {
            return Err(Error::InvalidDescriptor("ideal must contain zero".into()));
        }
        let list: Vec<usize> = members.ones().collect();
        for &x in &list {
            for &y in &list {
                if !members.contains(ring.add(x as Elem, y as Elem) as usize) {
                    return Err(Error::InvalidDescriptor("subset not closed under addition".into()));
                }
            }
            for r in ring.elements() {
                if !members.contains(ring.mul(r, x as Elem) as usize) {
                    return Err(Error::InvalidDescriptor("subset does not absorb multiplication".into()));
                }
            }
        }
        Ok(Self::from_members_unchecked(ring, members))
    }

    pub fn zero(ring: &FiniteRing) -> Ideal {
        let mut members = FixedBitSet::with_capacity(ring.size());
        members.insert(ring.zero() as usize);
        Self::from_members_unchecked(ring, members)
    }

    pub fn unit(ring: &FiniteRing) -> Ideal {
        let mut members = FixedBitSet::with_capacity(ring.size());
        members.insert_range(..);
        Self::from_members_unchecked(ring, members)
    }

    /// The smallest ideal containing `gens`.
    pub fn generated(ring: &FiniteRing, gens: &[Elem]) -> Ideal {
        // R is additively spanned by its additive generators, so Rg is
        // additively spanned by their multiples of g.
        let scalars = ring.additive_generators();
        let members = ring.additive_span(
            gens.iter()
                .flat_map(|&g| scalars.iter().map(move |&r| ring.mul(r, g))),
        );
        Self::from_members_unchecked(ring, members)
    }

    pub fn principal(ring: &FiniteRing, g: Elem) -> Ideal {
        Self::generated(ring, &[g])
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones().map(|x| x as Elem)
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 1
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(self.ring.one())
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideals live in different rings".into()));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut span = self.members.clone();
        let mut list: Vec<Elem> = self.elements().collect();
        for x in other.elements() {
            self.ring.extend_span(&mut span, &mut list, x);
        }
        Ok(Self::from_members_unchecked(&self.ring, span))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let r = &self.ring;
        let mut products = FixedBitSet::with_capacity(r.size());
        for x in self.elements() {
            for y in other.elements() {
                products.insert(r.mul(x, y) as usize);
            }
        }
        // products of elements already absorb multiplication; close additively
        let members = r.additive_span(products.ones().map(|x| x as Elem));
        Ok(Self::from_members_unchecked(r, members))
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Ok(Self::from_members_unchecked(&self.ring, members))
    }

    /// `{ r : r I = 0 }`.
    pub fn annihilator(&self) -> Ideal {
        let r = &self.ring;
        let gens = additive_generators_of(r, self);
        let mut members = FixedBitSet::with_capacity(r.size());
        for x in r.elements() {
            if gens.iter().all(|&g| r.mul(x, g) == r.zero()) {
                members.insert(x as usize);
            }
        }
        Self::from_members_unchecked(r, members)
    }

    /// `h^{-1}(J)` for an ideal `J` of the codomain.
    pub fn preimage(h: &RingHom, j: &Ideal) -> Result<Ideal> {
        if h.codomain() != j.ring() {
            return Err(Error::RingMismatch("preimage: ideal is not in the codomain".into()));
        }
        let mut members = FixedBitSet::with_capacity(h.domain().size());
        for a in h.domain().elements() {
            if j.contains(h.apply(a)) {
                members.insert(a as usize);
            }
        }
        Ok(Self::from_members_unchecked(h.domain(), members))
    }

    /// Ideal of the codomain generated by `h(I)`.
    pub fn extension(h: &RingHom, i: &Ideal) -> Result<Ideal> {
        if h.domain() != i.ring() {
            return Err(Error::RingMismatch("extension: ideal is not in the domain".into()));
        }
        let images: Vec<Elem> = i.elements().map(|a| h.apply(a)).collect();
        Ok(Self::generated(h.codomain(), &images))
    }

    /// Direct image `h(I)` as a set; an ideal whenever `h` is surjective.
    pub fn image_under_surjection(h: &RingHom, i: &Ideal) -> Result<Ideal> {
        if h.domain() != i.ring() {
            return Err(Error::RingMismatch("image: ideal is not in the domain".into()));
        }
        let mut members = FixedBitSet::with_capacity(h.codomain().size());
        for a in i.elements() {
            members.insert(h.apply(a) as usize);
        }
        Ideal::from_members(h.codomain(), members)
    }

    /// Canonical order: by cardinality, then by the sorted element list.
    pub fn cmp_canonical(&self, other: &Ideal) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }

    pub fn encoded(&self) -> Vec<Value> {
        self.elements().map(|x| self.ring.encode(x)).collect()
    }

    pub fn canonical_form(&self) -> String {
        let list: Vec<String> = self.encoded().iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", list.join(","))
    }
}

/// A small additive generating set of an ideal.
fn additive_generators_of(r: &FiniteRing, i: &Ideal) -> Vec<Elem> {
    let mut span = FixedBitSet::with_capacity(r.size());
    span.insert(r.zero() as usize);
    let mut list = vec![r.zero()];
    let mut gens = Vec::new();
    for x in i.elements() {
        if !span.contains(x as usize) {
            r.extend_span(&mut span, &mut list, x);
            gens.push(x);
        }
    }
    gens
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.ring == other.ring
    }
}

impl Eq for Ideal {}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 16 {
            f.write_str(&self.canonical_form())
        } else {
            write!(f, "<ideal of {} elements in {}>", self.len(), self.ring)
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Every ideal of `r` exactly once, in canonical order.
///
/// The ring is split along its primitive idempotents `e_1, ..., e_k` into
/// local factors `e_i R`; every ideal is the direct sum of ideals of the
/// factors, and each factor's lattice is found by closing `{0}` under sums
/// with principal ideals.
pub fn enumerate_ideals(r: &FiniteRing, caps: &Caps) -> Result<Vec<Ideal>> {
    caps.check_enum(r.size())?;
    let mut combined: Vec<FixedBitSet> = vec![Ideal::zero(r).members];
    for &e in r.primitive_idempotents() {
        let factor = local_factor_lattice(r, e);
        let mut next = Vec::with_capacity(combined.len() * factor.len());
        for a in &combined {
            let a_list: Vec<Elem> = a.ones().map(|x| x as Elem).collect();
            for b in &factor {
                let mut s = FixedBitSet::with_capacity(r.size());
                for y in b.ones() {
                    for &x in &a_list {
                        s.insert(r.add(x, y as Elem) as usize);
                    }
                }
                next.push(s);
            }
        }
        combined = next;
    }
    let mut ideals: Vec<Ideal> = combined
        .into_iter()
        .map(|m| Ideal::from_members_unchecked(r, m))
        .collect();
    ideals.sort_by(|a, b| a.cmp_canonical(b));
    Ok(ideals)
}

fn local_factor_lattice(r: &FiniteRing, e: Elem) -> Vec<FixedBitSet> {
    let mut principals: Vec<Ideal> = Vec::new();
    let mut seen_principal = HashSet::new();
    for x in r.elements() {
        if r.mul(x, e) == x {
            let p = Ideal::principal(r, x);
            if seen_principal.insert(p.members.clone()) {
                principals.push(p);
            }
        }
    }
    let zero = Ideal::zero(r);
    let mut seen = HashSet::new();
    seen.insert(zero.members.clone());
    let mut lattice = vec![zero];
    let mut next = 0;
    while next < lattice.len() {
        let current = lattice[next].clone();
        next += 1;
        for p in &principals {
            if p.is_subset(&current) {
                continue;
            }
            let s = current.sum(p).expect("same ring");
            if seen.insert(s.members.clone()) {
                lattice.push(s);
            }
        }
    }
    lattice.into_iter().map(|i| i.members).collect()
}

/// `nil(R)`: all nilpotent elements.
pub fn nilradical(r: &FiniteRing) -> Ideal {
    let mut members = FixedBitSet::with_capacity(r.size());
    for x in r.elements() {
        if r.is_nilpotent(x) {
            members.insert(x as usize);
        }
    }
    Ideal::from_members_unchecked(r, members)
}

/// Radical of `i`: the preimage of `nil(R/I)`.
pub fn radical(i: &Ideal) -> Ideal {
    let r = i.ring();
    if !i.is_proper() {
        return i.clone();
    }
    let q = FiniteRing::quotient(r, i).expect("proper ideal");
    let class_of = quotient_classes(&q);
    let mut members = FixedBitSet::with_capacity(r.size());
    for x in r.elements() {
        if q.is_nilpotent(class_of[x as usize]) {
            members.insert(x as usize);
        }
    }
    Ideal::from_members_unchecked(r, members)
}

pub fn is_radical(i: &Ideal) -> bool {
    radical(i) == *i
}

/// `nil(R)` when `i` is `None`, the radical of `i` otherwise.
pub fn nilradical_and_radical(r: &FiniteRing, i: Option<&Ideal>) -> Result<Ideal> {
    match i {
        None => Ok(nilradical(r)),
        Some(i) if i.ring() == r => Ok(radical(i)),
        Some(_) => Err(Error::RingMismatch("ideal of another ring".into())),
    }
}

pub(crate) fn quotient_classes(q: &FiniteRing) -> &[Elem] {
    match q.structure() {
        Structure::Quotient { class_of, .. } => class_of,
        _ => unreachable!("expected a quotient ring"),
    }
}

/// Maximal ideals together with the data used to find them.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub maximals: Vec<Ideal>,
    /// Primitive idempotents of `R/nil(R)`, one per residue field.
    pub idempotents: Vec<Value>,
    pub nilradical: Ideal,
}

/// `Max(R)`, or `Max(R, I)` when `containing` is given.
///
/// `R/nil(R)` is a finite reduced ring, hence a product of fields; the
/// maximal ideals are the preimages of the annihilators of its primitive
/// idempotents. In a finite ring this is also the prime spectrum.
pub fn maximal_ideals(r: &FiniteRing, containing: Option<&Ideal>) -> Result<SpectrumReport> {
    if let Some(i) = containing {
        if i.ring() != r {
            return Err(Error::RingMismatch("Max(R, I) with I in another ring".into()));
        }
    }
    let nil = nilradical(r);
    let reduced = FiniteRing::quotient(r, &nil)?;
    let class_of = quotient_classes(&reduced);
    let mut maximals = Vec::new();
    let mut idempotents = Vec::new();
    for &eps in reduced.primitive_idempotents() {
        idempotents.push(reduced.encode(eps));
        let mut members = FixedBitSet::with_capacity(r.size());
        for x in r.elements() {
            if reduced.mul(class_of[x as usize], eps) == reduced.zero() {
                members.insert(x as usize);
            }
        }
        let m = Ideal::from_members_unchecked(r, members);
        if containing.is_none_or(|i| i.is_subset(&m)) {
            maximals.push(m);
        }
    }
    maximals.sort_by(|a, b| a.cmp_canonical(b));
    Ok(SpectrumReport {
        maximals,
        idempotents,
        nilradical: nil,
    })
}

/// `(prime, maximal)` for a proper ideal. The two always agree in a finite ring.
pub fn is_prime_or_maximal(p: &Ideal) -> Result<(bool, bool)> {
    if !p.is_proper() {
        return Err(Error::NotProper);
    }
    let q = FiniteRing::quotient(p.ring(), p)?;
    let nonzero: Vec<Elem> = q.elements().filter(|&x| x != q.zero()).collect();
    let prime = nonzero
        .iter()
        .all(|&x| nonzero.iter().all(|&y| q.mul(x, y) != q.zero()));
    let maximal = nonzero.iter().all(|&x| q.is_unit(x));
    assert_eq!(prime, maximal, "prime and maximal must coincide in a finite ring");
    Ok((prime, maximal))
}
