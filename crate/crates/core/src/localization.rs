//! Localization of finite rings.
//!
//! For a finite ring `R` and a multiplicative set `S`, each `s` in `S` has an
//! idempotent power, so the canonical map `R -> S^{-1}R` is surjective and
//! `S^{-1}R` is the quotient `R/K` with `K = { r : s r = 0 for some s in S }`.
//! That quotient is what gets built here; fractions never appear.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::hom::{make_hom, HomSpec, RingHom};
use crate::ideal::Ideal;
use crate::ring::{Elem, FiniteRing};

/// Multiplicative closure of a subset together with `1`.
#[derive(Clone, Debug)]
pub struct MultiplicativeSet {
    ring: FiniteRing,
    generators: Vec<Elem>,
    closure: FixedBitSet,
}

impl MultiplicativeSet {
    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.closure.contains(x as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.closure.ones().map(|x| x as Elem)
    }

    pub fn len(&self) -> usize {
        self.closure.count_ones(..)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.closure
    }
}

pub fn saturate(r: &FiniteRing, subset: &[Elem]) -> Result<MultiplicativeSet> {
    for &x in subset {
        r.check_elem(x)?;
    }
    let mut closure = FixedBitSet::with_capacity(r.size());
    let mut gens: Vec<Elem> = subset.to_vec();
    gens.sort_unstable();
    gens.dedup();
    let mut queue = vec![r.one()];
    closure.insert(r.one() as usize);
    for &g in &gens {
        if !closure.put(g as usize) {
            queue.push(g);
        }
    }
    let mut next = 0;
    while next < queue.len() {
        let x = queue[next];
        next += 1;
        for &g in &gens {
            let y = r.mul(x, g);
            if !closure.put(y as usize) {
                queue.push(y);
            }
        }
    }
    Ok(MultiplicativeSet {
        ring: r.clone(),
        generators: gens,
        closure,
    })
}

/// `S^{-1}R` realized as `R/K`, with its canonical map.
#[derive(Clone, Debug)]
pub struct Localization {
    pub source: FiniteRing,
    pub set: MultiplicativeSet,
    /// `K = { r : s r = 0 for some s in S }`
    pub kernel: Ideal,
    pub ring: FiniteRing,
    pub map: RingHom,
}

pub fn localize(r: &FiniteRing, s: &MultiplicativeSet) -> Result<Localization> {
    if s.ring() != r {
        return Err(Error::RingMismatch("multiplicative set of another ring".into()));
    }
    let members: Vec<Elem> = s.elements().collect();
    let mut k = FixedBitSet::with_capacity(r.size());
    for x in r.elements() {
        if members.iter().any(|&t| r.mul(t, x) == r.zero()) {
            k.insert(x as usize);
        }
    }
    if k.contains(r.one() as usize) {
        return Err(Error::DegenerateLocalization);
    }
    let kernel = Ideal::from_members_unchecked(r, k);
    let ring = FiniteRing::quotient(r, &kernel)?;
    let map = make_hom(r, &ring, HomSpec::Projection)?;
    for &t in &members {
        assert!(ring.is_unit(map.apply(t)), "members of S become units");
    }
    Ok(Localization {
        source: r.clone(),
        set: s.clone(),
        kernel,
        ring,
        map,
    })
}

/// `R_P`, inverting the complement of a prime `P`.
pub fn localize_at_prime(p: &Ideal) -> Result<Localization> {
    let r = p.ring();
    let complement: Vec<Elem> = r.elements().filter(|&x| !p.contains(x)).collect();
    let s = saturate(r, &complement)?;
    localize(r, &s)
}

/// Extension of `i` along the canonical map; equal to its direct image since
/// the map is onto.
pub fn localize_ideal(i: &Ideal, loc: &Localization) -> Result<Ideal> {
    if i.ring() != &loc.source {
        return Err(Error::RingMismatch("ideal is not in the localized ring".into()));
    }
    let mut members = FixedBitSet::with_capacity(loc.ring.size());
    for x in i.elements() {
        members.insert(loc.map.apply(x) as usize);
    }
    Ok(Ideal::from_members_unchecked(&loc.ring, members))
}

/// The map `S^{-1}A -> T^{-1}B` induced by `h : A -> B`, given `h(S) ⊆ T`.
pub fn induced_hom(h: &RingHom, from: &Localization, to: &Localization) -> Result<RingHom> {
    if h.domain() != &from.source || h.codomain() != &to.source {
        return Err(Error::RingMismatch("induced map: localizations do not match the hom".into()));
    }
    let mut map = vec![Elem::MAX; from.ring.size()];
    for a in h.domain().elements() {
        let x = from.map.apply(a) as usize;
        let y = to.map.apply(h.apply(a));
        if map[x] == Elem::MAX {
            map[x] = y;
        } else if map[x] != y {
            return Err(Error::NotAHom("induced map is not well defined".into()));
        }
    }
    RingHom::from_map(&from.ring, &to.ring, map)
}
