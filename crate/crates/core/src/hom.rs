//! Unital ring homomorphisms between finite rings.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::ring::{Caps, Elem, FiniteRing, Structure};

/// How [`make_hom`] should build the element map.
#[derive(Clone)]
pub enum HomSpec {
    /// Image of every domain element, in canonical order.
    Explicit(Vec<Elem>),
    /// Images of some elements; the rest follows from additivity and
    /// multiplicativity. Fails if the pairs do not determine a map.
    Generated(Vec<(Elem, Elem)>),
    Identity,
    /// Canonical projection onto a quotient, a factor of a product, or `Z/n -> Z/m`.
    Projection,
    /// Canonical inclusion into an ambient ring, a trivial extension or a diagonal.
    Inclusion,
    /// `a -> (a, phi(a))` into `A x D`.
    Graph(RingHom),
    /// `second . first`
    Compose(RingHom, RingHom),
}

/// A verified unital ring homomorphism.
#[derive(Clone)]
pub struct RingHom {
    domain: FiniteRing,
    codomain: FiniteRing,
    map: Arc<Vec<Elem>>,
}

pub fn make_hom(domain: &FiniteRing, codomain: &FiniteRing, spec: HomSpec) -> Result<RingHom> {
    let map = match spec {
        HomSpec::Explicit(map) => map,
        HomSpec::Generated(pairs) => propagate(domain, codomain, &pairs)?,
        HomSpec::Identity => {
            if domain != codomain {
                return Err(Error::RingMismatch("identity between different rings".into()));
            }
            domain.elements().collect()
        }
        HomSpec::Projection => projection_map(domain, codomain)?,
        HomSpec::Inclusion => inclusion_map(domain, codomain)?,
        HomSpec::Graph(phi) => {
            if phi.domain() != domain {
                return Err(Error::RingMismatch("graph: phi has the wrong domain".into()));
            }
            match codomain.structure() {
                Structure::Product(a, d) if a == domain && d == phi.codomain() => {
                    let k = d.size() as Elem;
                    domain.elements().map(|x| x * k + phi.apply(x)).collect()
                }
                _ => {
                    return Err(Error::RingMismatch(
                        "graph: codomain must be the product of the domain and phi's codomain".into(),
                    ))
                }
            }
        }
        HomSpec::Compose(first, second) => {
            if first.codomain() != second.domain() || first.domain() != domain || second.codomain() != codomain {
                return Err(Error::RingMismatch("composition endpoints do not match".into()));
            }
            domain.elements().map(|x| second.apply(first.apply(x))).collect()
        }
    };
    RingHom::from_map(domain, codomain, map)
}

impl RingHom {
    /// Build from an explicit map, verifying the homomorphism laws exhaustively.
    pub fn from_map(domain: &FiniteRing, codomain: &FiniteRing, map: Vec<Elem>) -> Result<RingHom> {
        if map.len() != domain.size() {
            return Err(Error::RingMismatch(format!(
                "map has {} entries for a domain of {} elements",
                map.len(),
                domain.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y as usize >= codomain.size()) {
            return Err(Error::NotAnElement(format!("image index {bad}")));
        }
        if map[domain.one() as usize] != codomain.one() {
            return Err(Error::NotAHom("not unital".into()));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                let (fa, fb) = (map[a as usize], map[b as usize]);
                if map[domain.add(a, b) as usize] != codomain.add(fa, fb) {
                    return Err(Error::NotAHom(format!(
                        "not additive at ({}, {})",
                        domain.encode(a),
                        domain.encode(b)
                    )));
                }
                if map[domain.mul(a, b) as usize] != codomain.mul(fa, fb) {
                    return Err(Error::NotAHom(format!(
                        "not multiplicative at ({}, {})",
                        domain.encode(a),
                        domain.encode(b)
                    )));
                }
            }
        }
        Ok(RingHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map: Arc::new(map),
        })
    }

    pub fn identity(r: &FiniteRing) -> RingHom {
        RingHom {
            domain: r.clone(),
            codomain: r.clone(),
            map: Arc::new(r.elements().collect()),
        }
    }

    pub fn domain(&self) -> &FiniteRing {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteRing {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x as usize]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.map.iter().enumerate().all(|(i, &y)| i as Elem == y)
    }

    pub fn compose(&self, then: &RingHom) -> Result<RingHom> {
        make_hom(&self.domain, &then.codomain, HomSpec::Compose(self.clone(), then.clone()))
    }

    pub fn kernel(&self) -> Ideal {
        let mut members = FixedBitSet::with_capacity(self.domain.size());
        for a in self.domain.elements() {
            if self.apply(a) == self.codomain.zero() {
                members.insert(a as usize);
            }
        }
        Ideal::from_members_unchecked(&self.domain, members)
    }

    pub fn image_set(&self) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.codomain.size());
        for &y in self.map.iter() {
            members.insert(y as usize);
        }
        members
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set().count_ones(..) == self.codomain.size()
    }

    pub fn canonical_form(&self) -> String {
        let list: Vec<String> = self
            .map
            .iter()
            .map(|&y| self.codomain.encode(y).to_string())
            .collect();
        format!(
            "hom({}->{};[{}])",
            self.domain.canonical_form(),
            self.codomain.canonical_form(),
            list.join(",")
        )
    }
}

impl PartialEq for RingHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.domain == other.domain && self.codomain == other.codomain
    }
}

impl Eq for RingHom {}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.codomain)
    }
}

/// Kernel ideal and image subring of `h`.
pub fn hom_kernel_image(h: &RingHom) -> (Ideal, FiniteRing) {
    let image = FiniteRing::subring_from_members(h.codomain(), &h.image_set())
        .expect("the image of a ring homomorphism is a unital subring");
    (h.kernel(), image)
}

/// Image subring with an explicit cap.
pub fn hom_image_capped(h: &RingHom, caps: &Caps) -> Result<FiniteRing> {
    let image = h.image_set();
    caps.check_size(image.count_ones(..))?;
    FiniteRing::subring_from_members(h.codomain(), &image)
}

fn propagate(domain: &FiniteRing, codomain: &FiniteRing, pairs: &[(Elem, Elem)]) -> Result<Vec<Elem>> {
    let mut image: Vec<Option<Elem>> = vec![None; domain.size()];
    let mut known: Vec<Elem> = Vec::new();
    let set = |x: Elem, y: Elem, image: &mut Vec<Option<Elem>>, known: &mut Vec<Elem>| -> Result<()> {
        match image[x as usize] {
            Some(z) if z != y => Err(Error::NotAHom(format!(
                "{} would map to both {} and {}",
                domain.encode(x),
                codomain.encode(z),
                codomain.encode(y)
            ))),
            Some(_) => Ok(()),
            None => {
                image[x as usize] = Some(y);
                known.push(x);
                Ok(())
            }
        }
    };
    set(domain.zero(), codomain.zero(), &mut image, &mut known)?;
    set(domain.one(), codomain.one(), &mut image, &mut known)?;
    for &(x, y) in pairs {
        domain.check_elem(x)?;
        codomain.check_elem(y)?;
        set(x, y, &mut image, &mut known)?;
    }
    let mut next = 0;
    while next < known.len() {
        let x = known[next];
        next += 1;
        let fx = image[x as usize].unwrap();
        set(domain.neg(x), codomain.neg(fx), &mut image, &mut known)?;
        for j in 0..next {
            let y = known[j];
            let fy = image[y as usize].unwrap();
            set(domain.add(x, y), codomain.add(fx, fy), &mut image, &mut known)?;
            set(domain.mul(x, y), codomain.mul(fx, fy), &mut image, &mut known)?;
        }
    }
    image
        .into_iter()
        .map(|y| y.ok_or_else(|| Error::InvalidDescriptor("given images do not determine the map".into())))
        .collect()
}

fn projection_map(domain: &FiniteRing, codomain: &FiniteRing) -> Result<Vec<Elem>> {
    if let Structure::Quotient { base, class_of, .. } = codomain.structure() {
        if base == domain {
            return Ok(class_of.clone());
        }
    }
    match (domain.structure(), codomain.structure()) {
        (Structure::ZMod(n), Structure::ZMod(m)) if n % m == 0 => {
            return Ok(domain.elements().map(|x| (x as u64 % m) as Elem).collect());
        }
        (Structure::Product(x, y), _) => {
            let k = y.size() as Elem;
            if x == codomain {
                return Ok(domain.elements().map(|a| a / k).collect());
            }
            if y == codomain {
                return Ok(domain.elements().map(|a| a % k).collect());
            }
        }
        (Structure::Subring { ambient, members }, _) => {
            if let Structure::Product(x, y) = ambient.structure() {
                let k = y.size() as Elem;
                if x == codomain {
                    return Ok(members.iter().map(|&a| a / k).collect());
                }
                if y == codomain {
                    return Ok(members.iter().map(|&a| a % k).collect());
                }
            }
        }
        _ => {}
    }
    Err(Error::InvalidDescriptor(format!(
        "no canonical projection {} -> {}",
        domain, codomain
    )))
}

fn inclusion_map(domain: &FiniteRing, codomain: &FiniteRing) -> Result<Vec<Elem>> {
    if domain == codomain {
        return Ok(domain.elements().collect());
    }
    if let Structure::Subring { ambient, members } = domain.structure() {
        if ambient == codomain {
            return Ok(members.clone());
        }
    }
    match codomain.structure() {
        Structure::TrivialExtension(base, module) if base == domain => {
            let k = module.size() as Elem;
            return Ok(domain.elements().map(|a| a * k + module.zero()).collect());
        }
        Structure::Product(x, y) if x == domain && y == domain => {
            let k = y.size() as Elem;
            return Ok(domain.elements().map(|a| a * k + a).collect());
        }
        Structure::Subring { ambient, members } => {
            if let Structure::Product(x, y) = ambient.structure() {
                if x == domain && y == domain {
                    let k = y.size() as Elem;
                    let diag: Option<Vec<Elem>> = domain
                        .elements()
                        .map(|a| members.binary_search(&(a * k + a)).ok().map(|i| i as Elem))
                        .collect();
                    if let Some(map) = diag {
                        return Ok(map);
                    }
                }
            }
        }
        _ => {}
    }
    Err(Error::InvalidDescriptor(format!(
        "no canonical inclusion {} -> {}",
        domain, codomain
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Value;

    fn z(n: u64) -> FiniteRing {
        FiniteRing::zmod(n).unwrap()
    }

    #[test]
    fn projection_onto_quotient() {
        let r = z(12);
        let i = Ideal::generated(&r, &[4]);
        let q = FiniteRing::quotient(&r, &i).unwrap();
        let p = make_hom(&r, &q, HomSpec::Projection).unwrap();
        assert!(p.is_surjective());
        assert_eq!(p.kernel(), i);
        let (k, image) = hom_kernel_image(&p);
        assert_eq!(k, i);
        assert_eq!(image.size(), q.size());
    }

    #[test]
    fn graph_hom_mod_two() {
        let a = z(12);
        let d = z(2);
        let phi = make_hom(&a, &d, HomSpec::Projection).unwrap();
        let c = FiniteRing::product(&a, &d).unwrap();
        let g = make_hom(&a, &c, HomSpec::Graph(phi)).unwrap();
        assert!(g.is_injective());
        assert_eq!(g.image_set().count_ones(..), 12);
        assert_eq!(c.encode(g.apply(5)), Value::pair(Value::Int(5), Value::Int(1)));
    }

    #[test]
    fn identity_and_errors() {
        let r = z(8);
        let id = make_hom(&r, &r, HomSpec::Identity).unwrap();
        assert!(id.is_identity());
        assert!(id.kernel().is_zero());
        // a -> (a, 0) is not unital
        let c = FiniteRing::product(&z(12), &z(2)).unwrap();
        let a = z(12);
        let bad: Vec<Elem> = a.elements().map(|x| x * 2).collect();
        assert_eq!(
            RingHom::from_map(&a, &c, bad).unwrap_err(),
            Error::NotAHom("not unital".into())
        );
        // Z/8 -> Z/3 has no unital hom
        assert!(make_hom(&z(8), &z(3), HomSpec::Generated(vec![])).is_err());
        assert!(make_hom(&z(8), &z(12), HomSpec::Identity).is_err());
    }

    #[test]
    fn generated_maps() {
        let h = make_hom(&z(12), &z(4), HomSpec::Generated(vec![])).unwrap();
        assert_eq!(h.apply(7), 3);
        assert!(make_hom(&z(12), &z(4), HomSpec::Generated(vec![(1, 2)])).is_err());
    }

    #[test]
    fn inclusion_into_trivial_extension() {
        let a = z(4);
        let m = crate::module::Module::free_rank_one(&a);
        let t = FiniteRing::trivial_extension(&a, &m).unwrap();
        let i = make_hom(&a, &t, HomSpec::Inclusion).unwrap();
        assert!(i.is_injective());
        let comp = i.compose(&make_hom(&t, &t, HomSpec::Identity).unwrap()).unwrap();
        assert_eq!(comp, i);
    }
}
