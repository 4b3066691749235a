//! Bi-amalgamated algebras `A ⋈^{f,g} (J, J')` and their local data.
//!
//! Given unital maps `f : A -> B`, `g : A -> C` and proper ideals `J ⊆ B`,
//! `J' ⊆ C` with `f^{-1}(J) = g^{-1}(J') = I0`, the bi-amalgamation is the
//! subring `{ (f(a) + j, g(a) + j') }` of `B x C`. Amalgamations are the case
//! `f = id_A`, duplications the case `f = g = id_A`, `J = J'`.

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hom::{make_hom, HomSpec, RingHom};
use crate::ideal::{is_prime_or_maximal, maximal_ideals, Ideal};
use crate::localization::{induced_hom, localize, localize_at_prime, localize_ideal, saturate, Localization, MultiplicativeSet};
use crate::ring::{Caps, Elem, FiniteRing, Structure};

/// The defining data of a bi-amalgamation, with the common contraction `I0`.
#[derive(Clone, Debug)]
pub struct BiAmalgDatum {
    pub a: FiniteRing,
    pub b: FiniteRing,
    pub c: FiniteRing,
    pub f: RingHom,
    pub g: RingHom,
    pub j: Ideal,
    pub j2: Ideal,
    pub i0: Ideal,
}

pub fn validate_datum(f: &RingHom, g: &RingHom, j: &Ideal, j2: &Ideal) -> Result<BiAmalgDatum> {
    if f.domain() != g.domain() {
        return Err(Error::RingMismatch("f and g must share their domain".into()));
    }
    if j.ring() != f.codomain() {
        return Err(Error::RingMismatch("J must be an ideal of the codomain of f".into()));
    }
    if j2.ring() != g.codomain() {
        return Err(Error::RingMismatch("J' must be an ideal of the codomain of g".into()));
    }
    if !j.is_proper() || !j2.is_proper() {
        return Err(Error::NotProper);
    }
    let left = Ideal::preimage(f, j)?;
    let right = Ideal::preimage(g, j2)?;
    if left != right {
        return Err(Error::ContractionMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(BiAmalgDatum {
        a: f.domain().clone(),
        b: f.codomain().clone(),
        c: g.codomain().clone(),
        f: f.clone(),
        g: g.clone(),
        j: j.clone(),
        j2: j2.clone(),
        i0: left,
    })
}

/// `A ⋈^f J`, presented as `A ⋈^{id, f}(f^{-1}(J), J)`.
pub fn amalgamation_datum(f: &RingHom, j: &Ideal) -> Result<BiAmalgDatum> {
    let id = RingHom::identity(f.domain());
    let contraction = Ideal::preimage(f, j)?;
    validate_datum(&id, f, &contraction, j)
}

/// `A ⋈ I`, the amalgamation of `A` with itself along `I`.
pub fn duplication_datum(a: &FiniteRing, i: &Ideal) -> Result<BiAmalgDatum> {
    amalgamation_datum(&RingHom::identity(a), i)
}

impl BiAmalgDatum {
    /// First map is the identity of `A`.
    pub fn is_amalgamation(&self) -> bool {
        self.f.is_identity()
    }

    pub fn is_duplication(&self) -> bool {
        self.f.is_identity() && self.g.is_identity() && self.j == self.j2
    }

    pub fn canonical_form(&self) -> String {
        format!(
            "datum({};{};{};{})",
            self.f.canonical_form(),
            self.g.canonical_form(),
            self.j.canonical_form(),
            self.j2.canonical_form()
        )
    }

    /// Short deterministic hash of the canonical form.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical_form().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Expected cardinality `|A/I0| * |J| * |J'|`.
    pub fn expected_size(&self) -> usize {
        self.a.size() / self.i0.len() * self.j.len() * self.j2.len()
    }
}

/// A constructed bi-amalgamation together with its canonical maps.
#[derive(Clone, Debug)]
pub struct BiAmalgRing {
    pub datum: BiAmalgDatum,
    pub ring: FiniteRing,
    pub proj_b: RingHom,
    pub proj_c: RingHom,
    /// `a -> (f(a), g(a))`
    pub structural: RingHom,
}

pub fn construct(datum: &BiAmalgDatum, caps: &Caps) -> Result<BiAmalgRing> {
    let expected = datum.expected_size();
    caps.check_size(expected)?;
    let (b, c) = (&datum.b, &datum.c);
    let ambient = FiniteRing::product_unbounded(b, c)?;
    let k = c.size() as Elem;
    let reps = coset_representatives(&datum.a, &datum.i0);
    let js: Vec<Elem> = datum.j.elements().collect();
    let j2s: Vec<Elem> = datum.j2.elements().collect();
    let mut members = FixedBitSet::with_capacity(ambient.size());
    for &a in &reps {
        let (fa, ga) = (datum.f.apply(a), datum.g.apply(a));
        for &j in &js {
            let x = b.add(fa, j);
            for &j2 in &j2s {
                members.insert((x * k + c.add(ga, j2)) as usize);
            }
        }
    }
    assert_eq!(
        members.count_ones(..),
        expected,
        "|R| = |A/I0| |J| |J'|"
    );
    let ring = FiniteRing::subring_from_members(&ambient, &members)?;
    let list = subring_members(&ring);
    let proj_b = RingHom::from_map(&ring, b, list.iter().map(|&x| x / k).collect())?;
    let proj_c = RingHom::from_map(&ring, c, list.iter().map(|&x| x % k).collect())?;
    let structural = RingHom::from_map(
        &datum.a,
        &ring,
        datum
            .a
            .elements()
            .map(|a| {
                let x = datum.f.apply(a) * k + datum.g.apply(a);
                list.binary_search(&x).expect("structural image lies in R") as Elem
            })
            .collect(),
    )?;
    Ok(BiAmalgRing {
        datum: datum.clone(),
        ring,
        proj_b,
        proj_c,
        structural,
    })
}

pub fn amalgamation(f: &RingHom, j: &Ideal, caps: &Caps) -> Result<BiAmalgRing> {
    construct(&amalgamation_datum(f, j)?, caps)
}

pub fn duplication(a: &FiniteRing, i: &Ideal, caps: &Caps) -> Result<BiAmalgRing> {
    construct(&duplication_datum(a, i)?, caps)
}

fn coset_representatives(a: &FiniteRing, i: &Ideal) -> Vec<Elem> {
    let mut seen = FixedBitSet::with_capacity(a.size());
    let mut reps = Vec::new();
    let members: Vec<Elem> = i.elements().collect();
    for x in a.elements() {
        if seen.contains(x as usize) {
            continue;
        }
        reps.push(x);
        for &y in &members {
            seen.insert(a.add(x, y) as usize);
        }
    }
    reps
}

fn subring_members(r: &FiniteRing) -> &[Elem] {
    match r.structure() {
        Structure::Subring { members, .. } => members,
        _ => unreachable!("expected a subring"),
    }
}

impl BiAmalgRing {
    pub fn size(&self) -> usize {
        self.ring.size()
    }

    /// Index in `R` of the pair `(x, y)` of `B x C`, if it lies in `R`.
    pub fn index_of_pair(&self, x: Elem, y: Elem) -> Option<Elem> {
        let k = self.datum.c.size() as Elem;
        subring_members(&self.ring)
            .binary_search(&(x * k + y))
            .ok()
            .map(|i| i as Elem)
    }

    pub fn pair(&self, r: Elem) -> (Elem, Elem) {
        (self.proj_b.apply(r), self.proj_c.apply(r))
    }

    fn ideal_from_pairs(&self, pairs: impl Iterator<Item = (Elem, Elem)>) -> Result<Ideal> {
        let mut members = FixedBitSet::with_capacity(self.ring.size());
        for (x, y) in pairs {
            let r = self
                .index_of_pair(x, y)
                .ok_or_else(|| Error::InvalidDescriptor("pair outside the bi-amalgamation".into()))?;
            members.insert(r as usize);
        }
        Ideal::from_members(&self.ring, members)
    }

    /// `J x J'` as an ideal of `R`.
    pub fn conductor(&self) -> Result<Ideal> {
        let d = &self.datum;
        let j2s: Vec<Elem> = d.j2.elements().collect();
        self.ideal_from_pairs(d.j.elements().flat_map(|x| j2s.iter().map(move |&y| (x, y))))
    }

    /// `0 x J'`, the kernel of the first projection.
    pub fn zero_times_j2(&self) -> Result<Ideal> {
        let zb = self.datum.b.zero();
        self.ideal_from_pairs(self.datum.j2.elements().map(|y| (zb, y)))
    }

    /// `J x 0`, the kernel of the second projection.
    pub fn j_times_zero(&self) -> Result<Ideal> {
        let zc = self.datum.c.zero();
        self.ideal_from_pairs(self.datum.j.elements().map(|x| (x, zc)))
    }
}

/// The subring `h(A) + J` of the codomain, with `J` seen as its ideal.
#[derive(Clone, Debug)]
pub struct ImageRing {
    pub ring: FiniteRing,
    /// inclusion into the codomain of `h`
    pub inclusion: RingHom,
    /// `h` with its codomain restricted
    pub corestriction: RingHom,
    pub ideal: Ideal,
}

pub fn image_ring(h: &RingHom, j: &Ideal) -> Result<ImageRing> {
    let codomain = h.codomain();
    if j.ring() != codomain {
        return Err(Error::RingMismatch("J must be an ideal of the codomain".into()));
    }
    let mut members = FixedBitSet::with_capacity(codomain.size());
    let js: Vec<Elem> = j.elements().collect();
    for a in h.domain().elements() {
        let x = h.apply(a);
        for &y in &js {
            members.insert(codomain.add(x, y) as usize);
        }
    }
    let ring = FiniteRing::subring_from_members(codomain, &members)?;
    let inclusion = make_hom(&ring, codomain, HomSpec::Inclusion)?;
    let list = subring_members(&ring);
    let index = |x: Elem| list.binary_search(&x).expect("member") as Elem;
    let corestriction = RingHom::from_map(h.domain(), &ring, h.domain().elements().map(|a| index(h.apply(a))).collect())?;
    let mut jm = FixedBitSet::with_capacity(ring.size());
    for &y in &js {
        jm.insert(index(y) as usize);
    }
    let ideal = Ideal::from_members(&ring, jm)?;
    Ok(ImageRing {
        ring,
        inclusion,
        corestriction,
        ideal,
    })
}

/// Localized data at a prime `p ⊇ I0` of `A`.
#[derive(Clone, Debug)]
pub struct LocalDatum {
    pub prime: Ideal,
    /// `S_p = f(A - p) + J` as a subset of `B`
    pub s_b: MultiplicativeSet,
    /// `S'_p = g(A - p) + J'` as a subset of `C`
    pub s_c: MultiplicativeSet,
    pub loc_a: Localization,
    pub loc_b: Localization,
    pub loc_c: Localization,
    pub f_p: RingHom,
    pub g_p: RingHom,
    pub j_s: Ideal,
    pub j2_s: Ideal,
    pub i0_p: Ideal,
    /// `f_p^{-1}(J_S) = g_p^{-1}(J'_S') = (I0)_p`
    pub contraction_holds: bool,
}

fn check_prime_over_conductor(datum: &BiAmalgDatum, p: &Ideal) -> Result<()> {
    if p.ring() != &datum.a {
        return Err(Error::RingMismatch("prime must be an ideal of A".into()));
    }
    if !datum.i0.is_subset(p) {
        return Err(Error::NotOverConductor);
    }
    if !is_prime_or_maximal(p)?.0 {
        return Err(Error::InvalidDescriptor("ideal is not prime".into()));
    }
    Ok(())
}

fn shifted_complement(h: &RingHom, j: &Ideal, p: &Ideal) -> Vec<Elem> {
    let codomain = h.codomain();
    let js: Vec<Elem> = j.elements().collect();
    let mut set = FixedBitSet::with_capacity(codomain.size());
    for a in h.domain().elements().filter(|&a| !p.contains(a)) {
        for &y in &js {
            set.insert(codomain.add(h.apply(a), y) as usize);
        }
    }
    set.ones().map(|x| x as Elem).collect()
}

pub fn local_datum(datum: &BiAmalgDatum, p: &Ideal) -> Result<LocalDatum> {
    check_prime_over_conductor(datum, p)?;
    let s_b = saturate(&datum.b, &shifted_complement(&datum.f, &datum.j, p))?;
    let s_c = saturate(&datum.c, &shifted_complement(&datum.g, &datum.j2, p))?;
    let loc_a = localize_at_prime(p)?;
    let loc_b = localize(&datum.b, &s_b)?;
    let loc_c = localize(&datum.c, &s_c)?;
    let f_p = induced_hom(&datum.f, &loc_a, &loc_b)?;
    let g_p = induced_hom(&datum.g, &loc_a, &loc_c)?;
    let j_s = localize_ideal(&datum.j, &loc_b)?;
    let j2_s = localize_ideal(&datum.j2, &loc_c)?;
    let i0_p = localize_ideal(&datum.i0, &loc_a)?;
    let contraction_holds = Ideal::preimage(&f_p, &j_s)? == i0_p && Ideal::preimage(&g_p, &j2_s)? == i0_p;
    Ok(LocalDatum {
        prime: p.clone(),
        s_b,
        s_c,
        loc_a,
        loc_b,
        loc_c,
        f_p,
        g_p,
        j_s,
        j2_s,
        i0_p,
        contraction_holds,
    })
}

impl LocalDatum {
    /// `(A_p, f_p, g_p, J_S, J'_S')` as a datum in its own right.
    pub fn as_datum(&self) -> Result<BiAmalgDatum> {
        validate_datum(&self.f_p, &self.g_p, &self.j_s, &self.j2_s)
    }
}

/// `p ⋈^{f,g}(J, J') = { (f(a) + j, g(a) + j') : a in p }`.
pub fn extend_prime(bi: &BiAmalgRing, p: &Ideal) -> Result<Ideal> {
    let d = &bi.datum;
    if p.ring() != &d.a {
        return Err(Error::RingMismatch("prime must be an ideal of A".into()));
    }
    if !d.i0.is_subset(p) {
        return Err(Error::NotOverConductor);
    }
    let js: Vec<Elem> = d.j.elements().collect();
    let j2s: Vec<Elem> = d.j2.elements().collect();
    let mut pairs = Vec::new();
    for a in p.elements() {
        let (fa, ga) = (d.f.apply(a), d.g.apply(a));
        for &x in &js {
            for &y in &j2s {
                pairs.push((d.b.add(fa, x), d.c.add(ga, y)));
            }
        }
    }
    bi.ideal_from_pairs(pairs.into_iter())
}

/// `Max(R)` split along `J x J'`, checked against the direct computation.
#[derive(Clone, Debug)]
pub struct MaximalClassification {
    /// `Max(R)` computed directly
    pub all: Vec<Ideal>,
    /// `(m, m ⋈ (J, J'))` for `m` in `Max(A, I0)`
    pub over_conductor: Vec<(Ideal, Ideal)>,
    /// maximals of `R` pulled back from `Max(f(A)+J)` avoiding `J`
    pub from_first: Vec<Ideal>,
    /// maximals of `R` pulled back from `Max(g(A)+J')` avoiding `J'`
    pub from_second: Vec<Ideal>,
    pub consistent: bool,
    pub issues: Vec<String>,
}

pub fn classify_maximals(bi: &BiAmalgRing) -> Result<MaximalClassification> {
    let d = &bi.datum;
    let all = maximal_ideals(&bi.ring, None)?.maximals;
    let conductor = bi.conductor()?;
    let mut issues = Vec::new();

    let mut over_conductor = Vec::new();
    for m in maximal_ideals(&d.a, Some(&d.i0))?.maximals {
        let big = extend_prime(bi, &m)?;
        if !all.contains(&big) {
            issues.push(format!("extension of {m} is not maximal in R"));
        }
        over_conductor.push((m, big));
    }
    let direct_over: Vec<&Ideal> = all.iter().filter(|m| conductor.is_subset(m)).collect();
    if direct_over.len() != over_conductor.len()
        || !direct_over.iter().all(|m| over_conductor.iter().any(|(_, big)| big == *m))
    {
        issues.push("maximals over J x J' do not match Max(A, I0)".into());
    }

    let pull_back = |image: &ImageRing, proj: &RingHom| -> Result<Vec<Ideal>> {
        let mut out = Vec::new();
        for l in maximal_ideals(&image.ring, None)?.maximals {
            if image.ideal.is_subset(&l) {
                continue;
            }
            let mut members = FixedBitSet::with_capacity(bi.ring.size());
            for r in bi.ring.elements() {
                let x = proj.apply(r);
                if l.elements().any(|y| image.inclusion.apply(y) == x) {
                    members.insert(r as usize);
                }
            }
            out.push(Ideal::from_members(&bi.ring, members)?);
        }
        Ok(out)
    };
    let from_first = pull_back(&image_ring(&d.f, &d.j)?, &bi.proj_b)?;
    let from_second = pull_back(&image_ring(&d.g, &d.j2)?, &bi.proj_c)?;
    let direct_off: Vec<&Ideal> = all.iter().filter(|m| !conductor.is_subset(m)).collect();
    let mut pulled: Vec<&Ideal> = from_first.iter().chain(from_second.iter()).collect();
    pulled.sort_by(|a, b| a.cmp_canonical(b));
    pulled.dedup();
    if pulled != direct_off {
        issues.push("maximals avoiding J x J' are not the pullbacks from f(A)+J and g(A)+J'".into());
    }
    Ok(MaximalClassification {
        all,
        over_conductor,
        from_first,
        from_second,
        consistent: issues.is_empty(),
        issues,
    })
}

/// Outcome of checking that a canonical map is a bijective homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl IsoCheck {
    fn from_result(name: &'static str, r: Result<String>) -> IsoCheck {
        match r {
            Ok(detail) => IsoCheck {
                name,
                holds: true,
                detail,
            },
            Err(e) => IsoCheck {
                name,
                holds: false,
                detail: e.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsoReport {
    /// `R_P ≅ A_p ⋈^{f_p, g_p}(J_S, J'_S')`, present when a prime was given
    pub local: Option<IsoCheck>,
    /// `R / (0 x J') ≅ f(A) + J`
    pub quotient: IsoCheck,
    /// `(f(A) + J)/J ≅ (g(A) + J')/J'`
    pub residue: IsoCheck,
}

impl IsoReport {
    pub fn all_hold(&self) -> bool {
        self.quotient.holds && self.residue.holds && self.local.as_ref().is_none_or(|c| c.holds)
    }
}

pub fn canonical_isos(bi: &BiAmalgRing, p: Option<&Ideal>, caps: &Caps) -> Result<IsoReport> {
    let local = p.map(|p| IsoCheck::from_result("local", local_iso(bi, p, caps)));
    Ok(IsoReport {
        local,
        quotient: IsoCheck::from_result("quotient", quotient_iso(bi)),
        residue: IsoCheck::from_result("residue", residue_iso(bi)),
    })
}

/// Given `h : R -> T` onto with kernel `K`, check that `R/K -> T` is a
/// bijective homomorphism.
fn induced_bijection(h: &RingHom, kernel: &Ideal) -> Result<()> {
    if !h.is_surjective() {
        return Err(Error::NotAHom("canonical map is not onto".into()));
    }
    if h.kernel() != *kernel {
        return Err(Error::NotAHom("canonical map has the wrong kernel".into()));
    }
    let q = FiniteRing::quotient(h.domain(), kernel)?;
    let proj = make_hom(h.domain(), &q, HomSpec::Projection)?;
    let mut map = vec![Elem::MAX; q.size()];
    for r in h.domain().elements() {
        map[proj.apply(r) as usize] = h.apply(r);
    }
    let induced = RingHom::from_map(&q, h.codomain(), map)?;
    if !(induced.is_injective() && induced.is_surjective()) {
        return Err(Error::NotAHom("induced map is not bijective".into()));
    }
    Ok(())
}

fn quotient_iso(bi: &BiAmalgRing) -> Result<String> {
    let d = &bi.datum;
    let image = image_ring(&d.f, &d.j)?;
    let members = subring_members(&image.ring);
    let map: Vec<Elem> = bi
        .ring
        .elements()
        .map(|r| {
            let x = bi.proj_b.apply(r);
            members.binary_search(&x).map(|i| i as Elem).unwrap_or(Elem::MAX)
        })
        .collect();
    if map.contains(&Elem::MAX) {
        return Err(Error::NotAHom("first projection leaves f(A)+J".into()));
    }
    let p1 = RingHom::from_map(&bi.ring, &image.ring, map)?;
    induced_bijection(&p1, &bi.zero_times_j2()?)?;
    Ok(format!("R/(0 x J') has {} elements", image.ring.size()))
}

fn residue_iso(bi: &BiAmalgRing) -> Result<String> {
    let d = &bi.datum;
    let first = image_ring(&d.f, &d.j)?;
    let second = image_ring(&d.g, &d.j2)?;
    let q1 = FiniteRing::quotient(&first.ring, &first.ideal)?;
    let q2 = FiniteRing::quotient(&second.ring, &second.ideal)?;
    let p1 = make_hom(&first.ring, &q1, HomSpec::Projection)?;
    let p2 = make_hom(&second.ring, &q2, HomSpec::Projection)?;
    let mut map = vec![Elem::MAX; q1.size()];
    for a in d.a.elements() {
        let x = p1.apply(first.corestriction.apply(a)) as usize;
        let y = p2.apply(second.corestriction.apply(a));
        if map[x] != Elem::MAX && map[x] != y {
            return Err(Error::NotAHom("residue map is not well defined".into()));
        }
        map[x] = y;
    }
    if map.contains(&Elem::MAX) {
        return Err(Error::NotAHom("residue map is not total".into()));
    }
    let iso = RingHom::from_map(&q1, &q2, map)?;
    if !(iso.is_injective() && iso.is_surjective()) {
        return Err(Error::NotAHom("residue map is not bijective".into()));
    }
    Ok(format!("both residue rings have {} elements", q1.size()))
}

fn local_iso(bi: &BiAmalgRing, p: &Ideal, caps: &Caps) -> Result<String> {
    let ld = local_datum(&bi.datum, p)?;
    let target = construct(&ld.as_datum()?, caps)?;
    let big_p = extend_prime(bi, p)?;
    let loc_r = localize_at_prime(&big_p)?;
    let mut map = Vec::with_capacity(bi.size());
    for r in bi.ring.elements() {
        let (x, y) = bi.pair(r);
        let image = target
            .index_of_pair(ld.loc_b.map.apply(x), ld.loc_c.map.apply(y))
            .ok_or_else(|| Error::NotAHom("componentwise localization leaves the local bi-amalgamation".into()))?;
        map.push(image);
    }
    let phi = RingHom::from_map(&bi.ring, &target.ring, map)?;
    induced_bijection(&phi, &loc_r.kernel)?;
    Ok(format!("R_P and the local bi-amalgamation have {} elements", target.size()))
}

/// Both sides of `f_p(A_p) + J_S = (f(A) + J)_L` inside `B_S`, `L = f(p) + J`.
#[derive(Clone, Debug)]
pub struct Claim1Report {
    pub equal: bool,
    pub lhs_size: usize,
    pub rhs_size: usize,
    /// whether `f_p(A_p) + J_S` is a local ring
    pub lhs_local: bool,
    /// `S_p` coincides with `(f(A)+J) \ L`
    pub complement_matches: bool,
    pub witness: Option<String>,
}

pub fn claim1_check(datum: &BiAmalgDatum, p: &Ideal) -> Result<Claim1Report> {
    let ld = local_datum(datum, p)?;
    let b = &datum.b;
    let bs = &ld.loc_b.ring;
    let pi = &ld.loc_b.map;

    // f(A) + J and L = f(p) + J as subsets of B
    let mut image = FixedBitSet::with_capacity(b.size());
    let mut l = FixedBitSet::with_capacity(b.size());
    let js: Vec<Elem> = datum.j.elements().collect();
    for a in datum.a.elements() {
        for &y in &js {
            let x = b.add(datum.f.apply(a), y) as usize;
            image.insert(x);
            if p.contains(a) {
                l.insert(x);
            }
        }
    }
    let mut complement = image.clone();
    complement.difference_with(&l);
    let complement_matches = &complement == ld.s_b.members();

    let mut lhs = FixedBitSet::with_capacity(bs.size());
    let js_local: Vec<Elem> = ld.j_s.elements().collect();
    for y in ld.loc_a.ring.elements() {
        for &j in &js_local {
            lhs.insert(bs.add(ld.f_p.apply(y), j) as usize);
        }
    }

    let mut rhs = FixedBitSet::with_capacity(bs.size());
    let mut witness = None;
    for s in complement.ones() {
        let Some(inv) = bs.inverse(pi.apply(s as Elem)) else {
            witness.get_or_insert_with(|| format!("{} is not invertible in B_S", b.encode(s as Elem)));
            continue;
        };
        for x in image.ones() {
            rhs.insert(bs.mul(pi.apply(x as Elem), inv) as usize);
        }
    }
    let equal = lhs == rhs && witness.is_none();
    if witness.is_none() && !equal {
        let mut diff = lhs.clone();
        diff.symmetric_difference_with(&rhs);
        let x = diff.ones().next().expect("sets differ") as Elem;
        witness = Some(format!("{} lies in exactly one side", bs.encode(x)));
    }
    let lhs_local = FiniteRing::subring_from_members(bs, &lhs)
        .map(|r| r.is_local())
        .unwrap_or(false);
    Ok(Claim1Report {
        equal,
        lhs_size: lhs.count_ones(..),
        rhs_size: rhs.count_ones(..),
        lhs_local,
        complement_matches,
        witness,
    })
}
