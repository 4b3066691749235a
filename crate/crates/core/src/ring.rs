//! Finite commutative unital rings.
//!
//! Every ring enumerates its elements as indices `0..size`. The index order is
//! the canonical element order; it is a pure function of the structural
//! descriptor, so it is identical across runs. Small rings (at most
//! [`TABLE_LIMIT`] elements) cache full operation tables, larger ones evaluate
//! structurally through their descriptor.

use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::module::Module;

/// Index of an element inside its owning ring.
pub type Elem = u32;

/// Rings with at most this many elements keep `n x n` operation tables.
pub const TABLE_LIMIT: usize = 256;

/// Size limits applied to construction and to lattice enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_ring_size: usize,
    pub max_ideal_enum: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ring_size: 4096,
            max_ideal_enum: 512,
        }
    }
}

impl Caps {
    pub fn check_size(&self, size: usize) -> Result<()> {
        if size > self.max_ring_size {
            return Err(Error::SizeCap {
                size,
                cap: self.max_ring_size,
            });
        }
        Ok(())
    }

    pub fn check_enum(&self, size: usize) -> Result<()> {
        if size > self.max_ideal_enum {
            return Err(Error::LatticeTooLarge {
                size,
                cap: self.max_ideal_enum,
            });
        }
        Ok(())
    }
}

/// Canonical, human-readable encoding of an element: an integer for `Z/n`,
/// parenthesised tuples for products and trivial extensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(vec![a, b])
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(k) => write!(f, "{k}"),
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Request passed to [`make_ring`].
#[derive(Clone)]
pub enum RingDescriptor {
    ZMod(u64),
    Product(FiniteRing, FiniteRing),
    Quotient(FiniteRing, Ideal),
    TrivialExtension(FiniteRing, Module),
    /// Smallest unital subring of `B x C` containing the given pairs.
    SubringOfProduct(FiniteRing, FiniteRing, Vec<(Elem, Elem)>),
}

/// Structural shape of a constructed ring.
#[derive(Clone)]
pub enum Structure {
    ZMod(u64),
    Product(FiniteRing, FiniteRing),
    Quotient {
        base: FiniteRing,
        ideal: Ideal,
        /// base element -> class index
        class_of: Vec<Elem>,
        /// class index -> smallest representative
        reps: Vec<Elem>,
    },
    TrivialExtension(FiniteRing, Module),
    /// Unital subring of `ambient`, members sorted by ambient index.
    Subring { ambient: FiniteRing, members: Vec<Elem> },
    /// Raw operation tables; used to model arbitrary (possibly broken) tables.
    Table { add: Vec<Elem>, mul: Vec<Elem> },
}

struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

struct RingData {
    structure: Structure,
    size: usize,
    zero: Elem,
    one: Elem,
    tables: Option<Tables>,
    additive_gens: OnceLock<Vec<Elem>>,
    primitive_idempotents: OnceLock<Vec<Elem>>,
}

/// A finite commutative unital ring. Cheap to clone.
#[derive(Clone)]
pub struct FiniteRing(Arc<RingData>);

pub fn make_ring(desc: RingDescriptor, caps: &Caps) -> Result<FiniteRing> {
    match desc {
        RingDescriptor::ZMod(n) => FiniteRing::zmod_capped(n, caps),
        RingDescriptor::Product(r, s) => FiniteRing::product_capped(&r, &s, caps),
        RingDescriptor::Quotient(r, i) => FiniteRing::quotient(&r, &i),
        RingDescriptor::TrivialExtension(r, m) => FiniteRing::trivial_extension_capped(&r, &m, caps),
        RingDescriptor::SubringOfProduct(b, c, gens) => {
            FiniteRing::subring_of_product_capped(&b, &c, &gens, caps)
        }
    }
}

impl FiniteRing {
    fn build(structure: Structure, size: usize, zero: Elem, one: Elem) -> Result<FiniteRing> {
        if size < 2 {
            return Err(Error::ZeroRing);
        }
        if size > u32::MAX as usize {
            return Err(Error::SizeCap {
                size,
                cap: u32::MAX as usize,
            });
        }
        let mut data = RingData {
            structure,
            size,
            zero,
            one,
            tables: None,
            additive_gens: OnceLock::new(),
            primitive_idempotents: OnceLock::new(),
        };
        if size <= TABLE_LIMIT {
            let mut add = Vec::with_capacity(size * size);
            let mut mul = Vec::with_capacity(size * size);
            let mut neg = Vec::with_capacity(size);
            for a in 0..size as Elem {
                neg.push(structural_neg(&data, a) as u8);
                for b in 0..size as Elem {
                    add.push(structural_add(&data, a, b) as u8);
                    mul.push(structural_mul(&data, a, b) as u8);
                }
            }
            data.tables = Some(Tables { add, mul, neg });
        }
        Ok(FiniteRing(Arc::new(data)))
    }

    /// `Z/nZ` with the default size cap.
    pub fn zmod(n: u64) -> Result<FiniteRing> {
        Self::zmod_capped(n, &Caps::default())
    }

    pub fn zmod_capped(n: u64, caps: &Caps) -> Result<FiniteRing> {
        if n < 2 {
            return Err(Error::InvalidDescriptor(format!("Z({n}) needs n >= 2")));
        }
        caps.check_size(n as usize)?;
        Self::build(Structure::ZMod(n), n as usize, 0, 1)
    }

    pub fn product(r: &FiniteRing, s: &FiniteRing) -> Result<FiniteRing> {
        Self::product_capped(r, s, &Caps::default())
    }

    pub fn product_capped(r: &FiniteRing, s: &FiniteRing, caps: &Caps) -> Result<FiniteRing> {
        let size = r.size() * s.size();
        caps.check_size(size)?;
        Self::product_unbounded(r, s)
    }

    /// Product without the size cap; used for ambient rings of subrings, whose
    /// cost does not grow with their cardinality above [`TABLE_LIMIT`].
    pub(crate) fn product_unbounded(r: &FiniteRing, s: &FiniteRing) -> Result<FiniteRing> {
        let size = r.size() * s.size();
        let m = s.size() as Elem;
        let zero = r.zero() * m + s.zero();
        let one = r.one() * m + s.one();
        Self::build(Structure::Product(r.clone(), s.clone()), size, zero, one)
    }

    pub fn quotient(r: &FiniteRing, ideal: &Ideal) -> Result<FiniteRing> {
        if ideal.ring() != r {
            return Err(Error::RingMismatch("quotient by an ideal of another ring".into()));
        }
        if ideal.len() == r.size() {
            return Err(Error::ZeroRing);
        }
        let n = r.size();
        let mut class_of = vec![Elem::MAX; n];
        let mut reps = Vec::with_capacity(n / ideal.len());
        let members: Vec<Elem> = ideal.elements().collect();
        for x in 0..n as Elem {
            if class_of[x as usize] != Elem::MAX {
                continue;
            }
            let c = reps.len() as Elem;
            reps.push(x);
            for &i in &members {
                class_of[r.add(x, i) as usize] = c;
            }
        }
        let zero = class_of[r.zero() as usize];
        let one = class_of[r.one() as usize];
        let size = reps.len();
        Self::build(
            Structure::Quotient {
                base: r.clone(),
                ideal: ideal.clone(),
                class_of,
                reps,
            },
            size,
            zero,
            one,
        )
    }

    pub fn trivial_extension(r: &FiniteRing, m: &Module) -> Result<FiniteRing> {
        Self::trivial_extension_capped(r, m, &Caps::default())
    }

    pub fn trivial_extension_capped(r: &FiniteRing, m: &Module, caps: &Caps) -> Result<FiniteRing> {
        if m.base() != r {
            return Err(Error::RingMismatch("module is over a different ring".into()));
        }
        let size = r.size() * m.size();
        caps.check_size(size)?;
        let k = m.size() as Elem;
        let zero = r.zero() * k + m.zero();
        let one = r.one() * k + m.zero();
        Self::build(Structure::TrivialExtension(r.clone(), m.clone()), size, zero, one)
    }

    pub fn subring_of_product(b: &FiniteRing, c: &FiniteRing, gens: &[(Elem, Elem)]) -> Result<FiniteRing> {
        Self::subring_of_product_capped(b, c, gens, &Caps::default())
    }

    pub fn subring_of_product_capped(
        b: &FiniteRing,
        c: &FiniteRing,
        gens: &[(Elem, Elem)],
        caps: &Caps,
    ) -> Result<FiniteRing> {
        for &(x, y) in gens {
            b.check_elem(x)?;
            c.check_elem(y)?;
        }
        let ambient = Self::product_unbounded(b, c)?;
        let m = c.size() as Elem;
        let gens: Vec<Elem> = gens.iter().map(|&(x, y)| x * m + y).collect();
        Self::subring_generated(&ambient, &gens, caps)
    }

    /// Smallest unital subring of `ambient` containing `gens`.
    pub fn subring_generated(ambient: &FiniteRing, gens: &[Elem], caps: &Caps) -> Result<FiniteRing> {
        let mut inside = FixedBitSet::with_capacity(ambient.size());
        let mut list: Vec<Elem> = Vec::new();
        let push = |x: Elem, inside: &mut FixedBitSet, list: &mut Vec<Elem>| {
            if !inside.put(x as usize) {
                list.push(x);
            }
        };
        push(ambient.zero(), &mut inside, &mut list);
        push(ambient.one(), &mut inside, &mut list);
        for &g in gens {
            ambient.check_elem(g)?;
            push(g, &mut inside, &mut list);
        }
        let mut next = 0;
        while next < list.len() {
            let x = list[next];
            next += 1;
            let mut j = 0;
            while j < next {
                let y = list[j];
                push(ambient.add(x, y), &mut inside, &mut list);
                push(ambient.mul(x, y), &mut inside, &mut list);
                j += 1;
            }
            push(ambient.neg(x), &mut inside, &mut list);
            if list.len() > caps.max_ring_size {
                return Err(Error::SizeCap {
                    size: list.len(),
                    cap: caps.max_ring_size,
                });
            }
        }
        let members: Vec<Elem> = inside.ones().map(|x| x as Elem).collect();
        Self::subring_unchecked(ambient, members)
    }

    /// Subring given by its exact member set; closure is verified.
    pub fn subring_from_members(ambient: &FiniteRing, members: &FixedBitSet) -> Result<FiniteRing> {
        let list: Vec<Elem> = members.ones().map(|x| x as Elem).collect();
        if !members.contains(ambient.zero() as usize) || !members.contains(ambient.one() as usize) {
            return Err(Error::InvalidDescriptor("subring must contain 0 and 1".into()));
        }
        for &x in &list {
            if !members.contains(ambient.neg(x) as usize) {
                return Err(Error::InvalidDescriptor("member set not closed under negation".into()));
            }
            for &y in &list {
                if !members.contains(ambient.add(x, y) as usize) || !members.contains(ambient.mul(x, y) as usize) {
                    return Err(Error::InvalidDescriptor("member set not closed under ring operations".into()));
                }
            }
        }
        Self::subring_unchecked(ambient, list)
    }

    fn subring_unchecked(ambient: &FiniteRing, members: Vec<Elem>) -> Result<FiniteRing> {
        let size = members.len();
        let zero = members.binary_search(&ambient.zero()).expect("zero in subring") as Elem;
        let one = members.binary_search(&ambient.one()).expect("one in subring") as Elem;
        Self::build(
            Structure::Subring {
                ambient: ambient.clone(),
                members,
            },
            size,
            zero,
            one,
        )
    }

    /// A ring given by raw tables, taken on trust. Intended for exercising the
    /// axiom checker with deliberately broken tables.
    pub fn from_raw_tables(add: Vec<Elem>, mul: Vec<Elem>, zero: Elem, one: Elem) -> Result<FiniteRing> {
        let n = (add.len() as f64).sqrt() as usize;
        if n * n != add.len() || mul.len() != add.len() {
            return Err(Error::InvalidDescriptor("tables must be square and equally sized".into()));
        }
        if add.iter().chain(mul.iter()).any(|&x| x as usize >= n) || zero as usize >= n || one as usize >= n {
            return Err(Error::InvalidDescriptor("table entry out of range".into()));
        }
        Self::build(Structure::Table { add, mul }, n, zero, one)
    }

    /// Operation tables of this ring, usable as input to [`FiniteRing::from_raw_tables`].
    pub fn to_raw_tables(&self) -> (Vec<Elem>, Vec<Elem>) {
        let n = self.size() as Elem;
        let mut add = Vec::new();
        let mut mul = Vec::new();
        for a in 0..n {
            for b in 0..n {
                add.push(self.add(a, b));
                mul.push(self.mul(a, b));
            }
        }
        (add, mul)
    }

    pub fn structure(&self) -> &Structure {
        &self.0.structure
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> Elem {
        self.0.zero
    }

    pub fn one(&self) -> Elem {
        self.0.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.size as Elem
    }

    pub fn ptr_eq(&self, other: &FiniteRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn check_elem(&self, x: Elem) -> Result<()> {
        if (x as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::NotAnElement(format!("index {x}")))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.add[a as usize * self.0.size + b as usize] as Elem,
            None => structural_add(&self.0, a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.mul[a as usize * self.0.size + b as usize] as Elem,
            None => structural_mul(&self.0, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.neg[a as usize] as Elem,
            None => structural_neg(&self.0, a),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `k * a` for a natural number `k`.
    pub fn times(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.elements().find(|&y| self.mul(x, y) == self.one())
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.inverse(x).is_some()
    }

    pub fn is_nilpotent(&self, x: Elem) -> bool {
        // the nilpotency index never exceeds the ring size
        self.pow(x, self.size() as u64) == self.zero()
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    /// A minimal generating set of the additive group, chosen greedily in
    /// canonical order.
    pub fn additive_generators(&self) -> &[Elem] {
        self.0.additive_gens.get_or_init(|| {
            let mut span = FixedBitSet::with_capacity(self.size());
            let mut list = Vec::new();
            span.insert(self.zero() as usize);
            list.push(self.zero());
            let mut gens = Vec::new();
            for x in self.elements() {
                if !span.contains(x as usize) {
                    self.extend_span(&mut span, &mut list, x);
                    gens.push(x);
                }
            }
            gens
        })
    }

    /// Grow the additive subgroup `(span, list)` to the subgroup generated by it and `x`.
    pub(crate) fn extend_span(&self, span: &mut FixedBitSet, list: &mut Vec<Elem>, x: Elem) {
        if span.contains(x as usize) {
            return;
        }
        let base_len = list.len();
        let mut coset = x;
        while !span.contains(coset as usize) {
            for i in 0..base_len {
                let y = self.add(coset, list[i]);
                span.insert(y as usize);
                list.push(y);
            }
            coset = self.add(coset, x);
        }
    }

    /// Additive subgroup generated by `gens`.
    pub fn additive_span(&self, gens: impl IntoIterator<Item = Elem>) -> FixedBitSet {
        let mut span = FixedBitSet::with_capacity(self.size());
        let mut list = vec![self.zero()];
        span.insert(self.zero() as usize);
        for g in gens {
            self.extend_span(&mut span, &mut list, g);
        }
        span
    }

    /// Primitive idempotents, i.e. the identities of the local factors in the
    /// decomposition of the ring as a product of local rings.
    pub fn primitive_idempotents(&self) -> &[Elem] {
        self.0.primitive_idempotents.get_or_init(|| {
            let idem: Vec<Elem> = self
                .elements()
                .filter(|&x| x != self.zero() && self.is_idempotent(x))
                .collect();
            idem.iter()
                .copied()
                .filter(|&e| idem.iter().all(|&f| f == e || self.mul(f, e) != f))
                .collect()
        })
    }

    pub fn is_local(&self) -> bool {
        self.primitive_idempotents().len() == 1
    }

    pub fn encode(&self, x: Elem) -> Value {
        match &self.0.structure {
            Structure::ZMod(_) | Structure::Table { .. } => Value::Int(x as i64),
            Structure::Product(r, s) => {
                let m = s.size() as Elem;
                Value::pair(r.encode(x / m), s.encode(x % m))
            }
            Structure::Quotient { base, reps, .. } => base.encode(reps[x as usize]),
            Structure::TrivialExtension(r, module) => {
                let m = module.size() as Elem;
                Value::pair(r.encode(x / m), module.encode(x % m))
            }
            Structure::Subring { ambient, members } => ambient.encode(members[x as usize]),
        }
    }

    pub fn decode(&self, v: &Value) -> Result<Elem> {
        let bad = || Error::NotAnElement(v.to_string());
        match (&self.0.structure, v) {
            (Structure::ZMod(n), Value::Int(k)) => Ok(k.rem_euclid(*n as i64) as Elem),
            (Structure::Table { .. }, Value::Int(k)) => {
                let x = Elem::try_from(*k).map_err(|_| bad())?;
                self.check_elem(x).map(|_| x)
            }
            (Structure::Product(r, s), Value::Tuple(items)) if items.len() == 2 => {
                Ok(r.decode(&items[0])? * s.size() as Elem + s.decode(&items[1])?)
            }
            (Structure::TrivialExtension(r, m), Value::Tuple(items)) if items.len() == 2 => {
                Ok(r.decode(&items[0])? * m.size() as Elem + m.decode(&items[1])?)
            }
            (Structure::Quotient { base, class_of, .. }, _) => Ok(class_of[base.decode(v)? as usize]),
            (Structure::Subring { ambient, members }, _) => {
                let x = ambient.decode(v)?;
                members.binary_search(&x).map(|i| i as Elem).map_err(|_| bad())
            }
            _ => Err(bad()),
        }
    }

    /// Short human description.
    pub fn describe(&self) -> String {
        match &self.0.structure {
            Structure::ZMod(n) => format!("Z({n})"),
            Structure::Product(r, s) => format!("product({},{})", r.describe(), s.describe()),
            Structure::Quotient { base, ideal, .. } => {
                format!("quotient({},<{} elements>)", base.describe(), ideal.len())
            }
            Structure::TrivialExtension(r, m) => format!("trivext({},{})", r.describe(), m.describe()),
            Structure::Subring { ambient, members } => {
                format!("subring({},<{} elements>)", ambient.describe(), members.len())
            }
            Structure::Table { .. } => format!("table({})", self.size()),
        }
    }

    /// Complete structural description, stable across runs; the input of fingerprints.
    pub fn canonical_form(&self) -> String {
        match &self.0.structure {
            Structure::ZMod(n) => format!("Z({n})"),
            Structure::Product(r, s) => format!("product({},{})", r.canonical_form(), s.canonical_form()),
            Structure::Quotient { base, ideal, .. } => {
                format!("quotient({},{})", base.canonical_form(), ideal.canonical_form())
            }
            Structure::TrivialExtension(r, m) => {
                format!("trivext({},{})", r.canonical_form(), m.canonical_form())
            }
            Structure::Subring { ambient, members } => {
                let list: Vec<String> = members.iter().map(|&x| ambient.encode(x).to_string()).collect();
                format!("subring({},{{{}}})", ambient.canonical_form(), list.join(","))
            }
            Structure::Table { add, mul } => format!("table({add:?},{mul:?})"),
        }
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.size() != other.size() {
            return false;
        }
        match (self.structure(), other.structure()) {
            (Structure::ZMod(a), Structure::ZMod(b)) => a == b,
            (Structure::Product(a1, a2), Structure::Product(b1, b2)) => a1 == b1 && a2 == b2,
            (Structure::Quotient { ideal: i, .. }, Structure::Quotient { ideal: j, .. }) => i == j,
            (Structure::TrivialExtension(r, m), Structure::TrivialExtension(s, n)) => r == s && m == n,
            (
                Structure::Subring { ambient: a, members: m },
                Structure::Subring { ambient: b, members: n },
            ) => m == n && a == b,
            (Structure::Table { add: a1, mul: m1 }, Structure::Table { add: a2, mul: m2 }) => {
                a1 == a2 && m1 == m2 && self.zero() == other.zero() && self.one() == other.one()
            }
            _ => false,
        }
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn structural_add(d: &RingData, a: Elem, b: Elem) -> Elem {
    match &d.structure {
        Structure::ZMod(n) => ((a as u64 + b as u64) % n) as Elem,
        Structure::Product(r, s) => {
            let m = s.size() as Elem;
            r.add(a / m, b / m) * m + s.add(a % m, b % m)
        }
        Structure::Quotient { base, class_of, reps, .. } => {
            class_of[base.add(reps[a as usize], reps[b as usize]) as usize]
        }
        Structure::TrivialExtension(r, module) => {
            let m = module.size() as Elem;
            r.add(a / m, b / m) * m + module.add(a % m, b % m)
        }
        Structure::Subring { ambient, members } => {
            let x = ambient.add(members[a as usize], members[b as usize]);
            members.binary_search(&x).expect("subring closed under addition") as Elem
        }
        Structure::Table { add, .. } => add[a as usize * d.size + b as usize],
    }
}

fn structural_mul(d: &RingData, a: Elem, b: Elem) -> Elem {
    match &d.structure {
        Structure::ZMod(n) => ((a as u64 * b as u64) % n) as Elem,
        Structure::Product(r, s) => {
            let m = s.size() as Elem;
            r.mul(a / m, b / m) * m + s.mul(a % m, b % m)
        }
        Structure::Quotient { base, class_of, reps, .. } => {
            class_of[base.mul(reps[a as usize], reps[b as usize]) as usize]
        }
        Structure::TrivialExtension(r, module) => {
            // (x,u)(y,v) = (xy, xv + yu)
            let m = module.size() as Elem;
            let (x, u) = (a / m, a % m);
            let (y, v) = (b / m, b % m);
            r.mul(x, y) * m + module.add(module.act(x, v), module.act(y, u))
        }
        Structure::Subring { ambient, members } => {
            let x = ambient.mul(members[a as usize], members[b as usize]);
            members.binary_search(&x).expect("subring closed under multiplication") as Elem
        }
        Structure::Table { mul, .. } => mul[a as usize * d.size + b as usize],
    }
}

fn structural_neg(d: &RingData, a: Elem) -> Elem {
    match &d.structure {
        Structure::ZMod(n) => ((*n - a as u64) % n) as Elem,
        Structure::Product(r, s) => {
            let m = s.size() as Elem;
            r.neg(a / m) * m + s.neg(a % m)
        }
        Structure::Quotient { base, class_of, reps, .. } => class_of[base.neg(reps[a as usize]) as usize],
        Structure::TrivialExtension(r, module) => {
            let m = module.size() as Elem;
            r.neg(a / m) * m + module.neg(a % m)
        }
        Structure::Subring { ambient, members } => {
            let x = ambient.neg(members[a as usize]);
            members.binary_search(&x).expect("subring closed under negation") as Elem
        }
        Structure::Table { add, .. } => {
            let n = d.size as Elem;
            (0..n).find(|&y| add[a as usize * d.size + y as usize] == d.zero).unwrap_or(d.zero)
        }
    }
}

/// A violated ring law together with the offending elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub law: &'static str,
    pub witness: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub size: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustively check the commutative unital ring axioms.
pub fn ring_axioms_check(r: &FiniteRing) -> AxiomReport {
    AxiomReport {
        size: r.size(),
        violation: first_violation(r),
    }
}

fn first_violation(r: &FiniteRing) -> Option<AxiomViolation> {
    let fail = |law, witness: &[Elem]| {
        Some(AxiomViolation {
            law,
            witness: witness.to_vec(),
        })
    };
    let (z, o) = (r.zero(), r.one());
    if z == o {
        return fail("one differs from zero", &[z]);
    }
    for a in r.elements() {
        if r.add(z, a) != a {
            return fail("additive identity", &[a]);
        }
        if r.add(a, r.neg(a)) != z {
            return fail("additive inverse", &[a]);
        }
        if r.mul(o, a) != a {
            return fail("multiplicative identity", &[a]);
        }
    }
    for a in r.elements() {
        for b in a + 1..r.size() as Elem {
            if r.add(a, b) != r.add(b, a) {
                return fail("additive commutativity", &[a, b]);
            }
            if r.mul(a, b) != r.mul(b, a) {
                return fail("multiplicative commutativity", &[a, b]);
            }
        }
    }
    for a in r.elements() {
        for b in r.elements() {
            let ab_sum = r.add(a, b);
            let ab_prod = r.mul(a, b);
            for c in r.elements() {
                if r.add(ab_sum, c) != r.add(a, r.add(b, c)) {
                    return fail("additive associativity", &[a, b, c]);
                }
                if r.mul(ab_prod, c) != r.mul(a, r.mul(b, c)) {
                    return fail("multiplicative associativity", &[a, b, c]);
                }
                if r.mul(a, r.add(b, c)) != r.add(ab_prod, r.mul(a, c)) {
                    return fail("distributivity", &[a, b, c]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = FiniteRing::zmod(12).unwrap();
        assert_eq!(r.size(), 12);
        assert_eq!(r.add(7, 8), 3);
        assert_eq!(r.mul(5, 5), 1);
        assert_eq!(r.neg(5), 7);
        assert!(FiniteRing::zmod(1).is_err());
        assert!(FiniteRing::zmod(0).is_err());
    }

    #[test]
    fn units() {
        let z12 = FiniteRing::zmod(12).unwrap();
        assert!(z12.is_unit(5));
        assert!(!z12.is_unit(4));
        let z8 = FiniteRing::zmod(8).unwrap();
        assert!(z8.is_unit(3));
        assert_eq!(z8.inverse(3), Some(3));
    }

    #[test]
    fn product_is_componentwise() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let z3 = FiniteRing::zmod(3).unwrap();
        let p = FiniteRing::product(&z4, &z3).unwrap();
        assert_eq!(p.size(), 12);
        let x = p.decode(&Value::pair(Value::Int(3), Value::Int(2))).unwrap();
        let y = p.decode(&Value::pair(Value::Int(2), Value::Int(2))).unwrap();
        assert_eq!(p.encode(p.mul(x, y)).to_string(), "(2,1)");
        assert_eq!(p.encode(p.add(x, y)).to_string(), "(1,1)");
        assert!(ring_axioms_check(&p).passed());
    }

    #[test]
    fn size_cap() {
        let caps = Caps {
            max_ring_size: 10,
            max_ideal_enum: 10,
        };
        assert_eq!(
            FiniteRing::zmod_capped(12, &caps).unwrap_err(),
            Error::SizeCap { size: 12, cap: 10 }
        );
        let big = FiniteRing::zmod(100).unwrap();
        assert!(FiniteRing::product(&big, &big).is_err());
    }

    #[test]
    fn axioms_pass_on_small_rings() {
        for n in [2, 6, 12] {
            assert!(ring_axioms_check(&FiniteRing::zmod(n).unwrap()).passed());
        }
        let z2 = FiniteRing::zmod(2).unwrap();
        let z3 = FiniteRing::zmod(3).unwrap();
        assert!(ring_axioms_check(&FiniteRing::product(&z2, &z3).unwrap()).passed());
    }

    #[test]
    fn corrupted_table_is_caught() {
        let z6 = FiniteRing::zmod(6).unwrap();
        let (add, mut mul) = z6.to_raw_tables();
        mul[2 * 6 + 3] = 1;
        let broken = FiniteRing::from_raw_tables(add, mul, 0, 1).unwrap();
        let report = ring_axioms_check(&broken);
        let v = report.violation.unwrap();
        assert_eq!(v.witness, vec![2, 3]);
    }

    #[test]
    fn subring_generated_from_diagonal() {
        let z6 = FiniteRing::zmod(6).unwrap();
        let s = FiniteRing::subring_of_product(&z6, &z6, &[]).unwrap();
        // only the diagonal copy of Z/6
        assert_eq!(s.size(), 6);
        let t = FiniteRing::subring_of_product(&z6, &z6, &[(1, 0)]).unwrap();
        assert_eq!(t.size(), 36);
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let z2 = FiniteRing::zmod(2).unwrap();
        let z3 = FiniteRing::zmod(3).unwrap();
        let a = FiniteRing::product(&z2, &z3).unwrap();
        let b = FiniteRing::product(&z2, &z3).unwrap();
        assert_eq!(a, b);
        let ea: Vec<_> = a.elements().map(|x| a.encode(x)).collect();
        let eb: Vec<_> = b.elements().map(|x| b.encode(x)).collect();
        assert_eq!(ea, eb);
        assert_eq!(a.zero(), 0);
    }

    #[test]
    fn primitive_idempotents_of_z12() {
        let r = FiniteRing::zmod(12).unwrap();
        assert_eq!(r.primitive_idempotents(), &[4, 9]);
        assert!(FiniteRing::zmod(8).unwrap().is_local());
    }
}
