//! Seeded instance families, greedy shrinking and counterexample search.
//!
//! Every family builds its datum so that `f^{-1}(J) = g^{-1}(J')` holds by
//! construction. Instances are described by small integer parameters
//! ([`InstanceSpec`]) which is what the shrinker edits.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biamalg::{amalgamation_datum, duplication, duplication_datum, validate_datum, BiAmalgDatum};
use crate::error::{Error, Result};
use crate::harness::{verify, HarnessOptions, Shape, TheoremId, TheoremVerdict};
use crate::hom::{make_hom, HomSpec, RingHom};
use crate::ideal::Ideal;
use crate::module::Module;
use crate::ring::{Caps, FiniteRing, Value};

/// `Z(n_1) x ... x Z(n_k)`, with one or two factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Base(pub Vec<u64>);

/// The ideal `(k_1) x ... x (k_r)` of a [`Base`], each `k_i` dividing `n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealGen(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModulePart {
    /// `A / I`
    Quotient(IdealGen),
    /// `I` as a module
    Ideal(IdealGen),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InstanceSpec {
    /// `A ⋈ I`
    Duplication { base: Base, ideal: IdealGen },
    /// `Z(n) ⋈^f J` along `Z(n) -> Z(m)`, `J = (j)`
    Amalgamation { n: u64, m: u64, j: u64 },
    /// `A = Z(n)`, `I = (i)`, `B = A ⋈ I`, `C = A x Z(d)`, `f` diagonal,
    /// `g` the graph of `A -> Z(d)`, `J = I x I`, `J' = I x Z(d)`
    ProductGraph { n: u64, i: u64, d: u64 },
    /// `f = id_A`, `J = 0`, `g : A -> A ⋉ M`, `J' = 0 ⋉ M`
    TrivialExtension { base: Base, module: Vec<ModulePart> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Duplication,
    Amalgamation,
    ProductGraph,
    TrivialExtension,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Duplication,
        Family::Amalgamation,
        Family::ProductGraph,
        Family::TrivialExtension,
    ];
}

impl InstanceSpec {
    pub fn family(&self) -> Family {
        match self {
            InstanceSpec::Duplication { .. } => Family::Duplication,
            InstanceSpec::Amalgamation { .. } => Family::Amalgamation,
            InstanceSpec::ProductGraph { .. } => Family::ProductGraph,
            InstanceSpec::TrivialExtension { .. } => Family::TrivialExtension,
        }
    }

    /// `(|B|, |C|, |R|)` computed from the parameters alone.
    pub fn sizes(&self) -> (u64, u64, u64) {
        match self {
            InstanceSpec::Duplication { base, ideal } => {
                let a = base.size();
                (a, a, a * ideal_size(base, ideal))
            }
            InstanceSpec::Amalgamation { n, m, j } => (*n, *m, n * (m / j)),
            InstanceSpec::ProductGraph { n, i, d } => {
                let isz = n / i;
                (n * isz, n * d, n * isz * isz * d)
            }
            InstanceSpec::TrivialExtension { base, module } => {
                let a = base.size();
                let msz: u64 = module.iter().map(|p| p.size(base)).product();
                (a, a * msz, a * msz)
            }
        }
    }

    fn weight(&self) -> u64 {
        let (b, c, r) = self.sizes();
        b + c + r
    }

    pub fn build(&self) -> Result<BiAmalgDatum> {
        match self {
            InstanceSpec::Duplication { base, ideal } => {
                let a = base.ring()?;
                duplication_datum(&a, &base.ideal(&a, ideal)?)
            }
            InstanceSpec::Amalgamation { n, m, j } => {
                let a = FiniteRing::zmod(*n)?;
                let b = FiniteRing::zmod(*m)?;
                let f = make_hom(&a, &b, HomSpec::Projection)?;
                amalgamation_datum(&f, &Ideal::generated(&b, &[(*j % *m) as u32]))
            }
            InstanceSpec::ProductGraph { n, i, d } => product_graph(*n, *i, *d),
            InstanceSpec::TrivialExtension { base, module } => {
                let a = base.ring()?;
                let mut parts = module.iter().map(|p| p.build(base, &a));
                let first = parts.next().ok_or_else(|| Error::InvalidDescriptor("empty module".into()))??;
                let m = parts.try_fold(first, |acc, p| Module::direct_sum(&acc, &p?))?;
                let t = FiniteRing::trivial_extension(&a, &m)?;
                let g = make_hom(&a, &t, HomSpec::Inclusion)?;
                let gens: Vec<u32> = (0..m.size() as u32)
                    .map(|x| t.decode(&Value::pair(a.encode(a.zero()), m.encode(x))))
                    .collect::<Result<_>>()?;
                let j2 = Ideal::generated(&t, &gens);
                validate_datum(&RingHom::identity(&a), &g, &Ideal::zero(&a), &j2)
            }
        }
    }

    /// Shrinking candidates, each strictly smaller and still well formed.
    pub fn shrink_candidates(&self) -> Vec<InstanceSpec> {
        let mut out = Vec::new();
        match self {
            InstanceSpec::Duplication { base, ideal } => {
                for (b, i) in base.shrinks_with(ideal) {
                    if i.is_proper(&b) {
                        out.push(InstanceSpec::Duplication { base: b, ideal: i });
                    }
                }
                for i in ideal.subideals(base) {
                    out.push(InstanceSpec::Duplication {
                        base: base.clone(),
                        ideal: i,
                    });
                }
            }
            &InstanceSpec::Amalgamation { n, m, j } => {
                for n2 in proper_divisors(n).into_iter().filter(|&x| x % m == 0) {
                    out.push(InstanceSpec::Amalgamation { n: n2, m, j });
                }
                for m2 in proper_divisors(m) {
                    let j2 = gcd(j, m2);
                    if j2 != 1 {
                        out.push(InstanceSpec::Amalgamation { n, m: m2, j: j2 });
                    }
                }
                for j2 in multiples_dividing(j, m) {
                    out.push(InstanceSpec::Amalgamation { n, m, j: j2 });
                }
            }
            &InstanceSpec::ProductGraph { n, i, d } => {
                for n2 in proper_divisors(n).into_iter().filter(|&x| x % d == 0) {
                    let i2 = gcd(i, n2);
                    if i2 != 1 {
                        out.push(InstanceSpec::ProductGraph { n: n2, i: i2, d });
                    }
                }
                for d2 in proper_divisors(d) {
                    out.push(InstanceSpec::ProductGraph { n, i, d: d2 });
                }
                for i2 in multiples_dividing(i, n) {
                    out.push(InstanceSpec::ProductGraph { n, i: i2, d });
                }
            }
            InstanceSpec::TrivialExtension { base, module } => {
                if module.len() > 1 {
                    for k in 0..module.len() {
                        let mut m = module.clone();
                        m.remove(k);
                        out.push(InstanceSpec::TrivialExtension {
                            base: base.clone(),
                            module: m,
                        });
                    }
                }
                for (b, restrict) in base.shrinks() {
                    let m: Option<Vec<ModulePart>> = module.iter().map(|p| p.restrict(&b, &restrict)).collect();
                    if let Some(m) = m {
                        out.push(InstanceSpec::TrivialExtension { base: b, module: m });
                    }
                }
                for (k, part) in module.iter().enumerate() {
                    for smaller in part.shrinks(base) {
                        let mut m = module.clone();
                        m[k] = smaller;
                        out.push(InstanceSpec::TrivialExtension {
                            base: base.clone(),
                            module: m,
                        });
                    }
                }
            }
        }
        let w = self.weight();
        out.retain(|c| c.weight() < w);
        out
    }
}

fn product_graph(n: u64, i: u64, d: u64) -> Result<BiAmalgDatum> {
    let a = FiniteRing::zmod(n)?;
    let ideal = Ideal::generated(&a, &[(i % n) as u32]);
    let b = duplication(&a, &ideal, &Caps::default())?.ring;
    let f = make_hom(&a, &b, HomSpec::Inclusion)?;
    let zd = FiniteRing::zmod(d)?;
    let c = FiniteRing::product(&a, &zd)?;
    let g = make_hom(&a, &c, HomSpec::Graph(make_hom(&a, &zd, HomSpec::Projection)?))?;
    let pair = |r: &FiniteRing, x: i64, y: i64| r.decode(&Value::pair(Value::Int(x), Value::Int(y)));
    let ig = (i % n) as i64;
    let j = Ideal::generated(&b, &[pair(&b, ig, 0)?, pair(&b, 0, ig)?]);
    let j2 = Ideal::generated(&c, &[pair(&c, ig, 0)?, pair(&c, 0, 1)?]);
    validate_datum(&f, &g, &j, &j2)
}

impl Base {
    pub fn size(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn ring(&self) -> Result<FiniteRing> {
        let mut factors = self.0.iter().map(|&n| FiniteRing::zmod(n));
        let first = factors.next().ok_or_else(|| Error::InvalidDescriptor("empty base".into()))??;
        factors.try_fold(first, |acc, f| FiniteRing::product(&acc, &f?))
    }

    fn element(&self, a: &FiniteRing, coords: &[u64]) -> Result<u32> {
        match coords {
            [x] => a.decode(&Value::Int(*x as i64)),
            [x, y] => a.decode(&Value::pair(Value::Int(*x as i64), Value::Int(*y as i64))),
            _ => Err(Error::InvalidDescriptor("bases have one or two factors".into())),
        }
    }

    pub fn ideal(&self, a: &FiniteRing, gen: &IdealGen) -> Result<Ideal> {
        let mut gens = Vec::new();
        for (k, &g) in gen.0.iter().enumerate() {
            let mut coords = vec![0; self.0.len()];
            coords[k] = g;
            gens.push(self.element(a, &coords)?);
        }
        Ok(Ideal::generated(a, &gens))
    }

    /// Smaller bases, each with the factor indices it keeps and the new moduli.
    fn shrinks(&self) -> Vec<(Base, Vec<Option<usize>>)> {
        let mut out = Vec::new();
        if self.0.len() == 2 {
            out.push((Base(vec![self.0[0]]), vec![Some(0)]));
            out.push((Base(vec![self.0[1]]), vec![Some(1)]));
        }
        for (k, &n) in self.0.iter().enumerate() {
            for n2 in proper_divisors(n) {
                let mut b = self.clone();
                b.0[k] = n2;
                out.push((b, (0..self.0.len()).map(Some).collect()));
            }
        }
        out
    }

    fn shrinks_with(&self, ideal: &IdealGen) -> Vec<(Base, IdealGen)> {
        self.shrinks()
            .into_iter()
            .map(|(b, keep)| {
                let i = ideal.restrict(&b, &keep);
                (b, i)
            })
            .collect()
    }
}

impl IdealGen {
    fn restrict(&self, base: &Base, keep: &[Option<usize>]) -> IdealGen {
        IdealGen(
            keep.iter()
                .zip(&base.0)
                .map(|(k, &n)| gcd(self.0[k.expect("kept factor")], n))
                .collect(),
        )
    }

    pub fn is_proper(&self, base: &Base) -> bool {
        self.0.iter().zip(&base.0).any(|(&k, &n)| gcd(k, n) != 1)
    }

    pub fn is_zero(&self, base: &Base) -> bool {
        self.0.iter().zip(&base.0).all(|(&k, &n)| k % n == 0)
    }

    /// Strictly smaller ideals: one generator replaced by a proper multiple.
    fn subideals(&self, base: &Base) -> Vec<IdealGen> {
        let mut out = Vec::new();
        for (k, &n) in base.0.iter().enumerate() {
            for m in multiples_dividing(self.0[k], n) {
                let mut i = self.clone();
                i.0[k] = m;
                out.push(i);
            }
        }
        out
    }

    /// Strictly larger proper ideals.
    fn superideals(&self, base: &Base) -> Vec<IdealGen> {
        let mut out = Vec::new();
        for (k, _) in base.0.iter().enumerate() {
            for m in proper_divisors(self.0[k]) {
                let mut i = self.clone();
                i.0[k] = m;
                if i.is_proper(base) {
                    out.push(i);
                }
            }
        }
        out
    }
}

fn ideal_size(base: &Base, i: &IdealGen) -> u64 {
    base.0.iter().zip(&i.0).map(|(&n, &k)| n / gcd(k, n)).product()
}

impl ModulePart {
    pub fn size(&self, base: &Base) -> u64 {
        match self {
            ModulePart::Quotient(i) => base.size() / ideal_size(base, i),
            ModulePart::Ideal(i) => ideal_size(base, i),
        }
    }

    fn build(&self, base: &Base, a: &FiniteRing) -> Result<Module> {
        match self {
            ModulePart::Quotient(i) => Module::quotient(&base.ideal(a, i)?),
            ModulePart::Ideal(i) => Ok(Module::from_ideal(&base.ideal(a, i)?)),
        }
    }

    fn restrict(&self, base: &Base, keep: &[Option<usize>]) -> Option<ModulePart> {
        let part = match self {
            ModulePart::Quotient(i) => ModulePart::Quotient(i.restrict(base, keep)),
            ModulePart::Ideal(i) => ModulePart::Ideal(i.restrict(base, keep)),
        };
        (part.size(base) > 1).then_some(part)
    }

    fn shrinks(&self, base: &Base) -> Vec<ModulePart> {
        match self {
            ModulePart::Quotient(i) => i.superideals(base).into_iter().map(ModulePart::Quotient).collect(),
            ModulePart::Ideal(i) => i
                .subideals(base)
                .into_iter()
                .filter(|s| !s.is_zero(base))
                .map(ModulePart::Ideal)
                .collect(),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [n] => write!(f, "Z({n})"),
            [n, m] => write!(f, "product(Z({n}),Z({m}))"),
            _ => write!(f, "?"),
        }
    }
}

impl fmt::Display for IdealGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::Duplication { base, ideal } => write!(f, "dup({base}, {ideal})"),
            InstanceSpec::Amalgamation { n, m, j } => write!(f, "amalg(Z({n})->Z({m}), ({j}))"),
            InstanceSpec::ProductGraph { n, i, d } => write!(f, "product-graph(Z({n}), ({i}), Z({d}))"),
            InstanceSpec::TrivialExtension { base, module } => {
                let parts: Vec<String> = module
                    .iter()
                    .map(|p| match p {
                        ModulePart::Quotient(i) => format!("quot{i}"),
                        ModulePart::Ideal(i) => format!("ideal{i}"),
                    })
                    .collect();
                write!(f, "trivext({base}, {})", parts.join("+"))
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

/// Divisors `d` of `n` with `2 <= d < n`.
fn proper_divisors(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&d| d >= 2 && d < n).collect()
}

/// Proper multiples of `k` that divide `n`; `n` itself stands for zero.
fn multiples_dividing(k: u64, n: u64) -> Vec<u64> {
    let k = gcd(k, n);
    divisors(n).into_iter().filter(|&d| d != k && d % k == 0).collect()
}

/// Generator settings. Size bounds apply to the ambient rings `B`, `C` and
/// to the bi-amalgamation `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceGenConfig {
    pub seed: u64,
    pub count: usize,
    pub max_component: u64,
    pub max_ring: u64,
    /// duplication, amalgamation, product-graph, trivial-extension
    pub weights: [u32; 4],
}

impl Default for InstanceGenConfig {
    fn default() -> Self {
        InstanceGenConfig {
            seed: 0,
            count: 200,
            max_component: 64,
            max_ring: 512,
            weights: [1, 1, 1, 1],
        }
    }
}

impl InstanceGenConfig {
    /// Weights restricted to the families whose data a theorem accepts.
    pub fn for_theorem(mut self, theorem: TheoremId) -> Self {
        match theorem.shape() {
            Shape::General => {}
            Shape::Amalgamation => self.weights[2] = 0,
            Shape::Duplication => self.weights = [self.weights[0].max(1), 0, 0, 0],
        }
        self
    }

    fn fits(&self, spec: &InstanceSpec) -> bool {
        let (b, c, r) = spec.sizes();
        b <= self.max_component && c <= self.max_component && r <= self.max_ring
    }
}

/// A generated datum with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub datum: BiAmalgDatum,
    pub seed: u64,
}

fn random_base(rng: &mut ChaCha8Rng, max: u64) -> Base {
    if max >= 4 && rng.random_bool(0.3) {
        let n1 = rng.random_range(2..=(max / 2).min(8));
        let n2 = rng.random_range(2..=(max / n1).clamp(2, 8));
        Base(vec![n1, n2])
    } else {
        Base(vec![rng.random_range(2..=max.min(32))])
    }
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())].clone()
}

fn random_ideal(rng: &mut ChaCha8Rng, base: &Base) -> IdealGen {
    IdealGen(base.0.iter().map(|&n| pick(rng, &divisors(n))).collect())
}

fn random_spec(rng: &mut ChaCha8Rng, family: Family, cfg: &InstanceGenConfig) -> InstanceSpec {
    match family {
        Family::Duplication => {
            let base = random_base(rng, cfg.max_component.min(32));
            let mut ideal = random_ideal(rng, &base);
            while !ideal.is_proper(&base) {
                ideal = random_ideal(rng, &base);
            }
            InstanceSpec::Duplication { base, ideal }
        }
        Family::Amalgamation => {
            let n = rng.random_range(2..=cfg.max_component.min(32));
            let m = pick(rng, &divisors(n)[1..]);
            let j = pick(rng, &divisors(m)[1..]);
            InstanceSpec::Amalgamation { n, m, j }
        }
        Family::ProductGraph => {
            let n = rng.random_range(2..=16);
            let i = pick(rng, &divisors(n)[1..]);
            let d = pick(rng, &divisors(n)[1..]);
            InstanceSpec::ProductGraph { n, i, d }
        }
        Family::TrivialExtension => {
            let base = random_base(rng, 16);
            let parts = if rng.random_bool(0.25) { 2 } else { 1 };
            let mut module = Vec::new();
            while module.len() < parts {
                let i = random_ideal(rng, &base);
                let part = if rng.random_bool(0.5) {
                    ModulePart::Quotient(i)
                } else {
                    ModulePart::Ideal(i)
                };
                if part.size(&base) > 1 {
                    module.push(part);
                }
            }
            InstanceSpec::TrivialExtension { base, module }
        }
    }
}

/// One instance from its own seed.
pub fn generate_one(cfg: &InstanceGenConfig, seed: u64) -> Result<Instance> {
    let total: u32 = cfg.weights.iter().sum();
    if total == 0 {
        return Err(Error::InvalidDescriptor("all family weights are zero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut roll = rng.random_range(0..total);
        let mut family = Family::Duplication;
        for (f, &w) in Family::ALL.iter().zip(&cfg.weights) {
            if roll < w {
                family = *f;
                break;
            }
            roll -= w;
        }
        let spec = random_spec(&mut rng, family, cfg);
        if cfg.fits(&spec) {
            let datum = spec.build()?;
            return Ok(Instance { spec, datum, seed });
        }
    }
}

/// `cfg.count` instances; instance `k` is drawn from seed `cfg.seed + k`, so
/// each one can be reproduced on its own.
pub fn generate_instances(cfg: &InstanceGenConfig) -> impl Iterator<Item = Result<Instance>> + '_ {
    (0..cfg.count as u64).map(move |k| generate_one(cfg, cfg.seed.wrapping_add(k)))
}

/// A disagreement and its shrunk form.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub original: Instance,
    pub verdict: TheoremVerdict,
    pub shrunk: InstanceSpec,
    pub shrunk_verdict: TheoremVerdict,
    /// instances examined before the hit
    pub examined: usize,
}

fn disagreement(theorem: TheoremId, spec: &InstanceSpec, opts: &HarnessOptions) -> Option<TheoremVerdict> {
    let datum = spec.build().ok()?;
    verify(theorem, &datum, opts).ok().filter(|v| !v.agree)
}

/// Greedy shrink: take the first smaller candidate that still disagrees,
/// until none does.
pub fn shrink(
    theorem: TheoremId,
    spec: &InstanceSpec,
    verdict: &TheoremVerdict,
    opts: &HarnessOptions,
) -> (InstanceSpec, TheoremVerdict) {
    let mut current = (spec.clone(), verdict.clone());
    'outer: loop {
        for cand in current.0.shrink_candidates() {
            if let Some(v) = disagreement(theorem, &cand, opts) {
                current = (cand, v);
                continue 'outer;
            }
        }
        return current;
    }
}

/// Verdicts in generation order, up to and including the first disagreement.
#[derive(Clone, Debug)]
pub struct FuzzOutcome {
    pub verdicts: Vec<TheoremVerdict>,
    pub counterexample: Option<Counterexample>,
}

pub fn fuzz(theorem: TheoremId, cfg: &InstanceGenConfig, opts: &HarnessOptions) -> Result<FuzzOutcome> {
    let cfg = cfg.clone().for_theorem(theorem);
    let mut verdicts = Vec::new();
    for inst in generate_instances(&cfg) {
        let inst = inst?;
        let mut v = verify(theorem, &inst.datum, opts)?;
        v.seed = Some(inst.seed);
        verdicts.push(v.clone());
        if !v.agree {
            let (shrunk, mut sv) = shrink(theorem, &inst.spec, &v, opts);
            sv.seed = Some(inst.seed);
            let examined = verdicts.len();
            return Ok(FuzzOutcome {
                verdicts,
                counterexample: Some(Counterexample {
                    original: inst,
                    verdict: v,
                    shrunk,
                    shrunk_verdict: sv,
                    examined,
                }),
            });
        }
    }
    Ok(FuzzOutcome {
        verdicts,
        counterexample: None,
    })
}

/// The first disagreement within `cfg.count` instances, shrunk.
pub fn search_counterexample(
    theorem: TheoremId,
    cfg: &InstanceGenConfig,
    opts: &HarnessOptions,
) -> Result<Option<Counterexample>> {
    Ok(fuzz(theorem, cfg, opts)?.counterexample)
}
