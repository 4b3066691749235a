//! Independent oracles. Nothing here calls the lattice, spectrum,
//! localization or property code of the library; rings are only read
//! through `add`, `mul`, `zero`, `one` and `elements`.
#![allow(dead_code)]

use biamalg_core::biamalg::duplication;
use biamalg_core::ideal::Ideal;
use biamalg_core::localization::Localization;
use biamalg_core::module::Module;
use biamalg_core::ring::{Caps, Elem, FiniteRing};

/// Ideals as bitmasks over the elements; only for rings of at most 64 elements.
pub type Mask = u64;

pub fn mask_of(i: &Ideal) -> Mask {
    i.elements().fold(0, |m, x| m | (1 << x))
}

fn bits(m: Mask) -> impl Iterator<Item = Elem> {
    (0..64).filter(move |&x| m >> x & 1 == 1)
}

fn full(r: &FiniteRing) -> Mask {
    if r.size() == 64 {
        u64::MAX
    } else {
        (1 << r.size()) - 1
    }
}

fn closed_under_ring(r: &FiniteRing, m: Mask) -> bool {
    bits(m).all(|x| {
        r.elements()
            .all(|a| m >> r.mul(a, x) & 1 == 1)
            && bits(m).all(|y| m >> r.add(x, y) & 1 == 1)
    })
}

/// Every subset containing 0 that is closed under `+` and under
/// multiplication by the ring. Exhaustive over all `2^n` subsets.
pub fn subset_filter_ideals(r: &FiniteRing) -> Vec<Mask> {
    assert!(r.size() <= 16, "subset filter is exponential");
    let zero = r.zero();
    (0u64..1 << r.size())
        .filter(|&m| m >> zero & 1 == 1 && closed_under_ring(r, m))
        .collect()
}

fn additive_closure(r: &FiniteRing, mut m: Mask) -> Mask {
    loop {
        let mut next = m;
        for x in bits(m) {
            for y in bits(m) {
                next |= 1 << r.add(x, y);
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

/// All additive subgroups, grown one element at a time, then filtered to
/// those absorbing multiplication.
pub fn subgroup_filter_ideals(r: &FiniteRing) -> Vec<Mask> {
    assert!(r.size() <= 64);
    let start = 1u64 << r.zero();
    let mut seen = vec![start];
    let mut frontier = vec![start];
    while let Some(h) = frontier.pop() {
        for x in r.elements() {
            if h >> x & 1 == 0 {
                let g = additive_closure(r, h | 1 << x);
                if !seen.contains(&g) {
                    seen.push(g);
                    frontier.push(g);
                }
            }
        }
    }
    let mut out: Vec<Mask> = seen.into_iter().filter(|&m| closed_under_ring(r, m)).collect();
    out.sort_unstable();
    out
}

pub fn lattice_maximals(r: &FiniteRing, ideals: &[Mask]) -> Vec<Mask> {
    let unit = full(r);
    let proper: Vec<Mask> = ideals.iter().copied().filter(|&m| m != unit).collect();
    let mut out: Vec<Mask> = proper
        .iter()
        .copied()
        .filter(|&m| !proper.iter().any(|&n| n != m && n & m == m))
        .collect();
    out.sort_unstable();
    out
}

pub fn is_prime_mask(r: &FiniteRing, p: Mask) -> bool {
    p != full(r)
        && r.elements()
            .all(|a| r.elements().all(|b| p >> r.mul(a, b) & 1 == 0 || p >> a & 1 == 1 || p >> b & 1 == 1))
}

pub fn totally_ordered(ideals: &[Mask]) -> bool {
    ideals
        .iter()
        .all(|&i| ideals.iter().all(|&j| i & j == i || i & j == j))
}

fn ideal_sum(r: &FiniteRing, i: Mask, j: Mask) -> Mask {
    let mut m = 0;
    for x in bits(i) {
        for y in bits(j) {
            m |= 1 << r.add(x, y);
        }
    }
    m
}

/// A ring is arithmetical exactly when its ideal lattice is distributive.
pub fn distributive_lattice(r: &FiniteRing, ideals: &[Mask]) -> bool {
    ideals.iter().all(|&i| {
        ideals.iter().all(|&j| {
            ideals
                .iter()
                .all(|&k| i & ideal_sum(r, j, k) == ideal_sum(r, i & j, i & k))
        })
    })
}

pub fn has_nonzero_nilpotent(r: &FiniteRing) -> bool {
    r.elements().any(|x| {
        x != r.zero() && {
            let mut y = x;
            (0..=r.size()).any(|_| {
                y = r.mul(y, x);
                y == r.zero()
            })
        }
    })
}

/// `a = a^2 x` for some `x`, for every `a`.
pub fn brute_von_neumann_regular(r: &FiniteRing) -> bool {
    r.elements().all(|a| {
        let a2 = r.mul(a, a);
        r.elements().any(|x| r.mul(a2, x) == a)
    })
}

/// The naive fraction construction `{(a, s)}/~` compared against a
/// localization realized as a quotient. Returns a description of the first
/// mismatch.
pub fn fraction_oracle(r: &FiniteRing, s: &[Elem], loc: &Localization) -> Result<(), String> {
    // K = {x : tx = 0 for some t in S}
    let k: Vec<bool> = r
        .elements()
        .map(|x| s.iter().any(|&t| r.mul(t, x) == r.zero()))
        .collect();
    let equiv = |(a, u): (Elem, Elem), (b, v): (Elem, Elem)| k[r.sub(r.mul(a, v), r.mul(b, u)) as usize];

    let mut reps: Vec<(Elem, Elem)> = Vec::new();
    let class_of = |p: (Elem, Elem), reps: &mut Vec<(Elem, Elem)>| -> usize {
        match reps.iter().position(|&q| equiv(p, q)) {
            Some(c) => c,
            None => {
                reps.push(p);
                reps.len() - 1
            }
        }
    };
    let one = r.one();
    for a in r.elements() {
        for &t in s {
            class_of((a, t), &mut reps);
        }
    }
    if reps.len() != loc.ring.size() {
        return Err(format!("{} fraction classes but R_S has {} elements", reps.len(), loc.ring.size()));
    }
    // y in R_S goes to the class of r/1 for any r over y
    let mut phi: Vec<Option<usize>> = vec![None; loc.ring.size()];
    for a in r.elements() {
        let c = class_of((a, one), &mut reps);
        let y = loc.map.apply(a) as usize;
        match phi[y] {
            None => phi[y] = Some(c),
            Some(d) if d != c => return Err(format!("{} has two fraction classes", r.encode(a))),
            _ => {}
        }
    }
    let phi: Vec<usize> = phi
        .into_iter()
        .map(|c| c.ok_or_else(|| "canonical map is not onto R_S".to_string()))
        .collect::<Result<_, _>>()?;
    let mut hit = vec![false; reps.len()];
    for &c in &phi {
        if std::mem::replace(&mut hit[c], true) {
            return Err("two elements of R_S share a fraction class".into());
        }
    }
    // a/t corresponds to the y with y * t = a in R_S
    for a in r.elements() {
        for &t in s {
            let c = class_of((a, t), &mut reps);
            let y = phi.iter().position(|&d| d == c).expect("bijective") as Elem;
            if loc.ring.mul(y, loc.map.apply(t)) != loc.map.apply(a) {
                return Err(format!("{}/{} is not compatible", r.encode(a), r.encode(t)));
            }
        }
    }
    Ok(())
}

/// Submonoid generated by a list of elements, closed by brute force.
pub fn monoid(r: &FiniteRing, gens: &[Elem]) -> Vec<Elem> {
    let mut m = vec![r.one()];
    let mut i = 0;
    while i < m.len() {
        for &g in gens {
            let x = r.mul(m[i], g);
            if !m.contains(&x) {
                m.push(x);
            }
        }
        i += 1;
    }
    m.sort_unstable();
    m
}

/// Small named rings: every `Z(n)`, products, trivial extensions and
/// duplications up to `max` elements.
pub fn small_rings(max: usize) -> Vec<(String, FiniteRing)> {
    let caps = Caps::default();
    let mut out = Vec::new();
    let max = max as u64;
    for n in 2..=max {
        out.push((format!("Z({n})"), FiniteRing::zmod(n).unwrap()));
    }
    for a in 2..=max {
        for b in a..=max / a {
            let r = FiniteRing::product(&FiniteRing::zmod(a).unwrap(), &FiniteRing::zmod(b).unwrap()).unwrap();
            out.push((format!("Z({a})xZ({b})"), r));
        }
    }
    for (a, b, c) in [(2, 2, 2), (2, 2, 3), (2, 3, 3), (2, 2, 4), (2, 2, 2 * 2 * 2)] {
        if a * b * c <= max {
            let ab = FiniteRing::product(&FiniteRing::zmod(a).unwrap(), &FiniteRing::zmod(b).unwrap()).unwrap();
            let r = FiniteRing::product(&ab, &FiniteRing::zmod(c).unwrap()).unwrap();
            out.push((format!("Z({a})xZ({b})xZ({c})"), r));
        }
    }
    for n in 2..=max {
        let a = FiniteRing::zmod(n).unwrap();
        for d in (2..=n).filter(|d| n % d == 0) {
            let i = Ideal::principal(&a, (d % n) as Elem);
            if n * d <= max {
                let quot = Module::quotient(&i).unwrap();
                let t = FiniteRing::trivial_extension(&a, &quot).unwrap();
                out.push((format!("Z({n})x(Z({n})/({d}))"), t));
            }
            if d < n && n * (n / d) <= max {
                let t = FiniteRing::trivial_extension(&a, &Module::from_ideal(&i)).unwrap();
                out.push((format!("Z({n})x({d})"), t));
                let dup = duplication(&a, &i, &caps).unwrap().ring;
                out.push((format!("dup(Z({n}),({d}))"), dup));
            }
        }
    }
    out.retain(|(_, r)| r.size() as u64 <= max);
    out
}
