//! Ring-theoretic predicates on finite rings, each with a witness on failure
//! and a second decision route used as a cross-check.

use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::{enumerate_ideals, maximal_ideals, nilradical, Ideal};
use crate::localization::localize_at_prime;
use crate::ring::{Caps, Elem, FiniteRing, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Chained,
    Arithmetical,
    Reduced,
    WdimLe1,
    VonNeumannRegular,
    Coherent,
    Semihereditary,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Chained,
        Property::Arithmetical,
        Property::Reduced,
        Property::WdimLe1,
        Property::VonNeumannRegular,
        Property::Coherent,
        Property::Semihereditary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Chained => "chained",
            Property::Arithmetical => "arithmetical",
            Property::Reduced => "reduced",
            Property::WdimLe1 => "wdim-le-1",
            Property::VonNeumannRegular => "von-neumann-regular",
            Property::Coherent => "coherent",
            Property::Semihereditary => "semihereditary",
        }
    }

    pub fn from_name(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evidence that a property fails.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Incomparable { first: Ideal, second: Ideal },
    /// two incomparable ideals of `R_m`
    NotLocallyChained { maximal: Ideal, first: Ideal, second: Ideal },
    /// an ideal whose extension to `R_m` needs more than one generator
    NotLocallyPrincipal { ideal: Ideal, maximal: Ideal },
    Nilpotent(Value),
    NotRegular(Value),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Incomparable { first, second } => write!(f, "incomparable ideals {first} and {second}"),
            Witness::NotLocallyChained { maximal, first, second } => {
                write!(f, "at maximal {maximal}: incomparable local ideals {first} and {second}")
            }
            Witness::NotLocallyPrincipal { ideal, maximal } => {
                write!(f, "ideal {ideal} is not principal at maximal {maximal}")
            }
            Witness::Nilpotent(x) => write!(f, "nonzero nilpotent {x}"),
            Witness::NotRegular(x) => write!(f, "no y with x = x^2 y for x = {x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// how the verdict was reached
    pub path: String,
}

impl PropertyReport {
    fn new(property: Property, witness: Option<Witness>, path: impl Into<String>) -> PropertyReport {
        PropertyReport {
            property,
            holds: witness.is_none(),
            witness,
            path: path.into(),
        }
    }

    fn failing_because(property: Property, cause: &PropertyReport, path: impl Into<String>) -> PropertyReport {
        PropertyReport {
            property,
            holds: false,
            witness: cause.witness.clone(),
            path: format!("{} ({} fails)", path.into(), cause.property),
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.holds)?;
        if let Some(w) = &self.witness {
            write!(f, "; witness: {w}")?;
        }
        write!(f, "; path: {}", self.path)
    }
}

fn distinct_principal_ideals(r: &FiniteRing) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = Vec::new();
    for x in r.elements() {
        let p = Ideal::principal(r, x);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    out
}

/// First incomparable pair of principal ideals. Two incomparable ideals
/// `I, J` always yield one: `(x), (y)` with `x in I \ J`, `y in J \ I`.
fn incomparable_pair(r: &FiniteRing) -> Option<(Ideal, Ideal)> {
    let ps = distinct_principal_ideals(r);
    for (i, a) in ps.iter().enumerate() {
        for b in &ps[i + 1..] {
            if !a.is_subset(b) && !b.is_subset(a) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Ideals totally ordered by inclusion.
pub fn is_chained(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    caps.check_enum(r.size())?;
    let witness = incomparable_pair(r).map(|(first, second)| Witness::Incomparable { first, second });
    if witness.is_none() {
        assert!(r.is_local(), "a chained ring is local");
    }
    Ok(PropertyReport::new(Property::Chained, witness, "principal ideals pairwise comparable"))
}

/// Full-lattice version of [`is_chained`]; exponential in the worst case.
pub fn is_chained_by_lattice(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    let lattice = enumerate_ideals(r, caps)?;
    for (i, a) in lattice.iter().enumerate() {
        for b in &lattice[i + 1..] {
            if !a.is_subset(b) && !b.is_subset(a) {
                let w = Witness::Incomparable {
                    first: a.clone(),
                    second: b.clone(),
                };
                return Ok(PropertyReport::new(Property::Chained, Some(w), "ideal lattice"));
            }
        }
    }
    Ok(PropertyReport::new(Property::Chained, None, "ideal lattice"))
}

/// Production route: every `R_m` is chained.
pub fn is_arithmetical_by_localization(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    caps.check_enum(r.size())?;
    for m in maximal_ideals(r, None)?.maximals {
        let loc = localize_at_prime(&m)?;
        if let Some((first, second)) = incomparable_pair(&loc.ring) {
            let w = Witness::NotLocallyChained {
                maximal: m,
                first,
                second,
            };
            return Ok(PropertyReport::new(Property::Arithmetical, Some(w), "every R_m chained"));
        }
    }
    Ok(PropertyReport::new(Property::Arithmetical, None, "every R_m chained"))
}

/// Oracle route: the extension of every ideal to every `R_m` is principal.
pub fn is_arithmetical_by_principal_extensions(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    let lattice = enumerate_ideals(r, caps)?;
    let path = "every ideal locally principal";
    for m in maximal_ideals(r, None)?.maximals {
        let loc = localize_at_prime(&m)?;
        for i in &lattice {
            let image: Vec<Elem> = {
                let mut v: Vec<Elem> = i.elements().map(|x| loc.map.apply(x)).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let principal = image
                .iter()
                .any(|&g| Ideal::principal(&loc.ring, g).len() == image.len());
            if !principal {
                let w = Witness::NotLocallyPrincipal {
                    ideal: i.clone(),
                    maximal: m,
                };
                return Ok(PropertyReport::new(Property::Arithmetical, Some(w), path));
            }
        }
    }
    Ok(PropertyReport::new(Property::Arithmetical, None, path))
}

/// Both routes; an error if they disagree.
pub fn is_arithmetical(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    let main = is_arithmetical_by_localization(r, caps)?;
    match is_arithmetical_by_principal_extensions(r, caps) {
        Ok(oracle) if oracle.holds != main.holds => Err(Error::OracleDisagreement(format!(
            "arithmetical: localization route says {}, principal-extension route says {}",
            main.holds, oracle.holds
        ))),
        Ok(_) => Ok(PropertyReport {
            path: format!("{}; confirmed: every ideal locally principal", main.path),
            ..main
        }),
        Err(Error::LatticeTooLarge { .. }) => Ok(main),
        Err(e) => Err(e),
    }
}

pub fn is_reduced(r: &FiniteRing) -> PropertyReport {
    let nil = nilradical(r);
    let witness = nil.elements().find(|&x| x != r.zero()).map(|x| Witness::Nilpotent(r.encode(x)));
    PropertyReport::new(Property::Reduced, witness, "nil(R) = 0")
}

/// `x = x^2 y` solvable for every `x`.
pub fn is_von_neumann_regular(r: &FiniteRing) -> PropertyReport {
    let witness = r
        .elements()
        .find(|&x| {
            let x2 = r.mul(x, x);
            !r.elements().any(|y| r.mul(x2, y) == x)
        })
        .map(|x| Witness::NotRegular(r.encode(x)));
    PropertyReport::new(Property::VonNeumannRegular, witness, "x = x^2 y for all x")
}

/// Weak global dimension at most one: reduced and arithmetical. For a finite
/// ring this is the same as being a product of fields, which is checked
/// through von Neumann regularity.
pub fn wdim_le_1(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    let reduced = is_reduced(r);
    let report = if !reduced.holds {
        PropertyReport::failing_because(Property::WdimLe1, &reduced, "reduced and arithmetical")
    } else {
        let arith = is_arithmetical(r, caps)?;
        if arith.holds {
            PropertyReport::new(Property::WdimLe1, None, "reduced and arithmetical")
        } else {
            PropertyReport::failing_because(Property::WdimLe1, &arith, "reduced and arithmetical")
        }
    };
    let vnr = is_von_neumann_regular(r);
    if vnr.holds != report.holds {
        return Err(Error::OracleDisagreement(format!(
            "wdim <= 1 is {} but von Neumann regularity is {}",
            report.holds, vnr.holds
        )));
    }
    Ok(PropertyReport {
        path: format!("{}; agrees with von Neumann regularity", report.path),
        ..report
    })
}

/// Always true: a finite ring is Noetherian, hence coherent.
pub fn is_coherent_finite(r: &FiniteRing) -> PropertyReport {
    let _ = r;
    PropertyReport::new(
        Property::Coherent,
        None,
        "finite, so Noetherian, so coherent (degenerate at finite scale)",
    )
}

/// Coherent with weak global dimension at most one.
pub fn is_semihereditary_finite(r: &FiniteRing, caps: &Caps) -> Result<PropertyReport> {
    let coherent = is_coherent_finite(r);
    let wdim = wdim_le_1(r, caps)?;
    let path = "coherent (automatic for finite rings) and wdim <= 1";
    Ok(if wdim.holds && coherent.holds {
        PropertyReport::new(Property::Semihereditary, None, path)
    } else {
        PropertyReport::failing_because(Property::Semihereditary, &wdim, path)
    })
}

pub fn check_property(r: &FiniteRing, property: Property, caps: &Caps) -> Result<PropertyReport> {
    match property {
        Property::Chained => is_chained(r, caps),
        Property::Arithmetical => is_arithmetical(r, caps),
        Property::Reduced => Ok(is_reduced(r)),
        Property::WdimLe1 => wdim_le_1(r, caps),
        Property::VonNeumannRegular => Ok(is_von_neumann_regular(r)),
        Property::Coherent => Ok(is_coherent_finite(r)),
        Property::Semihereditary => is_semihereditary_finite(r, caps),
    }
}
