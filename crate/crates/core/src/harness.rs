//! Both sides of each transfer theorem, evaluated on a concrete datum.
//!
//! The left side is always a property of the constructed ring `R`; the right
//! side is the theorem's criterion in terms of `A`, `f(A)+J`, `g(A)+J'` and
//! the localized ideals. The theorems are proved, so a disagreement means a
//! bug in the algebra engine.

use std::fmt;
use std::str::FromStr;

use crate::biamalg::{construct, image_ring, local_datum, BiAmalgDatum, BiAmalgRing};
use crate::error::{Error, Result};
use crate::ideal::{is_radical, maximal_ideals, nilradical, Ideal};
use crate::localization::{localize, localize_at_prime, localize_ideal, saturate};
use crate::properties::{is_arithmetical, is_chained, is_semihereditary_finite, wdim_le_1, PropertyReport};
use crate::ring::{Caps, FiniteRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    ChainedTransfer,
    ArithmeticalTransfer,
    AmalgamationChained,
    AmalgamationArithmetical,
    DuplicationChained,
    DuplicationArithmetical,
    HomologicalTransfer,
    AmalgamationWdim,
    DuplicationWdim,
    SemihereditaryTransfer,
    AmalgamationSemihereditary,
    DuplicationSemihereditary,
}

/// Which data a theorem applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    General,
    Amalgamation,
    Duplication,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::ChainedTransfer,
        TheoremId::ArithmeticalTransfer,
        TheoremId::AmalgamationChained,
        TheoremId::AmalgamationArithmetical,
        TheoremId::DuplicationChained,
        TheoremId::DuplicationArithmetical,
        TheoremId::HomologicalTransfer,
        TheoremId::AmalgamationWdim,
        TheoremId::DuplicationWdim,
        TheoremId::SemihereditaryTransfer,
        TheoremId::AmalgamationSemihereditary,
        TheoremId::DuplicationSemihereditary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::ChainedTransfer => "chained-transfer",
            TheoremId::ArithmeticalTransfer => "arithmetical-transfer",
            TheoremId::AmalgamationChained => "amalgamation-chained",
            TheoremId::AmalgamationArithmetical => "amalgamation-arithmetical",
            TheoremId::DuplicationChained => "duplication-chained",
            TheoremId::DuplicationArithmetical => "duplication-arithmetical",
            TheoremId::HomologicalTransfer => "homological-transfer",
            TheoremId::AmalgamationWdim => "amalgamation-wdim",
            TheoremId::DuplicationWdim => "duplication-wdim",
            TheoremId::SemihereditaryTransfer => "semihereditary-transfer",
            TheoremId::AmalgamationSemihereditary => "amalgamation-semihereditary",
            TheoremId::DuplicationSemihereditary => "duplication-semihereditary",
        }
    }

    pub fn shape(self) -> Shape {
        match self {
            TheoremId::AmalgamationChained
            | TheoremId::AmalgamationArithmetical
            | TheoremId::AmalgamationWdim
            | TheoremId::AmalgamationSemihereditary => Shape::Amalgamation,
            TheoremId::DuplicationChained
            | TheoremId::DuplicationArithmetical
            | TheoremId::DuplicationWdim
            | TheoremId::DuplicationSemihereditary => Shape::Duplication,
            _ => Shape::General,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown theorem `{s}`")))
    }
}

/// Settings shared by every evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HarnessOptions {
    pub caps: Caps,
    /// Deliberate bug for mutation testing: the local-vanishing condition
    /// ranges over `Max(A)` instead of `Max(A, I0)`.
    pub mutant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub fingerprint: String,
    pub lhs: bool,
    pub lhs_witness: Option<String>,
    pub rhs: bool,
    pub rhs_witness: Option<String>,
    pub agree: bool,
    pub seed: Option<u64>,
    /// secondary checks and the decision paths, one entry each
    pub notes: Vec<String>,
}

impl TheoremVerdict {
    /// Both witnesses on one line.
    pub fn witness_summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(w) = &self.lhs_witness {
            parts.push(format!("lhs: {w}"));
        }
        if let Some(w) = &self.rhs_witness {
            parts.push(format!("rhs: {w}"));
        }
        parts.join("; ")
    }
}

/// One conjunct of a criterion.
struct Clause {
    holds: bool,
    why: String,
}

impl Clause {
    fn of(label: &str, report: &PropertyReport) -> Clause {
        Clause {
            holds: report.holds,
            why: match &report.witness {
                Some(w) => format!("{label} is not {}: {w}", report.property),
                None => format!("{label} is not {}", report.property),
            },
        }
    }

    fn plain(holds: bool, why: impl Into<String>) -> Clause {
        Clause { holds, why: why.into() }
    }
}

/// Conjunction, reporting the first failing clause.
fn all(clauses: Vec<Clause>) -> (bool, Option<String>) {
    match clauses.into_iter().find(|c| !c.holds) {
        Some(c) => (false, Some(c.why)),
        None => (true, None),
    }
}

fn lhs_of(report: &PropertyReport) -> (bool, Option<String>) {
    (report.holds, report.witness.as_ref().map(|w| w.to_string()))
}

/// The rings a criterion is phrased in.
struct Context<'a> {
    datum: &'a BiAmalgDatum,
    opts: &'a HarnessOptions,
    bi: BiAmalgRing,
    first: FiniteRing,
    second: FiniteRing,
}

impl<'a> Context<'a> {
    fn new(datum: &'a BiAmalgDatum, opts: &'a HarnessOptions) -> Result<Self> {
        let bi = construct(datum, &opts.caps)?;
        let first = image_ring(&datum.f, &datum.j)?.ring;
        let second = image_ring(&datum.g, &datum.j2)?.ring;
        Ok(Context {
            datum,
            opts,
            bi,
            first,
            second,
        })
    }

    fn caps(&self) -> &Caps {
        &self.opts.caps
    }

    /// The maximal ideals the local conditions range over.
    fn local_maximals(&self) -> Result<Vec<Ideal>> {
        let d = self.datum;
        let restrict = if self.opts.mutant { None } else { Some(&d.i0) };
        Ok(maximal_ideals(&d.a, restrict)?.maximals)
    }

    /// `J_{S_m} = 0` or `J'_{S'_m} = 0` for every relevant `m`.
    fn local_vanishing(&self) -> Result<Clause> {
        let d = self.datum;
        for m in self.local_maximals()? {
            let holds = if d.i0.is_subset(&m) {
                let ld = local_datum(d, &m)?;
                ld.j_s.is_zero() || ld.j2_s.is_zero()
            } else {
                // only reached by the mutant: the shifted complement meets J,
                // so the localizations collapse and the test reads as false
                localized_vanishes(&d.f, &d.j, &m)? || localized_vanishes(&d.g, &d.j2, &m)?
            };
            if !holds {
                return Ok(Clause::plain(false, format!("J_S and J'_S' are both nonzero at {m}")));
            }
        }
        Ok(Clause::plain(true, ""))
    }

    /// `J'_{S'_m} = 0` or `g_m^{-1}(J'_{S'_m}) = 0` (amalgamation form).
    fn amalgamation_vanishing(&self) -> Result<Clause> {
        let d = self.datum;
        for m in self.local_maximals()? {
            let holds = if d.i0.is_subset(&m) {
                let ld = local_datum(d, &m)?;
                ld.j2_s.is_zero() || Ideal::preimage(&ld.g_p, &ld.j2_s)?.is_zero()
            } else {
                localized_vanishes(&d.g, &d.j2, &m)?
            };
            if !holds {
                return Ok(Clause::plain(
                    false,
                    format!("J_S and its contraction are both nonzero at {m}"),
                ));
            }
        }
        Ok(Clause::plain(true, ""))
    }

    /// `I_m = 0` for every relevant `m` (duplication form).
    fn duplication_vanishing(&self) -> Result<Clause> {
        let d = self.datum;
        for m in self.local_maximals()? {
            let local = localize_ideal(&d.j, &localize_at_prime(&m)?)?;
            if !d.i0.is_subset(&m) || !local.is_zero() {
                return Ok(Clause::plain(false, format!("I_m is nonzero at {m}")));
            }
        }
        Ok(Clause::plain(true, ""))
    }

    fn nil_free(&self) -> Result<Clause> {
        let d = self.datum;
        let left = nilradical(&d.b).intersect(&d.j)?;
        if !left.is_zero() {
            return Ok(Clause::plain(false, format!("J meets nil(B) in {left}")));
        }
        let right = nilradical(&d.c).intersect(&d.j2)?;
        if !right.is_zero() {
            return Ok(Clause::plain(false, format!("J' meets nil(C) in {right}")));
        }
        Ok(Clause::plain(true, ""))
    }

    fn first_nil_free(&self) -> Result<Clause> {
        let d = self.datum;
        let right = nilradical(&d.c).intersect(&d.j2)?;
        Ok(Clause::plain(right.is_zero(), format!("J meets nil(B) in {right}")))
    }
}

/// Whether `J` vanishes after inverting `h(A - m) + J`; a collapsed
/// localization counts as "no".
fn localized_vanishes(h: &crate::hom::RingHom, j: &Ideal, m: &Ideal) -> Result<bool> {
    let codomain = h.codomain();
    let mut set = Vec::new();
    for a in h.domain().elements().filter(|&a| !m.contains(a)) {
        for y in j.elements() {
            set.push(codomain.add(h.apply(a), y));
        }
    }
    let s = saturate(codomain, &set)?;
    match localize(codomain, &s) {
        Ok(loc) => Ok(localize_ideal(j, &loc)?.is_zero()),
        Err(Error::DegenerateLocalization) => Ok(false),
        Err(e) => Err(e),
    }
}

fn require_shape(theorem: TheoremId, datum: &BiAmalgDatum) -> Result<()> {
    let ok = match theorem.shape() {
        Shape::General => true,
        Shape::Amalgamation => datum.is_amalgamation(),
        Shape::Duplication => datum.is_duplication(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{theorem} needs {} data",
            match theorem.shape() {
                Shape::Amalgamation => "amalgamation",
                _ => "duplication",
            }
        )))
    }
}

fn verdict(
    theorem: TheoremId,
    datum: &BiAmalgDatum,
    lhs: (bool, Option<String>),
    rhs: (bool, Option<String>),
    agree: bool,
    notes: Vec<String>,
) -> TheoremVerdict {
    TheoremVerdict {
        theorem,
        fingerprint: datum.fingerprint(),
        lhs: lhs.0,
        lhs_witness: lhs.1,
        rhs: rhs.0,
        rhs_witness: rhs.1,
        agree,
        seed: None,
        notes,
    }
}

pub fn verify(theorem: TheoremId, datum: &BiAmalgDatum, opts: &HarnessOptions) -> Result<TheoremVerdict> {
    require_shape(theorem, datum)?;
    let cx = Context::new(datum, opts)?;
    match theorem {
        TheoremId::ChainedTransfer => chained_transfer(&cx),
        TheoremId::ArithmeticalTransfer => arithmetical_transfer(&cx),
        TheoremId::AmalgamationChained => amalgamation_chained(&cx),
        TheoremId::AmalgamationArithmetical => amalgamation_arithmetical(&cx),
        TheoremId::DuplicationChained => duplication_chained(&cx),
        TheoremId::DuplicationArithmetical => duplication_arithmetical(&cx),
        TheoremId::HomologicalTransfer => homological(&cx, TheoremId::HomologicalTransfer),
        TheoremId::SemihereditaryTransfer => homological(&cx, TheoremId::SemihereditaryTransfer),
        TheoremId::AmalgamationWdim => amalgamation_wdim(&cx, false),
        TheoremId::AmalgamationSemihereditary => amalgamation_wdim(&cx, true),
        TheoremId::DuplicationWdim => duplication_wdim(&cx, false),
        TheoremId::DuplicationSemihereditary => duplication_wdim(&cx, true),
    }
}

pub fn verify_chained_transfer(datum: &BiAmalgDatum, opts: &HarnessOptions) -> Result<TheoremVerdict> {
    verify(TheoremId::ChainedTransfer, datum, opts)
}

pub fn verify_arithmetical_transfer(datum: &BiAmalgDatum, opts: &HarnessOptions) -> Result<TheoremVerdict> {
    verify(TheoremId::ArithmeticalTransfer, datum, opts)
}

pub fn verify_homological_transfer(datum: &BiAmalgDatum, opts: &HarnessOptions) -> Result<TheoremVerdict> {
    verify(TheoremId::HomologicalTransfer, datum, opts)
}

fn chained_transfer(cx: &Context) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let lhs = lhs_of(&is_chained(&cx.bi.ring, cx.caps())?);
    let f_chained = is_chained(&cx.first, cx.caps())?;
    let g_chained = is_chained(&cx.second, cx.caps())?;
    let rhs = all(vec![
        Clause::of("f(A)+J", &f_chained),
        Clause::of("g(A)+J'", &g_chained),
        Clause::plain(d.j.is_zero() || d.j2.is_zero(), "J and J' are both nonzero"),
    ]);
    // the one-sided reformulation
    let remark = (d.j.is_zero() && g_chained.holds) || (d.j2.is_zero() && f_chained.holds);
    let notes = vec![format!("one-sided form: {remark}")];
    let agree = lhs.0 == rhs.0 && rhs.0 == remark;
    Ok(verdict(TheoremId::ChainedTransfer, d, lhs, rhs, agree, notes))
}

fn arithmetical_transfer(cx: &Context) -> Result<TheoremVerdict> {
    let lhs = lhs_of(&is_arithmetical(&cx.bi.ring, cx.caps())?);
    let rhs = all(vec![
        Clause::of("f(A)+J", &is_arithmetical(&cx.first, cx.caps())?),
        Clause::of("g(A)+J'", &is_arithmetical(&cx.second, cx.caps())?),
        cx.local_vanishing()?,
    ]);
    let agree = lhs.0 == rhs.0;
    Ok(verdict(TheoremId::ArithmeticalTransfer, cx.datum, lhs, rhs, agree, Vec::new()))
}

/// The amalgamation forms, with `A`, `f(A)+J` read off the datum
/// `A ⋈^{id, f}(f^{-1}(J), J)`.
fn amalgamation_chained(cx: &Context) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let lhs = lhs_of(&is_chained(&cx.bi.ring, cx.caps())?);
    let rhs = all(vec![
        Clause::of("A", &is_chained(&d.a, cx.caps())?),
        Clause::of("f(A)+J", &is_chained(&cx.second, cx.caps())?),
        Clause::plain(d.j2.is_zero() || d.i0.is_zero(), "J and f^-1(J) are both nonzero"),
    ]);
    let agree = lhs.0 == rhs.0;
    Ok(verdict(TheoremId::AmalgamationChained, d, lhs, rhs, agree, Vec::new()))
}

fn amalgamation_arithmetical(cx: &Context) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let lhs = lhs_of(&is_arithmetical(&cx.bi.ring, cx.caps())?);
    let rhs = all(vec![
        Clause::of("A", &is_arithmetical(&d.a, cx.caps())?),
        Clause::of("f(A)+J", &is_arithmetical(&cx.second, cx.caps())?),
        cx.amalgamation_vanishing()?,
    ]);
    let agree = lhs.0 == rhs.0;
    Ok(verdict(TheoremId::AmalgamationArithmetical, d, lhs, rhs, agree, Vec::new()))
}

fn duplication_chained(cx: &Context) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let lhs = lhs_of(&is_chained(&cx.bi.ring, cx.caps())?);
    let rhs = all(vec![
        Clause::of("A", &is_chained(&d.a, cx.caps())?),
        Clause::plain(d.j.is_zero(), "I is nonzero"),
    ]);
    let agree = lhs.0 == rhs.0;
    Ok(verdict(TheoremId::DuplicationChained, d, lhs, rhs, agree, Vec::new()))
}

fn duplication_arithmetical(cx: &Context) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let lhs = lhs_of(&is_arithmetical(&cx.bi.ring, cx.caps())?);
    let rhs = all(vec![
        Clause::of("A", &is_arithmetical(&d.a, cx.caps())?),
        cx.duplication_vanishing()?,
    ]);
    let agree = lhs.0 == rhs.0;
    Ok(verdict(TheoremId::DuplicationArithmetical, d, lhs, rhs, agree, Vec::new()))
}

/// Weak dimension or semihereditary transfer for general data. The forward
/// implication is unconditional, the converse is claimed for radical `I0`.
/// On finite rings the converse holds regardless, so agreement is `lhs == rhs`
/// and the notes say which direction was exercised.
fn homological(cx: &Context, theorem: TheoremId) -> Result<TheoremVerdict> {
    let semi = theorem == TheoremId::SemihereditaryTransfer;
    let check = |r: &FiniteRing| -> Result<PropertyReport> {
        if semi {
            is_semihereditary_finite(r, cx.caps())
        } else {
            wdim_le_1(r, cx.caps())
        }
    };
    let lhs = lhs_of(&check(&cx.bi.ring)?);
    let rhs = all(vec![
        Clause::of("f(A)+J", &check(&cx.first)?),
        Clause::of("g(A)+J'", &check(&cx.second)?),
        cx.nil_free()?,
        cx.local_vanishing()?,
    ]);
    let radical = is_radical(&cx.datum.i0);
    let mut notes = vec![
        format!("forward: {}", if !rhs.0 || lhs.0 { "ok" } else { "FAILS" }),
        format!(
            "converse (I0 radical: {radical}): {}",
            if !lhs.0 || rhs.0 { "ok" } else { "fails" }
        ),
    ];
    if semi {
        notes.push("Noetherian hypotheses hold automatically for finite rings".into());
    }
    let agree = lhs.0 == rhs.0;
    Ok(verdict(theorem, cx.datum, lhs, rhs, agree, notes))
}

fn amalgamation_wdim(cx: &Context, semi: bool) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let (theorem, lhs_report, a_report) = if semi {
        (
            TheoremId::AmalgamationSemihereditary,
            is_semihereditary_finite(&cx.bi.ring, cx.caps())?,
            is_semihereditary_finite(&d.a, cx.caps())?,
        )
    } else {
        (
            TheoremId::AmalgamationWdim,
            wdim_le_1(&cx.bi.ring, cx.caps())?,
            wdim_le_1(&d.a, cx.caps())?,
        )
    };
    let lhs = lhs_of(&lhs_report);
    let rhs = all(vec![
        Clause::of("A", &a_report),
        Clause::of("f(A)+J", &is_arithmetical(&cx.second, cx.caps())?),
        cx.first_nil_free()?,
        cx.amalgamation_vanishing()?,
    ]);
    let mut notes = Vec::new();
    if semi {
        notes.push("coherence and finite generation hold automatically for finite rings".into());
    }
    let agree = lhs.0 == rhs.0;
    Ok(verdict(theorem, d, lhs, rhs, agree, notes))
}

fn duplication_wdim(cx: &Context, semi: bool) -> Result<TheoremVerdict> {
    let d = cx.datum;
    let (theorem, lhs_report, a_report) = if semi {
        (
            TheoremId::DuplicationSemihereditary,
            is_semihereditary_finite(&cx.bi.ring, cx.caps())?,
            is_semihereditary_finite(&d.a, cx.caps())?,
        )
    } else {
        (
            TheoremId::DuplicationWdim,
            wdim_le_1(&cx.bi.ring, cx.caps())?,
            wdim_le_1(&d.a, cx.caps())?,
        )
    };
    let lhs = lhs_of(&lhs_report);
    let rhs = all(vec![Clause::of("A", &a_report), cx.duplication_vanishing()?]);
    let mut notes = Vec::new();
    if semi {
        notes.push("I is finitely generated automatically".into());
    }
    let agree = lhs.0 == rhs.0;
    Ok(verdict(theorem, d, lhs, rhs, agree, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biamalg::{duplication_datum, validate_datum};
    use crate::hom::{make_hom, HomSpec, RingHom};
    use crate::module::Module;
    use crate::ring::Value;

    fn z(n: u64) -> FiniteRing {
        FiniteRing::zmod(n).unwrap()
    }

    fn opts() -> HarnessOptions {
        HarnessOptions::default()
    }

    #[test]
    fn names_parse() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn chained_examples() {
        let f2 = z(2);
        let t = FiniteRing::trivial_extension(&f2, &Module::free_rank_one(&f2)).unwrap();
        let g = make_hom(&f2, &t, HomSpec::Inclusion).unwrap();
        let j2 = Ideal::generated(&t, &[t.decode(&Value::pair(Value::Int(0), Value::Int(1))).unwrap()]);
        let datum = validate_datum(&RingHom::identity(&f2), &g, &Ideal::zero(&f2), &j2).unwrap();
        let v = verify_chained_transfer(&datum, &opts()).unwrap();
        assert!(v.lhs && v.rhs && v.agree);

        let z8 = z(8);
        let dup = duplication_datum(&z8, &Ideal::generated(&z8, &[4])).unwrap();
        let v = verify_chained_transfer(&dup, &opts()).unwrap();
        assert!(!v.lhs && !v.rhs && v.agree);

        let diag = duplication_datum(&z8, &Ideal::zero(&z8)).unwrap();
        let v = verify_chained_transfer(&diag, &opts()).unwrap();
        assert!(v.lhs && v.rhs && v.agree);
    }

    #[test]
    fn arithmetical_examples() {
        let z12 = z(12);
        let dup = duplication_datum(&z12, &Ideal::generated(&z12, &[4])).unwrap();
        for t in [TheoremId::ArithmeticalTransfer, TheoremId::DuplicationArithmetical, TheoremId::AmalgamationArithmetical] {
            let v = verify(t, &dup, &opts()).unwrap();
            assert!(v.lhs && v.rhs && v.agree, "{t}: {v:?}");
        }
        let z8 = z(8);
        let dup8 = duplication_datum(&z8, &Ideal::generated(&z8, &[4])).unwrap();
        let v = verify_arithmetical_transfer(&dup8, &opts()).unwrap();
        assert!(!v.lhs && !v.rhs && v.agree);
    }

    #[test]
    fn mutant_breaks_agreement() {
        let z6 = z(6);
        let dup = duplication_datum(&z6, &Ideal::generated(&z6, &[2])).unwrap();
        assert!(verify_arithmetical_transfer(&dup, &opts()).unwrap().agree);
        let mutant = HarnessOptions {
            mutant: true,
            ..opts()
        };
        let v = verify_arithmetical_transfer(&dup, &mutant).unwrap();
        assert!(v.lhs && !v.rhs && !v.agree);
    }

    #[test]
    fn homological_examples() {
        let z8 = z(8);
        let dup8 = duplication_datum(&z8, &Ideal::generated(&z8, &[4])).unwrap();
        let v = verify_homological_transfer(&dup8, &opts()).unwrap();
        assert!(!v.lhs && !v.rhs && v.agree);
        let z6 = z(6);
        let dup6 = duplication_datum(&z6, &Ideal::generated(&z6, &[2])).unwrap();
        for t in [
            TheoremId::HomologicalTransfer,
            TheoremId::SemihereditaryTransfer,
            TheoremId::AmalgamationWdim,
            TheoremId::DuplicationWdim,
            TheoremId::DuplicationSemihereditary,
        ] {
            let v = verify(t, &dup6, &opts()).unwrap();
            assert!(v.lhs && v.rhs && v.agree, "{t}: {v:?}");
        }
    }

    #[test]
    fn shape_is_enforced() {
        let z4 = z(4);
        let two = make_hom(&z4, &z(2), HomSpec::Projection).unwrap();
        let datum = crate::biamalg::amalgamation_datum(&two, &Ideal::zero(&z(2))).unwrap();
        assert!(datum.is_amalgamation() && !datum.is_duplication());
        assert!(matches!(
            verify(TheoremId::DuplicationChained, &datum, &opts()),
            Err(Error::Unsupported(_))
        ));
    }
}
