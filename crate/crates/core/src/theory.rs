//! Closed-form predictions for cyclic, dihedral and nilpotent groups, the
//! many-generators criterion, and the maximal-subgroup covering constraint.
//!
//! Every predictor recomputes its evidence from the group it is handed and
//! reports which clause fired, so a disagreement with the solver points at a
//! specific case.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::prime_divisors;
use crate::bitset::ElementSet;
use crate::error::GroupError;
use crate::game::Seat;
use crate::group::FiniteGroup;
use crate::lattice::SubgroupLattice;
use crate::structure::{is_nilpotent, min_generators, min_generators_of, sylow_hk_split};

/// Which closed-form result produced a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    Cyclic,
    Dihedral,
    Nilpotent,
    ManyGenerators,
    Covering,
}

impl Theorem {
    /// Stable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Cyclic => "Cyclic-2.1",
            Theorem::Dihedral => "Dihedral-3.2",
            Theorem::Nilpotent => "Nilpotent-4.4",
            Theorem::ManyGenerators => "ManyGen-5.1",
            Theorem::Covering => "Covering-5.2",
        }
    }

    fn short(self) -> &'static str {
        match self {
            Theorem::Cyclic => "Thm 2.1",
            Theorem::Dihedral => "Thm 3.2",
            Theorem::Nilpotent => "Thm 4.4",
            Theorem::ManyGenerators => "Prop 5.1",
            Theorem::Covering => "Thm 5.2",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// A point prediction or a constraint on who can win.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prediction {
    Winner(Seat),
    NotP1,
    NotP3,
}

impl Prediction {
    pub fn admits(self, winner: Seat) -> bool {
        match self {
            Prediction::Winner(s) => s == winner,
            Prediction::NotP1 => winner != Seat::ONE,
            Prediction::NotP3 => winner != Seat::THREE,
        }
    }

    pub fn allowed(self) -> Vec<Seat> {
        Seat::ALL.into_iter().filter(|&s| self.admits(s)).collect()
    }

    pub fn point(self) -> Option<Seat> {
        match self {
            Prediction::Winner(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Winner(s) => write!(f, "{s}"),
            Prediction::NotP1 => f.write_str("NotP1"),
            Prediction::NotP3 => f.write_str("NotP3"),
        }
    }
}

impl Serialize for Prediction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoveringClass {
    TwoCover,
    OneCoverOnly,
    NoCover,
}

impl fmt::Display for CoveringClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoveringClass::TwoCover => "TwoCover",
            CoveringClass::OneCoverOnly => "OneCoverOnly",
            CoveringClass::NoCover => "NoCover",
        })
    }
}

/// Condition values that drove a prediction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evidence {
    pub order: usize,
    pub mod3: usize,
    pub mod9: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_g: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringClass>,
}

impl Evidence {
    fn for_order(order: usize) -> Self {
        Evidence {
            order,
            mod3: order % 3,
            mod9: order % 9,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PredictionRecord {
    pub descriptor: String,
    pub theorem: Theorem,
    /// Clause identifier, e.g. `6` or `3(b)`.
    pub case_label: String,
    /// The clause's hypothesis in words.
    pub condition: String,
    pub predicted: Prediction,
    pub evidence: Evidence,
}

impl PredictionRecord {
    /// One-line summary such as `Thm 2.1(6): P2`.
    pub fn headline(&self) -> String {
        match self.theorem {
            Theorem::Cyclic | Theorem::Dihedral => {
                format!("{}({}): {}", self.theorem.short(), self.case_label, self.predicted)
            }
            _ => format!("{} {}: {}", self.theorem.short(), self.case_label, self.predicted),
        }
    }
}

fn record(
    descriptor: &str,
    theorem: Theorem,
    case: &str,
    condition: impl Into<String>,
    predicted: Prediction,
    evidence: Evidence,
) -> PredictionRecord {
    PredictionRecord {
        descriptor: descriptor.to_string(),
        theorem,
        case_label: case.to_string(),
        condition: condition.into(),
        predicted,
        evidence,
    }
}

/// Outcome for the cyclic group of order `n`.
pub fn predict_cyclic(n: usize) -> Result<PredictionRecord, GroupError> {
    if n < 2 {
        return Err(GroupError::Trivial);
    }
    let mut ev = Evidence::for_order(n);
    ev.d_g = Some(1);
    let desc = format!("cyclic:{n}");
    let rec = |case, cond: &str, seat| record(&desc, Theorem::Cyclic, case, cond, Prediction::Winner(seat), ev.clone());
    Ok(match (n % 3, n % 9) {
        (1, _) if prime_divisors(n).iter().any(|p| p % 3 == 1) => {
            rec("1", "n ≡ 1 mod 3, some prime p | n with p ≡ 1 mod 3", Seat::ONE)
        }
        (1, _) => rec("2", "n ≡ 1 mod 3, every prime p | n has p ≡ 2 mod 3", Seat::TWO),
        (2, _) => rec("3", "n ≡ 2 mod 3", Seat::ONE),
        (_, 0) => rec("4", "n ≡ 0 mod 9", Seat::THREE),
        (_, 3) => rec("5", "n ≡ 3 mod 9", Seat::ONE),
        _ => rec("6", "n ≡ 6 mod 9", Seat::TWO),
    })
}

/// Outcome for the dihedral group of order `2n`.
pub fn predict_dihedral(n: usize) -> Result<PredictionRecord, GroupError> {
    if n < 3 {
        return Err(GroupError::DihedralTooSmall(n));
    }
    let mut ev = Evidence::for_order(2 * n);
    ev.d_g = Some(2);
    let desc = format!("dihedral:{n}");
    let rec = |case, cond: &str, seat| {
        record(
            &desc,
            Theorem::Dihedral,
            case,
            cond,
            Prediction::Winner(seat),
            ev.clone(),
        )
    };
    Ok(match (n % 3, n % 9) {
        (1, _) => rec("1", "n ≡ 1 mod 3", Seat::ONE),
        (2, _) => rec("2", "n ≡ 2 mod 3", Seat::TWO),
        (_, 3) => rec("2", "n ≡ 3 mod 9", Seat::TWO),
        (_, 0) => rec("3", "n ≡ 0 mod 9", Seat::THREE),
        _ => rec("3", "n ≡ 6 mod 9", Seat::THREE),
    })
}

/// Outcome for a nilpotent group from `|G| mod 9`, `d(G)`, `d(H)` and `d(K)`.
pub fn predict_nilpotent(g: &FiniteGroup, lat: &SubgroupLattice) -> Result<PredictionRecord, GroupError> {
    let split = sylow_hk_split(g, lat)?;
    let n = g.order();
    let d_g = min_generators(g);
    let d_h = min_generators_of(g, &split.h);
    let d_k = min_generators_of(g, &split.k);
    let mut ev = Evidence::for_order(n);
    ev.d_g = Some(d_g);
    ev.d_h = Some(d_h);
    ev.d_k = Some(d_k);
    let desc = g.descriptor();
    let rec = |case, cond: &str, seat| {
        record(
            desc,
            Theorem::Nilpotent,
            case,
            cond,
            Prediction::Winner(seat),
            ev.clone(),
        )
    };
    Ok(match (n % 3, n % 9) {
        (1, _) if 2 * d_h > d_k => rec("1(a)", "|G| ≡ 1 mod 3, 2d(H) ≥ d(K)+1", Seat::ONE),
        (1, _) => rec("2(a)", "|G| ≡ 1 mod 3, 2d(H) < d(K)+1", Seat::TWO),
        (2, _) if 2 * d_k > d_h => rec("1(b)", "|G| ≡ 2 mod 3, 2d(K) ≥ d(H)+1", Seat::ONE),
        (2, _) => rec("2(b)", "|G| ≡ 2 mod 3, 2d(K) < d(H)+1", Seat::TWO),
        (_, 0) => rec("3(a)", "|G| ≡ 0 mod 9", Seat::THREE),
        (_, 3) if d_g == 1 => rec("1(c)", "|G| ≡ 3 mod 9, d(G) = 1", Seat::ONE),
        (_, 3) => rec("3(b)", "|G| ≡ 3 mod 9, d(G) ≥ 2", Seat::THREE),
        (_, _) if d_g <= 2 => rec("2(c)", "|G| ≡ 6 mod 9, d(G) ≤ 2", Seat::TWO),
        _ => rec("3(c)", "|G| ≡ 6 mod 9, d(G) ≥ 3", Seat::THREE),
    })
}

/// Seat 3 when `3 | |G|` and `d(G) ≥ 4`; no claim otherwise.
pub fn many_generators_check(g: &FiniteGroup) -> Option<Seat> {
    (g.order().is_multiple_of(3) && min_generators(g) >= 4).then_some(Seat::THREE)
}

/// Record form of [`many_generators_check`], when it applies.
pub fn predict_many_generators(g: &FiniteGroup) -> Option<PredictionRecord> {
    if !g.order().is_multiple_of(3) {
        return None;
    }
    let d_g = min_generators(g);
    if d_g < 4 {
        return None;
    }
    let mut ev = Evidence::for_order(g.order());
    ev.d_g = Some(d_g);
    Some(record(
        g.descriptor(),
        Theorem::ManyGenerators,
        "",
        "3 | |G|, d(G) ≥ 4",
        Prediction::Winner(Seat::THREE),
        ev,
    ))
}

/// How well the maximal subgroups of order divisible by 3 cover `G`.
pub fn covering_class(g: &FiniteGroup, lat: &SubgroupLattice) -> Result<CoveringClass, GroupError> {
    if g.is_cyclic() {
        return Err(GroupError::Cyclic);
    }
    let m3: Vec<&ElementSet> = lat
        .maximal_ids()
        .into_iter()
        .map(|m| lat.get(m))
        .filter(|s| s.size() % 3 == 0)
        .map(|s| s.members())
        .collect();
    // Which members of M3 contain each element.
    let containing: Vec<ElementSet> = g
        .elements()
        .map(|x| ElementSet::from_indices(m3.len(), (0..m3.len()).filter(|&i| m3[i].contains(x))))
        .collect();
    if containing.iter().any(ElementSet::is_empty) {
        return Ok(CoveringClass::NoCover);
    }
    for x in g.elements() {
        for y in 0..x {
            if !containing[x].intersects(&containing[y]) {
                return Ok(CoveringClass::OneCoverOnly);
            }
        }
    }
    Ok(CoveringClass::TwoCover)
}

/// The winners a covering class allows.
pub fn covering_implication(c: CoveringClass) -> Prediction {
    match c {
        CoveringClass::TwoCover => Prediction::Winner(Seat::THREE),
        CoveringClass::OneCoverOnly => Prediction::NotP1,
        CoveringClass::NoCover => Prediction::NotP3,
    }
}

pub fn predict_covering(g: &FiniteGroup, lat: &SubgroupLattice) -> Result<PredictionRecord, GroupError> {
    let class = covering_class(g, lat)?;
    let mut ev = Evidence::for_order(g.order());
    ev.covering = Some(class);
    let (case, cond) = match class {
        CoveringClass::TwoCover => ("1", "M3 2-covers G"),
        CoveringClass::OneCoverOnly => ("2", "M3 1-covers but does not 2-cover G"),
        CoveringClass::NoCover => ("3", "M3 does not cover G"),
    };
    Ok(record(
        g.descriptor(),
        Theorem::Covering,
        case,
        cond,
        covering_implication(class),
        ev,
    ))
}

/// The most specific point prediction available: cyclic, then dihedral
/// (when the caller knows `g` is `D_n`), then nilpotent, then the
/// many-generators criterion.
pub fn best_prediction(
    g: &FiniteGroup,
    lat: &SubgroupLattice,
    dihedral_n: Option<usize>,
) -> Result<Option<PredictionRecord>, GroupError> {
    if g.is_cyclic() {
        let mut rec = predict_cyclic(g.order())?;
        rec.descriptor = g.descriptor().to_string();
        return Ok(Some(rec));
    }
    if let Some(n) = dihedral_n {
        let mut rec = predict_dihedral(n)?;
        rec.descriptor = g.descriptor().to_string();
        return Ok(Some(rec));
    }
    if is_nilpotent(g, lat) {
        return predict_nilpotent(g, lat).map(Some);
    }
    Ok(predict_many_generators(g))
}
