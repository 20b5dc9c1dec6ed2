//! Exact-rational discharging: initial charges, the seven transfer rules in
//! two phases, audit reports, and the parametric charge identity.

use crate::graph::{FaceSet, Graph, VertexId};
use crate::patterns::{counterexample_report, PredicateViolation};
use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type Rat = Ratio<i64>;

fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

/// An element that carries charge: a vertex or a face (by trace index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChargeElem {
    Vertex(VertexId),
    Face(usize),
}

impl fmt::Display for ChargeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChargeElem::Vertex(v) => write!(f, "v{v}"),
            ChargeElem::Face(i) => write!(f, "f{i}"),
        }
    }
}

/// One charge per vertex and face; arithmetic is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLedger {
    pub charges: BTreeMap<ChargeElem, Rat>,
}

impl ChargeLedger {
    pub fn sum(&self) -> Rat {
        self.charges.values().copied().sum()
    }

    pub fn get(&self, e: ChargeElem) -> Rat {
        self.charges[&e]
    }

    fn transfer(&mut self, from: ChargeElem, to: ChargeElem, amount: Rat) {
        *self.charges.get_mut(&from).unwrap() -= amount;
        *self.charges.get_mut(&to).unwrap() += amount;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferRecord {
    pub rule: &'static str,
    pub from: String,
    pub to: String,
    #[serde(skip)]
    pub from_elem: ChargeElem,
    #[serde(skip)]
    pub to_elem: ChargeElem,
    #[serde(flatten)]
    pub amount: RatJson,
}

/// Ordered transfer records; replaying them against the input ledger yields
/// the output ledger.
#[derive(Debug, Clone, Default)]
pub struct TransferTrace {
    pub records: Vec<TransferRecord>,
    pub flags: Vec<Flag>,
}

impl TransferTrace {
    fn push(&mut self, rule: &'static str, from: ChargeElem, to: ChargeElem, amount: Rat) {
        self.records.push(TransferRecord {
            rule,
            from: from.to_string(),
            to: to.to_string(),
            from_elem: from,
            to_elem: to,
            amount: RatJson::from(amount),
        });
    }

    fn flag(&mut self, code: &'static str, detail: String) {
        self.flags.push(Flag {
            code: code.to_string(),
            detail,
        });
    }

    /// Applies every record to `ledger`, returning the resulting ledger.
    pub fn replay(&self, ledger: &ChargeLedger) -> ChargeLedger {
        let mut out = ledger.clone();
        for r in &self.records {
            out.transfer(r.from_elem, r.to_elem, r.amount.to_rat());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub code: String,
    pub detail: String,
}

/// Rational rendered as an exact numerator/denominator pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RatJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rat> for RatJson {
    fn from(r: Rat) -> Self {
        RatJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl RatJson {
    pub fn to_rat(self) -> Rat {
        rat(self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DonorMode {
    /// A donor claimed by two receivers is an error.
    Exclusive,
    /// A shared donor's remainder is divided equally among its receivers.
    Split,
}

#[derive(Debug, Clone, Copy)]
pub struct DischargeParams {
    pub donor_mode: DonorMode,
}

impl Default for DischargeParams {
    fn default() -> Self {
        DischargeParams {
            donor_mode: DonorMode::Exclusive,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DischargeError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("donor {0} is claimed by receivers {1} and {2}")]
    SharedDonor(VertexId, VertexId, VertexId),
    #[error("receiver {0}: middle neighbor is not unique")]
    AmbiguousMiddle(VertexId),
}

/// ch(x) = d(x) - 4 for every vertex and face. The sum is -8 for every
/// connected embedded planar graph.
pub fn initial_charges(g: &Graph, fs: &FaceSet) -> Result<ChargeLedger, DischargeError> {
    if !g.is_connected() {
        return Err(DischargeError::DisconnectedGraph);
    }
    let mut charges = BTreeMap::new();
    for v in g.vertices() {
        charges.insert(ChargeElem::Vertex(v), rat(g.degree(v) as i64 - 4, 1));
    }
    for f in 0..fs.face_count() {
        charges.insert(ChargeElem::Face(f), rat(fs.face_degree(f) as i64 - 4, 1));
    }
    Ok(ChargeLedger { charges })
}

/// How much a 6-vertex pays a 3-face, by the face's sorted degree triple.
/// `None` means the type cannot occur under the structural predicates and the
/// payment is skipped (flagged by the caller).
fn six_vertex_face_payment(degrees: [usize; 3]) -> Option<Rat> {
    if degrees == [4, 5, 6] {
        Some(rat(2, 3))
    } else if degrees == [4, 6, 6] {
        Some(rat(1, 2))
    } else if degrees[0] >= 5 && degrees.contains(&6) {
        Some(rat(1, 3))
    } else {
        None
    }
}

/// First transfer phase:
/// every 6-vertex gives 1/3 to each 3-neighbor; every 6-vertex pays each
/// incident 3-face by type (1/3, 1/2, or 2/3); every 5-vertex pays 1/3 to
/// each incident 3-face. Payments to 3-face types excluded by the structural
/// predicates are skipped and flagged.
pub fn apply_phase1(g: &Graph, fs: &FaceSet, ledger: &ChargeLedger) -> (ChargeLedger, TransferTrace) {
    let mut out = ledger.clone();
    let mut trace = TransferTrace::default();
    for v in g.vertices() {
        if g.degree(v) == 6 {
            for &u in g.neighbors(v) {
                if g.degree(u) == 3 {
                    trace.push(
                        "R1",
                        ChargeElem::Vertex(v),
                        ChargeElem::Vertex(u),
                        rat(1, 3),
                    );
                }
            }
        }
    }
    for f in 0..fs.face_count() {
        if fs.face_degree(f) != 3 {
            continue;
        }
        let corners = fs.face_vertices(f);
        let mut degrees = [0usize; 3];
        for (i, &c) in corners.iter().enumerate() {
            degrees[i] = g.degree(c);
        }
        degrees.sort();
        for &c in &corners {
            match g.degree(c) {
                6 => match six_vertex_face_payment(degrees) {
                    Some(amount) => {
                        trace.push("R2", ChargeElem::Vertex(c), ChargeElem::Face(f), amount)
                    }
                    None => trace.flag(
                        "excluded-triangle-type",
                        format!("6-vertex {c} pays nothing to 3-face f{f} of type {degrees:?}"),
                    ),
                },
                5 => trace.push("R3", ChargeElem::Vertex(c), ChargeElem::Face(f), rat(1, 3)),
                _ => {}
            }
        }
    }
    for r in &trace.records {
        out.transfer(r.from_elem, r.to_elem, r.amount.to_rat());
    }
    (out, trace)
}

/// True gaps at `v`: position `i` is set when the face on the `v`-side of the
/// rotation gap between `rot[i]` and `rot[i+1]` is a 3-face.
fn triangle_gaps(g: &Graph, fs: &FaceSet, v: VertexId) -> Vec<bool> {
    let rot = g.rotation(v);
    rot.iter()
        .map(|&u| {
            fs.face_of_dart(u, v)
                .map(|f| fs.face_degree(f) == 3)
                .unwrap_or(false)
        })
        .collect()
}

/// Phase-2 receivers with their donor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receiver {
    pub rule: &'static str,
    pub vertex: VertexId,
    pub donors: Vec<VertexId>,
}

/// Identifies the phase-2 receivers from incident-3-face counts:
/// a 5-vertex on exactly four 3-faces takes its fan's middle neighbor, on
/// exactly five takes every neighbor; a 6-vertex on exactly five 3-faces
/// takes its fan's two middle neighbors, on exactly six takes every neighbor.
pub fn phase2_receivers(g: &Graph, fs: &FaceSet) -> Result<Vec<Receiver>, DischargeError> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let d = g.degree(v);
        if d != 5 && d != 6 {
            continue;
        }
        let gaps = triangle_gaps(g, fs, v);
        let count = gaps.iter().filter(|&&b| b).count();
        let rot = g.rotation(v);
        match (d, count) {
            (5, 4) | (6, 5) => {
                // Exactly one gap is not a 3-face: the neighbors form a
                // fan path starting just past it.
                let holes: Vec<usize> = (0..d).filter(|&i| !gaps[i]).collect();
                if holes.len() != 1 {
                    return Err(DischargeError::AmbiguousMiddle(v));
                }
                let start = (holes[0] + 1) % d;
                let path: Vec<VertexId> = (0..d).map(|i| rot[(start + i) % d]).collect();
                let donors = if d == 5 {
                    vec![path[2]]
                } else {
                    vec![path[2], path[3]]
                };
                out.push(Receiver {
                    rule: if d == 5 { "R4" } else { "R6" },
                    vertex: v,
                    donors,
                });
            }
            (5, 5) | (6, 6) => {
                out.push(Receiver {
                    rule: if d == 5 { "R5" } else { "R7" },
                    vertex: v,
                    donors: rot.to_vec(),
                });
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Second transfer phase: each receiver obtains each of its donors' phase-1
/// remainders, computed from the phase-1 snapshot; donors drop to 0 unless
/// shared or themselves receiving. Negative remainders transfer literally and
/// are flagged, as are receiver/donor overlaps.
pub fn apply_phase2(
    g: &Graph,
    fs: &FaceSet,
    ledger: &ChargeLedger,
    params: &DischargeParams,
) -> Result<(ChargeLedger, TransferTrace), DischargeError> {
    let receivers = phase2_receivers(g, fs)?;
    let mut trace = TransferTrace::default();

    // donor -> claiming receivers
    let mut claims: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for r in &receivers {
        for &d in &r.donors {
            claims.entry(d).or_default().push(r.vertex);
        }
    }
    for (&donor, who) in &claims {
        if who.len() > 1 {
            match params.donor_mode {
                DonorMode::Exclusive => {
                    return Err(DischargeError::SharedDonor(donor, who[0], who[1]))
                }
                DonorMode::Split => trace.flag(
                    "shared-donor-split",
                    format!("donor {donor} split equally among receivers {who:?}"),
                ),
            }
        }
        if receivers.iter().any(|r| r.vertex == donor) {
            trace.flag(
                "receiver-donor-overlap",
                format!("vertex {donor} both receives and donates"),
            );
        }
    }

    let mut out = ledger.clone();
    for r in &receivers {
        for &donor in &r.donors {
            let shares = claims[&donor].len() as i64;
            let remainder = ledger.get(ChargeElem::Vertex(donor));
            let amount = remainder / rat(shares, 1);
            if amount < Rat::zero() {
                trace.flag(
                    "negative-remainder",
                    format!("donor {donor} transfers negative remainder {amount} to {}", r.vertex),
                );
            }
            trace.push(
                r.rule,
                ChargeElem::Vertex(donor),
                ChargeElem::Vertex(r.vertex),
                amount,
            );
        }
    }
    for rec in &trace.records {
        out.transfer(rec.from_elem, rec.to_elem, rec.amount.to_rat());
    }
    Ok((out, trace))
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeElement {
    pub element: String,
    pub charge: RatJson,
    pub explanation: String,
}

/// Full audit: both phases plus the structural-predicate report. Field order
/// is part of the output contract.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub sum_initial: RatJson,
    pub sum_final: RatJson,
    pub transfers: Vec<TransferRecord>,
    pub negatives: Vec<NegativeElement>,
    pub flags: Vec<Flag>,
    pub predicate_violations: Vec<PredicateViolation>,
    pub verdict: String,
}

/// Runs both phases and explains every element left with negative charge.
/// Verdict "consistent" means each negative element is covered by a violated
/// structural predicate (so the graph was outside the admissible class at
/// that element); otherwise "unexplained-negative".
pub fn audit(g: &Graph, fs: &FaceSet, params: &DischargeParams) -> Result<AuditReport, DischargeError> {
    let initial = initial_charges(g, fs)?;
    let (after1, trace1) = apply_phase1(g, fs, &initial);
    let (fin, trace2) = apply_phase2(g, fs, &after1, params)?;
    let violations = counterexample_report(g);

    let mut negatives = Vec::new();
    let mut all_explained = true;
    for (&e, &c) in &fin.charges {
        if c >= Rat::zero() {
            continue;
        }
        let touched: Vec<VertexId> = match e {
            ChargeElem::Vertex(v) => vec![v],
            ChargeElem::Face(f) => fs.face_vertices(f),
        };
        let matched: Vec<&PredicateViolation> = violations
            .iter()
            .filter(|pv| pv.vertices.iter().any(|v| touched.contains(v)))
            .collect();
        let explanation = if matched.is_empty() {
            all_explained = false;
            "no violated predicate touches this element".to_string()
        } else {
            matched
                .iter()
                .map(|pv| pv.predicate.clone())
                .collect::<Vec<_>>()
                .join(", ")
        };
        negatives.push(NegativeElement {
            element: e.to_string(),
            charge: c.into(),
            explanation,
        });
    }

    let mut transfers = trace1.records;
    transfers.extend(trace2.records);
    let mut flags = trace1.flags;
    flags.extend(trace2.flags);
    let verdict = if all_explained {
        "consistent".to_string()
    } else {
        "unexplained-negative".to_string()
    };
    Ok(AuditReport {
        sum_initial: initial.sum().into(),
        sum_final: fin.sum().into(),
        transfers,
        negatives,
        flags,
        predicate_violations: violations,
        verdict,
    })
}

/// Σ(λd(v)−1) + Σ(μd(f)−1) with μ = 1/2 − λ, plus the max-degree frontier
/// expression (3μ−1) + 3·((Δ−1)λ−1)/(Δ−1).
pub fn parametric_analysis(
    g: &Graph,
    fs: &FaceSet,
    lambda: Rat,
) -> Result<(Rat, Rat), DischargeError> {
    if !g.is_connected() {
        return Err(DischargeError::DisconnectedGraph);
    }
    let mu = rat(1, 2) - lambda;
    let one = rat(1, 1);
    let mut sum = Rat::zero();
    for v in g.vertices() {
        sum += lambda * rat(g.degree(v) as i64, 1) - one;
    }
    for f in 0..fs.face_count() {
        sum += mu * rat(fs.face_degree(f) as i64, 1) - one;
    }
    let dmax = rat(g.max_degree() as i64, 1);
    let frontier = (rat(3, 1) * mu - one)
        + rat(3, 1) * ((dmax - one) * lambda - one) / (dmax - one);
    Ok((sum, frontier))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn setup(g: &Graph) -> (FaceSet, ChargeLedger) {
        let fs = FaceSet::trace(g);
        let ledger = initial_charges(g, &fs).unwrap();
        (fs, ledger)
    }

    #[test]
    fn cube_no_transfers() {
        let g = generate::cube();
        let (fs, ledger) = setup(&g);
        assert_eq!(ledger.sum(), rat(-8, 1));
        let (after1, t1) = apply_phase1(&g, &fs, &ledger);
        assert!(t1.records.is_empty());
        let (after2, t2) = apply_phase2(&g, &fs, &after1, &DischargeParams::default()).unwrap();
        assert!(t2.records.is_empty());
        assert_eq!(after2.sum(), rat(-8, 1));
    }

    #[test]
    fn k4_initial_sum() {
        let g = generate::complete_k4();
        let (_, ledger) = setup(&g);
        // 4 vertices of degree 3 and 4 triangular faces, each at -1
        assert_eq!(ledger.sum(), rat(-8, 1));
        assert!(ledger.charges.values().all(|&c| c == rat(-1, 1)));
    }

    #[test]
    fn icosahedron_split_mode() {
        let g = generate::icosahedron();
        let (fs, ledger) = setup(&g);
        assert_eq!(ledger.sum(), rat(-8, 1));
        let (after1, _) = apply_phase1(&g, &fs, &ledger);
        // every vertex pays 5/3, every face collects 3 * 1/3
        for v in g.vertices() {
            assert_eq!(after1.get(ChargeElem::Vertex(v)), rat(-2, 3));
        }
        for f in 0..fs.face_count() {
            assert_eq!(after1.get(ChargeElem::Face(f)), rat(0, 1));
        }
        // every vertex is simultaneously receiver and (shared) donor
        let err = apply_phase2(&g, &fs, &after1, &DischargeParams::default()).unwrap_err();
        assert!(matches!(err, DischargeError::SharedDonor(..)));
        let params = DischargeParams {
            donor_mode: DonorMode::Split,
        };
        let (fin, trace) = apply_phase2(&g, &fs, &after1, &params).unwrap();
        assert_eq!(fin.sum(), rat(-8, 1));
        assert!(trace.flags.iter().any(|f| f.code == "receiver-donor-overlap"));
        assert!(trace.flags.iter().any(|f| f.code == "negative-remainder"));
        // symmetric exchange: everyone gives -2/3 and gets it back
        for v in g.vertices() {
            assert_eq!(fin.get(ChargeElem::Vertex(v)), rat(-2, 3));
        }
    }

    #[test]
    fn triangle_456_face_reaches_zero() {
        let (g, planted) =
            generate::configuration_host(&generate::HostKind::Triangle(4, 5, 6), 1).unwrap();
        let (fs, ledger) = setup(&g);
        let (after1, _) = apply_phase1(&g, &fs, &ledger);
        let f = planted.face.expect("planted face");
        assert_eq!(after1.get(ChargeElem::Face(f)), rat(0, 1));
    }

    #[test]
    fn replay_reproduces_ledger() {
        let g = generate::icosahedron();
        let (fs, ledger) = setup(&g);
        let (after1, t1) = apply_phase1(&g, &fs, &ledger);
        assert_eq!(t1.replay(&ledger), after1);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::build(vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        let fs = FaceSet::trace(&g);
        assert_eq!(
            initial_charges(&g, &fs).unwrap_err(),
            DischargeError::DisconnectedGraph
        );
    }

    #[test]
    fn parametric_identity() {
        for g in [generate::cube(), generate::icosahedron(), generate::wheel(6)] {
            let fs = FaceSet::trace(&g);
            for lambda in [rat(1, 8), rat(1, 4), rat(3, 8)] {
                let (sum, _) = parametric_analysis(&g, &fs, lambda).unwrap();
                assert_eq!(sum, rat(-2, 1));
            }
        }
    }

    #[test]
    fn frontier_values() {
        // Δ = 6 host: frontier at λ = 1/4 is exactly -1/10.
        let g = generate::wheel(6);
        let fs = FaceSet::trace(&g);
        let (_, frontier) = parametric_analysis(&g, &fs, rat(1, 4)).unwrap();
        assert_eq!(frontier, rat(-1, 10));
        // Δ = 7 host: frontier is nonnegative.
        let g7 = generate::wheel(7);
        let fs7 = FaceSet::trace(&g7);
        let (_, frontier7) = parametric_analysis(&g7, &fs7, rat(1, 4)).unwrap();
        assert_eq!(frontier7, rat(0, 1));
    }

    #[test]
    fn audit_cube_consistent() {
        let g = generate::cube();
        let fs = FaceSet::trace(&g);
        let report = audit(&g, &fs, &DischargeParams::default()).unwrap();
        assert_eq!(report.sum_initial.to_rat(), rat(-8, 1));
        assert_eq!(report.sum_final.to_rat(), rat(-8, 1));
        assert!(report.transfers.is_empty());
        // degree-3 vertices are themselves predicate violations covering the
        // negative vertex charges
        assert_eq!(report.verdict, "consistent");
    }
}
