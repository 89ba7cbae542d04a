//! Which Frobenius traces occur for del Pezzo surfaces of degree 1..4 over a
//! given `F_q`. Every verdict carries a witness: a configuration of closed
//! points whose blow-up realizes the trace, an explicit surface, a quadratic
//! twist of another row, exhausted-search certificates, or a literature tag
//! for the cases settled non-constructively.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    exhaustive_size_estimate, find_config, normal_basis_config, prove_nonexistence, Certificate, DegreePartition,
    SearchOptions, SearchStatus,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::lattice::{blowup_frobenius, mat_vec, LatticeVector};
use crate::plane::{is_general_position, ClosedPointConfig};
use crate::surfaces::{blowup_trace_partition, count_from_trace, count_points, explicit, surface_to_json, twist, twist_parameter, CountReport};

/// Exhaustive searches at most this large run before the random search.
const EXHAUSTIVE_FIRST: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Exists,
    Absent,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Blow up the configuration, then contract the listed Frobenius-fixed,
    /// pairwise skew line classes (coordinates in `e0, e1, ...`).
    Configuration {
        partition: DegreePartition,
        method: String,
        blowup_trace: i64,
        contracted_lines: Vec<LatticeVector>,
        config: ClosedPointConfig,
    },
    /// An explicit model whose point count gives the trace.
    Surface { name: String, model: serde_json::Value, count: CountReport },
    /// Quadratic twist of the surface of trace `2 - a`.
    Twist {
        mirror_trace: i64,
        alpha: Option<String>,
        model: Option<serde_json::Value>,
        count: Option<CountReport>,
    },
    /// Settled in the literature without a construction used here.
    Citation { tag: String, note: String },
    /// Exhausted searches over every configuration type that could give the trace.
    Certificates { certificates: Vec<Certificate>, citation: Option<String> },
    /// `1 + a q + q^2` (or the count of the twist) would be negative.
    CountBound { trace: i64, count: i64 },
    /// Searches that ended without a verdict, or certificates that do not
    /// cover every configuration type.
    Inconclusive { reasons: Vec<String>, certificates: Vec<Certificate> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceTableRow {
    pub degree: u32,
    pub q: u64,
    pub trace: i64,
    pub status: TraceStatus,
    /// `1 + a q + q^2` when nonnegative.
    pub count: Option<u64>,
    pub witness: Witness,
}

/// Traces that are possible at all for surfaces of degree `d`, i.e. traces of
/// Frobenius elements of the Weyl group.
pub fn trace_set(d: u32) -> Result<&'static [i64]> {
    match d {
        1 => Ok(&[-7, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 9]),
        2 => Ok(&[-6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 8]),
        3 => Ok(&[-2, -1, 0, 1, 2, 3, 4, 5, 7]),
        4 => Ok(&[-2, -1, 0, 1, 2, 3, 4, 6]),
        _ => Err(Error::InvalidConfig(format!("trace tables cover degrees 1 to 4, not {d}"))),
    }
}

enum Recipe {
    /// Blow up closed points of these degrees, then contract `contract`
    /// pairwise skew rational lines. With `complete`, every surface of the
    /// trace arises this way, so an exhausted search proves absence.
    Blowup { parts: &'static [u32], contract: usize, complete: bool },
    /// The degree-`9 - d` closed point built from a normal basis.
    NormalBasis,
    Citation { tag: &'static str, note: &'static str },
    /// `a <= 0` in degrees 1, 2: twist of the surface of trace `2 - a`.
    Mirror,
    /// Degree 2, trace 4: three Frobenius classes. Two are blow-ups of the
    /// listed partitions; the third is a minimal conic bundle whose four
    /// singular fibres lie over two closed points of degree 2 of `P^1`, which
    /// needs `q > 2`.
    Dp2Trace4,
}

fn blowup(parts: &'static [u32], complete: bool) -> Recipe {
    Recipe::Blowup { parts, contract: 0, complete }
}

fn recipe(d: u32, a: i64) -> Recipe {
    const BRAUER: &str = "cubic surfaces of trace -1 exist over every finite field (Brauer group construction of a minimal cubic)";
    const SD: &str = "cubic surfaces of trace -2 exist over every finite field (Swinnerton-Dyer)";
    const RYB: &str = "degree 4 del Pezzo surfaces of this trace exist over every finite field (Rybakov)";
    match (d, a) {
        (3, 7) => blowup(&[1, 1, 1, 1, 1, 1], true),
        (3, 5) => blowup(&[1, 1, 1, 1, 2], false),
        (3, 4) => blowup(&[1, 1, 1, 3], false),
        (3, 3) => blowup(&[1, 1, 4], false),
        (3, 2) => blowup(&[1, 5], false),
        (3, 0) => Recipe::Blowup { parts: &[2, 2, 3], contract: 1, complete: false },
        (3, -1) => Recipe::Citation { tag: "brauer-group", note: BRAUER },
        (3, -2) => Recipe::Citation { tag: "swinnerton-dyer", note: SD },
        (4, 6) => blowup(&[1, 1, 1, 1, 1], true),
        (4, 4) => blowup(&[1, 1, 1, 2], false),
        (4, 3) => blowup(&[1, 1, 3], false),
        (4, 2) => blowup(&[1, 4], false),
        (4, 1) => blowup(&[5], false),
        (4, -1) => Recipe::Blowup { parts: &[2, 2, 3], contract: 2, complete: false },
        (4, 0) | (4, -2) => Recipe::Citation { tag: "rybakov", note: RYB },
        (2, 8) => blowup(&[1, 1, 1, 1, 1, 1, 1], true),
        (2, 6) => blowup(&[1, 1, 1, 1, 1, 2], true),
        (2, 5) => blowup(&[1, 1, 1, 1, 3], true),
        (2, 4) => Recipe::Dp2Trace4,
        (2, 3) => blowup(&[1, 1, 5], false),
        (2, 2) => blowup(&[1, 6], false),
        (1, 9) => blowup(&[1, 1, 1, 1, 1, 1, 1, 1], true),
        (1, 7) => blowup(&[1, 1, 1, 1, 1, 1, 2], true),
        (1, 6) => blowup(&[1, 1, 1, 1, 1, 3], true),
        (1, 5) => blowup(&[1, 1, 1, 1, 4], false),
        (1, 4) => blowup(&[1, 1, 1, 5], false),
        (1, 3) => blowup(&[1, 1, 6], false),
        (1, 2) => blowup(&[1, 7], false),
        (_, 1) => Recipe::NormalBasis,
        (1 | 2, a) if a <= 0 => Recipe::Mirror,
        _ => unreachable!("trace {a} is not in the trace set of degree {d}"),
    }
}

enum Outcome {
    Found(ClosedPointConfig, String),
    NotFound(Certificate),
    Inconclusive(String),
}

/// Small spaces are exhausted directly; otherwise random search first, then
/// the exhaustive search (subject to the `long` gate).
fn search_partition(base: &FieldSpec, parts: &[u32], opts: &SearchOptions) -> Result<Outcome> {
    let partition = DegreePartition::new(parts.to_vec())?;
    let small = exhaustive_size_estimate(base, &partition) <= EXHAUSTIVE_FIRST;
    let mut reasons = Vec::new();
    let exhaust = |reasons: &mut Vec<String>| -> Result<Option<Outcome>> {
        let r = prove_nonexistence(base, &partition, opts)?;
        Ok(match r.status {
            SearchStatus::Found { config } => Some(Outcome::Found(config, "exhaustive".into())),
            SearchStatus::NotFound { certificate } => Some(Outcome::NotFound(certificate)),
            SearchStatus::Inconclusive { reason } => {
                reasons.push(reason);
                None
            }
        })
    };
    if small {
        if let Some(o) = exhaust(&mut reasons)? {
            return Ok(o);
        }
    }
    let r = find_config(base, &partition, opts)?;
    match r.status {
        SearchStatus::Found { config } => return Ok(Outcome::Found(config, "random".into())),
        SearchStatus::Inconclusive { reason } => reasons.push(reason),
        SearchStatus::NotFound { .. } => unreachable!("random search never certifies"),
    }
    if !small {
        if let Some(o) = exhaust(&mut reasons)? {
            return Ok(o);
        }
    }
    Ok(Outcome::Inconclusive(reasons.join("; ")))
}

/// `k` pairwise skew line classes fixed by Frobenius on the blow-up, and the
/// trace after contracting them.
fn contraction(parts: &[u32], k: usize) -> Result<(i64, Vec<LatticeVector>)> {
    let (lat, m) = blowup_frobenius(parts)?;
    let n = lat.rank();
    let trace: i64 = (0..n).map(|i| m[i * n + i]).sum();
    if trace != blowup_trace_partition(parts) {
        return Err(Error::Consistency(format!("Frobenius trace {trace} on the blow-up of {parts:?}")));
    }
    let fixed: Vec<LatticeVector> = lat.line_classes().into_iter().filter(|l| mat_vec(&m, l) == *l).collect();
    fn pick(lat: &crate::lattice::PicardLattice, fixed: &[LatticeVector], k: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in from..fixed.len() {
            if chosen.iter().all(|&j| lat.dot(&fixed[i], &fixed[j]) == 0) {
                chosen.push(i);
                if pick(lat, fixed, k, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if !pick(&lat, &fixed, k, 0, &mut chosen) {
        return Err(Error::Consistency(format!("no {k} skew rational lines on the blow-up of {parts:?}")));
    }
    // each contracted class is fixed, so it removes a 1 from the trace
    Ok((trace - k as i64, chosen.into_iter().map(|i| fixed[i].clone()).collect()))
}

fn row(d: u32, q: u64, a: i64, status: TraceStatus, witness: Witness) -> TraceTableRow {
    TraceTableRow { degree: d, q, trace: a, status, count: count_from_trace(q, a), witness }
}

fn explicit_surface(d: u32, base: &FieldSpec, a: i64) -> Result<Option<Witness>> {
    if d != 1 {
        return Ok(None);
    }
    for (name, q, model) in explicit::explicit_surfaces()? {
        if q != base.order() || model.field != *base {
            continue;
        }
        let count = count_points(&model)?;
        if count.trace == Some(a) {
            return Ok(Some(Witness::Surface { name: name.into(), model: surface_to_json(&model), count }));
        }
    }
    Ok(None)
}

fn decide_positive(d: u32, base: &FieldSpec, a: i64, opts: &SearchOptions) -> Result<TraceTableRow> {
    let q = base.order();
    let qi = q as i64;
    for (t, c) in [(a, 1 + a * qi + qi * qi), (2 - a, 1 + (2 - a) * qi + qi * qi)] {
        if c < 0 && (t == a || d <= 2) {
            return Ok(row(d, q, a, TraceStatus::Absent, Witness::CountBound { trace: t, count: c }));
        }
    }
    if let Some(w) = explicit_surface(d, base, a)? {
        return Ok(row(d, q, a, TraceStatus::Exists, w));
    }
    match recipe(d, a) {
        Recipe::Citation { tag, note } => {
            Ok(row(d, q, a, TraceStatus::Exists, Witness::Citation { tag: tag.into(), note: note.into() }))
        }
        Recipe::NormalBasis => {
            let deg = 9 - d;
            let config = normal_basis_config(base, deg)?;
            if !is_general_position(&config)? {
                return Err(Error::Consistency(format!("normal-basis point of degree {deg} is not in general position")));
            }
            let partition = DegreePartition::new(vec![deg])?;
            let w = Witness::Configuration {
                partition,
                method: "normal-basis".into(),
                blowup_trace: blowup_trace_partition(&[deg]),
                contracted_lines: Vec::new(),
                config,
            };
            Ok(row(d, q, a, TraceStatus::Exists, w))
        }
        Recipe::Blowup { parts, contract, complete } => {
            let (trace, lines) = contraction(parts, contract)?;
            if trace != a {
                return Err(Error::Consistency(format!("recipe {parts:?} gives trace {trace}, not {a}")));
            }
            Ok(match search_partition(base, parts, opts)? {
                Outcome::Found(config, method) => {
                    let w = Witness::Configuration {
                        partition: DegreePartition::new(parts.to_vec())?,
                        method,
                        blowup_trace: blowup_trace_partition(parts),
                        contracted_lines: lines,
                        config,
                    };
                    row(d, q, a, TraceStatus::Exists, w)
                }
                Outcome::NotFound(cert) if complete => {
                    row(d, q, a, TraceStatus::Absent, Witness::Certificates { certificates: vec![cert], citation: None })
                }
                Outcome::NotFound(cert) => row(
                    d,
                    q,
                    a,
                    TraceStatus::Unknown,
                    Witness::Inconclusive {
                        reasons: vec![format!("no configuration {parts:?}, and other surfaces of trace {a} are not covered")],
                        certificates: vec![cert],
                    },
                ),
                Outcome::Inconclusive(reason) => {
                    row(d, q, a, TraceStatus::Unknown, Witness::Inconclusive { reasons: vec![reason], certificates: Vec::new() })
                }
            })
        }
        Recipe::Dp2Trace4 => {
            let mut certs = Vec::new();
            let mut reasons = Vec::new();
            for parts in [&[1u32, 1, 1, 4][..], &[1, 1, 1, 2, 2]] {
                match search_partition(base, parts, opts)? {
                    Outcome::Found(config, method) => {
                        let w = Witness::Configuration {
                            partition: DegreePartition::new(parts.to_vec())?,
                            method,
                            blowup_trace: blowup_trace_partition(parts),
                            contracted_lines: Vec::new(),
                            config,
                        };
                        return Ok(row(d, q, a, TraceStatus::Exists, w));
                    }
                    Outcome::NotFound(c) => certs.push(c),
                    Outcome::Inconclusive(r) => reasons.push(r),
                }
            }
            if reasons.is_empty() && q == 2 {
                let citation = "the remaining class is a minimal conic bundle with singular fibres over two closed points \
                                of degree 2 of P^1 (Iskovskikh); P^1 over F_2 has only one such point"
                    .to_string();
                return Ok(row(d, q, a, TraceStatus::Absent, Witness::Certificates { certificates: certs, citation: Some(citation) }));
            }
            if reasons.is_empty() {
                reasons.push("both blow-up types are absent; the conic bundle class is not searched".into());
            }
            Ok(row(d, q, a, TraceStatus::Unknown, Witness::Inconclusive { reasons, certificates: certs }))
        }
        Recipe::Mirror => Err(Error::Consistency(format!("trace {a} is decided by its twist"))),
    }
}

fn mirror(d: u32, base: &FieldSpec, a: i64, source: &TraceTableRow) -> Result<TraceTableRow> {
    let q = base.order();
    // a negative count for either member of the pair rules out both
    if let Witness::CountBound { .. } = source.witness {
        return Ok(row(d, q, a, source.status, source.witness.clone()));
    }
    let mut w = Witness::Twist { mirror_trace: 2 - a, alpha: None, model: None, count: None };
    if let Witness::Surface { name, .. } = &source.witness {
        let (_, _, model) = explicit::explicit_surfaces()?.into_iter().find(|(n, _, _)| n == name).expect("named explicit surface");
        let alpha = twist_parameter(base);
        let t = twist(&model, alpha)?;
        let count = count_points(&t)?;
        if count.trace != Some(a) {
            return Err(Error::Consistency(format!("twist of {name} has trace {:?}, expected {a}", count.trace)));
        }
        w = Witness::Twist {
            mirror_trace: 2 - a,
            alpha: Some(base.element(alpha).to_string()),
            model: Some(surface_to_json(&t)),
            count: Some(count),
        };
    }
    Ok(row(d, q, a, source.status, w))
}

/// One row per trace in the trace set of degree `d`, ascending.
pub fn trace_table(d: u32, base: &FieldSpec, opts: &SearchOptions) -> Result<Vec<TraceTableRow>> {
    let traces = trace_set(d)?;
    let mut rows: BTreeMap<i64, TraceTableRow> = BTreeMap::new();
    for &a in traces.iter().filter(|&&a| !matches!(recipe(d, a), Recipe::Mirror)) {
        rows.insert(a, decide_positive(d, base, a, opts)?);
    }
    for &a in traces.iter().filter(|&&a| matches!(recipe(d, a), Recipe::Mirror)) {
        let source = rows.get(&(2 - a)).ok_or_else(|| Error::Consistency(format!("trace {} missing for the twist", 2 - a)))?.clone();
        rows.insert(a, mirror(d, base, a, &source)?);
    }
    Ok(rows.into_values().collect())
}

/// Traces with the given status.
pub fn traces_with(rows: &[TraceTableRow], status: TraceStatus) -> Vec<i64> {
    rows.iter().filter(|r| r.status == status).map(|r| r.trace).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn contraction_traces() {
        assert_eq!(contraction(&[2, 2, 3], 1).unwrap().0, 0);
        assert_eq!(contraction(&[2, 2, 3], 2).unwrap().0, -1);
        assert_eq!(contraction(&[1, 1, 1, 1, 1, 1], 0).unwrap().0, 7);
    }

    #[test]
    fn cubic_table_over_f2() {
        let f = make_field(2, 1).unwrap();
        let rows = trace_table(3, &f, &SearchOptions::default()).unwrap();
        assert_eq!(traces_with(&rows, TraceStatus::Absent), vec![7]);
        assert_eq!(traces_with(&rows, TraceStatus::Exists), vec![-2, -1, 0, 1, 2, 3, 4, 5]);
    }
}
