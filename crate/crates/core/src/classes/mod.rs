//! Conjugacy classes of `W(E6)` and `W(E7)` and the columns of the cubic
//! surface class table: order, measure, eigenvalues, trace, `H^1`, index,
//! orbit types on the lines and the matching class after a blow-up.

pub mod circulant;
pub mod cyclotomic;
mod reference;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{compose, meet_graph, perm_cycles, weyl_group, WeylElement, WeylGroup};
use crate::snf::{cyclic_h1, IntMatrix};

pub use circulant::{format_orbit_types, parse_orbit_types, CirculantType};
pub use cyclotomic::{charpoly, eigen_signature, EigenSignature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Index (in the group's element table) of the first element of the class.
    pub rep: usize,
    pub size: usize,
    pub order: usize,
}

/// Classes by closure under conjugation with the generators, in order of
/// their least element index.
pub fn conjugacy_classes(w: &WeylGroup) -> Vec<ConjugacyClass> {
    let order = w.order();
    let m = w.lines().len();
    let gens: Vec<&[u8]> = w.generators().iter().map(|g| g.line_perm.as_slice()).collect();
    let mut seen = vec![false; order];
    let mut out = Vec::new();
    let mut tmp = vec![0u8; m];
    let mut conj = vec![0u8; m];
    let mut queue = Vec::new();
    for start in 0..order {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for g in &gens {
                // generators are involutions: g x g^{-1} = g x g
                compose(w.perm(x), g, &mut tmp);
                compose(g, &tmp, &mut conj);
                let y = w.index_of(&conj).expect("group is closed under conjugation");
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        out.push(ConjugacyClass { rep: start, size: queue.len(), order: crate::lattice::perm_order(w.perm(start)) });
    }
    out
}

fn cached_classes(r: usize) -> Result<Arc<Vec<ConjugacyClass>>> {
    static E6: OnceLock<Arc<Vec<ConjugacyClass>>> = OnceLock::new();
    static E7: OnceLock<Arc<Vec<ConjugacyClass>>> = OnceLock::new();
    let cell = if r == 6 { &E6 } else { &E7 };
    if let Some(c) = cell.get() {
        return Ok(c.clone());
    }
    let w = weyl_group(r)?;
    let c = Arc::new(conjugacy_classes(&w));
    Ok(cell.get_or_init(|| c).clone())
}

/// Eigenvalue signature and trace of an element acting on `Pic`.
pub fn element_eigen(e: &WeylElement) -> Result<(EigenSignature, i64)> {
    let n = e.rank();
    let sig = eigen_signature(&charpoly(&e.matrix, n))?;
    let trace = e.trace();
    if sig.trace() != trace {
        return Err(Error::Consistency(format!("trace {trace} disagrees with eigenvalues {sig}")));
    }
    Ok((sig, trace))
}

/// `H^1(<w>, Pic)` as nontrivial invariant factors.
pub fn h1(e: &WeylElement) -> Result<Vec<i64>> {
    let n = e.rank();
    cyclic_h1(&IntMatrix::new(n, n, e.matrix.clone()), e.order())
}

/// Largest union of `<w>`-orbits of lines that is pairwise skew.
pub fn class_index(e: &WeylElement, graph: &[Vec<bool>]) -> u32 {
    let orbits = perm_cycles(&e.line_perm);
    let k = orbits.len();
    let independent = |a: &[usize], b: &[usize]| a.iter().all(|&x| b.iter().all(|&y| !graph[x][y]));
    let usable: Vec<usize> = (0..k).filter(|&i| independent(&orbits[i], &orbits[i])).collect();
    let weights: Vec<u32> = usable.iter().map(|&i| orbits[i].len() as u32).collect();
    let compat: Vec<u64> = usable
        .iter()
        .map(|&i| {
            usable.iter().enumerate().filter(|(_, &j)| j != i && independent(&orbits[i], &orbits[j])).fold(0u64, |m, (b, _)| m | 1 << b)
        })
        .collect();
    fn best(pos: usize, allowed: u64, cur: u32, weights: &[u32], compat: &[u64], record: &mut u32) {
        if cur > *record {
            *record = cur;
        }
        let rest: u32 = (pos..weights.len()).filter(|&i| allowed >> i & 1 == 1).map(|i| weights[i]).sum();
        if cur + rest <= *record {
            return;
        }
        for i in pos..weights.len() {
            if allowed >> i & 1 == 1 {
                best(i + 1, allowed & compat[i], cur + weights[i], weights, compat, record);
            }
        }
    }
    let mut record = 0;
    let all = if weights.is_empty() { 0 } else { u64::MAX >> (64 - weights.len()) };
    best(0, all, 0, &weights, &compat, &mut record);
    record
}

/// Circulant type of every `<w>`-orbit on the lines.
pub fn orbit_types(e: &WeylElement, graph: &[Vec<bool>]) -> Result<Vec<CirculantType>> {
    let mut out = Vec::new();
    for orbit in perm_cycles(&e.line_perm) {
        let n = orbit.len();
        let set: Vec<u32> = (1..n).filter(|&k| graph[orbit[0]][orbit[k]]).map(|k| k as u32).collect();
        for i in 0..n {
            for j in 0..n {
                let d = (j + n - i) % n;
                let want = d != 0 && set.contains(&(d as u32));
                if graph[orbit[i]][orbit[j]] != want {
                    return Err(Error::Consistency(format!("orbit of length {n} is not circulant")));
                }
            }
        }
        out.push(CirculantType::new(n as u32, &set, 1));
    }
    Ok(circulant::merge(out))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct E7Match {
    /// Eigenvalues of the matched class on `Pic = Z^8`.
    pub eigenvalues: EigenSignature,
    pub measure_inverse: u64,
    pub fixed_lines: usize,
    /// Classes with the same characteristic polynomial before the line filter.
    pub candidates: usize,
    pub urabe: Option<u32>,
}

/// One class of `W(E_r)` with its computed invariants.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassRecord {
    /// Manin's number (1..25) for `W(E6)`; position in discovery order otherwise.
    pub number: u32,
    pub frame: Option<String>,
    pub size: u64,
    pub order: usize,
    pub measure_inverse: u64,
    pub eigenvalues: EigenSignature,
    pub trace: i64,
    pub h1: Vec<i64>,
    pub fixed_lines: usize,
    pub index: Option<u32>,
    pub orbit_types: Vec<CirculantType>,
    pub blow_down: Option<String>,
    pub e7_match: Option<E7Match>,
    #[serde(skip)]
    pub rep: usize,
}

impl ClassRecord {
    pub fn h1_order(&self) -> i64 {
        self.h1.iter().product()
    }

    pub fn h1_string(&self) -> String {
        match self.h1.as_slice() {
            [] => "0".into(),
            [a, b] if a == b => format!("{a}^2"),
            v => v.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" x "),
        }
    }
}

fn basic_record(w: &WeylGroup, c: &ConjugacyClass, number: u32, graph: Option<&[Vec<bool>]>) -> Result<ClassRecord> {
    let e = w.element(c.rep);
    let (eigenvalues, trace) = element_eigen(&e)?;
    let (index, orbit_types) = match graph {
        Some(g) => (Some(class_index(&e, g)), orbit_types(&e, g)?),
        None => (None, Vec::new()),
    };
    Ok(ClassRecord {
        number,
        frame: None,
        size: c.size as u64,
        order: c.order,
        measure_inverse: (w.order() / c.size) as u64,
        eigenvalues,
        trace,
        h1: h1(&e)?,
        fixed_lines: e.fixed_lines(),
        index,
        orbit_types,
        blow_down: None,
        e7_match: None,
        rep: c.rep,
    })
}

/// All classes of `W(E7)` with eigenvalues, trace, `H^1` and fixed lines.
pub fn e7_classes() -> Result<Arc<Vec<ClassRecord>>> {
    static CELL: OnceLock<Arc<Vec<ClassRecord>>> = OnceLock::new();
    if let Some(c) = CELL.get() {
        return Ok(c.clone());
    }
    let w = weyl_group(7)?;
    let classes = cached_classes(7)?;
    let recs = classes
        .par_iter()
        .enumerate()
        .map(|(i, c)| basic_record(&w, c, i as u32 + 1, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(CELL.get_or_init(|| Arc::new(recs)).clone())
}

/// Blow-up of a rational point: the `W(E7)` classes whose characteristic
/// polynomial is `(x - 1)` times that of `rec`, narrowed to those fixing a line.
pub fn match_e7_class(rec: &ClassRecord, e7: &[ClassRecord]) -> Result<E7Match> {
    let target = rec.eigenvalues.with_extra_one();
    let candidates: Vec<&ClassRecord> = e7.iter().filter(|c| c.eigenvalues == target).collect();
    let with_line: Vec<&&ClassRecord> = candidates.iter().filter(|c| c.fixed_lines > 0).collect();
    match with_line.as_slice() {
        [m] => Ok(E7Match {
            eigenvalues: m.eigenvalues.clone(),
            measure_inverse: m.measure_inverse,
            fixed_lines: m.fixed_lines,
            candidates: candidates.len(),
            urabe: reference::E7_URABE
                .iter()
                .find(|(sig, fixed, _)| EigenSignature::parse(sig).ok().as_ref() == Some(&m.eigenvalues) && *fixed == m.fixed_lines)
                .map(|&(_, _, u)| u),
        }),
        v => Err(Error::Consistency(format!(
            "{} W(E7) classes with eigenvalues {target} fix a line (of {} candidates)",
            v.len(),
            candidates.len()
        ))),
    }
}

/// The 25 classes of `W(E6)` with every computed column, ordered by Manin's
/// numbering. With `with_e7`, each row also carries its blow-up match.
pub fn table_e6(with_e7: bool) -> Result<Vec<ClassRecord>> {
    let w = weyl_group(6)?;
    let classes = cached_classes(6)?;
    let graph = meet_graph(w.lattice());
    let mut recs = classes
        .par_iter()
        .map(|c| basic_record(&w, c, 0, Some(&graph)))
        .collect::<Result<Vec<_>>>()?;
    let mut used = vec![false; reference::E6_LABELS.len()];
    for rec in recs.iter_mut() {
        let hits: Vec<usize> = reference::E6_LABELS
            .iter()
            .enumerate()
            .filter(|(_, &(_, _, order, mu, eig, _))| {
                order == rec.order && mu == rec.measure_inverse && EigenSignature::parse(eig).ok().as_ref() == Some(&rec.eigenvalues)
            })
            .map(|(i, _)| i)
            .collect();
        let [i] = hits.as_slice() else {
            return Err(Error::Consistency(format!(
                "class of order {} and measure 1/{} ({}) matches {} labels",
                rec.order,
                rec.measure_inverse,
                rec.eigenvalues,
                hits.len()
            )));
        };
        if std::mem::replace(&mut used[*i], true) {
            return Err(Error::Consistency("two classes share a label".into()));
        }
        let (manin, frame, _, _, _, blow) = reference::E6_LABELS[*i];
        rec.number = manin;
        rec.frame = Some(frame.to_string());
        rec.blow_down = Some(blow.to_string());
    }
    recs.sort_by_key(|r| r.number);
    if with_e7 {
        let e7 = e7_classes()?;
        for rec in recs.iter_mut() {
            rec.e7_match = Some(match_e7_class(rec, &e7)?);
        }
    }
    Ok(recs)
}

/// `tau(a)`: total measure of the classes with trace `a`.
pub fn sato_tate(classes: &[ClassRecord]) -> BTreeMap<i64, Ratio<i64>> {
    let mut out: BTreeMap<i64, Ratio<i64>> = BTreeMap::new();
    for c in classes {
        *out.entry(c.trace).or_insert_with(|| Ratio::from_integer(0)) += Ratio::new(1, c.measure_inverse as i64);
    }
    out
}

/// Sato–Tate distribution of traces for del Pezzo surfaces of degree 3 or 2.
pub fn sato_tate_degree(d: u32) -> Result<BTreeMap<i64, Ratio<i64>>> {
    match d {
        3 => Ok(sato_tate(&table_e6(false)?)),
        2 => Ok(sato_tate(&e7_classes()?)),
        _ => Err(Error::InvalidConfig(format!("Sato-Tate distribution available for degrees 2 and 3, not {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e6_has_25_classes() {
        let classes = cached_classes(6).unwrap();
        assert_eq!(classes.len(), 25);
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 51840);
        assert_eq!(classes[0].size, 1);
    }

    #[test]
    fn identity_columns() {
        let w = weyl_group(6).unwrap();
        let g = meet_graph(w.lattice());
        let e = w.element(0);
        assert_eq!(class_index(&e, &g), 6);
        assert_eq!(format_orbit_types(&orbit_types(&e, &g).unwrap()), "1^27");
        assert!(h1(&e).unwrap().is_empty());
        let (sig, tr) = element_eigen(&e).unwrap();
        assert_eq!((sig.to_string(), tr), ("1^7".to_string(), 7));
    }
}
