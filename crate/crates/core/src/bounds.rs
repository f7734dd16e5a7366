//! Pairwise error probabilities and the bit-weighted union bound on ABEP.
//!
//! For a 2x2 spatial-multiplexing link on i.i.d. Rayleigh fading, the PEP of
//! deciding `X_hat` when `X` was sent is bounded by
//!
//! ```text
//! P(X -> X_hat) <= [1 / (1 + ||X - X_hat||^2 / (4 N0))]^2
//! ```
//!
//! and the ABEP by the union bound
//!
//! ```text
//! ABEP <= 1/M^2 sum_X sum_{X_hat != X} N(X, X_hat) / (2 log2 M) P(X -> X_hat)
//! ```
//!
//! With symbol differences `u = x1 - x1_hat` and `v = x2 - x2_hat`, the
//! squared distance is `alpha |u|^2 + (1 - alpha) |v|^2`. Swapping `u` and `v`
//! mirrors the distance around its balanced value, and since the PEP bound is
//! convex in the distance the pair of mirrored PEPs is smallest at
//! `alpha = 1/2`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constellation::{Codeword, Constellation, ConstellationKind};
use crate::{CompensatedSum, Error, Result};

/// Power imbalance factors compared in the QPSK PEP table.
pub const TABLE1_ALPHAS: [f64; 2] = [0.5, 0.9];

/// Upper bound on the PEP for a squared codeword distance `d2`.
pub fn pep_bound(d2: f64, n0: f64) -> Result<f64> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::InvalidNoise(n0));
    }
    if !(d2 >= 0.0) {
        return Err(Error::Precondition(format!(
            "squared distance {d2} is negative"
        )));
    }
    let g = 1.0 / (1.0 + d2 / (4.0 * n0));
    Ok(g * g)
}

/// Squared distance `alpha |u|^2 + (1 - alpha) |v|^2` of the error event `(u, v)`.
pub fn event_norm(u: Complex64, v: Complex64, alpha: f64) -> f64 {
    alpha * u.norm_sqr() + (1.0 - alpha) * v.norm_sqr()
}

/// Offsets of the event `(u, v)` and of its mirror `(v, u)` from the balanced
/// distance. The two are negatives of each other.
pub fn symmetry_gaps(u: Complex64, v: Complex64, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::Precondition(format!(
            "alpha {alpha} must lie in (1/2, 1)"
        )));
    }
    if u.norm_sqr() <= v.norm_sqr() {
        return Err(Error::Precondition("requires |u| > |v|".into()));
    }
    let gap = (alpha - 0.5) * (u.norm_sqr() - v.norm_sqr());
    Ok((gap, -gap))
}

/// `PEP(u, v) + PEP(v, u) - 2 PEP_balanced`; positive whenever `|u| != |v|`.
pub fn pairwise_sum_excess(u: Complex64, v: Complex64, alpha: f64, n0: f64) -> Result<f64> {
    let balanced = pep_bound(event_norm(u, v, 0.5), n0)?;
    let e1 = pep_bound(event_norm(u, v, alpha), n0)?;
    let e2 = pep_bound(event_norm(v, u, alpha), n0)?;
    Ok((e1 + e2) - 2.0 * balanced)
}

/// One way of mis-detecting a transmitted codeword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEvent {
    pub transmitted: Codeword,
    pub detected: Codeword,
    /// `x1 - x1_hat`
    pub u: Complex64,
    /// `x2 - x2_hat`
    pub v: Complex64,
    /// Label bits in error, `N(X, X_hat)`.
    pub n_bits: u32,
}

impl ErrorEvent {
    pub fn d2(&self, alpha: f64) -> f64 {
        event_norm(self.u, self.v, alpha)
    }

    pub fn pep(&self, alpha: f64, n0: f64) -> Result<f64> {
        pep_bound(self.d2(alpha), n0)
    }
}

/// The `M^2 - 1` error events for `transmitted`, in codeword enumeration order.
pub fn enumerate_error_events(
    c: &Constellation,
    transmitted: &Codeword,
) -> Result<Vec<ErrorEvent>> {
    if transmitted.kind != c.kind() {
        return Err(Error::MixedConstellations);
    }
    c.codewords()
        .into_iter()
        .filter(|w| w.enumeration_index() != transmitted.enumeration_index())
        .map(|detected| {
            Ok(ErrorEvent {
                transmitted: *transmitted,
                detected,
                u: transmitted.x1 - detected.x1,
                v: transmitted.x2 - detected.x2,
                n_bits: c.codeword_bit_distance(transmitted, &detected)?,
            })
        })
        .collect()
}

/// PEP bound of a distinct difference pair, with its accumulated bit weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PepRecord {
    pub u: Complex64,
    pub v: Complex64,
    pub d2: f64,
    pub pep_bound: f64,
    /// `sum N(X, X_hat)` over every `(X, X_hat)` with this difference pair.
    pub bit_weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbepBound {
    pub kind: ConstellationKind,
    pub alpha: f64,
    pub n0: f64,
    pub bound: f64,
    /// Distinct difference pairs in lexicographic order of their grid
    /// coordinates.
    pub per_event: Vec<PepRecord>,
}

/// Difference pair in integer grid units.
type GridKey = [i32; 4];

/// Bit weights of every difference pair over the full `(X, X_hat)` double sum.
///
/// Transmitted codewords are processed in parallel; each partial map is
/// merged in codeword order, and integer weights make the result independent
/// of the partition.
fn difference_weights(c: &Constellation) -> BTreeMap<GridKey, u64> {
    let m = c.size();
    let partials: Vec<BTreeMap<GridKey, u64>> = (0..m * m)
        .into_par_iter()
        .map(|k| {
            let (i1, i2) = (k / m, k % m);
            let mut local = BTreeMap::new();
            for j1 in 0..m {
                for j2 in 0..m {
                    if (j1, j2) == (i1, i2) {
                        continue;
                    }
                    let (a, b) = (c.grid(i1), c.grid(j1));
                    let (p, q) = (c.grid(i2), c.grid(j2));
                    let key = [a.0 - b.0, a.1 - b.1, p.0 - q.0, p.1 - q.1];
                    let bits = (c.label(i1) ^ c.label(j1)).count_ones()
                        + (c.label(i2) ^ c.label(j2)).count_ones();
                    *local.entry(key).or_insert(0) += bits as u64;
                }
            }
            local
        })
        .collect();
    let mut total = BTreeMap::new();
    for part in partials {
        for (key, w) in part {
            *total.entry(key).or_insert(0) += w;
        }
    }
    total
}

/// Union bound on the ABEP, averaged over every transmitted codeword.
pub fn union_bound_abep(c: &Constellation, alpha: f64, n0: f64) -> Result<AbepBound> {
    crate::channel::PowerImbalance::new(alpha)?;
    let weights = difference_weights(c);
    abep_from_weights(c, &weights, alpha, n0)
}

fn abep_from_weights(
    c: &Constellation,
    weights: &BTreeMap<GridKey, u64>,
    alpha: f64,
    n0: f64,
) -> Result<AbepBound> {
    let s = c.scale();
    let per_event = weights
        .iter()
        .map(|(key, &bit_weight)| {
            let u = Complex64::new(key[0] as f64 * s, key[1] as f64 * s);
            let v = Complex64::new(key[2] as f64 * s, key[3] as f64 * s);
            let d2 = event_norm(u, v, alpha);
            Ok(PepRecord {
                u,
                v,
                d2,
                pep_bound: pep_bound(d2, n0)?,
                bit_weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = c.size() as f64;
    let denom = m * m * 2.0 * c.bits_per_symbol() as f64;
    let total: CompensatedSum = per_event
        .iter()
        .map(|r| r.bit_weight as f64 * r.pep_bound)
        .collect();
    Ok(AbepBound {
        kind: c.kind(),
        alpha,
        n0,
        bound: total.value() / denom,
        per_event,
    })
}

/// Union bound for every `alpha` in `grid`, sharing one enumeration pass.
pub fn union_bound_sweep(c: &Constellation, grid: &[f64], n0: f64) -> Result<Vec<AbepBound>> {
    for &a in grid {
        crate::channel::PowerImbalance::new(a)?;
    }
    let weights = difference_weights(c);
    grid.iter()
        .map(|&a| abep_from_weights(c, &weights, a, n0))
        .collect()
}

/// Grid point minimizing the union bound; ties go to the smaller `alpha`.
pub fn optimal_alpha(c: &Constellation, n0: f64, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid("alpha"));
    }
    let bounds = union_bound_sweep(c, grid, n0)?;
    let best = bounds
        .iter()
        .min_by(|a, b| {
            a.bound
                .total_cmp(&b.bound)
                .then(a.alpha.total_cmp(&b.alpha))
        })
        .expect("grid is non-empty");
    Ok(best.alpha)
}

/// Row of the QPSK PEP table for the transmitted codeword `(1 + j, 1 + j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    /// 1-based event number.
    pub event: usize,
    pub u: Complex64,
    pub v: Complex64,
    pub n_bits: u32,
    pub d2: [f64; 2],
    pub pep: [f64; 2],
}

/// `(u, v)` of the 15 events in table order, in units of `(re, im)`.
const TABLE1_EVENTS: [((i32, i32), (i32, i32)); 15] = [
    ((2, 0), (0, 0)),
    ((0, 0), (2, 0)),
    ((0, 2), (0, 0)),
    ((0, 0), (0, 2)),
    ((2, 0), (2, 0)),
    ((2, 0), (0, 2)),
    ((0, 2), (2, 0)),
    ((0, 2), (0, 2)),
    ((2, 2), (0, 0)),
    ((0, 0), (2, 2)),
    ((2, 2), (2, 0)),
    ((2, 0), (2, 2)),
    ((2, 2), (0, 2)),
    ((0, 2), (2, 2)),
    ((2, 2), (2, 2)),
];

/// The 15 QPSK error events for `(1 + j, 1 + j)` at `alpha = 0.5` and `0.9`.
pub fn table1(n0: f64) -> Result<Vec<Table1Row>> {
    let c = Constellation::new(ConstellationKind::Qpsk);
    let one_plus_j = Complex64::new(1.0, 1.0);
    let idx = c
        .points()
        .iter()
        .position(|&p| p == one_plus_j)
        .expect("QPSK contains 1 + j");
    let transmitted = c.codeword(idx, idx)?;
    let events = enumerate_error_events(&c, &transmitted)?;
    TABLE1_EVENTS
        .iter()
        .enumerate()
        .map(|(k, &((ur, ui), (vr, vi)))| {
            let u = Complex64::new(ur as f64, ui as f64);
            let v = Complex64::new(vr as f64, vi as f64);
            let ev = events
                .iter()
                .find(|e| e.u == u && e.v == v)
                .expect("every table event is a QPSK error event");
            let d2 = TABLE1_ALPHAS.map(|a| ev.d2(a));
            Ok(Table1Row {
                event: k + 1,
                u,
                v,
                n_bits: ev.n_bits,
                d2,
                pep: [pep_bound(d2[0], n0)?, pep_bound(d2[1], n0)?],
            })
        })
        .collect()
}

/// Bit-weighted ABEP bound assembled from table rows (QPSK, one codeword).
pub fn table1_abep(rows: &[Table1Row]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (slot, value) in out.iter_mut().enumerate() {
        let sum: CompensatedSum = rows.iter().map(|r| r.n_bits as f64 * r.pep[slot]).collect();
        *value = sum.value() / 4.0;
    }
    out
}
