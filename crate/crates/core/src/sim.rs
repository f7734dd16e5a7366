//! Monte Carlo BER estimation.
//!
//! Each trial draws a uniform codeword, a fresh channel matrix and a noise
//! pair from its own random stream (see [`crate::rng`]), detects, and counts
//! label bits in error. Trials run in parallel in fixed-size chunks. The
//! stopping point is resolved at trial granularity: a point stops at the
//! first trial index where the running error count reaches
//! `min_bit_errors`, so estimates are identical for every chunk size and
//! worker count.

use rayon::prelude::*;

use crate::channel::{
    sample_channel, sample_noise, transmit, NoiseConvention, NoiseModel, PowerImbalance,
};
use crate::constellation::{Constellation, ConstellationKind};
use crate::detect::DetectorKind;
use crate::rng::{point_seed, uniform_index, TrialStreams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub constellation: ConstellationKind,
    pub detector: DetectorKind,
    pub alphas: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    /// Mapping from the Eb/N0 axis to the simulated noise variance.
    pub noise_convention: NoiseConvention,
    pub seed: u64,
    pub min_bit_errors: u64,
    pub max_codewords: u64,
    pub chunk_size: u64,
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            constellation: ConstellationKind::Qpsk,
            detector: DetectorKind::Ml,
            alphas: vec![0.5],
            ebn0_db: vec![20.0],
            noise_convention: NoiseConvention::PerRealDimension,
            seed: 0,
            min_bit_errors: 200,
            max_codewords: 100_000_000,
            chunk_size: 10_000,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for &a in &self.alphas {
            PowerImbalance::new(a)?;
        }
        if self.alphas.is_empty() {
            return Err(Error::EmptyGrid("alpha"));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::EmptyGrid("Eb/N0"));
        }
        if self.ebn0_db.iter().any(|e| !e.is_finite()) {
            return Err(Error::Config("Eb/N0 values must be finite".into()));
        }
        if self.ebn0_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "Eb/N0 grid must be strictly increasing".into(),
            ));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk size must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        if self.min_bit_errors == 0 {
            return Err(Error::Config("minimum bit errors must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    /// Stopped after reaching the minimum error count.
    Converged,
    /// Ran out of codewords before reaching the minimum error count.
    MaxCodewords,
    /// No errors at all; the estimate carries no information beyond an
    /// upper bound of roughly `3 / bits_simulated`.
    UpperBoundOnly,
}

impl PointStatus {
    pub fn name(self) -> &'static str {
        match self {
            PointStatus::Converged => "converged",
            PointStatus::MaxCodewords => "max-codewords",
            PointStatus::UpperBoundOnly => "upper-bound-only",
        }
    }
}

impl std::str::FromStr for PointStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "converged" => Ok(PointStatus::Converged),
            "max-codewords" => Ok(PointStatus::MaxCodewords),
            "upper-bound-only" => Ok(PointStatus::UpperBoundOnly),
            other => Err(Error::Parse(format!("unknown point status '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub alpha: f64,
    pub ebn0_db: f64,
    pub bit_errors: u64,
    pub bits_simulated: u64,
    pub ber: f64,
    pub ci95_halfwidth: f64,
    pub seed: u64,
    pub codewords_used: u64,
    pub status: PointStatus,
}

impl BerPoint {
    fn new(
        alpha: f64,
        ebn0_db: f64,
        bit_errors: u64,
        codewords_used: u64,
        bits_per_codeword: u64,
        seed: u64,
        status: PointStatus,
    ) -> Self {
        let bits_simulated = codewords_used * bits_per_codeword;
        let ber = if bits_simulated == 0 {
            0.0
        } else {
            bit_errors as f64 / bits_simulated as f64
        };
        let ci95_halfwidth = if bits_simulated == 0 {
            0.0
        } else {
            1.96 * (ber * (1.0 - ber) / bits_simulated as f64).sqrt()
        };
        BerPoint {
            alpha,
            ebn0_db,
            bit_errors,
            bits_simulated,
            ber,
            ci95_halfwidth,
            seed,
            codewords_used,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub config: SimConfig,
    pub alpha: f64,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    /// Eb/N0 at which the curve crosses `target_ber`, interpolated linearly
    /// in (dB, log10 BER).
    pub fn ebn0_at_ber(&self, target_ber: f64) -> Result<f64> {
        let pairs: Vec<(f64, f64)> = self.points.iter().map(|p| (p.ebn0_db, p.ber)).collect();
        ebn0_at_ber(&pairs, target_ber)
    }
}

/// First crossing of `target_ber` along `(ebn0_db, ber)` pairs sorted by Eb/N0.
///
/// Segments touching a zero BER are skipped, since they have no logarithm.
pub fn ebn0_at_ber(points: &[(f64, f64)], target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 1.0) {
        return Err(Error::Precondition(format!(
            "target BER {target_ber} outside (0, 1)"
        )));
    }
    let target = target_ber.log10();
    for w in points.windows(2) {
        let ((e0, b0), (e1, b1)) = (w[0], w[1]);
        if b0 <= 0.0 || b1 <= 0.0 {
            continue;
        }
        if b0 >= target_ber && b1 <= target_ber {
            let (l0, l1) = (b0.log10(), b1.log10());
            if l0 == l1 {
                return Ok(e0);
            }
            return Ok(e0 + (target - l0) / (l1 - l0) * (e1 - e0));
        }
    }
    Err(Error::InsufficientRange { target: target_ber })
}

/// Eb/N0 penalty of `test` relative to `reference` at `target_ber`, in dB.
pub fn snr_degradation(reference: &BerCurve, test: &BerCurve, target_ber: f64) -> Result<f64> {
    Ok(test.ebn0_at_ber(target_ber)? - reference.ebn0_at_ber(target_ber)?)
}

/// Everything a trial needs at one operating point.
#[derive(Debug, Clone)]
pub struct Link {
    constellation: Constellation,
    detector: DetectorKind,
    power: PowerImbalance,
    noise: NoiseModel,
}

impl Link {
    pub fn new(
        kind: ConstellationKind,
        detector: DetectorKind,
        alpha: f64,
        noise: NoiseModel,
    ) -> Result<Self> {
        Ok(Link {
            constellation: Constellation::new(kind),
            detector,
            power: PowerImbalance::new(alpha)?,
            noise,
        })
    }

    pub fn for_point(cfg: &SimConfig, alpha: f64, ebn0_db: f64) -> Result<Self> {
        let noise = NoiseModel::from_ebn0_db(ebn0_db)?.with_convention(cfg.noise_convention);
        Self::new(cfg.constellation, cfg.detector, alpha, noise)
    }

    /// Runs trial `index` and returns its bit-error count.
    pub fn trial(&self, streams: &TrialStreams, index: u64) -> u32 {
        let c = &self.constellation;
        let mut rng = streams.trial(index);
        let i1 = uniform_index(&mut rng, c.size());
        let i2 = uniform_index(&mut rng, c.size());
        let w = c.codeword_unchecked(i1, i2);
        let h = sample_channel(&mut rng);
        let noise = sample_noise(&mut rng, &self.noise);
        let r = transmit(&h, &w, self.power, noise);
        let d = self.detector.detect(&r, &h, self.power, c);
        (c.label(i1) ^ c.label(d.codeword.index1)).count_ones()
            + (c.label(i2) ^ c.label(d.codeword.index2)).count_ones()
    }
}

struct ChunkTally {
    errors: u64,
    /// `(trial index, bit errors)` for every trial with at least one error.
    events: Vec<(u64, u32)>,
}

fn run_chunk(link: &Link, streams: &TrialStreams, start: u64, end: u64) -> ChunkTally {
    let mut errors = 0u64;
    let mut events = Vec::new();
    for t in start..end {
        let e = link.trial(streams, t);
        if e > 0 {
            errors += e as u64;
            events.push((t, e));
        }
    }
    ChunkTally { errors, events }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn run_point_in(
    pool: &rayon::ThreadPool,
    cfg: &SimConfig,
    alpha: f64,
    ebn0_db: f64,
) -> Result<BerPoint> {
    let link = Link::for_point(cfg, alpha, ebn0_db)?;
    let seed = point_seed(cfg.seed, alpha, ebn0_db);
    let streams = TrialStreams::new(seed);
    let bits_per_codeword = 2 * cfg.constellation.bits_per_symbol() as u64;
    let wave_len = (cfg.workers as u64 * 4).max(1);

    let mut next = 0u64;
    let mut errors = 0u64;
    while next < cfg.max_codewords {
        let chunks: Vec<(u64, u64)> = (0..wave_len)
            .map(|k| next.saturating_add(k.saturating_mul(cfg.chunk_size)))
            .take_while(|&s| s < cfg.max_codewords)
            .map(|s| (s, s.saturating_add(cfg.chunk_size).min(cfg.max_codewords)))
            .collect();
        let tallies: Vec<ChunkTally> = pool.install(|| {
            chunks
                .par_iter()
                .map(|&(s, e)| run_chunk(&link, &streams, s, e))
                .collect()
        });
        for tally in &tallies {
            if errors + tally.errors < cfg.min_bit_errors {
                errors += tally.errors;
                continue;
            }
            for &(t, e) in &tally.events {
                errors += e as u64;
                if errors >= cfg.min_bit_errors {
                    return Ok(BerPoint::new(
                        alpha,
                        ebn0_db,
                        errors,
                        t + 1,
                        bits_per_codeword,
                        seed,
                        PointStatus::Converged,
                    ));
                }
            }
        }
        next = chunks.last().map_or(cfg.max_codewords, |c| c.1);
    }
    let status = if errors == 0 {
        PointStatus::UpperBoundOnly
    } else {
        PointStatus::MaxCodewords
    };
    Ok(BerPoint::new(
        alpha,
        ebn0_db,
        errors,
        cfg.max_codewords,
        bits_per_codeword,
        seed,
        status,
    ))
}

/// Estimates the BER at one operating point.
pub fn run_ber_point(cfg: &SimConfig, alpha: f64, ebn0_db: f64) -> Result<BerPoint> {
    cfg.validate()?;
    run_point_in(&pool(cfg.workers)?, cfg, alpha, ebn0_db)
}

/// One curve per `alpha` over the configured Eb/N0 grid.
pub fn sweep(cfg: &SimConfig) -> Result<Vec<BerCurve>> {
    sweep_with_progress(cfg, |_| {})
}

/// [`sweep`] with a callback after every finished point.
pub fn sweep_with_progress<F: FnMut(&BerPoint)>(
    cfg: &SimConfig,
    mut progress: F,
) -> Result<Vec<BerCurve>> {
    cfg.validate()?;
    let pool = pool(cfg.workers)?;
    cfg.alphas
        .iter()
        .map(|&alpha| {
            let points = cfg
                .ebn0_db
                .iter()
                .map(|&e| {
                    let p = run_point_in(&pool, cfg, alpha, e)?;
                    progress(&p);
                    Ok(p)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BerCurve {
                config: cfg.clone(),
                alpha,
                points,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig {
            min_bit_errors: 100,
            max_codewords: 200_000,
            chunk_size: 1000,
            workers: 2,
            seed: 42,
            ..SimConfig::default()
        }
    }

    fn curve(points: &[(f64, f64)]) -> BerCurve {
        BerCurve {
            config: SimConfig::default(),
            alpha: 0.5,
            points: points
                .iter()
                .map(|&(ebn0_db, ber)| BerPoint {
                    alpha: 0.5,
                    ebn0_db,
                    bit_errors: 0,
                    bits_simulated: 0,
                    ber,
                    ci95_halfwidth: 0.0,
                    seed: 0,
                    codewords_used: 0,
                    status: PointStatus::Converged,
                })
                .collect(),
        }
    }

    #[test]
    fn ber_point_bookkeeping() {
        let p = run_ber_point(&cfg(), 0.5, 10.0).unwrap();
        assert_eq!(p.status, PointStatus::Converged);
        assert!(p.bit_errors >= 100 && p.bit_errors < 104);
        assert_eq!(p.bits_simulated, 4 * p.codewords_used);
        assert_eq!(p.ber, p.bit_errors as f64 / p.bits_simulated as f64);
        let ci = 1.96 * (p.ber * (1.0 - p.ber) / p.bits_simulated as f64).sqrt();
        assert_eq!(p.ci95_halfwidth, ci);
    }

    #[test]
    fn stopping_point_matches_serial_replay() {
        let cfg = cfg();
        let p = run_ber_point(&cfg, 0.9, 12.0).unwrap();
        let link = Link::for_point(&cfg, 0.9, 12.0).unwrap();
        let streams = TrialStreams::new(p.seed);
        let mut errors = 0u64;
        let mut used = 0u64;
        for t in 0.. {
            errors += link.trial(&streams, t) as u64;
            if errors >= cfg.min_bit_errors {
                used = t + 1;
                break;
            }
        }
        assert_eq!((p.bit_errors, p.codewords_used), (errors, used));
    }

    #[test]
    fn zero_errors_are_flagged() {
        let cfg = SimConfig {
            max_codewords: 100_000,
            ..cfg()
        };
        let p = run_ber_point(&cfg, 0.5, 60.0).unwrap();
        assert_eq!(p.status, PointStatus::UpperBoundOnly);
        assert_eq!(p.ber, 0.0);
        assert_eq!(p.codewords_used, 100_000);
    }

    #[test]
    fn capped_points_are_flagged() {
        let cfg = SimConfig {
            max_codewords: 3_000,
            min_bit_errors: 1_000_000,
            ..cfg()
        };
        let p = run_ber_point(&cfg, 0.5, 5.0).unwrap();
        assert_eq!(p.status, PointStatus::MaxCodewords);
        assert_eq!(p.codewords_used, 3_000);
        assert!(p.bit_errors > 0);
    }

    #[test]
    fn sweep_grid_shape() {
        let cfg = SimConfig {
            alphas: vec![0.5, 0.9],
            ebn0_db: (0..=30).step_by(5).map(f64::from).collect(),
            max_codewords: 2_000,
            ..cfg()
        };
        let curves = sweep(&cfg).unwrap();
        assert_eq!(curves.len(), 2);
        assert!(curves.iter().all(|c| c.points.len() == 7));
        assert_eq!(curves[1].alpha, 0.9);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_alpha = SimConfig {
            alphas: vec![1.0],
            ..cfg()
        };
        assert!(sweep(&bad_alpha).is_err());
        let unsorted = SimConfig {
            ebn0_db: vec![10.0, 5.0],
            ..cfg()
        };
        assert!(sweep(&unsorted).is_err());
        let no_chunks = SimConfig {
            chunk_size: 0,
            ..cfg()
        };
        assert!(run_ber_point(&no_chunks, 0.5, 10.0).is_err());
    }

    #[test]
    fn interpolation_in_log_domain() {
        let c = curve(&[(10.0, 1e-2), (12.0, 1e-4)]);
        assert!((c.ebn0_at_ber(1e-3).unwrap() - 11.0).abs() < 1e-12);
        assert!((c.ebn0_at_ber(1e-2).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(
            c.ebn0_at_ber(1e-5),
            Err(Error::InsufficientRange { .. })
        ));
        assert!(matches!(
            c.ebn0_at_ber(0.5),
            Err(Error::InsufficientRange { .. })
        ));
    }

    #[test]
    fn degradation_of_curve_against_itself_is_zero() {
        let c = curve(&[(10.0, 3e-2), (14.0, 2e-3), (18.0, 1e-4)]);
        assert_eq!(snr_degradation(&c, &c, 1e-3).unwrap(), 0.0);
        let shifted = curve(&[(13.0, 3e-2), (17.0, 2e-3), (21.0, 1e-4)]);
        assert!((snr_degradation(&c, &shifted, 1e-3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_ber_segments_are_skipped() {
        let c = curve(&[(10.0, 1e-2), (12.0, 0.0), (14.0, 0.0)]);
        assert!(c.ebn0_at_ber(1e-3).is_err());
    }
}
