//! Hard-decision detectors with perfect channel knowledge.
//!
//! [`ml_detect`] searches all `M^2` codewords for the minimum of
//! `||R - H X||^2`. [`sic_detect`] is the successive-interference-cancellation
//! baseline: slice user 1 treating user 2 as noise, cancel it, then slice
//! user 2, for `2M` metric evaluations in total. Ties go to the lowest
//! enumeration index in both.

use num_complex::Complex64;

use crate::channel::{ChannelMatrix, PowerImbalance, ReceivedVector};
use crate::constellation::{Codeword, Constellation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind {
    Ml,
    Sic,
}

impl DetectorKind {
    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Ml => "ml",
            DetectorKind::Sic => "sic",
        }
    }

    pub fn detect(
        self,
        r: &ReceivedVector,
        h: &ChannelMatrix,
        p: PowerImbalance,
        c: &Constellation,
    ) -> Detection {
        match self {
            DetectorKind::Ml => ml_detect(r, h, p, c),
            DetectorKind::Sic => sic_detect(r, h, p, c),
        }
    }
}

impl std::str::FromStr for DetectorKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ml" => Ok(DetectorKind::Ml),
            "sic" => Ok(DetectorKind::Sic),
            other => Err(crate::Error::Config(format!("unknown detector '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub codeword: Codeword,
    /// Final metric of the decision (the joint metric for ML, the stage-2
    /// residual for SIC).
    pub metric: f64,
    pub metrics_evaluated: usize,
}

#[inline]
fn dist2(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    (a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()
}

/// Joint maximum-likelihood decision over all `M^2` codewords.
pub fn ml_detect(
    r: &ReceivedVector,
    h: &ChannelMatrix,
    p: PowerImbalance,
    c: &Constellation,
) -> Detection {
    let (a1, a2) = p.amplitudes();
    let g1 = h.column(0).map(|g| g * a1);
    let g2 = h.column(1).map(|g| g * a2);
    let m = c.size();
    // Per-user contributions to each antenna, reused across the M^2 metrics.
    let u1: Vec<[Complex64; 2]> = c.points().iter().map(|&s| [g1[0] * s, g1[1] * s]).collect();
    let u2: Vec<[Complex64; 2]> = c.points().iter().map(|&s| [g2[0] * s, g2[1] * s]).collect();

    let mut best = (f64::INFINITY, 0usize, 0usize);
    let mut evaluated = 0usize;
    for (i, y1) in u1.iter().enumerate() {
        for (j, y2) in u2.iter().enumerate() {
            let metric = dist2(r.r, [y1[0] + y2[0], y1[1] + y2[1]]);
            evaluated += 1;
            if metric < best.0 {
                best = (metric, i, j);
            }
        }
    }
    debug_assert_eq!(evaluated, m * m);
    Detection {
        codeword: c.codeword_unchecked(best.1, best.2),
        metric: best.0,
        metrics_evaluated: evaluated,
    }
}

/// Two-stage SIC decision: user 1 first, then user 2 on the cancelled residual.
pub fn sic_detect(
    r: &ReceivedVector,
    h: &ChannelMatrix,
    p: PowerImbalance,
    c: &Constellation,
) -> Detection {
    let (a1, a2) = p.amplitudes();
    let g1 = h.column(0).map(|g| g * a1);
    let g2 = h.column(1).map(|g| g * a2);
    let mut evaluated = 0usize;

    let mut stage1 = (f64::INFINITY, 0usize);
    for (i, &s) in c.points().iter().enumerate() {
        let metric = dist2(r.r, [g1[0] * s, g1[1] * s]);
        evaluated += 1;
        if metric < stage1.0 {
            stage1 = (metric, i);
        }
    }
    let s1 = c.points()[stage1.1];
    let residual = [r.r[0] - g1[0] * s1, r.r[1] - g1[1] * s1];

    let mut stage2 = (f64::INFINITY, 0usize);
    for (j, &s) in c.points().iter().enumerate() {
        let metric = dist2(residual, [g2[0] * s, g2[1] * s]);
        evaluated += 1;
        if metric < stage2.0 {
            stage2 = (metric, j);
        }
    }
    Detection {
        codeword: c.codeword_unchecked(stage1.1, stage2.1),
        metric: stage2.0,
        metrics_evaluated: evaluated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel, sample_noise, scale_codeword, transmit, NoiseModel};
    use crate::constellation::ConstellationKind;
    use crate::rng::TrialStreams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn joint_metric(r: &ReceivedVector, h: &ChannelMatrix, p: PowerImbalance, w: &Codeword) -> f64 {
        let hx = h.apply(scale_codeword(w, p));
        (r.r[0] - hx[0]).norm_sqr() + (r.r[1] - hx[1]).norm_sqr()
    }

    #[test]
    fn noiseless_ml_recovers_every_codeword() {
        let streams = TrialStreams::new(11);
        for kind in [ConstellationKind::Qpsk, ConstellationKind::Qam16] {
            let con = Constellation::new(kind);
            for (t, w) in con.codewords().iter().enumerate() {
                let h = sample_channel(&mut streams.trial(t as u64));
                assert!(h.determinant().norm() > 1e-6);
                for alpha in [0.5, 0.9] {
                    let p = PowerImbalance::new(alpha).unwrap();
                    let r = transmit(&h, w, p, [c(0.0, 0.0); 2]);
                    let d = ml_detect(&r, &h, p, &con);
                    assert_eq!(d.codeword, *w);
                    assert_eq!(d.metrics_evaluated, con.size() * con.size());
                }
            }
        }
    }

    #[test]
    fn ml_tolerates_perturbation_below_half_min_distance() {
        let con = Constellation::new(ConstellationKind::Qpsk);
        let p = PowerImbalance::new(0.9).unwrap();
        let h = ChannelMatrix::identity();
        // min ||X - X'||^2 over the 16 candidates is 4 (1 - alpha) = 0.4
        let dmin2 = con
            .codewords()
            .iter()
            .flat_map(|a| con.codewords().into_iter().map(move |b| (*a, b)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| {
                let (x, y) = (scale_codeword(&a, p), scale_codeword(&b, p));
                (x[0] - y[0]).norm_sqr() + (x[1] - y[1]).norm_sqr()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((dmin2 - 0.4).abs() < 1e-12);
        let delta = [c(0.1, -0.12), c(-0.15, 0.1)];
        assert!(delta[0].norm_sqr() + delta[1].norm_sqr() < dmin2 / 4.0);
        for w in con.codewords() {
            let r = transmit(&h, &w, p, delta);
            assert_eq!(ml_detect(&r, &h, p, &con).codeword, w);
        }
    }

    #[test]
    fn ml_metric_is_the_minimum() {
        let streams = TrialStreams::new(5);
        let con = Constellation::new(ConstellationKind::Qam16);
        let p = PowerImbalance::new(0.75).unwrap();
        let nm = NoiseModel::from_ebn0_db(5.0).unwrap();
        for t in 0..50 {
            let mut rng = streams.trial(t);
            let h = sample_channel(&mut rng);
            let w = con.codeword(3, 12).unwrap();
            let r = transmit(&h, &w, p, sample_noise(&mut rng, &nm));
            let d = ml_detect(&r, &h, p, &con);
            for cand in con.codewords() {
                assert!(d.metric <= joint_metric(&r, &h, p, &cand) + 1e-12);
            }
        }
    }

    #[test]
    fn ml_ties_go_to_lowest_index() {
        let con = Constellation::new(ConstellationKind::Qpsk);
        // zero channel: every candidate has the same metric
        let r = ReceivedVector {
            r: [c(0.3, 0.1), c(-0.2, 0.5)],
        };
        let d = ml_detect(&r, &ChannelMatrix::zero(), PowerImbalance::BALANCED, &con);
        assert_eq!(d.codeword.enumeration_index(), 0);
        let d = sic_detect(&r, &ChannelMatrix::zero(), PowerImbalance::BALANCED, &con);
        assert_eq!(d.codeword.enumeration_index(), 0);
    }

    #[test]
    fn sic_exact_without_interference() {
        let con = Constellation::new(ConstellationKind::Qpsk);
        let h = ChannelMatrix::new(c(0.8, -0.3), c(0.0, 0.0), c(-0.4, 1.1), c(0.0, 0.0));
        let p = PowerImbalance::new(0.6).unwrap();
        for w in con.codewords() {
            let r = transmit(&h, &w, p, [c(0.0, 0.0); 2]);
            let d = sic_detect(&r, &h, p, &con);
            assert_eq!(d.codeword.index1, w.index1);
            assert_eq!(d.metrics_evaluated, 2 * con.size());
        }
    }

    #[test]
    fn sic_exact_with_orthogonal_columns() {
        let con = Constellation::new(ConstellationKind::Qpsk);
        // columns (1, j) and (j, 1) / sqrt 2 are orthogonal
        let s = 0.5f64.sqrt();
        let h = ChannelMatrix::new(c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0));
        let col1 = h.column(0);
        let col2 = h.column(1);
        let inner = col1[0].conj() * col2[0] + col1[1].conj() * col2[1];
        assert!(inner.norm() < 1e-15);
        for alpha in [0.5, 0.7, 0.9, 0.99] {
            let p = PowerImbalance::new(alpha).unwrap();
            for w in con.codewords() {
                let r = transmit(&h, &w, p, [c(0.0, 0.0); 2]);
                assert_eq!(sic_detect(&r, &h, p, &con).codeword, w, "alpha {alpha}");
            }
        }
    }

    #[test]
    fn ml_is_invariant_under_common_phase_rotation() {
        let streams = TrialStreams::new(77);
        let con = Constellation::new(ConstellationKind::Qpsk);
        let p = PowerImbalance::new(0.9).unwrap();
        let nm = NoiseModel::from_ebn0_db(3.0).unwrap();
        for t in 0..200u64 {
            let mut rng = streams.trial(t);
            let h = sample_channel(&mut rng);
            let w = con
                .codeword((t % 4) as usize, ((t / 4) % 4) as usize)
                .unwrap();
            let r = transmit(&h, &w, p, sample_noise(&mut rng, &nm));
            let theta = crate::rng::uniform_open0(&mut rng) * std::f64::consts::TAU;
            let a = ml_detect(&r, &h, p, &con);
            let b = ml_detect(&r.rotated(theta), &h.rotated(theta), p, &con);
            assert_eq!(a.codeword, b.codeword);
            assert!((a.metric - b.metric).abs() < 1e-9 * (1.0 + a.metric));
        }
    }
}
