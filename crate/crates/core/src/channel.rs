//! Two-user uplink model `R = H X + W`.
//!
//! `X = (sqrt(alpha) x1, sqrt(1 - alpha) x2)`, `H` is a 2x2 matrix of i.i.d.
//! unit-variance Rayleigh gains redrawn for every codeword, and `W` holds two
//! independent complex AWGN samples. With unit bit energy, `Eb/N0 = 1/N0`.
//!
//! Two noise conventions are supported (see [`NoiseConvention`]). The PEP
//! bound is stated for `N0` as the total variance per complex sample; BER
//! curves plotted against Eb/N0 are commonly produced with `N0` per real
//! dimension instead, which places 3 dB more noise at the same axis value.

use num_complex::Complex64;
use rand::RngCore;

use crate::constellation::Codeword;
use crate::rng::complex_normal;
use crate::{Error, Result};

/// Fraction of the total transmit power assigned to user 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerImbalance(f64);

impl PowerImbalance {
    pub const BALANCED: PowerImbalance = PowerImbalance(0.5);

    /// Accepts `alpha` in `[1/2, 1)`.
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.5..1.0).contains(&alpha) {
            Ok(PowerImbalance(alpha))
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    /// Amplitude gains `(sqrt(alpha), sqrt(1 - alpha))`.
    pub fn amplitudes(self) -> (f64, f64) {
        (self.0.sqrt(), (1.0 - self.0).sqrt())
    }

    /// Received power ratio between the users in dB.
    pub fn imbalance_db(self) -> f64 {
        10.0 * (self.0 / (1.0 - self.0)).log10()
    }
}

/// `h[i][j]` is the gain from user `j` to receive antenna `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMatrix {
    pub h: [[Complex64; 2]; 2],
}

impl ChannelMatrix {
    pub fn new(h11: Complex64, h12: Complex64, h21: Complex64, h22: Complex64) -> Self {
        ChannelMatrix {
            h: [[h11, h12], [h21, h22]],
        }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one)
    }

    pub fn zero() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(zero, zero, zero, zero)
    }

    pub fn column(&self, j: usize) -> [Complex64; 2] {
        [self.h[0][j], self.h[1][j]]
    }

    pub fn apply(&self, x: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.h[0][0] * x[0] + self.h[0][1] * x[1],
            self.h[1][0] * x[0] + self.h[1][1] * x[1],
        ]
    }

    pub fn determinant(&self) -> Complex64 {
        self.h[0][0] * self.h[1][1] - self.h[0][1] * self.h[1][0]
    }

    pub fn rotated(&self, phase: f64) -> Self {
        let r = Complex64::from_polar(1.0, phase);
        let mut out = *self;
        for row in out.h.iter_mut() {
            for g in row.iter_mut() {
                *g *= r;
            }
        }
        out
    }
}

/// How `N0` maps onto the variance of a complex noise sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseConvention {
    /// `w ~ CN(0, N0)`: `N0 / 2` per real dimension.
    #[default]
    PerComplexSample,
    /// `N0` per real dimension: `w ~ CN(0, 2 N0)`.
    PerRealDimension,
}

impl NoiseConvention {
    pub fn name(self) -> &'static str {
        match self {
            NoiseConvention::PerComplexSample => "complex",
            NoiseConvention::PerRealDimension => "real-dim",
        }
    }
}

impl std::str::FromStr for NoiseConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(NoiseConvention::PerComplexSample),
            "real-dim" => Ok(NoiseConvention::PerRealDimension),
            other => Err(Error::Config(format!("unknown noise convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    n0: f64,
    ebn0_db: f64,
    convention: NoiseConvention,
}

impl NoiseModel {
    pub fn from_ebn0_db(ebn0_db: f64) -> Result<Self> {
        Self::from_n0(10f64.powf(-ebn0_db / 10.0))
    }

    pub fn from_n0(n0: f64) -> Result<Self> {
        if !(n0 > 0.0 && n0.is_finite()) {
            return Err(Error::InvalidNoise(n0));
        }
        Ok(NoiseModel {
            n0,
            ebn0_db: -10.0 * n0.log10(),
            convention: NoiseConvention::PerComplexSample,
        })
    }

    pub fn with_convention(mut self, convention: NoiseConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn convention(&self) -> NoiseConvention {
        self.convention
    }

    /// Total variance of one complex noise sample.
    pub fn complex_variance(&self) -> f64 {
        match self.convention {
            NoiseConvention::PerComplexSample => self.n0,
            NoiseConvention::PerRealDimension => 2.0 * self.n0,
        }
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }
}

/// Samples `(r1, r2)` at the two receive antennas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceivedVector {
    pub r: [Complex64; 2],
}

impl ReceivedVector {
    pub fn rotated(&self, phase: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phase);
        ReceivedVector {
            r: [self.r[0] * rot, self.r[1] * rot],
        }
    }
}

/// Transmit vector `(sqrt(alpha) x1, sqrt(1 - alpha) x2)`.
pub fn scale_codeword(w: &Codeword, p: PowerImbalance) -> [Complex64; 2] {
    let (a1, a2) = p.amplitudes();
    [w.x1 * a1, w.x2 * a2]
}

/// Draws four i.i.d. CN(0, 1) channel gains.
pub fn sample_channel<R: RngCore + ?Sized>(rng: &mut R) -> ChannelMatrix {
    let h11 = complex_normal(rng);
    let h12 = complex_normal(rng);
    let h21 = complex_normal(rng);
    let h22 = complex_normal(rng);
    ChannelMatrix::new(h11, h12, h21, h22)
}

/// Draws two i.i.d. circularly-symmetric complex Gaussian noise samples.
pub fn sample_noise<R: RngCore + ?Sized>(rng: &mut R, nm: &NoiseModel) -> [Complex64; 2] {
    let sd = nm.complex_variance().sqrt();
    [complex_normal(rng) * sd, complex_normal(rng) * sd]
}

/// `r_i = sqrt(alpha) h_i1 x1 + sqrt(1 - alpha) h_i2 x2 + w_i`.
pub fn transmit(
    h: &ChannelMatrix,
    w: &Codeword,
    p: PowerImbalance,
    noise: [Complex64; 2],
) -> ReceivedVector {
    let hx = h.apply(scale_codeword(w, p));
    ReceivedVector {
        r: [hx[0] + noise[0], hx[1] + noise[1]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{Constellation, ConstellationKind};
    use crate::rng::TrialStreams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn alpha_range_is_enforced() {
        assert!(PowerImbalance::new(0.5).is_ok());
        assert!(PowerImbalance::new(0.99).is_ok());
        assert!(PowerImbalance::new(0.49).is_err());
        assert!(PowerImbalance::new(1.0).is_err());
        assert!(PowerImbalance::new(f64::NAN).is_err());
    }

    #[test]
    fn imbalance_in_db() {
        let p = PowerImbalance::new(0.9).unwrap();
        assert!((p.imbalance_db() - 9.542).abs() < 1e-3);
        assert_eq!(PowerImbalance::BALANCED.imbalance_db(), 0.0);
    }

    #[test]
    fn balanced_scaling_of_one_plus_j() {
        let q = Constellation::new(ConstellationKind::Qpsk);
        let w = q.codeword(0, 0).unwrap();
        let x = scale_codeword(&w, PowerImbalance::BALANCED);
        let s = 0.5f64.sqrt();
        assert_eq!(x, [c(s, s), c(s, s)]);
        let energy = x[0].norm_sqr() + x[1].norm_sqr();
        assert!((energy - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mean_transmit_energy_is_independent_of_alpha() {
        for kind in [ConstellationKind::Qpsk, ConstellationKind::Qam16] {
            let con = Constellation::new(kind);
            for alpha in [0.5, 0.7, 0.9, 0.99] {
                let p = PowerImbalance::new(alpha).unwrap();
                let words = con.codewords();
                let mean = words
                    .iter()
                    .map(|w| {
                        let x = scale_codeword(w, p);
                        x[0].norm_sqr() + x[1].norm_sqr()
                    })
                    .sum::<f64>()
                    / words.len() as f64;
                assert!((mean - con.bits_per_symbol() as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_symbol_error_distance_is_four_alpha() {
        let q = Constellation::new(ConstellationKind::Qpsk);
        let p = PowerImbalance::new(0.9).unwrap();
        let w = q.codeword(0, 0).unwrap();
        // -1 + j has label 10
        let w_hat = q.codeword(2, 0).unwrap();
        let (x, y) = (scale_codeword(&w, p), scale_codeword(&w_hat, p));
        let d2 = (x[0] - y[0]).norm_sqr() + (x[1] - y[1]).norm_sqr();
        assert!((d2 - 3.6).abs() < 1e-12);
    }

    #[test]
    fn twenty_db_is_n0_one_hundredth() {
        let nm = NoiseModel::from_ebn0_db(20.0).unwrap();
        assert!((nm.n0() - 0.01).abs() < 1e-15);
        assert!((NoiseModel::from_n0(0.01).unwrap().ebn0_db() - 20.0).abs() < 1e-12);
        assert!(NoiseModel::from_n0(0.0).is_err());
        assert!(NoiseModel::from_n0(-1.0).is_err());
    }

    #[test]
    fn channel_draw_replays_for_a_fixed_stream() {
        let streams = TrialStreams::new(99);
        let a = sample_channel(&mut streams.trial(5));
        let b = sample_channel(&mut streams.trial(5));
        assert_eq!(a, b);
        assert_ne!(a, sample_channel(&mut streams.trial(6)));
    }

    #[test]
    fn noise_variance_matches_n0() {
        let nm = NoiseModel::from_n0(0.01).unwrap();
        let mut rng = TrialStreams::new(3).trial(0);
        let n = 1_000_000;
        let mut acc = 0.0;
        let mut re2 = 0.0;
        for _ in 0..n {
            let w = sample_noise(&mut rng, &nm);
            acc += w[0].norm_sqr();
            re2 += w[0].re * w[0].re;
        }
        let var = acc / n as f64;
        assert!((var / 0.01 - 1.0).abs() < 0.01, "{var}");
        assert!(((re2 / n as f64) / 0.005 - 1.0).abs() < 0.01);
    }

    #[test]
    fn per_real_dimension_doubles_the_variance() {
        let nm = NoiseModel::from_n0(0.01)
            .unwrap()
            .with_convention(NoiseConvention::PerRealDimension);
        assert_eq!(nm.complex_variance(), 0.02);
        let mut rng = TrialStreams::new(4).trial(0);
        let n = 400_000;
        let re2: f64 = (0..n)
            .map(|_| sample_noise(&mut rng, &nm)[1].re.powi(2))
            .sum();
        assert!(((re2 / n as f64) / 0.01 - 1.0).abs() < 0.02);
    }

    #[test]
    fn identity_channel_without_noise_returns_x() {
        let q = Constellation::new(ConstellationKind::Qpsk);
        let w = q.codeword(1, 2).unwrap();
        let zero = [c(0.0, 0.0); 2];
        let r = transmit(
            &ChannelMatrix::identity(),
            &w,
            PowerImbalance::BALANCED,
            zero,
        );
        assert_eq!(r.r, scale_codeword(&w, PowerImbalance::BALANCED));
    }

    #[test]
    fn noiseless_transmit_matches_matrix_vector_expansion() {
        let h = ChannelMatrix::new(c(0.3, -1.2), c(-0.7, 0.4), c(1.1, 0.25), c(0.05, -0.9));
        let q = Constellation::new(ConstellationKind::Qam16);
        let p = PowerImbalance::new(0.8).unwrap();
        let (a1, a2) = (0.8f64.sqrt(), 0.2f64.sqrt());
        for w in q.codewords() {
            let r = transmit(&h, &w, p, [c(0.0, 0.0); 2]);
            for i in 0..2 {
                // real-arithmetic expansion
                let (x1, x2) = (w.x1, w.x2);
                let g1 = h.h[i][0];
                let g2 = h.h[i][1];
                let re =
                    a1 * (g1.re * x1.re - g1.im * x1.im) + a2 * (g2.re * x2.re - g2.im * x2.im);
                let im =
                    a1 * (g1.re * x1.im + g1.im * x1.re) + a2 * (g2.re * x2.im + g2.im * x2.re);
                assert!((r.r[i].re - re).abs() < 1e-12);
                assert!((r.r[i].im - im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_channel_passes_only_noise() {
        let q = Constellation::new(ConstellationKind::Qpsk);
        let noise = [c(0.1, -0.2), c(0.3, 0.4)];
        let r = transmit(
            &ChannelMatrix::zero(),
            &q.codeword(3, 1).unwrap(),
            PowerImbalance::BALANCED,
            noise,
        );
        assert_eq!(r.r, noise);
    }

    #[test]
    fn transmit_is_linear_in_noise() {
        let q = Constellation::new(ConstellationKind::Qpsk);
        let h = ChannelMatrix::new(c(0.3, -1.2), c(-0.7, 0.4), c(1.1, 0.25), c(0.05, -0.9));
        let w = q.codeword(2, 1).unwrap();
        let p = PowerImbalance::new(0.7).unwrap();
        let n1 = [c(0.1, 0.2), c(-0.3, 0.05)];
        let clean = transmit(&h, &w, p, [c(0.0, 0.0); 2]);
        let noisy = transmit(&h, &w, p, n1);
        for i in 0..2 {
            assert!((noisy.r[i] - clean.r[i] - n1[i]).norm() < 1e-15);
        }
    }
}
