//! CSV emitters and parsers behind the `pdnoma` command-line tool.
//!
//! Every file starts with a block of `#`-prefixed metadata lines (the run
//! manifest) followed by a CSV header and records. Real values are written
//! with 17 significant digits so that a replay can be compared byte for byte;
//! only the `# timestamp:` line differs between replays.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::bounds::{table1, table1_abep, union_bound_sweep, TABLE1_ALPHAS};
use crate::channel::{NoiseModel, PowerImbalance};
use crate::constellation::{Constellation, ConstellationKind};
use crate::rng::RNG_ALGORITHM;
use crate::sim::{ebn0_at_ber, BerCurve, PointStatus, SimConfig};
use crate::{Error, Result};

pub const SCHEMA_TABLE1: &str = "pdnoma.table1.v1";
pub const SCHEMA_BOUND: &str = "pdnoma.bound.v1";
pub const SCHEMA_BER: &str = "pdnoma.ber.v1";
pub const SCHEMA_CONSTELLATION: &str = "pdnoma.constellation.v1";

/// Environment variable overriding the default simulation seed.
pub const SEED_ENV: &str = "PDNOMA_SEED";
pub const DEFAULT_SEED: u64 = 20_230_901;

const TIMESTAMP_KEY: &str = "timestamp";

/// Provenance block written at the top of every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub schema: &'static str,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub rng_algorithm: Option<&'static str>,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(subcommand: &str, schema: &'static str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            schema,
            params: Vec::new(),
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
            rng_algorithm: None,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema: {}", self.schema);
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        let _ = writeln!(out, "# version: pdnoma {}", self.version);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# param {k}: {v}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed: {seed}");
        }
        if let Some(rng) = self.rng_algorithm {
            let _ = writeln!(out, "# rng: {rng}");
        }
        let _ = writeln!(out, "# {TIMESTAMP_KEY}: {}", self.timestamp);
        out
    }
}

/// Drops the timestamp line so two replays can be compared directly.
pub fn strip_timestamp(text: &str) -> String {
    let prefix = format!("# {TIMESTAMP_KEY}:");
    text.lines()
        .filter(|l| !l.starts_with(&prefix))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Formats a real with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    match (z.re, z.im) {
        (re, im) if im == 0.0 => format!("{re}"),
        (re, im) if re == 0.0 => format!("{im}j"),
        (re, im) if im < 0.0 => format!("{re}-{}j", -im),
        (re, im) => format!("{re}+{im}j"),
    }
}

/// Parses `a,b,c` lists, `start:stop:step` ranges (inclusive), or a mix of
/// both separated by commas.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{s}' in grid '{spec}'")))
        };
        match fields.as_slice() {
            [v] => out.push(num(v)?),
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(Error::Parse(format!("bad range '{part}'")));
                }
                let n = ((stop - start) / step + 1e-9).floor() as u64;
                for k in 0..=n {
                    // snap to 12 decimals so 0.5 + 7 * 0.01 reads back as 0.57
                    let v = start + k as f64 * step;
                    out.push((v * 1e12).round() / 1e12);
                }
            }
            _ => return Err(Error::Parse(format!("bad grid element '{part}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyGrid("grid"));
    }
    Ok(out)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish(header: String, w: csv::Writer<Vec<u8>>) -> Result<String> {
    let body = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    let body = String::from_utf8(body).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(header + &body)
}

/// QPSK PEP table at `n0` with the two bit-weighted ABEP totals as footer rows.
pub fn table1_csv(n0: f64, manifest: &RunManifest) -> Result<String> {
    let noise = NoiseModel::from_n0(n0)?;
    let rows = table1(noise.n0())?;
    let totals = table1_abep(&rows);
    let [a, b] = TABLE1_ALPHAS;
    let mut w = csv_writer();
    w.write_record([
        "event".to_string(),
        "u".into(),
        "v".into(),
        "n_bits".into(),
        format!("d2_alpha_{a}"),
        format!("d2_alpha_{b}"),
        format!("pep_alpha_{a}"),
        format!("pep_alpha_{b}"),
    ])?;
    for r in &rows {
        w.write_record([
            format!("E{}", r.event),
            fmt_complex(r.u),
            fmt_complex(r.v),
            r.n_bits.to_string(),
            fmt_real(r.d2[0]),
            fmt_real(r.d2[1]),
            fmt_real(r.pep[0]),
            fmt_real(r.pep[1]),
        ])?;
    }
    w.write_record([
        "ABEP_bound".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        fmt_real(totals[0]),
        fmt_real(totals[1]),
    ])?;
    finish(manifest.render(), w)
}

/// Union-bound sweep; the argmin over `alpha` per Eb/N0 is appended as
/// `# argmin` comment lines.
pub fn bound_csv(
    kind: ConstellationKind,
    alphas: &[f64],
    ebn0_grid_db: &[f64],
    manifest: &RunManifest,
) -> Result<String> {
    if alphas.is_empty() {
        return Err(Error::EmptyGrid("alpha"));
    }
    if ebn0_grid_db.is_empty() {
        return Err(Error::EmptyGrid("Eb/N0"));
    }
    for &a in alphas {
        PowerImbalance::new(a)?;
    }
    let c = Constellation::new(kind);
    let mut w = csv_writer();
    w.write_record(["alpha", "ebn0_db", "abep_bound"])?;
    let mut summary = String::new();
    for &e in ebn0_grid_db {
        let n0 = NoiseModel::from_ebn0_db(e)?.n0();
        let bounds = union_bound_sweep(&c, alphas, n0)?;
        for b in &bounds {
            w.write_record([fmt_real(b.alpha), fmt_real(e), fmt_real(b.bound)])?;
        }
        let best = bounds
            .iter()
            .min_by(|x, y| {
                x.bound
                    .total_cmp(&y.bound)
                    .then(x.alpha.total_cmp(&y.alpha))
            })
            .expect("alpha grid is non-empty");
        let _ = writeln!(
            summary,
            "# argmin ebn0_db={} alpha={} abep_bound={}",
            e,
            best.alpha,
            fmt_real(best.bound)
        );
    }
    Ok(finish(manifest.render(), w)? + &summary)
}

/// Manifest for a BER run, echoing the full simulation configuration.
pub fn ber_manifest(cfg: &SimConfig) -> RunManifest {
    let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let mut m = RunManifest::new("ber", SCHEMA_BER)
        .param("constellation", cfg.constellation)
        .param("detector", cfg.detector.name())
        .param("alpha_list", list(&cfg.alphas))
        .param("snr_grid_db", list(&cfg.ebn0_db))
        .param("noise_convention", cfg.noise_convention.name())
        .param("min_errors", cfg.min_bit_errors)
        .param("max_codewords", cfg.max_codewords)
        .param("chunk_size", cfg.chunk_size);
    m.seed = Some(cfg.seed);
    m.rng_algorithm = Some(RNG_ALGORITHM);
    m
}

pub fn ber_csv(curves: &[BerCurve], manifest: &RunManifest) -> Result<String> {
    let mut w = csv_writer();
    w.write_record([
        "alpha",
        "ebn0_db",
        "ber",
        "ci95",
        "bit_errors",
        "bits",
        "codewords",
        "point_seed",
        "status",
    ])?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                fmt_real(p.alpha),
                fmt_real(p.ebn0_db),
                fmt_real(p.ber),
                fmt_real(p.ci95_halfwidth),
                p.bit_errors.to_string(),
                p.bits_simulated.to_string(),
                p.codewords_used.to_string(),
                p.seed.to_string(),
                p.status.name().to_string(),
            ])?;
        }
    }
    finish(manifest.render(), w)
}

/// One row of a parsed BER file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerRecord {
    pub alpha: f64,
    pub ebn0_db: f64,
    pub ber: f64,
    pub ci95: f64,
    pub bit_errors: u64,
    pub bits: u64,
    pub status: PointStatus,
}

/// Parses a file written by [`ber_csv`], checking the schema line.
pub fn parse_ber_csv(text: &str) -> Result<Vec<BerRecord>> {
    let schema = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# schema: "))
        .ok_or_else(|| Error::Parse("missing '# schema:' line".into()))?;
    if schema.trim() != SCHEMA_BER {
        return Err(Error::Parse(format!(
            "expected schema {SCHEMA_BER}, found {}",
            schema.trim()
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing column '{name}'")))
    };
    let (ia, ie, ib, ic, ierr, ibits, istat) = (
        col("alpha")?,
        col("ebn0_db")?,
        col("ber")?,
        col("ci95")?,
        col("bit_errors")?,
        col("bits")?,
        col("status")?,
    );
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let real = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{}'", field(i))))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer '{}'", field(i))))
        };
        out.push(BerRecord {
            alpha: real(ia)?,
            ebn0_db: real(ie)?,
            ber: real(ib)?,
            ci95: real(ic)?,
            bit_errors: int(ierr)?,
            bits: int(ibits)?,
            status: field(istat).parse()?,
        });
    }
    Ok(out)
}

/// Groups parsed records into `(alpha, [(ebn0_db, ber)])` curves sorted by Eb/N0.
pub fn group_curves(records: &[BerRecord]) -> Vec<(f64, Vec<(f64, f64)>)> {
    let mut curves: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for r in records {
        match curves.iter_mut().find(|(a, _)| *a == r.alpha) {
            Some((_, pts)) => pts.push((r.ebn0_db, r.ber)),
            None => curves.push((r.alpha, vec![(r.ebn0_db, r.ber)])),
        }
    }
    for (_, pts) in curves.iter_mut() {
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    curves
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradationRow {
    pub alpha: f64,
    /// Crossing point, or `None` when the curve does not bracket the target.
    pub ebn0_db: Option<f64>,
    pub degradation_db: Option<f64>,
}

/// Per-curve Eb/N0 penalty at `target_ber` relative to `reference_alpha`.
pub fn degradation_table(
    records: &[BerRecord],
    reference_alpha: f64,
    target_ber: f64,
) -> Result<Vec<DegradationRow>> {
    let curves = group_curves(records);
    let reference = curves
        .iter()
        .find(|(a, _)| (*a - reference_alpha).abs() < 1e-12)
        .ok_or_else(|| Error::Config(format!("reference alpha {reference_alpha} not in input")))?;
    let reference_ebn0 = ebn0_at_ber(&reference.1, target_ber)?;
    curves
        .iter()
        .map(|(alpha, pts)| match ebn0_at_ber(pts, target_ber) {
            Ok(e) => Ok(DegradationRow {
                alpha: *alpha,
                ebn0_db: Some(e),
                degradation_db: Some(e - reference_ebn0),
            }),
            Err(Error::InsufficientRange { .. }) => Ok(DegradationRow {
                alpha: *alpha,
                ebn0_db: None,
                degradation_db: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

pub fn render_degradation(
    rows: &[DegradationRow],
    reference_alpha: f64,
    target_ber: f64,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "SNR degradation at BER {target_ber:e} relative to alpha = {reference_alpha}"
    );
    let _ = writeln!(
        out,
        "{:>8}  {:>14}  {:>16}",
        "alpha", "Eb/N0 [dB]", "degradation [dB]"
    );
    for r in rows {
        match (r.ebn0_db, r.degradation_db) {
            (Some(e), Some(d)) => {
                let _ = writeln!(out, "{:>8}  {:>14.2}  {:>16.2}", r.alpha, e, d);
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{:>8}  {:>14}  {:>16}",
                    r.alpha, "-", "insufficient range"
                );
            }
        }
    }
    out
}

/// Point table of a constellation: `index, re, im, label`.
pub fn constellation_csv(kind: ConstellationKind, manifest: &RunManifest) -> Result<String> {
    let c = Constellation::new(kind);
    let mut w = csv_writer();
    w.write_record(["index", "re", "im", "label"])?;
    for (i, p) in c.points().iter().enumerate() {
        w.write_record([
            i.to_string(),
            fmt_real(p.re),
            fmt_real(p.im),
            c.label_string(i),
        ])?;
    }
    finish(manifest.render(), w)
}
