//! Tabulated absorption spectra and sub-channel identification.
//!
//! Spectra are ingested from a small CSV format:
//!
//! ```text
//! # humidity_pct: 60
//! # temperature_c: 25
//! # source: line-by-line model, 1 atm
//! frequency_ghz,k_per_m
//! 100,0.00012
//! 101,0.00013
//! ```
//!
//! Comment lines start with `#`; the recognised keys are `humidity_pct`,
//! `temperature_c` and `source`. Frequencies must be strictly increasing and
//! coefficients non-negative. Temperature is carried as metadata only.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkbudget::{absorption_loss, validate_positive};
use crate::scalar::Scalar;

pub const CSV_HEADER: &str = "frequency_ghz,k_per_m";

/// Sub-channels narrower than this are dropped unless the caller overrides it.
pub const DEFAULT_MIN_WIDTH_HZ: f64 = 1e9;

const HZ_PER_GHZ: f64 = 1e9;

/// Medium absorption coefficient sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionSpectrum<T> {
    // Kept exactly as written so that save/load is lossless.
    frequency_ghz: Vec<T>,
    frequency_hz: Vec<T>,
    absorption_per_m: Vec<T>,
    humidity_pct: T,
    temperature_c: T,
    source_label: String,
}

/// A contiguous usable band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SubChannel<T> {
    pub f_start_hz: T,
    pub f_end_hz: T,
    pub f_center_hz: T,
    pub bandwidth_hz: T,
}

impl<T: Scalar> SubChannel<T> {
    pub fn new(f_start_hz: T, f_end_hz: T) -> Self {
        SubChannel {
            f_start_hz,
            f_end_hz,
            f_center_hz: (f_start_hz + f_end_hz) / T::lit(2.0),
            bandwidth_hz: f_end_hz - f_start_hz,
        }
    }
}

/// One line of a channel table: a sub-channel and the absorption at its
/// center frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ChannelRow<T> {
    pub subchannel: SubChannel<T>,
    pub absorption_per_m: T,
}

#[derive(Default)]
struct Metadata {
    humidity_pct: Option<f64>,
    temperature_c: Option<f64>,
    source: Option<String>,
}

impl<T: Scalar> AbsorptionSpectrum<T> {
    /// Builds a spectrum from `(frequency_ghz, k_per_m)` samples.
    pub fn from_samples_ghz(
        samples: &[(T, T)],
        humidity_pct: T,
        temperature_c: T,
        source_label: impl Into<String>,
    ) -> Result<Self> {
        let mut spectrum = AbsorptionSpectrum {
            frequency_ghz: Vec::with_capacity(samples.len()),
            frequency_hz: Vec::with_capacity(samples.len()),
            absorption_per_m: Vec::with_capacity(samples.len()),
            humidity_pct,
            temperature_c,
            source_label: source_label.into(),
        };
        for (i, &(f, k)) in samples.iter().enumerate() {
            spectrum.push(f, k).map_err(|message| Error::Parse {
                line: i + 1,
                message,
            })?;
        }
        spectrum.finish()
    }

    fn push(&mut self, f_ghz: T, k: T) -> Result<(), String> {
        if !(f_ghz > T::zero()) || !f_ghz.is_finite() {
            return Err(format!(
                "frequency must be positive and finite, got {f_ghz}"
            ));
        }
        if !(k >= T::zero()) || !k.is_finite() {
            return Err(format!("negative or non-finite coefficient {k}"));
        }
        if let Some(&last) = self.frequency_ghz.last() {
            if f_ghz <= last {
                return Err(format!("non-monotone grid: {f_ghz} GHz follows {last} GHz"));
            }
        }
        self.frequency_ghz.push(f_ghz);
        self.frequency_hz.push(f_ghz * T::lit(HZ_PER_GHZ));
        self.absorption_per_m.push(k);
        Ok(())
    }

    fn finish(self) -> Result<Self> {
        if self.frequency_ghz.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "spectrum has no samples".into(),
            });
        }
        if !(self.humidity_pct >= T::zero() && self.humidity_pct <= T::lit(100.0)) {
            return Err(Error::invalid(
                "humidity_pct",
                format!("must lie in [0, 100], got {}", self.humidity_pct),
            ));
        }
        if !self.temperature_c.is_finite() {
            return Err(Error::invalid("temperature_c", "must be finite"));
        }
        Ok(self)
    }

    /// Reads the CSV format; `humidity_pct` and `temperature_c` are
    /// authoritative and override any metadata comments.
    pub fn load(source: impl Read, humidity_pct: T, temperature_c: T) -> Result<Self> {
        let (samples, meta) = parse_csv::<T>(source)?;
        Self::assemble(samples, humidity_pct, temperature_c, meta.source)
    }

    /// Reads the CSV format, taking humidity and temperature from the
    /// metadata comments and falling back to the given defaults.
    pub fn load_with_metadata(
        source: impl Read,
        default_humidity_pct: T,
        default_temperature_c: T,
    ) -> Result<Self> {
        let (samples, meta) = parse_csv::<T>(source)?;
        let humidity = meta
            .humidity_pct
            .map(T::lit)
            .unwrap_or(default_humidity_pct);
        let temperature = meta
            .temperature_c
            .map(T::lit)
            .unwrap_or(default_temperature_c);
        Self::assemble(samples, humidity, temperature, meta.source)
    }

    fn assemble(
        samples: Vec<(usize, T, T)>,
        humidity_pct: T,
        temperature_c: T,
        source: Option<String>,
    ) -> Result<Self> {
        let mut spectrum = AbsorptionSpectrum {
            frequency_ghz: Vec::with_capacity(samples.len()),
            frequency_hz: Vec::with_capacity(samples.len()),
            absorption_per_m: Vec::with_capacity(samples.len()),
            humidity_pct,
            temperature_c,
            source_label: source.unwrap_or_default(),
        };
        for (line, f, k) in samples {
            spectrum
                .push(f, k)
                .map_err(|message| Error::Parse { line, message })?;
        }
        spectrum.finish()
    }

    /// Writes the CSV format, metadata comments included.
    pub fn save(&self, mut sink: impl Write) -> Result<()> {
        writeln!(sink, "# humidity_pct: {}", self.humidity_pct)?;
        writeln!(sink, "# temperature_c: {}", self.temperature_c)?;
        if !self.source_label.is_empty() {
            writeln!(sink, "# source: {}", self.source_label)?;
        }
        writeln!(sink, "{CSV_HEADER}")?;
        for (f, k) in self.frequency_ghz.iter().zip(&self.absorption_per_m) {
            writeln!(sink, "{f},{k}")?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.frequency_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequency_hz.is_empty()
    }

    /// Lowest and highest tabulated frequency, Hz.
    pub fn band_hz(&self) -> (T, T) {
        (self.frequency_hz[0], self.frequency_hz[self.len() - 1])
    }

    pub fn humidity_pct(&self) -> T {
        self.humidity_pct
    }

    pub fn temperature_c(&self) -> T {
        self.temperature_c
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// `(frequency_hz, k_per_m)` samples.
    pub fn samples(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.frequency_hz
            .iter()
            .copied()
            .zip(self.absorption_per_m.iter().copied())
    }

    pub fn contains(&self, frequency_hz: T) -> bool {
        let (low, high) = self.band_hz();
        frequency_hz >= low && frequency_hz <= high
    }

    /// Linearly interpolated absorption coefficient at `frequency_hz`.
    pub fn absorption_at(&self, frequency_hz: T) -> Result<T> {
        if !self.contains(frequency_hz) {
            let (low, high) = self.band_hz();
            return Err(Error::OutOfRange {
                frequency_hz: frequency_hz.as_f64(),
                low_hz: low.as_f64(),
                high_hz: high.as_f64(),
            });
        }
        // first index with f > query; the query lies in [f[i-1], f[i])
        let upper = self.frequency_hz.partition_point(|&f| f <= frequency_hz);
        let lower = upper - 1;
        if upper == self.len() || self.frequency_hz[lower] == frequency_hz {
            return Ok(self.absorption_per_m[lower]);
        }
        let (f0, f1) = (self.frequency_hz[lower], self.frequency_hz[upper]);
        let (k0, k1) = (self.absorption_per_m[lower], self.absorption_per_m[upper]);
        let t = (frequency_hz - f0) / (f1 - f0);
        Ok(k0 + t * (k1 - k0))
    }

    /// Maximal runs of grid points whose absorption loss over `distance_m`
    /// stays within `cutoff_db`, keeping runs at least `min_width_hz` wide.
    pub fn scan_subchannels(
        &self,
        distance_m: T,
        cutoff_db: T,
        min_width_hz: T,
    ) -> Result<Vec<SubChannel<T>>> {
        validate_positive("distance_m", distance_m)?;
        if !(cutoff_db >= T::zero()) || !cutoff_db.is_finite() {
            return Err(Error::invalid(
                "cutoff_db",
                "must be non-negative and finite",
            ));
        }
        if !(min_width_hz >= T::zero()) || !min_width_hz.is_finite() {
            return Err(Error::invalid(
                "min_width_hz",
                "must be non-negative and finite",
            ));
        }
        let usable = self
            .absorption_per_m
            .iter()
            .map(|&k| absorption_loss(k, distance_m).map(|loss| loss <= cutoff_db))
            .collect::<Result<Vec<bool>>>()?;

        let mut channels = Vec::new();
        let mut run_start: Option<usize> = None;
        for (i, &ok) in usable.iter().enumerate() {
            match (ok, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(start)) => {
                    self.close_run(start, i - 1, min_width_hz, &mut channels);
                    run_start = None;
                }
                _ => {}
            }
        }
        if let Some(start) = run_start {
            self.close_run(start, self.len() - 1, min_width_hz, &mut channels);
        }
        Ok(channels)
    }

    fn close_run(&self, start: usize, end: usize, min_width_hz: T, out: &mut Vec<SubChannel<T>>) {
        let channel = SubChannel::new(self.frequency_hz[start], self.frequency_hz[end]);
        if channel.bandwidth_hz > T::zero() && channel.bandwidth_hz >= min_width_hz {
            out.push(channel);
        }
    }

    /// Sub-channels together with the interpolated absorption at their centers.
    pub fn channel_table(
        &self,
        distance_m: T,
        cutoff_db: T,
        min_width_hz: T,
    ) -> Result<Vec<ChannelRow<T>>> {
        self.scan_subchannels(distance_m, cutoff_db, min_width_hz)?
            .into_iter()
            .map(|subchannel| {
                Ok(ChannelRow {
                    subchannel,
                    absorption_per_m: self.absorption_at(subchannel.f_center_hz)?,
                })
            })
            .collect()
    }
}

/// Sum of sub-channel bandwidths, Hz.
pub fn usable_bandwidth<T: Scalar>(channels: &[SubChannel<T>]) -> T {
    channels
        .iter()
        .fold(T::zero(), |acc, c| acc + c.bandwidth_hz)
}

/// Keeps the widest sub-channel whose center falls in each `block_hz` wide
/// block, in ascending frequency order.
pub fn widest_per_block<T: Scalar>(rows: &[ChannelRow<T>], block_hz: T) -> Vec<ChannelRow<T>> {
    let mut best: Vec<(i64, ChannelRow<T>)> = Vec::new();
    for row in rows {
        let block = (row.subchannel.f_center_hz / block_hz)
            .floor()
            .to_i64()
            .unwrap_or(i64::MAX);
        match best.iter_mut().find(|(b, _)| *b == block) {
            Some((_, current)) if row.subchannel.bandwidth_hz > current.subchannel.bandwidth_hz => {
                *current = *row
            }
            Some(_) => {}
            None => best.push((block, *row)),
        }
    }
    best.sort_by_key(|(b, _)| *b);
    best.into_iter().map(|(_, row)| row).collect()
}

/// Numbered `(line, frequency_ghz, k)` rows.
type Rows<T> = Vec<(usize, T, T)>;

fn parse_csv<T: Scalar>(source: impl Read) -> Result<(Rows<T>, Metadata)> {
    let reader = BufReader::new(source);
    let mut meta = Metadata::default();
    let mut samples = Vec::new();
    let mut seen_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            parse_comment(comment, line_no, &mut meta)?;
            continue;
        }
        if !seen_header {
            if trimmed != CSV_HEADER {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header `{CSV_HEADER}`, found `{trimmed}`"),
                });
            }
            seen_header = true;
            continue;
        }
        let mut fields = trimmed.split(',');
        let (f, k) = match (fields.next(), fields.next(), fields.next()) {
            (Some(f), Some(k), None) => (f.trim(), k.trim()),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 2 fields, found `{trimmed}`"),
                })
            }
        };
        let parse = |field: &str, name: &str| -> Result<T> {
            field.parse::<f64>().map(T::lit).map_err(|_| Error::Parse {
                line: line_no,
                message: format!("malformed {name} `{field}`"),
            })
        };
        samples.push((line_no, parse(f, "frequency")?, parse(k, "coefficient")?));
    }
    if !seen_header {
        return Err(Error::Parse {
            line: 0,
            message: format!("missing header `{CSV_HEADER}`"),
        });
    }
    Ok((samples, meta))
}

fn parse_comment(comment: &str, line: usize, meta: &mut Metadata) -> Result<()> {
    let Some((key, value)) = comment.split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    let number = || {
        value.parse::<f64>().map_err(|_| Error::Parse {
            line,
            message: format!("malformed metadata value `{value}`"),
        })
    };
    match key.trim() {
        "humidity_pct" => meta.humidity_pct = Some(number()?),
        "temperature_c" => meta.temperature_c = Some(number()?),
        "source" => meta.source = Some(value.to_string()),
        _ => {}
    }
    Ok(())
}

/// Spectra of one medium at several humidities.
///
/// Queries between two tabulated humidities interpolate the coefficient
/// linearly in humidity.
#[derive(Debug, Clone, Default)]
pub struct SpectrumSet<T> {
    spectra: Vec<AbsorptionSpectrum<T>>,
}

impl<T: Scalar> SpectrumSet<T> {
    pub fn new(mut spectra: Vec<AbsorptionSpectrum<T>>) -> Result<Self> {
        if spectra.is_empty() {
            return Err(Error::invalid(
                "spectra",
                "at least one spectrum is required",
            ));
        }
        spectra.sort_by(|a, b| {
            a.humidity_pct
                .partial_cmp(&b.humidity_pct)
                .expect("humidity validated finite")
        });
        if spectra
            .windows(2)
            .any(|w| w[0].humidity_pct == w[1].humidity_pct)
        {
            return Err(Error::invalid(
                "spectra",
                "two spectra share the same humidity",
            ));
        }
        Ok(SpectrumSet { spectra })
    }

    pub fn single(spectrum: AbsorptionSpectrum<T>) -> Self {
        SpectrumSet {
            spectra: vec![spectrum],
        }
    }

    pub fn spectra(&self) -> &[AbsorptionSpectrum<T>] {
        &self.spectra
    }

    /// Tabulated humidity range, percent.
    pub fn humidity_range(&self) -> (T, T) {
        (
            self.spectra[0].humidity_pct,
            self.spectra[self.spectra.len() - 1].humidity_pct,
        )
    }

    pub fn absorption_at(&self, frequency_hz: T, humidity_pct: T) -> Result<T> {
        let upper = self
            .spectra
            .partition_point(|s| s.humidity_pct < humidity_pct);
        if let Some(exact) = self
            .spectra
            .get(upper)
            .filter(|s| s.humidity_pct == humidity_pct)
        {
            return exact.absorption_at(frequency_hz);
        }
        if upper == 0 || upper == self.spectra.len() {
            let (low, high) = self.humidity_range();
            return Err(Error::invalid(
                "humidity_pct",
                format!("{humidity_pct}% is outside the tabulated range [{low}, {high}]%"),
            ));
        }
        let (lo, hi) = (&self.spectra[upper - 1], &self.spectra[upper]);
        let k0 = lo.absorption_at(frequency_hz)?;
        let k1 = hi.absorption_at(frequency_hz)?;
        let t = (humidity_pct - lo.humidity_pct) / (hi.humidity_pct - lo.humidity_pct);
        Ok(k0 + t * (k1 - k0))
    }

    /// The spectrum tabulated at exactly `humidity_pct`, if any.
    pub fn at_humidity(&self, humidity_pct: T) -> Option<&AbsorptionSpectrum<T>> {
        self.spectra.iter().find(|s| s.humidity_pct == humidity_pct)
    }
}
