//! Writes the bundled absorption fixtures.
//!
//! `bands_rho60.csv` holds flat bands whose coefficients reproduce the
//! reference required-power row at 20 degrees; `synthetic_rho{60,80}.csv`
//! are smooth continuum-plus-lines spectra.
//!
//!     cargo run -p thzplan --example synth_spectrum -- crates/core/fixtures

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use thzplan::linkbudget::{linear_to_db, reference_link};
use thzplan::sweep::REFERENCE_CARRIERS_HZ;
use thzplan::AbsorptionSpectrum;

const BANDWIDTH_GHZ: [f64; 10] = [
    447.0, 169.0, 82.0, 137.0, 113.0, 126.0, 120.0, 246.0, 217.0, 230.0,
];
const REQUIRED_DB: [f64; 10] = [
    -50.73, -33.42, -19.45, -14.23, 2.06, 10.85, 22.84, 28.12, 54.52, 67.56,
];
const BLOCKED: f64 = 50.0;

const LINES: [(f64, f64, f64); 12] = [
    // (centre THz, peak 1/m, half width THz)
    (0.557, 8.0, 0.012),
    (0.752, 6.0, 0.012),
    (1.097, 10.0, 0.015),
    (1.717, 12.0, 0.015),
    (2.164, 9.0, 0.02),
    (2.96, 14.0, 0.02),
    (4.0, 16.0, 0.025),
    (5.3, 18.0, 0.025),
    (6.1, 20.0, 0.03),
    (6.9, 22.0, 0.03),
    (8.0, 25.0, 0.03),
    (9.2, 28.0, 0.03),
];

/// Coefficients that lift the reference-link required power by the
/// reference amounts once spreading loss is accounted for.
fn band_coefficients() -> Vec<f64> {
    let reference = reference_link::<f64>();
    let span = 10.0 * std::f64::consts::E.log10() * reference.distance_m;
    REFERENCE_CARRIERS_HZ
        .iter()
        .zip(REQUIRED_DB)
        .map(|(&f, p)| {
            let spreading = 2.0 * linear_to_db(f / reference.carrier_hz);
            reference.absorption_per_m + (p - REQUIRED_DB[0] - spreading) / span
        })
        .collect()
}

fn band_samples() -> Vec<(f64, f64)> {
    let mut samples = vec![(90.0, BLOCKED)];
    for ((&f, bw), k) in REFERENCE_CARRIERS_HZ
        .iter()
        .zip(BANDWIDTH_GHZ)
        .zip(band_coefficients())
    {
        let centre = f / 1e9;
        let (lo, hi) = (centre - bw / 2.0, centre + bw / 2.0);
        samples.push((lo - 1.0, BLOCKED));
        samples.push((lo, k));
        samples.push((centre, k));
        samples.push((hi, k));
        samples.push((hi + 1.0, BLOCKED));
    }
    samples.push((10_000.0, BLOCKED));
    samples.retain(|&(f, _)| f >= 90.0);
    samples.dedup_by(|a, b| a.0 <= b.0);
    samples
}

fn synthetic(f_thz: f64, humidity_pct: f64) -> f64 {
    let continuum = 0.02 * f_thz.powf(1.6);
    let lines: f64 = LINES
        .iter()
        .map(|&(c, peak, w)| peak * w * w / ((f_thz - c).powi(2) + w * w))
        .sum();
    (continuum + lines) * humidity_pct / 60.0
}

fn write(dir: &Path, name: &str, spectrum: &AbsorptionSpectrum<f64>) -> std::io::Result<()> {
    let path = dir.join(name);
    spectrum
        .save(BufWriter::new(File::create(&path)?))
        .map_err(std::io::Error::other)?;
    println!("{} ({} rows)", path.display(), spectrum.len());
    Ok(())
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "crates/core/fixtures".into()),
    );
    let bands = AbsorptionSpectrum::from_samples_ghz(
        &band_samples(),
        60.0,
        25.0,
        "back-solved bands",
    )
    .map_err(std::io::Error::other)?;
    write(&dir, "bands_rho60.csv", &bands)?;
    for humidity in [60.0, 80.0] {
        let samples: Vec<(f64, f64)> = (0..=1980)
            .map(|i| {
                let ghz = 100.0 + 5.0 * i as f64;
                (ghz, synthetic(ghz / 1e3, humidity))
            })
            .collect();
        let spectrum =
            AbsorptionSpectrum::from_samples_ghz(&samples, humidity, 25.0, "synthetic continuum")
                .map_err(std::io::Error::other)?;
        write(&dir, &format!("synthetic_rho{humidity}.csv"), &spectrum)?;
    }
    Ok(())
}
