//! `thzplan`: plans indoor terahertz access-point deployments.
//!
//! Exit status is 0 on success, 1 when the inputs are valid but admit no
//! plan, and 2 for unreadable or invalid input.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thzplan::channel::DEFAULT_MIN_WIDTH_HZ;
use thzplan::sweep::{
    ap_count_matrix, run_sweep, Baseline, MatrixCell, ReportRow, SweepSpec, SweepVariable,
    REFERENCE_CARRIERS_HZ, REFERENCE_SE_LEVELS,
};
use thzplan::{
    plan_pockets, plan_room, radius_increase, repeater_count, AbsorptionSpectrum, PlanResult,
    PocketOutcome, PowerSplit, RadioConfig, RoomShape, RoomSpec, SpectrumSet,
};

use report::{Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "thzplan",
    version,
    about = "Indoor terahertz access-point planner"
)]
struct Cli {
    /// Absorption spectrum CSV (`frequency_ghz,k_per_m`); repeat for several humidities.
    #[arg(long, global = true, value_name = "PATH")]
    absorption: Vec<PathBuf>,

    /// Room description JSON.
    #[arg(long, global = true, value_name = "PATH")]
    room: Option<PathBuf>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    #[arg(long, global = true)]
    csv: bool,

    #[command(flatten)]
    params: Params,

    #[command(subcommand)]
    command: Command,
}

/// Radio and environment profile. Every value can also be set through the
/// matching `THZPLAN_*` environment variable.
#[derive(Debug, Args)]
struct Params {
    /// Room transmit power budget, dBm.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_TOTAL_POWER_DBM",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    total_power_dbm: f64,

    /// Noise power spectral density, dBm/GHz.
    #[arg(long, global = true, env = "THZPLAN_NOISE_DENSITY_DBM_PER_GHZ", default_value_t = -193.0, allow_negative_numbers = true)]
    noise_density_dbm_per_ghz: f64,

    /// Link bandwidth, GHz.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_BANDWIDTH_GHZ",
        default_value_t = 10.0
    )]
    bandwidth_ghz: f64,

    /// Antenna beamwidth, degrees.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_BEAMWIDTH_DEG",
        default_value_t = 20.0
    )]
    beamwidth_deg: f64,

    /// Override the calibrated antenna gain constant.
    #[arg(long, global = true, env = "THZPLAN_GAIN_CONSTANT")]
    gain_constant: Option<f64>,

    /// Carrier frequency, THz.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_CARRIER_THZ",
        default_value_t = 0.32
    )]
    carrier_thz: f64,

    /// Target spectral efficiency, bit/s/Hz.
    #[arg(long, global = true, env = "THZPLAN_TARGET_SE", default_value_t = 0.1)]
    target_se: f64,

    /// Linear room length, m; used when no room file is given.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_ROOM_LENGTH_M",
        default_value_t = 10.0
    )]
    room_length_m: f64,

    /// Relative humidity, percent.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_HUMIDITY_PCT",
        default_value_t = 60.0
    )]
    humidity_pct: f64,

    /// Temperature assumed for spectra that do not declare one, Celsius.
    #[arg(
        long,
        global = true,
        env = "THZPLAN_TEMPERATURE_C",
        default_value_t = 25.0,
        allow_negative_numbers = true
    )]
    temperature_c: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal AP count for a linear room, a room file, or its demand pockets.
    Plan {
        /// Evaluate this AP count instead of optimizing it.
        #[arg(long)]
        ap_count: Option<u64>,
        #[arg(long, value_enum, default_value_t = Split::PerUser)]
        power_split: Split,
    },
    /// Usable sub-channels of the absorption spectrum.
    Subchannels {
        /// Link distance, m.
        #[arg(long, default_value_t = 5.0)]
        distance_m: f64,
        /// Largest tolerated absorption loss, dB.
        #[arg(long, default_value_t = 3.0)]
        cutoff_db: f64,
        /// Narrowest sub-channel kept, GHz.
        #[arg(long, default_value_t = DEFAULT_MIN_WIDTH_HZ / 1e9)]
        min_width_ghz: f64,
    },
    /// Sweep one parameter and report every planning answer per point.
    Sweep {
        #[arg(long)]
        variable: SweepVariable,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        steps: usize,
        /// Hold the AP count fixed for every point.
        #[arg(long)]
        ap_count: Option<u64>,
    },
    /// AP counts over the ten reference sub-channels and four targets.
    Table3,
    /// Cell radius the AP count can sustain and the overlap it allows.
    RadiusIncrease {
        #[arg(long)]
        ap_count: Option<u64>,
    },
    /// Repeaters needed to merge two neighbouring cells.
    Repeaters {
        #[arg(long)]
        ap_count: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Split {
    PerUser,
    Proportional,
}

impl From<Split> for PowerSplit {
    fn from(s: Split) -> Self {
        match s {
            Split::PerUser => PowerSplit::PerUser,
            Split::Proportional => PowerSplit::Proportional,
        }
    }
}

/// Valid input, no plan.
#[derive(Debug)]
struct Infeasible;

impl std::fmt::Display for Infeasible {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("no feasible plan")
    }
}

impl std::error::Error for Infeasible {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Infeasible>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let infeasible = e.chain().any(|c| {
                c.downcast_ref::<thzplan::Error>()
                    .is_some_and(thzplan::Error::is_infeasible)
            });
            ExitCode::from(if infeasible { 1 } else { 2 })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let baseline = baseline(&cli.params)?;
    let (table, feasible) = match &cli.command {
        Command::Plan {
            ap_count,
            power_split,
        } => {
            let spectra = load_spectra(cli)?;
            let baseline = Baseline {
                ap_count: *ap_count,
                ..baseline
            };
            match &cli.room {
                Some(path) => plan_room_file(path, &baseline, &spectra, (*power_split).into())?,
                None => {
                    let plan = baseline.plan(&spectra)?;
                    let ok = plan.achieved_se >= baseline.target_se;
                    (plan_table(&baseline, &plan, &spectra)?, ok)
                }
            }
        }
        Command::Subchannels {
            distance_m,
            cutoff_db,
            min_width_ghz,
        } => (
            subchannels(cli, *distance_m, *cutoff_db, *min_width_ghz)?,
            true,
        ),
        Command::Sweep {
            variable,
            start,
            stop,
            steps,
            ap_count,
        } => {
            let spectra = load_spectra(cli)?;
            let spec = SweepSpec {
                variable: *variable,
                start: *start,
                stop: *stop,
                steps: *steps,
            };
            let baseline = Baseline {
                ap_count: *ap_count,
                ..baseline
            };
            (sweep_table(&run_sweep(&spec, &baseline, &spectra)?), true)
        }
        Command::Table3 => {
            let spectra = load_spectra(cli)?;
            (table3(&baseline, &spectra)?, true)
        }
        Command::RadiusIncrease { ap_count } => {
            let spectra = load_spectra(cli)?;
            overlap(
                &Baseline {
                    ap_count: *ap_count,
                    ..baseline
                },
                &spectra,
            )?
        }
        Command::Repeaters { ap_count } => {
            let spectra = load_spectra(cli)?;
            (
                repeaters(
                    &Baseline {
                        ap_count: *ap_count,
                        ..baseline
                    },
                    &spectra,
                )?,
                true,
            )
        }
    };
    emit(&table, format, cli.out.as_deref())?;
    if feasible {
        Ok(())
    } else {
        Err(Infeasible.into())
    }
}

fn baseline(p: &Params) -> Result<Baseline> {
    let mut radio = RadioConfig::<f64>::baseline();
    radio.total_power_dbm = p.total_power_dbm;
    radio.noise_density_dbm_per_ghz = p.noise_density_dbm_per_ghz;
    radio.bandwidth_hz = p.bandwidth_ghz * 1e9;
    radio.beamwidth_deg = p.beamwidth_deg;
    if let Some(g) = p.gain_constant {
        radio.gain_constant = g;
    }
    radio.validate()?;
    Ok(Baseline {
        radio,
        carrier_hz: p.carrier_thz * 1e12,
        humidity_pct: p.humidity_pct,
        room_length_m: p.room_length_m,
        target_se: p.target_se,
        ap_count: None,
    })
}

fn load_spectra(cli: &Cli) -> Result<SpectrumSet<f64>> {
    if cli.absorption.is_empty() {
        return Err(anyhow!(
            "absorption data not found: pass --absorption <path>"
        ));
    }
    let spectra = cli
        .absorption
        .iter()
        .map(|path| load_spectrum(path, &cli.params))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSet::new(spectra)?)
}

fn load_spectrum(path: &Path, p: &Params) -> Result<AbsorptionSpectrum<f64>> {
    let file = File::open(path)
        .map_err(|e| anyhow!("absorption data not found: {}: {e}", path.display()))?;
    AbsorptionSpectrum::load_with_metadata(
        io::BufReader::new(file),
        p.humidity_pct,
        p.temperature_c,
    )
    .with_context(|| format!("{}", path.display()))
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(format, &mut w)?;
        }
    }
    Ok(())
}

const PLAN_COLUMNS: [&str; 11] = [
    "ap_count",
    "exact_ap_count",
    "cell_radius_m",
    "per_ap_power_dbm",
    "achieved_se",
    "k_factor",
    "tau_factor",
    "room_length_m",
    "residual",
    "carrier_hz",
    "absorption_per_m",
];

fn plan_cells(plan: &PlanResult<f64>, carrier_hz: f64, k: f64) -> Vec<Cell> {
    vec![
        plan.ap_count.into(),
        plan.exact_ap_count.into(),
        plan.cell_radius_m.into(),
        plan.per_ap_power_dbm.into(),
        plan.achieved_se.into(),
        plan.k_factor.into(),
        plan.tau_factor.into(),
        plan.room_length_m.into(),
        plan.residual.into(),
        carrier_hz.into(),
        k.into(),
    ]
}

fn plan_table(
    baseline: &Baseline,
    plan: &PlanResult<f64>,
    spectra: &SpectrumSet<f64>,
) -> Result<Table> {
    let mut columns = vec!["status"];
    columns.extend(PLAN_COLUMNS);
    let mut table = Table::new(columns);
    let k = spectra.absorption_at(baseline.carrier_hz, baseline.humidity_pct)?;
    let status = if plan.achieved_se >= baseline.target_se {
        "ok"
    } else {
        "below_target"
    };
    let mut row = vec![Cell::from(status)];
    row.extend(plan_cells(plan, baseline.carrier_hz, k));
    table.push(row);
    Ok(table)
}

fn plan_room_file(
    path: &Path,
    baseline: &Baseline,
    spectra: &SpectrumSet<f64>,
    split: PowerSplit,
) -> Result<(Table, bool)> {
    let file =
        File::open(path).map_err(|e| anyhow!("room file not found: {}: {e}", path.display()))?;
    let room: RoomSpec<f64> = RoomSpec::from_json(io::BufReader::new(file))
        .with_context(|| format!("{}", path.display()))?;
    let scenario = baseline.scenario(spectra)?;
    let k = scenario.absorption_per_m;
    let mut columns = vec!["pocket", "users", "power_dbm", "status"];
    columns.extend(PLAN_COLUMNS);
    let mut table = Table::new(columns);
    let blank = |n: usize| vec![Cell::Num(f64::NAN); n];
    if room.pockets.is_empty() {
        if baseline.ap_count.is_some() && !matches!(room.shape, RoomShape::Line { .. }) {
            return Err(anyhow!("--ap-count applies to linear rooms only"));
        }
        let plan = match room.shape {
            RoomShape::Line { length } => Baseline {
                room_length_m: length,
                ..*baseline
            }
            .plan(spectra)?,
            _ => plan_room(&room.shape, &scenario)?,
        };
        let ok = plan.achieved_se >= scenario.target_se;
        let mut row = vec![
            Cell::from("room"),
            Cell::Int(1),
            Cell::Num(scenario.radio.total_power_dbm),
            Cell::from(if ok { "ok" } else { "below_target" }),
        ];
        row.extend(plan_cells(&plan, scenario.carrier_hz, k));
        table.push(row);
        return Ok((table, ok));
    }
    let mut feasible = true;
    for p in plan_pockets(&room, &scenario, split)? {
        let mut row = vec![
            Cell::from(p.pocket.label.clone()),
            Cell::Int(p.pocket.users.into()),
            Cell::Num(p.power_dbm),
        ];
        match &p.outcome {
            PocketOutcome::Planned(plan) => {
                row.push(Cell::from("ok"));
                row.extend(plan_cells(plan, scenario.carrier_hz, k));
            }
            PocketOutcome::Infeasible { .. } => {
                feasible = false;
                row.push(Cell::from("infeasible"));
                row.extend(blank(PLAN_COLUMNS.len()));
            }
        }
        table.push(row);
    }
    Ok((table, feasible))
}

fn subchannels(cli: &Cli, distance_m: f64, cutoff_db: f64, min_width_ghz: f64) -> Result<Table> {
    let spectra = load_spectra(cli)?;
    let humidity = cli.params.humidity_pct;
    let spectrum = spectra
        .at_humidity(humidity)
        .or_else(|| (spectra.spectra().len() == 1).then(|| &spectra.spectra()[0]))
        .ok_or_else(|| anyhow!("no absorption spectrum tabulated at {humidity}% humidity"))?;
    let channels = spectrum.scan_subchannels(distance_m, cutoff_db, min_width_ghz * 1e9)?;
    let mut table = Table::new(vec![
        "f_start_ghz",
        "f_end_ghz",
        "f_center_ghz",
        "bandwidth_ghz",
    ]);
    for c in channels {
        table.push(vec![
            (c.f_start_hz / 1e9).into(),
            (c.f_end_hz / 1e9).into(),
            (c.f_center_hz / 1e9).into(),
            (c.bandwidth_hz / 1e9).into(),
        ]);
    }
    Ok(table)
}

fn sweep_table(rows: &[ReportRow]) -> Table {
    let mut table = Table::new(ReportRow::COLUMNS.to_vec());
    for r in rows {
        table.push(vec![
            r.value.into(),
            r.status.as_str().into(),
            r.message.clone().into(),
            r.absorption_per_m.into(),
            r.ap_count.into(),
            r.exact_ap_count.into(),
            r.cell_radius_m.into(),
            r.per_ap_power_dbm.into(),
            r.achieved_se.into(),
            r.throughput_gbps.into(),
            r.k_factor.into(),
            r.tau_factor.into(),
            r.max_room_length_m.into(),
            r.overlap_radius_m.into(),
            r.radius_increase_m.into(),
            r.overlap_feasible.into(),
            r.repeaters.into(),
            r.residual.into(),
        ]);
    }
    table
}

const TABLE3_COLUMNS: [&str; 11] = [
    "spectral_efficiency",
    "f1",
    "f2",
    "f3",
    "f4",
    "f5",
    "f6",
    "f7",
    "f8",
    "f9",
    "f10",
];

fn table3(baseline: &Baseline, spectra: &SpectrumSet<f64>) -> Result<Table> {
    let matrix = ap_count_matrix(
        baseline,
        spectra,
        &REFERENCE_CARRIERS_HZ,
        &REFERENCE_SE_LEVELS,
    )?;
    let mut table = Table::new(TABLE3_COLUMNS.to_vec());
    for (s, row) in REFERENCE_SE_LEVELS.iter().zip(matrix) {
        let mut cells = vec![Cell::Num(*s)];
        cells.extend(row.into_iter().map(|c| match c {
            MatrixCell::Planned { ap_count } => Cell::Int(ap_count),
            MatrixCell::NoCoverage => Cell::from("no_coverage"),
            MatrixCell::Infeasible { .. } => Cell::from("infeasible"),
        }));
        table.push(cells);
    }
    Ok(table)
}

fn overlap(baseline: &Baseline, spectra: &SpectrumSet<f64>) -> Result<(Table, bool)> {
    let plan = baseline.plan(spectra)?;
    let scenario = baseline.scenario(spectra)?;
    let r = radius_increase(&scenario, plan.ap_count, plan.cell_radius_m)?;
    let mut table = Table::new(vec![
        "ap_count",
        "cell_radius_m",
        "radius_m",
        "increase_m",
        "feasible",
        "k_factor",
        "tau_factor",
        "residual",
    ]);
    table.push(vec![
        plan.ap_count.into(),
        plan.cell_radius_m.into(),
        r.radius_m.into(),
        r.increase_m.into(),
        r.feasible.into(),
        r.k_factor.into(),
        r.tau_factor.into(),
        r.residual.into(),
    ]);
    Ok((table, r.feasible))
}

fn repeaters(baseline: &Baseline, spectra: &SpectrumSet<f64>) -> Result<Table> {
    let plan = baseline.plan(spectra)?;
    let scenario = baseline.scenario(spectra)?;
    let m = repeater_count(&scenario, plan.ap_count, plan.cell_radius_m)?;
    let mut table = Table::new(vec![
        "ap_count",
        "cell_radius_m",
        "repeaters",
        "exact_count",
        "hop_m",
        "k_factor",
        "tau_factor",
        "residual",
    ]);
    table.push(vec![
        plan.ap_count.into(),
        plan.cell_radius_m.into(),
        m.count.into(),
        m.exact_count.into(),
        m.hop_m.into(),
        m.k_factor.into(),
        m.tau_factor.into(),
        m.residual.into(),
    ]);
    Ok(table)
}
