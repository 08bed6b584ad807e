//! Physical-layer link budget: spreading and absorption loss, beamwidth
//! gain, noise power and Shannon spectral efficiency.
//!
//! Inputs and outputs are in dB where that is the natural interface unit
//! (transmit power in dBm, losses and gains in dB). Every SNR is assembled
//! in the linear domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const HZ_PER_GHZ: f64 = 1e9;

pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

pub fn linear_to_db<T: Scalar>(linear: T) -> T {
    T::lit(10.0) * linear.log10()
}

/// Radio and environment parameters shared by every link in a room.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RadioConfig<T> {
    /// Total transmit power budget for the whole room, dBm.
    pub total_power_dbm: T,
    /// Noise power spectral density, dBm per GHz.
    pub noise_density_dbm_per_ghz: T,
    /// Antenna half-power beamwidth, degrees.
    pub beamwidth_deg: T,
    /// Calibration constant of the `gain_constant / beamwidth_rad^2` gain law.
    pub gain_constant: T,
    /// Usable bandwidth per link, Hz.
    pub bandwidth_hz: T,
}

impl<T: Scalar> RadioConfig<T> {
    /// Baseline indoor profile: 0 dBm room budget, -193 dBm/GHz noise,
    /// 20 degree beams and 10 GHz per link, with the gain constant calibrated
    /// on [`reference_link`].
    pub fn baseline() -> Self {
        let mut config = RadioConfig {
            total_power_dbm: T::zero(),
            noise_density_dbm_per_ghz: T::lit(-193.0),
            beamwidth_deg: T::lit(20.0),
            gain_constant: T::one(),
            bandwidth_hz: T::lit(10e9),
        };
        config.gain_constant =
            calibrate_gain_constant(&reference_link(), &config).expect("reference link calibrates");
        config
    }

    pub fn validate(&self) -> Result<()> {
        if !self.total_power_dbm.is_finite() {
            return Err(Error::invalid("total_power_dbm", "must be finite"));
        }
        if !self.noise_density_dbm_per_ghz.is_finite() {
            return Err(Error::invalid(
                "noise_density_dbm_per_ghz",
                "must be finite",
            ));
        }
        validate_beamwidth(self.beamwidth_deg)?;
        if !(self.gain_constant > T::zero()) || !self.gain_constant.is_finite() {
            return Err(Error::invalid(
                "gain_constant",
                "must be positive and finite",
            ));
        }
        if !(self.bandwidth_hz > T::zero()) || !self.bandwidth_hz.is_finite() {
            return Err(Error::invalid(
                "bandwidth_hz",
                "must be positive and finite",
            ));
        }
        Ok(())
    }

    /// Noise power over the link bandwidth, dBm.
    pub fn noise_power_dbm(&self) -> T {
        self.noise_density_dbm_per_ghz + linear_to_db(self.bandwidth_hz / T::lit(HZ_PER_GHZ))
    }

    /// Gain of one antenna, dB.
    pub fn antenna_gain_db(&self) -> Result<T> {
        antenna_gain(self.beamwidth_deg, self.gain_constant)
    }

    pub fn with_beamwidth(self, beamwidth_deg: T) -> Self {
        RadioConfig {
            beamwidth_deg,
            ..self
        }
    }

    pub fn with_total_power(self, total_power_dbm: T) -> Self {
        RadioConfig {
            total_power_dbm,
            ..self
        }
    }
}

/// One transmitter-receiver hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LinkGeometry<T> {
    pub carrier_hz: T,
    pub distance_m: T,
    /// Medium absorption coefficient at the carrier, 1/m.
    pub absorption_per_m: T,
}

impl<T: Scalar> LinkGeometry<T> {
    pub fn new(carrier_hz: T, distance_m: T, absorption_per_m: T) -> Self {
        LinkGeometry {
            carrier_hz,
            distance_m,
            absorption_per_m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_positive("carrier_hz", self.carrier_hz)?;
        validate_positive("distance_m", self.distance_m)?;
        validate_absorption(self.absorption_per_m)
    }

    /// Total path loss (spreading times absorption) as a linear factor.
    pub fn path_loss_linear(&self) -> T {
        let spreading =
            T::lit(4.0) * T::PI() * self.distance_m * self.carrier_hz / T::lit(SPEED_OF_LIGHT);
        spreading * spreading * (self.absorption_per_m * self.distance_m).exp()
    }
}

pub(crate) fn validate_positive<T: Scalar>(field: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

pub(crate) fn validate_absorption<T: Scalar>(k: T) -> Result<()> {
    if k >= T::zero() && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "absorption_per_m",
            format!("must be non-negative and finite, got {k}"),
        ))
    }
}

fn validate_beamwidth<T: Scalar>(beamwidth_deg: T) -> Result<()> {
    if beamwidth_deg > T::zero() && beamwidth_deg <= T::lit(180.0) {
        Ok(())
    } else {
        Err(Error::invalid(
            "beamwidth_deg",
            format!("must lie in (0, 180], got {beamwidth_deg}"),
        ))
    }
}

/// Free-space spreading loss `20 log10(4 pi d f / c)`, dB.
pub fn spreading_loss<T: Scalar>(carrier_hz: T, distance_m: T) -> Result<T> {
    validate_positive("carrier_hz", carrier_hz)?;
    validate_positive("distance_m", distance_m)?;
    let arg = T::lit(4.0) * T::PI() * distance_m * carrier_hz / T::lit(SPEED_OF_LIGHT);
    Ok(T::lit(20.0) * arg.log10())
}

/// Beer-Lambert absorption loss `10 log10(e) k d`, dB.
pub fn absorption_loss<T: Scalar>(absorption_per_m: T, distance_m: T) -> Result<T> {
    validate_absorption(absorption_per_m)?;
    validate_positive("distance_m", distance_m)?;
    Ok(T::lit(10.0) * T::LOG10_E() * absorption_per_m * distance_m)
}

/// Single-antenna gain `10 log10(gain_constant / beamwidth_rad^2)`, dB.
pub fn antenna_gain<T: Scalar>(beamwidth_deg: T, gain_constant: T) -> Result<T> {
    validate_beamwidth(beamwidth_deg)?;
    validate_positive("gain_constant", gain_constant)?;
    let rad = beamwidth_deg.to_radians();
    Ok(linear_to_db(gain_constant / (rad * rad)))
}

/// Linear SNR of a hop transmitting `transmit_power_dbm`.
pub fn snr_linear<T: Scalar>(
    transmit_power_dbm: T,
    config: &RadioConfig<T>,
    geom: &LinkGeometry<T>,
) -> Result<T> {
    config.validate()?;
    geom.validate()?;
    if !transmit_power_dbm.is_finite() {
        return Err(Error::invalid("transmit_power_dbm", "must be finite"));
    }
    let power = db_to_linear(transmit_power_dbm);
    let gain = db_to_linear(config.antenna_gain_db()?);
    let noise = db_to_linear(config.noise_power_dbm());
    Ok(power * gain * gain / (noise * geom.path_loss_linear()))
}

/// Shannon spectral efficiency `log2(1 + SNR)`, bit/s/Hz.
pub fn spectral_efficiency<T: Scalar>(
    transmit_power_dbm: T,
    config: &RadioConfig<T>,
    geom: &LinkGeometry<T>,
) -> Result<T> {
    let snr = snr_linear(transmit_power_dbm, config, geom)?;
    Ok(snr.ln_1p() / T::LN_2())
}

/// `2^S - 1`, the SNR a spectral efficiency of `S` bit/s/Hz needs.
pub fn snr_threshold<T: Scalar>(target_se: T) -> T {
    (target_se * T::LN_2()).exp_m1()
}

/// Transmit power (dBm) at which the hop reaches `target_se` exactly.
pub fn required_power<T: Scalar>(
    target_se: T,
    config: &RadioConfig<T>,
    geom: &LinkGeometry<T>,
) -> Result<T> {
    validate_positive("target_se", target_se)?;
    config.validate()?;
    geom.validate()?;
    let gain = db_to_linear(config.antenna_gain_db()?);
    let noise = db_to_linear(config.noise_power_dbm());
    let power = snr_threshold(target_se) * noise * geom.path_loss_linear() / (gain * gain);
    Ok(linear_to_db(power))
}

/// Power-to-noise link constant `P_o G^2 c^2 / (N (4 pi f)^2)` in m^2.
///
/// The SNR of a hop at distance `d` carrying the whole budget is
/// `link_constant / d^2 * exp(-k d)`; every planning constant is a scaled
/// copy of it.
pub fn link_constant<T: Scalar>(config: &RadioConfig<T>, carrier_hz: T) -> Result<T> {
    config.validate()?;
    validate_positive("carrier_hz", carrier_hz)?;
    let gain = db_to_linear(config.antenna_gain_db()?);
    let power_to_noise = db_to_linear(config.total_power_dbm - config.noise_power_dbm());
    let wavelength_term = T::lit(SPEED_OF_LIGHT) / (T::lit(4.0) * T::PI() * carrier_hz);
    Ok(power_to_noise * gain * gain * wavelength_term * wavelength_term)
}

/// A trusted operating point used to recover the gain constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ReferenceLink<T> {
    pub carrier_hz: T,
    pub distance_m: T,
    pub absorption_per_m: T,
    pub beamwidth_deg: T,
    pub target_se: T,
    pub required_power_dbm: T,
}

/// 0.32 THz over 5 m needs -50.73 dBW (-20.73 dBm) for 0.1 bit/s/Hz with
/// 20 degree beams when the medium absorbs 0.0186 /m.
pub fn reference_link<T: Scalar>() -> ReferenceLink<T> {
    ReferenceLink {
        carrier_hz: T::lit(0.32e12),
        distance_m: T::lit(5.0),
        absorption_per_m: T::lit(0.0186),
        beamwidth_deg: T::lit(20.0),
        target_se: T::lit(0.1),
        required_power_dbm: T::lit(-20.73),
    }
}

/// Solves for the gain constant that makes [`required_power`] reproduce the
/// reference exactly. Noise density and bandwidth come from `config`.
pub fn calibrate_gain_constant<T: Scalar>(
    reference: &ReferenceLink<T>,
    config: &RadioConfig<T>,
) -> Result<T> {
    let geom = LinkGeometry::new(
        reference.carrier_hz,
        reference.distance_m,
        reference.absorption_per_m,
    );
    geom.validate()?;
    validate_beamwidth(reference.beamwidth_deg)?;
    validate_positive("target_se", reference.target_se)?;
    let noise = db_to_linear(config.noise_power_dbm());
    let power = db_to_linear(reference.required_power_dbm);
    let gain_sq = snr_threshold(reference.target_se) * noise * geom.path_loss_linear() / power;
    let rad = reference.beamwidth_deg.to_radians();
    let constant = gain_sq.sqrt() * rad * rad;
    if constant.is_finite() && constant > T::zero() {
        Ok(constant)
    } else {
        Err(Error::Calibration(format!(
            "gain constant evaluated to {constant}"
        )))
    }
}
