//! Piecewise-constant control schedules.
//!
//! A [`PulseSchedule`] holds one sample train per control channel, a uniform
//! step `dt`, and an optional carrier. Samples are envelope values; with a
//! carrier present the effective field at step `k` is
//! `sample_k * cos(omega * t_k)` evaluated at the step midpoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance of a pulse envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EnvelopeMeta {
    /// Gaussian `A(t) = q sqrt(pi) exp(-q^2 (t - t_f/2)^2)` with `q = 4/t_f`.
    Gaussian { t_f: f64, q: f64 },
    /// Constant envelope.
    Constant { amplitude: f64 },
    /// Loaded from a pulse CSV file.
    File { path: String },
    /// Produced by the pulse optimizer after `iterations` accepted steps.
    Optimized { iterations: usize },
    Custom,
}

/// Piecewise-constant samples for every control channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    /// `samples[m][k]` = envelope of control `m` during step `k`.
    samples: Vec<Vec<f64>>,
    dt: f64,
    carrier: Option<f64>,
    meta: EnvelopeMeta,
}

impl PulseSchedule {
    pub fn new(
        samples: Vec<Vec<f64>>,
        dt: f64,
        carrier: Option<f64>,
        meta: EnvelopeMeta,
    ) -> Result<Self> {
        if samples.is_empty() || samples[0].is_empty() {
            return Err(Error::InvalidPulse {
                reason: "at least one control channel with one sample is required".into(),
            });
        }
        let steps = samples[0].len();
        if samples.iter().any(|ch| ch.len() != steps) {
            return Err(Error::InvalidPulse {
                reason: "all control channels must have the same number of samples".into(),
            });
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidPulse {
                reason: format!("dt must be positive and finite, got {dt}"),
            });
        }
        if samples.iter().flatten().any(|f| !f.is_finite()) {
            return Err(Error::InvalidPulse {
                reason: "non-finite sample".into(),
            });
        }
        if let Some(w) = carrier {
            if !w.is_finite() {
                return Err(Error::InvalidPulse {
                    reason: "non-finite carrier frequency".into(),
                });
            }
        }
        Ok(Self {
            samples,
            dt,
            carrier,
            meta,
        })
    }

    pub fn num_controls(&self) -> usize {
        self.samples.len()
    }

    pub fn steps(&self) -> usize {
        self.samples[0].len()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.steps() as f64
    }

    pub fn carrier(&self) -> Option<f64> {
        self.carrier
    }

    pub fn meta(&self) -> &EnvelopeMeta {
        &self.meta
    }

    pub fn samples(&self, control: usize) -> &[f64] {
        &self.samples[control]
    }

    pub fn sample(&self, control: usize, step: usize) -> f64 {
        self.samples[control][step]
    }

    /// Midpoint time of step `k`.
    pub fn midpoint_time(&self, step: usize) -> f64 {
        (step as f64 + 0.5) * self.dt
    }

    /// Envelope value times the carrier factor at the step midpoint.
    pub fn effective_field(&self, control: usize, step: usize) -> f64 {
        let env = self.samples[control][step];
        match self.carrier {
            Some(w) => env * (w * self.midpoint_time(step)).cos(),
            None => env,
        }
    }

    /// Carrier factor `cos(omega t_k)` at the step midpoint (1 without a
    /// carrier).
    pub fn carrier_factor(&self, step: usize) -> f64 {
        match self.carrier {
            Some(w) => (w * self.midpoint_time(step)).cos(),
            None => 1.0,
        }
    }

    /// Midpoint-rule envelope area of one control channel over the schedule.
    pub fn envelope_area(&self, control: usize) -> f64 {
        self.samples[control].iter().sum::<f64>() * self.dt
    }

    /// Copy with every envelope sample scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for ch in &mut out.samples {
            for s in ch.iter_mut() {
                *s *= factor;
            }
        }
        out.meta = EnvelopeMeta::Custom;
        out
    }

    /// Copy with replaced sample trains (same dt / carrier).
    pub fn with_samples(&self, samples: Vec<Vec<f64>>, meta: EnvelopeMeta) -> Result<Self> {
        Self::new(samples, self.dt, self.carrier, meta)
    }
}

/// Gaussian envelope of the resonant pi-pulse: `A(t) = q sqrt(pi)
/// exp(-q^2 (t - t_f/2)^2)` with `q = 4/t_f`. The envelope integrates to pi
/// over the full line; the window `[0, t_f]` carries erf(2) of that area.
pub fn gaussian_envelope(t_f: f64) -> impl Fn(f64) -> f64 {
    let q = 4.0 / t_f;
    let peak = q * std::f64::consts::PI.sqrt();
    let center = t_f / 2.0;
    move |t: f64| peak * (-(q * q) * (t - center) * (t - center)).exp()
}

/// Default sampling density: 47 samples per time unit (about 211 per carrier
/// period at 1.397 eV), giving 9400 steps for t_f = 200.
pub fn default_steps(t_f: f64) -> usize {
    (47.0 * t_f).ceil() as usize
}

/// The frequency-selective Gaussian pi-pulse: envelope sampled at step
/// midpoints over `[0, t_f]`, cosine carrier at `carrier`.
pub fn gaussian_pi_pulse(t_f: f64, carrier: f64, steps: usize) -> Result<PulseSchedule> {
    if !(t_f > 0.0) {
        return Err(Error::InvalidPulse {
            reason: format!("t_f must be positive, got {t_f}"),
        });
    }
    if steps == 0 {
        return Err(Error::InvalidPulse {
            reason: "steps must be at least 1".into(),
        });
    }
    let dt = t_f / steps as f64;
    let envelope = gaussian_envelope(t_f);
    let samples: Vec<f64> = (0..steps)
        .map(|k| envelope((k as f64 + 0.5) * dt))
        .collect();
    PulseSchedule::new(
        vec![samples],
        dt,
        Some(carrier),
        EnvelopeMeta::Gaussian { t_f, q: 4.0 / t_f },
    )
}

/// Constant-envelope resonant pulse with exact area `area`.
pub fn constant_pulse(
    area: f64,
    t_f: f64,
    carrier: Option<f64>,
    steps: usize,
) -> Result<PulseSchedule> {
    if !(t_f > 0.0) || steps == 0 {
        return Err(Error::InvalidPulse {
            reason: "t_f and steps must be positive".into(),
        });
    }
    let dt = t_f / steps as f64;
    let amplitude = area / t_f;
    PulseSchedule::new(
        vec![vec![amplitude; steps]],
        dt,
        carrier,
        EnvelopeMeta::Constant { amplitude },
    )
}
