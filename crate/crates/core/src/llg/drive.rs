use serde::{Deserialize, Serialize};

/// Instantaneous drive applied to one device.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriveSample {
    /// Heavy-metal (SOT) current along +x, A.
    pub i_sot: f64,
    /// Bias across the MTJ stack, V.
    pub v_bias: f64,
    /// Current through the MTJ stack, A. Positive favours the AP state.
    pub i_stt: f64,
}

impl DriveSample {
    pub const IDLE: DriveSample = DriveSample { i_sot: 0.0, v_bias: 0.0, i_stt: 0.0 };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSegment {
    pub label: String,
    pub duration: f64,
    pub drive: DriveSample,
}

/// Piecewise-constant drive starting at t = 0. The drive is idle past the last segment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DriveWaveform {
    pub segments: Vec<DriveSegment>,
}

impl DriveWaveform {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn then(mut self, label: &str, duration: f64, drive: DriveSample) -> Self {
        if duration > 0.0 {
            self.segments.push(DriveSegment { label: label.to_string(), duration, drive });
        }
        self
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn sample(&self, t: f64) -> DriveSample {
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            if t >= start && t < end {
                return seg.drive;
            }
            start = end;
        }
        DriveSample::IDLE
    }

    /// Same waveform with every segment stretched by `factor`.
    pub fn scaled_in_time(&self, factor: f64) -> DriveWaveform {
        DriveWaveform {
            segments: self
                .segments
                .iter()
                .map(|s| DriveSegment { duration: s.duration * factor, ..s.clone() })
                .collect(),
        }
    }

    /// Start time of the segment with the given label.
    pub fn segment_start(&self, label: &str) -> Option<f64> {
        let mut start = 0.0;
        for seg in &self.segments {
            if seg.label == label {
                return Some(start);
            }
            start += seg.duration;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_piecewise_and_idle_after_end() {
        let on = DriveSample { i_sot: 1e-5, ..DriveSample::IDLE };
        let w = DriveWaveform::new().then("delay", 1e-9, DriveSample::IDLE).then("sot", 1e-9, on);
        assert_eq!(w.sample(0.5e-9), DriveSample::IDLE);
        assert_eq!(w.sample(1.5e-9), on);
        assert_eq!(w.sample(2.5e-9), DriveSample::IDLE);
        assert_eq!(w.segment_start("sot"), Some(1e-9));
        assert!((w.duration() - 2e-9).abs() < 1e-24);
    }
}
