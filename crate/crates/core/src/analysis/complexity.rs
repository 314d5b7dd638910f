//! Sample complexity against a switching optimal policy.
//!
//! Per segment `n`, a sampling step counts 1 and a non-sampling step counts
//! `1[k_t != k*_n]`; a step never counts twice.

use serde::{Deserialize, Serialize};

use crate::agents::PullRecord;
use crate::env::{Environment, Segment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentComplexity {
    pub arm: usize,
    pub start: u64,
    pub sampling: u64,
    pub mismatch: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleComplexityReport {
    pub total: u64,
    pub sampling: u64,
    pub mismatch: u64,
    pub per_segment: Vec<SegmentComplexity>,
}

/// Streaming form used by the harness.
#[derive(Debug, Clone)]
pub struct ComplexityMeter {
    segments: Vec<SegmentComplexity>,
    current: usize,
}

impl ComplexityMeter {
    pub fn new(schedule: &[Segment]) -> Self {
        Self {
            segments: schedule
                .iter()
                .map(|s| SegmentComplexity {
                    arm: s.arm,
                    start: s.start,
                    sampling: 0,
                    mismatch: 0,
                })
                .collect(),
            current: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, t: u64, sampling: bool, recommended: usize) {
        while self.current + 1 < self.segments.len() && self.segments[self.current + 1].start <= t {
            self.current += 1;
        }
        let seg = &mut self.segments[self.current];
        if sampling {
            seg.sampling += 1;
        } else if recommended != seg.arm {
            seg.mismatch += 1;
        }
    }

    pub fn finish(self) -> SampleComplexityReport {
        let sampling = self.segments.iter().map(|s| s.sampling).sum();
        let mismatch = self.segments.iter().map(|s| s.mismatch).sum();
        SampleComplexityReport {
            total: sampling + mismatch,
            sampling,
            mismatch,
            per_segment: self.segments,
        }
    }
}

pub fn sample_complexity(
    trace: &[PullRecord],
    env: &Environment,
) -> Result<SampleComplexityReport> {
    sample_complexity_for(trace, env.optimal_policy())
}

/// Same as [`sample_complexity`] against an explicit segmentation.
pub fn sample_complexity_for(
    trace: &[PullRecord],
    schedule: &[Segment],
) -> Result<SampleComplexityReport> {
    if schedule.first().map(|s| s.start) != Some(1) {
        return Err(Error::Contract("segmentation must start at t = 1".into()));
    }
    let mut meter = ComplexityMeter::new(schedule);
    let mut prev = 0;
    for r in trace {
        if r.t <= prev {
            return Err(Error::Contract("trace steps must increase".into()));
        }
        prev = r.t;
        meter.push(r.t, r.sampling, r.recommended);
    }
    Ok(meter.finish())
}
