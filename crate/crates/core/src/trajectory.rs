//! Entanglement along a state-path and the path-entanglement sum.
//!
//! A trajectory holds one value per state `psi_0 ... psi_R`; the input state
//! `psi_0` anchors the first difference. The sum of absolute step changes is
//! generic over any signed ordered number, so it can be evaluated exactly
//! over rationals as well as in floating point.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::format_f64;
use crate::entanglement::{Measure, MeasureTag};
use crate::error::{Error, Result};
use crate::quantum::StatePath;
use crate::scalar::Real;

/// Values usable as trajectory points.
pub trait TrajectoryValue: Clone + PartialOrd + Signed {}

impl<V: Clone + PartialOrd + Signed> TrajectoryValue for V {}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint<V> {
    pub k: usize,
    pub e: V,
}

/// Entanglement per time step, tagged with the measure that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementTrajectory<V> {
    measure: MeasureTag,
    values: Vec<V>,
}

impl<V: TrajectoryValue> EntanglementTrajectory<V> {
    /// Point `k` holds `values[k]`.
    pub fn new(measure: MeasureTag, values: Vec<V>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a trajectory needs at least one point"));
        }
        Ok(Self { measure, values })
    }

    /// Accepts explicit points; steps must run 0, 1, ..., R.
    pub fn from_points(measure: MeasureTag, points: Vec<TrajectoryPoint<V>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.k != i {
                return Err(Error::invalid(format!("point {i} has step {}, expected {i}", p.k)));
            }
        }
        Self::new(measure, points.into_iter().map(|p| p.e).collect())
    }

    #[inline]
    pub fn measure(&self) -> MeasureTag {
        self.measure
    }

    #[inline]
    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = TrajectoryPoint<V>> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, e)| TrajectoryPoint { k, e: e.clone() })
    }

    /// Number of steps `R`.
    #[inline]
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn first(&self) -> &V {
        &self.values[0]
    }

    pub fn last(&self) -> &V {
        self.values.last().expect("nonempty")
    }

    /// Points `from..=to`, re-indexed from zero.
    pub fn segment(&self, from: usize, to: usize) -> Result<Self> {
        if from > to || to >= self.values.len() {
            return Err(Error::invalid(format!(
                "segment {from}..={to} outside 0..={}",
                self.steps()
            )));
        }
        Self::new(self.measure, self.values[from..=to].to_vec())
    }

    /// Appends one more step.
    pub fn extended(&self, e: V) -> Self {
        let mut values = self.values.clone();
        values.push(e);
        Self {
            measure: self.measure,
            values,
        }
    }

    fn jumps(&self) -> impl Iterator<Item = V> + '_ {
        self.values.windows(2).map(|w| (w[1].clone() - w[0].clone()).abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathEntanglementSum<V> {
    pub value: V,
}

/// `sum_{k=1..R} |e_k - e_{k-1}|`, zero for a single point.
pub fn path_entanglement_sum<V: TrajectoryValue>(traj: &EntanglementTrajectory<V>) -> PathEntanglementSum<V> {
    PathEntanglementSum {
        value: traj.jumps().fold(V::zero(), |acc, d| acc + d),
    }
}

/// `max_k |e_k - e_{k-1}|`; needs at least two points.
pub fn max_step_jump<V: TrajectoryValue>(traj: &EntanglementTrajectory<V>) -> Result<V> {
    if traj.values.len() < 2 {
        return Err(Error::invalid("max step jump needs at least two points"));
    }
    Ok(traj
        .jumps()
        .fold(V::zero(), |m, d| if d > m { d } else { m }))
}

/// Evaluates `measure` on every state of `path`. Failures carry the step.
pub fn trajectory<T: Real>(path: &StatePath<T>, measure: &Measure) -> Result<EntanglementTrajectory<T>> {
    let values = path
        .states()
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            measure.evaluate(s).map(|v| v.value).map_err(|e| Error::AtStep {
                step: k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<T>>>()?;
    EntanglementTrajectory::new(measure.tag(), values)
}

/// Per-run summary written next to the trajectory CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    #[serde(rename = "R")]
    pub steps: usize,
    pub measure: MeasureTag,
    pub sum: f64,
    pub max_jump: f64,
    pub final_entanglement: f64,
}

impl RunSummary {
    pub fn from_trajectory(run_id: impl Into<String>, traj: &EntanglementTrajectory<f64>) -> Self {
        Self {
            run_id: run_id.into(),
            steps: traj.steps(),
            measure: traj.measure(),
            sum: path_entanglement_sum(traj).value,
            max_jump: max_step_jump(traj).unwrap_or(0.0),
            final_entanglement: *traj.last(),
        }
    }
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Csv {
        path: path.into(),
        source: e,
    }
}

/// Writes `(run_id, k, entanglement, measure_tag)` rows; values carry 17
/// significant digits.
pub fn export_trajectories(path: &Path, runs: &[(String, EntanglementTrajectory<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error(path))?;
    w.write_record(["run_id", "k", "entanglement", "measure_tag"])
        .map_err(csv_error(path))?;
    for (run_id, traj) in runs {
        for p in traj.points() {
            w.write_record([
                run_id.as_str(),
                &p.k.to_string(),
                &format_f64(p.e),
                traj.measure().as_str(),
            ])
            .map_err(csv_error(path))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Deserialize)]
struct TrajectoryRow {
    run_id: String,
    k: usize,
    entanglement: f64,
    measure_tag: String,
}

/// Reads a file written by [`export_trajectories`], preserving run order.
pub fn read_trajectories(path: &Path) -> Result<Vec<(String, EntanglementTrajectory<f64>)>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error(path))?;
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, (MeasureTag, Vec<TrajectoryPoint<f64>>)> = BTreeMap::new();
    for row in r.deserialize() {
        let row: TrajectoryRow = row.map_err(csv_error(path))?;
        let tag = MeasureTag::parse(&row.measure_tag)?;
        let entry = grouped.entry(row.run_id.clone()).or_insert_with(|| {
            order.push(row.run_id.clone());
            (tag, Vec::new())
        });
        if entry.0 != tag {
            return Err(Error::invalid(format!("run {} mixes measures", row.run_id)));
        }
        entry.1.push(TrajectoryPoint {
            k: row.k,
            e: row.entanglement,
        });
    }
    order
        .into_iter()
        .map(|id| {
            let (tag, points) = grouped.remove(&id).expect("grouped by id");
            Ok((id, EntanglementTrajectory::from_points(tag, points)?))
        })
        .collect()
}
