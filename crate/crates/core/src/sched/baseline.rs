use serde::{Deserialize, Serialize};

use super::{AssignmentSolution, PendingJob};

/// Footprint-unaware placement rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselinePolicy {
    /// Always the home region; queue there when full.
    Home,
    /// Circular cursor over regions, skipping full ones.
    RoundRobin,
    /// Region with the most free slots, lowest index on ties.
    LeastLoad,
}

/// State a baseline keeps between rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaselineState {
    pub cursor: usize,
}

/// Places `batch` in order. Jobs that find no slot get `None` and should be
/// carried to the next round.
pub fn baseline_assign(
    policy: BaselinePolicy,
    batch: &[PendingJob],
    capacity: &[usize],
    state: &mut BaselineState,
) -> AssignmentSolution {
    let mut free = capacity.to_vec();
    let n = free.len();
    let placement = batch
        .iter()
        .map(|job| {
            let chosen = match policy {
                BaselinePolicy::Home => (free[job.home] > 0).then_some(job.home),
                BaselinePolicy::RoundRobin => {
                    let found = (0..n)
                        .map(|k| (state.cursor + k) % n)
                        .find(|&r| free[r] > 0);
                    if let Some(r) = found {
                        state.cursor = (r + 1) % n;
                    }
                    found
                }
                BaselinePolicy::LeastLoad => {
                    // max_by_key keeps the last maximum, so scan in reverse
                    (0..n)
                        .rev()
                        .max_by_key(|&r| free[r])
                        .filter(|&r| free[r] > 0)
                }
            };
            if let Some(r) = chosen {
                free[r] -= 1;
            }
            chosen
        })
        .collect::<Vec<_>>();
    AssignmentSolution {
        penalties: vec![0.0; placement.len()],
        placement,
        relaxed: false,
        objective: 0.0,
    }
}
