use thiserror::Error;

use super::flow::min_cost_assignment;
use super::AssignmentProblem;

/// No placement satisfies every hard constraint.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no assignment satisfies capacity and delay-tolerance constraints")]
pub struct Infeasible;

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSolution {
    /// Region chosen per job, aligned with the problem's job list.
    pub placement: Vec<Option<usize>>,
    /// Whether the delay tolerance was softened into penalties.
    pub relaxed: bool,
    /// Tolerance overshoot per job; all zero in hard solutions.
    pub penalties: Vec<f64>,
    pub objective: f64,
}

impl AssignmentSolution {
    pub fn empty() -> Self {
        Self {
            placement: Vec::new(),
            relaxed: false,
            penalties: Vec::new(),
            objective: 0.0,
        }
    }

    /// Number of jobs placed in each region.
    pub fn region_counts(&self, regions: usize) -> Vec<usize> {
        let mut counts = vec![0; regions];
        for n in self.placement.iter().flatten() {
            counts[*n] += 1;
        }
        counts
    }
}

/// Exact minimum of the normalized cost with every delay constraint hard.
pub fn solve_hard(p: &AssignmentProblem) -> Result<AssignmentSolution, Infeasible> {
    let m = p.job_count();
    if p.total_capacity() < m {
        return Err(Infeasible);
    }
    let placement = min_cost_assignment(m, p.regions, &p.cost, &p.feasible, &p.capacity);
    if placement.iter().any(Option::is_none) {
        return Err(Infeasible);
    }
    let objective = placement
        .iter()
        .enumerate()
        .map(|(j, n)| p.cost[p.at(j, n.expect("all placed"))])
        .sum();
    Ok(AssignmentSolution {
        placement,
        relaxed: false,
        penalties: vec![0.0; m],
        objective,
    })
}

/// Exact minimum of cost plus `sigma * overshoot`, every region allowed.
///
/// Expects enough total capacity for every job; when there is not, the
/// cheapest maximum subset is placed and the rest stay `None`.
pub fn solve_soft(p: &AssignmentProblem) -> AssignmentSolution {
    let m = p.job_count();
    let mut augmented = Vec::with_capacity(p.cost.len());
    for j in 0..m {
        for n in 0..p.regions {
            augmented.push(p.cost[p.at(j, n)] + p.penalty_weight * p.overshoot(j, n));
        }
    }
    let allowed = vec![true; augmented.len()];
    let placement = min_cost_assignment(m, p.regions, &augmented, &allowed, &p.capacity);
    let mut penalties = vec![0.0; m];
    let mut objective = 0.0;
    for (j, n) in placement.iter().enumerate() {
        if let Some(n) = *n {
            penalties[j] = p.overshoot(j, n);
            objective += augmented[p.at(j, n)];
        }
    }
    AssignmentSolution {
        placement,
        relaxed: true,
        penalties,
        objective,
    }
}
