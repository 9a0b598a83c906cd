use std::collections::VecDeque;

/// Sliding window of per-region normalized footprints from past rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryLearner {
    window: usize,
    regions: usize,
    rounds: VecDeque<Vec<(f64, f64)>>,
}

impl HistoryLearner {
    pub fn new(window: usize, regions: usize) -> Self {
        Self {
            window: window.max(1),
            regions,
            rounds: VecDeque::with_capacity(window.max(1)),
        }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Records one round. Each region's carbon and water is divided by the
    /// round's cross-region maximum (0 when that maximum is 0).
    pub fn push(&mut self, carbon: &[f64], water: &[f64]) {
        assert_eq!(carbon.len(), self.regions);
        assert_eq!(water.len(), self.regions);
        let max = |v: &[f64]| v.iter().copied().fold(0.0_f64, f64::max);
        let (cmax, wmax) = (max(carbon), max(water));
        let norm = |x: f64, m: f64| if m > 0.0 { x / m } else { 0.0 };
        let entry = carbon
            .iter()
            .zip(water)
            .map(|(&c, &w)| (norm(c, cmax), norm(w, wmax)))
            .collect();
        if self.rounds.len() == self.window {
            self.rounds.pop_front();
        }
        self.rounds.push_back(entry);
    }

    /// Windowed mean `(carbon_ref, water_ref)` per region; zeros when empty.
    pub fn refs(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, 0.0); self.regions];
        if self.rounds.is_empty() {
            return out;
        }
        for round in &self.rounds {
            for (acc, &(c, w)) in out.iter_mut().zip(round) {
                acc.0 += c;
                acc.1 += w;
            }
        }
        let k = self.rounds.len() as f64;
        for acc in &mut out {
            acc.0 /= k;
            acc.1 /= k;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_history_is_zero() {
        assert_eq!(HistoryLearner::new(10, 3).refs(), vec![(0.0, 0.0); 3]);
    }

    #[test]
    fn single_round_normalizes() {
        let mut h = HistoryLearner::new(10, 2);
        h.push(&[100.0, 50.0], &[0.0, 0.0]);
        assert_eq!(h.refs(), vec![(1.0, 0.0), (0.5, 0.0)]);
    }

    #[test]
    fn window_evicts_oldest() {
        let mut h = HistoryLearner::new(2, 2);
        h.push(&[1.0, 0.0], &[1.0, 0.0]);
        h.push(&[0.0, 1.0], &[0.0, 1.0]);
        h.push(&[0.0, 1.0], &[0.0, 1.0]);
        assert_eq!(h.len(), 2);
        assert_eq!(h.refs(), vec![(0.0, 0.0), (1.0, 1.0)]);
    }
}
