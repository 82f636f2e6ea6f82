//! 802.11 DCF contention on virtual slots.
//!
//! A virtual slot is either one idle backoff slot or one busy period (a
//! success or a collision, each lasting the configured busy-slot duration).
//! Every backlogged station that does not transmit decrements its counter
//! once per virtual slot, the usual saturated-DCF convention.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::trace::Nanos;

#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    /// Frames waiting, including the one in contention.
    pub queue: u64,
    /// Remaining backoff slots; meaningful only while `queue > 0`.
    pub backoff: u32,
    /// Current backoff stage (window doublings so far).
    pub stage: u32,
    /// Arrival time of the next frame; `None` when saturated or idle forever.
    pub next_arrival: Option<Nanos>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotOutcome {
    Idle,
    Success(u32),
    Collision(Vec<u32>),
}

/// Arrival process for every station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Traffic {
    Saturated,
    /// Poisson frames at the given rate per station, frames/s.
    Poisson(f64),
}

#[derive(Debug, Clone)]
pub struct DcfState {
    pub stations: Vec<Station>,
    pub cw_min: u32,
    pub retry_stages: u32,
    traffic: Traffic,
    inter_arrival: Option<Exp<f64>>,
}

impl DcfState {
    pub fn new(
        n: usize,
        cw_min: u32,
        retry_stages: u32,
        traffic: Traffic,
        rng: &mut impl Rng,
    ) -> Self {
        let inter_arrival = match traffic {
            Traffic::Poisson(rate) if rate > 0.0 => Some(Exp::new(rate).expect("positive rate")),
            _ => None,
        };
        let mut state = Self {
            stations: Vec::with_capacity(n),
            cw_min,
            retry_stages,
            traffic,
            inter_arrival,
        };
        for _ in 0..n {
            let saturated = traffic == Traffic::Saturated;
            let next_arrival = state.draw_gap(rng);
            let mut st = Station {
                queue: u64::from(saturated),
                backoff: 0,
                stage: 0,
                next_arrival,
            };
            if saturated {
                st.backoff = rng.random_range(0..cw_min);
            }
            state.stations.push(st);
        }
        state
    }

    fn draw_gap(&self, rng: &mut impl Rng) -> Option<Nanos> {
        self.inter_arrival
            .map(|d| (d.sample(rng) * 1e9).round() as Nanos)
    }

    fn window(&self, stage: u32) -> u32 {
        self.cw_min << stage
    }

    /// Enqueues every arrival up to and including `now`.
    pub fn admit_arrivals(&mut self, now: Nanos, rng: &mut impl Rng) {
        let Some(d) = self.inter_arrival else { return };
        for i in 0..self.stations.len() {
            while let Some(t) = self.stations[i].next_arrival {
                if t > now {
                    break;
                }
                let gap = (d.sample(rng) * 1e9).round() as Nanos;
                let st = &mut self.stations[i];
                st.next_arrival = Some(t + gap.max(1));
                st.queue += 1;
                if st.queue == 1 {
                    st.stage = 0;
                    st.backoff = rng.random_range(0..self.cw_min);
                }
            }
        }
    }

    pub fn backlogged(&self) -> usize {
        self.stations.iter().filter(|s| s.queue > 0).count()
    }

    /// Advances one virtual slot.
    pub fn step(&mut self, rng: &mut impl Rng) -> SlotOutcome {
        let transmitters: Vec<u32> = self
            .stations
            .iter()
            .enumerate()
            .filter(|(_, s)| s.queue > 0 && s.backoff == 0)
            .map(|(i, _)| i as u32)
            .collect();
        for s in self.stations.iter_mut() {
            if s.queue > 0 && s.backoff > 0 {
                s.backoff -= 1;
            }
        }
        match transmitters.len() {
            0 => SlotOutcome::Idle,
            1 => {
                let w = transmitters[0];
                let saturated = self.traffic == Traffic::Saturated;
                let cw_min = self.cw_min;
                let st = &mut self.stations[w as usize];
                if !saturated {
                    st.queue -= 1;
                }
                st.stage = 0;
                if st.queue > 0 {
                    st.backoff = rng.random_range(0..cw_min);
                }
                SlotOutcome::Success(w)
            }
            _ => {
                for &w in &transmitters {
                    let stage = (self.stations[w as usize].stage + 1).min(self.retry_stages);
                    let window = self.window(stage);
                    let st = &mut self.stations[w as usize];
                    st.stage = stage;
                    st.backoff = rng.random_range(0..window);
                }
                SlotOutcome::Collision(transmitters)
            }
        }
    }
}

/// One virtual slot for `state` at time `now`: admits arrivals, then contends.
pub fn wifi_dcf_step(state: &mut DcfState, now: Nanos, rng: &mut impl Rng) -> SlotOutcome {
    state.admit_arrivals(now, rng);
    state.step(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lone_station_with_zero_backoff_succeeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = DcfState::new(1, 16, 6, Traffic::Saturated, &mut rng);
        s.stations[0].backoff = 0;
        assert_eq!(wifi_dcf_step(&mut s, 0, &mut rng), SlotOutcome::Success(0));
        assert_eq!(s.stations[0].stage, 0);
    }

    #[test]
    fn simultaneous_zero_backoff_collides_and_doubles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = DcfState::new(2, 16, 2, Traffic::Saturated, &mut rng);
        for round in 1..=4u32 {
            for st in s.stations.iter_mut() {
                st.backoff = 0;
            }
            assert_eq!(s.step(&mut rng), SlotOutcome::Collision(vec![0, 1]));
            let stage = round.min(2);
            assert!(s.stations.iter().all(|st| st.stage == stage));
            assert!(s.stations.iter().all(|st| st.backoff < 16 << stage));
        }
    }

    #[test]
    fn empty_queue_never_transmits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = DcfState::new(3, 16, 6, Traffic::Poisson(0.0), &mut rng);
        for t in 0..1000 {
            assert_eq!(wifi_dcf_step(&mut s, t * 9000, &mut rng), SlotOutcome::Idle);
        }
    }
}
