//! Seeded random instances. The same parameters and seed always give the
//! same instance.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Arc, VertexId, Window, WindowedDag};
use crate::huc::{check_schedule, step, within_windows, HucInstance, InitialState, OperatingPoint};
use crate::scalar::{int, ratio, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DagParams {
    pub vertices: usize,
    /// Probability of each extra forward arc.
    pub density: f64,
    pub value_range: (i64, i64),
    pub resource_range: (i64, i64),
    /// Probability that an intermediate vertex carries a bounded window.
    pub window_prob: f64,
    /// Window width as a fraction of the vertex's reachable resource range.
    pub window_width: f64,
}

impl Default for DagParams {
    fn default() -> Self {
        DagParams {
            vertices: 10,
            density: 0.3,
            value_range: (0, 20),
            resource_range: (1, 10),
            window_prob: 0.3,
            window_width: 1.0,
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random DAG on vertices `0..n` in index order; `0` is the source and
/// `n - 1` the sink, and every vertex lies on a source-to-sink path.
pub fn random_dag(params: &DagParams, seed: u64) -> WindowedDag {
    let mut rng = rng_for(seed);
    let n = params.vertices.max(2);
    let mut pairs = BTreeSet::new();
    for v in 1..n {
        pairs.insert((rng.random_range(0..v), v));
    }
    for u in 0..n - 1 {
        pairs.insert((u, rng.random_range(u + 1..n)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(params.density) {
                pairs.insert((u, v));
            }
        }
    }
    let (vlo, vhi) = params.value_range;
    let (rlo, rhi) = params.resource_range;
    let arcs: Vec<Arc> = pairs
        .into_iter()
        .map(|(u, v)| Arc::new(u, v, int(rng.random_range(vlo..=vhi)), int(rng.random_range(rlo..=rhi))))
        .collect();

    // range of cumulative resource each vertex can see
    let mut range: Vec<Option<(i64, i64)>> = vec![None; n];
    range[0] = Some((0, 0));
    for v in 1..n {
        for a in arcs.iter().filter(|a| a.to.0 == v) {
            let (lo, hi) = range[a.from.0].expect("predecessors come first");
            let r = a.resource.to_integer().try_into().unwrap_or(0i64);
            let (lo, hi) = (lo + r, hi + r);
            range[v] = Some(match range[v] {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
    }
    let mut windows = vec![Window::at_least(int(0)); n];
    for v in 1..n {
        if v != n - 1 && !rng.random_bool(params.window_prob) {
            windows[v] = Window::unbounded();
            continue;
        }
        let (lo, hi) = range[v].expect("every vertex is reachable");
        let width = ((hi - lo + 2) as f64 * params.window_width.clamp(0.0, 1.0)).round() as i64;
        let a = rng.random_range(lo - 1..=hi + 1 - width);
        let b = a + rng.random_range(0..=width);
        windows[v] = match rng.random_range(0..4) {
            0 => Window { lo: Some(int(a)), hi: None },
            1 => Window { lo: None, hi: Some(int(b)) },
            _ => Window::new(int(a), int(b)),
        };
    }
    WindowedDag::new(windows, arcs, VertexId(0), VertexId(n - 1)).expect("forward arcs form a valid dag")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriceMode {
    /// Independent prices per period.
    #[default]
    Independent,
    /// First price drawn, the others within ±5% of it.
    NearFlat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HucParams {
    pub periods: usize,
    /// Operating points including idle.
    pub points: usize,
    pub min_updown: usize,
    pub price_mode: PriceMode,
    /// Largest distance of a window bound from the sampled schedule's volume.
    pub slack: i64,
    pub random_initial: bool,
}

impl Default for HucParams {
    fn default() -> Self {
        HucParams {
            periods: 6,
            points: 3,
            min_updown: 2,
            price_mode: PriceMode::Independent,
            slack: 6,
            random_initial: false,
        }
    }
}

/// Random single-unit instance whose windows admit at least one legal
/// schedule (the one sampled to place them).
pub fn random_huc(params: &HucParams, seed: u64) -> HucInstance {
    let mut rng = rng_for(seed);
    let t_max = params.periods.max(1);
    let levels = params.points.max(1);
    let big_l = params.min_updown.max(1);
    let mut points = vec![OperatingPoint { flow: int(0), power: int(0) }];
    for _ in 1..levels {
        points.push(OperatingPoint {
            flow: int(rng.random_range(1..=6)),
            power: ratio(rng.random_range(10..=100), 10),
        });
    }
    let total: i64 = points.iter().map(|p| p.flow.to_integer().try_into().unwrap_or(0i64)).sum();
    let min_inc = points.iter().skip(1).map(|p| p.flow.to_integer().try_into().unwrap_or(0i64)).min().unwrap_or(0);
    let mut ramp = || int(if total == 0 { 0 } else { rng.random_range(min_inc..=total) });
    let (ramp_up, ramp_down) = (ramp(), ramp());
    let prices: Vec<Scalar> = match params.price_mode {
        PriceMode::Independent => (0..t_max).map(|_| ratio(rng.random_range(0..=300), 100)).collect(),
        PriceMode::NearFlat => {
            let base = rng.random_range(50..=300);
            (0..t_max)
                .map(|t| {
                    if t == 0 {
                        ratio(base, 100)
                    } else {
                        ratio(base * rng.random_range(95..=105), 10_000)
                    }
                })
                .collect()
        }
    };
    let phi1 = ratio(rng.random_range(50..=200), 100);
    let phi2 = ratio(rng.random_range(0..=50), 100);
    let initial = if params.random_initial {
        let lmax = big_l as i64 - 1;
        InitialState {
            i: rng.random_range(0..levels),
            l: rng.random_range(-lmax..=lmax),
        }
    } else {
        InitialState::default()
    };
    let mut inst = HucInstance {
        periods: t_max,
        points,
        ramp_up,
        ramp_down,
        min_updown: big_l,
        prices,
        phi1,
        phi2,
        win_lo: Vec::new(),
        win_hi: Vec::new(),
        initial,
    };

    // a random legal walk fixes a schedule the windows must admit
    let flows = inst.level_flows();
    let (mut i, mut l) = (initial.i, initial.l);
    let mut volume = int(0);
    let mut schedule = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        let moves: Vec<(usize, i64)> = (0..levels).filter_map(|j| step(&inst, &flows, i, l, j).map(|l2| (j, l2))).collect();
        let (j, l2) = moves[rng.random_range(0..moves.len())];
        schedule.push(j);
        volume += &flows[j];
        let below = int(rng.random_range(0..=params.slack));
        let above = int(rng.random_range(0..=params.slack));
        let lo = &volume - below;
        inst.win_lo.push(if lo < int(0) { int(0) } else { lo });
        inst.win_hi.push(&volume + above);
        i = j;
        l = l2;
    }
    debug_assert!(check_schedule(&inst, &schedule).is_ok() && within_windows(&inst, &schedule));
    inst
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Dag(DagParams),
    Huc(HucParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub count: usize,
    pub family: Family,
}

#[derive(Debug, Clone)]
pub enum Generated {
    Dag(WindowedDag),
    Huc(HucInstance),
}

/// Seed of the `k`-th instance of a batch.
pub fn instance_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64)
}

/// Named instances of a batch, in order.
pub fn generate(config: &GeneratorConfig) -> Vec<(String, Generated)> {
    (0..config.count)
        .map(|k| {
            let s = instance_seed(config.seed, k);
            match &config.family {
                Family::Dag(p) => (format!("dag-{}-{k:04}", config.seed), Generated::Dag(random_dag(p, s))),
                Family::Huc(p) => (format!("huc-{}-{k:04}", config.seed), Generated::Huc(random_huc(p, s))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_is_valid_and_deterministic() {
        let p = DagParams { vertices: 12, ..Default::default() };
        let a = random_dag(&p, 7);
        let b = random_dag(&p, 7);
        assert!(a.validate().is_ok());
        assert_eq!(a.arcs(), b.arcs());
        assert_eq!(a.windows(), b.windows());
        assert_eq!(a.vertex_count(), 12);
        let reach = a.reachable_from_source();
        let back = a.reaches_sink();
        assert!(reach.iter().zip(&back).all(|(x, y)| *x && *y));
    }

    #[test]
    fn near_flat_prices_stay_in_band() {
        for seed in 0..20 {
            let inst = random_huc(
                &HucParams {
                    price_mode: PriceMode::NearFlat,
                    periods: 8,
                    ..Default::default()
                },
                seed,
            );
            let base = inst.prices[0].clone();
            for p in &inst.prices {
                assert!(p >= &(&base * ratio(95, 100)) && p <= &(&base * ratio(105, 100)));
            }
        }
    }

    #[test]
    fn huc_instances_are_valid() {
        for seed in 0..30 {
            let inst = random_huc(
                &HucParams {
                    random_initial: true,
                    min_updown: 3,
                    ..Default::default()
                },
                seed,
            );
            inst.validate().unwrap();
        }
    }
}
