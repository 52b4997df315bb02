//! Minimizing teleportation count over the 2^m_g configuration space.
//!
//! Three strategies: full enumeration (capped), a generational genetic
//! algorithm with roulette selection, two-point crossover, single-gene
//! mutation and elitist replacement, and a uniform random-search baseline
//! run at a matched evaluation budget.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::cost::{Configuration, CostEvaluator, EvalOptions};
use crate::error::{Error, Result};
use crate::partition::PartitionAssignment;

/// Default cap on m_g for exhaustive search (2^26 evaluations).
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    /// Population size; `None` derives ceil(m_g / 2), clamped to at least 2.
    pub pop_size: Option<usize>,
    /// Probability that an offspring receives a single-gene mutation.
    pub p_m: f64,
    /// Probability that a selected parent pair is crossed over.
    pub p_c: f64,
    /// Fraction of the population treated as elite slots.
    pub p_r: f64,
    pub max_generations: usize,
    /// Stop when the best cost improves by less than `stall_epsilon` over
    /// this many generations.
    pub stall_generations: usize,
    pub stall_epsilon: f64,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            pop_size: None,
            p_m: 0.1,
            p_c: 0.9,
            p_r: 0.4,
            max_generations: 1000,
            stall_generations: 10,
            stall_epsilon: 0.001,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn effective_pop_size(&self, m_g: usize) -> usize {
        self.pop_size.unwrap_or(m_g.div_ceil(2)).max(2)
    }

    fn validate(&self) -> Result<()> {
        for (name, p) in [("p_m", self.p_m), ("p_c", self.p_c), ("p_r", self.p_r)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

/// A configuration with its cached cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    pub bits: Configuration,
    pub tc: u32,
}

impl Chromosome {
    /// Ordering key: better cost first, ties by bitstring.
    fn key(&self) -> (u32, &Configuration) {
        (self.tc, &self.bits)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult {
    pub best_config: Configuration,
    pub best_tc: u32,
    /// Number of fitness evaluations performed.
    pub evaluations: u64,
    /// Generations run; populated by the genetic algorithm only.
    pub generations: Option<usize>,
    pub wall_time: f64,
    /// Best cost after each generation (GA) or each sample (random search).
    pub history: Vec<u32>,
}

/// Evaluates every configuration and returns the minimum, breaking ties
/// toward the lexicographically smallest bitstring. Refuses m_g above `cap`.
pub fn exhaustive_search_capped(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    opt: EvalOptions,
    cap: usize,
) -> Result<OptimizerResult> {
    let started = Instant::now();
    let eval = CostEvaluator::new(circuit, assignment)?;
    let m_g = eval.m_g();
    if m_g > cap {
        return Err(Error::OverCap {
            what: "global gate count",
            value: m_g,
            cap,
            hint: "2^m_g configurations is out of reach; use the genetic algorithm",
        });
    }
    let total: u64 = 1 << m_g;
    let (best_tc, best_value) = (0..total)
        .into_par_iter()
        .map(|value| {
            let cfg = Configuration::from_index(value, m_g);
            let tc = eval.cost(&cfg, opt).expect("length matches");
            (tc, value)
        })
        .min()
        .expect("at least one configuration");

    Ok(OptimizerResult {
        best_config: Configuration::from_index(best_value, m_g),
        best_tc,
        evaluations: total,
        generations: None,
        wall_time: started.elapsed().as_secs_f64(),
        history: vec![best_tc],
    })
}

pub fn exhaustive_search(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    opt: EvalOptions,
) -> Result<OptimizerResult> {
    exhaustive_search_capped(circuit, assignment, opt, DEFAULT_EXHAUSTIVE_CAP)
}

/// Fitness-proportional parent pick with fitness 1 / (1 + TC).
pub fn roulette_select<R: Rng>(population: &[Chromosome], rng: &mut R) -> usize {
    debug_assert!(!population.is_empty());
    let weights: Vec<f64> = population.iter().map(|c| 1.0 / (1.0 + c.tc as f64)).collect();
    let total: f64 = weights.iter().sum();
    let mut draw = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw <= 0.0 {
            return i;
        }
    }
    population.len() - 1
}

/// Swaps the segment between two uniformly drawn cut points 0 <= i < j <= m_g.
pub fn two_point_crossover<R: Rng>(
    a: &Configuration,
    b: &Configuration,
    rng: &mut R,
) -> Result<(Configuration, Configuration)> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "crossover needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidArgument(
            "crossover needs at least 2 genes".into(),
        ));
    }
    let m = a.len();
    let (i, j) = loop {
        let i = rng.gen_range(0..=m);
        let j = rng.gen_range(0..=m);
        if i < j {
            break (i, j);
        }
        if j < i {
            break (j, i);
        }
    };
    let mut left = a.clone();
    let mut right = b.clone();
    for k in i..j {
        left.set(k, b.bit(k));
        right.set(k, a.bit(k));
    }
    Ok((left, right))
}

/// Flips exactly one uniformly chosen gene.
pub fn mutate<R: Rng>(x: &Configuration, rng: &mut R) -> Configuration {
    debug_assert!(x.len() >= 1);
    let mut out = x.clone();
    let k = rng.gen_range(0..x.len());
    out.set(k, !x.bit(k));
    out
}

/// Elitism: the `round(p_r * pop)` best parents replace the same number of
/// worst offspring. Ties break toward the smaller bitstring.
pub fn elitist_replace(
    parents: &[Chromosome],
    mut offspring: Vec<Chromosome>,
    p_r: f64,
) -> Vec<Chromosome> {
    debug_assert_eq!(parents.len(), offspring.len());
    let pop = parents.len();
    let elite = ((p_r * pop as f64).round() as usize).min(pop);
    if elite == 0 {
        return offspring;
    }

    let mut parent_order: Vec<usize> = (0..pop).collect();
    parent_order.sort_by(|&x, &y| parents[x].key().cmp(&parents[y].key()).then(x.cmp(&y)));
    let mut offspring_order: Vec<usize> = (0..pop).collect();
    offspring_order
        .sort_by(|&x, &y| offspring[x].key().cmp(&offspring[y].key()).then(x.cmp(&y)));

    for rank in 0..elite {
        let worst_slot = offspring_order[pop - 1 - rank];
        offspring[worst_slot] = parents[parent_order[rank]].clone();
    }
    offspring
}

/// Generational GA over configurations. Deterministic for a given seed.
pub fn ga_optimize(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    params: &GaParams,
    opt: EvalOptions,
) -> Result<OptimizerResult> {
    params.validate()?;
    let started = Instant::now();
    let eval = CostEvaluator::new(circuit, assignment)?;
    let m_g = eval.m_g();

    if m_g == 0 {
        let tc = eval.cost(&Configuration::empty(), opt)?;
        return Ok(OptimizerResult {
            best_config: Configuration::empty(),
            best_tc: tc,
            evaluations: 1,
            generations: Some(0),
            wall_time: started.elapsed().as_secs_f64(),
            history: vec![tc],
        });
    }

    let pop_size = params.effective_pop_size(m_g);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut evaluations = 0u64;

    let score = |bits: Configuration, evaluations: &mut u64| -> Chromosome {
        *evaluations += 1;
        let tc = eval.cost(&bits, opt).expect("length matches");
        Chromosome { bits, tc }
    };

    let mut population: Vec<Chromosome> = (0..pop_size)
        .map(|_| {
            let bits = Configuration::random(m_g, &mut rng);
            score(bits, &mut evaluations)
        })
        .collect();

    let mut best = population
        .iter()
        .min_by(|a, b| a.key().cmp(&b.key()))
        .expect("population is non-empty")
        .clone();
    let mut history = vec![best.tc];
    let mut generations = 0;

    for gen in 1..=params.max_generations {
        generations = gen;
        let mut offspring_bits = Vec::with_capacity(pop_size + 1);
        while offspring_bits.len() < pop_size {
            let i = roulette_select(&population, &mut rng);
            let j = roulette_select(&population, &mut rng);
            let (mut c1, mut c2) = if m_g >= 2 && rng.gen_bool(params.p_c) {
                two_point_crossover(&population[i].bits, &population[j].bits, &mut rng)?
            } else {
                (population[i].bits.clone(), population[j].bits.clone())
            };
            if rng.gen_bool(params.p_m) {
                c1 = mutate(&c1, &mut rng);
            }
            if rng.gen_bool(params.p_m) {
                c2 = mutate(&c2, &mut rng);
            }
            offspring_bits.push(c1);
            offspring_bits.push(c2);
        }
        offspring_bits.truncate(pop_size);

        let offspring: Vec<Chromosome> = offspring_bits
            .into_iter()
            .map(|bits| score(bits, &mut evaluations))
            .collect();
        population = elitist_replace(&population, offspring, params.p_r);

        let gen_best = population
            .iter()
            .min_by(|a, b| a.key().cmp(&b.key()))
            .expect("population is non-empty");
        if gen_best.key() < best.key() {
            best = gen_best.clone();
        }
        history.push(best.tc);

        if gen >= params.stall_generations {
            let before = history[gen - params.stall_generations] as f64;
            let now = history[gen] as f64;
            if before - now < params.stall_epsilon {
                break;
            }
        }
    }

    Ok(OptimizerResult {
        best_config: best.bits,
        best_tc: best.tc,
        evaluations,
        generations: Some(generations),
        wall_time: started.elapsed().as_secs_f64(),
        history,
    })
}

/// Uniform random sampling at a fixed evaluation budget; the running
/// minimum (first-found on ties) is returned.
pub fn random_search(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    budget: u64,
    seed: u64,
    opt: EvalOptions,
) -> Result<OptimizerResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument(
            "random search needs a positive budget".into(),
        ));
    }
    let started = Instant::now();
    let eval = CostEvaluator::new(circuit, assignment)?;
    let m_g = eval.m_g();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best: Option<(u32, Configuration)> = None;
    let mut history = Vec::with_capacity(budget as usize);
    for _ in 0..budget {
        let cfg = Configuration::random(m_g, &mut rng);
        let tc = eval.cost(&cfg, opt).expect("length matches");
        if best.as_ref().map_or(true, |(b, _)| tc < *b) {
            best = Some((tc, cfg));
        }
        history.push(best.as_ref().expect("just set").0);
    }
    let (best_tc, best_config) = best.expect("budget >= 1");

    Ok(OptimizerResult {
        best_config,
        best_tc,
        evaluations: budget,
        generations: None,
        wall_time: started.elapsed().as_secs_f64(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QubitId};
    use crate::cost::evaluate_cost;
    use crate::partition::Side;

    fn fan_instance(k: usize) -> (Circuit, PartitionAssignment) {
        let n = k + 1;
        let mut c = Circuit::new(n, "fan");
        for t in 1..=k {
            c.push(Gate::cnot(QubitId(0), QubitId(t)).unwrap()).unwrap();
        }
        let half = n.div_ceil(2);
        let sides = (0..n)
            .map(|i| if i < half { Side::A } else { Side::B })
            .collect();
        (c, PartitionAssignment::new(sides).unwrap())
    }

    #[test]
    fn exhaustive_on_empty_space() {
        let mut c = Circuit::new(2, "local");
        c.push(Gate::cnot(QubitId(0), QubitId(1)).unwrap()).unwrap();
        let p = PartitionAssignment::new(vec![Side::A, Side::A]).unwrap();
        let r = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        assert_eq!(r.best_tc, 0);
        assert!(r.best_config.is_empty());
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn exhaustive_finds_fan_optimum() {
        let (c, p) = fan_instance(7);
        let r = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        assert_eq!(r.best_tc, 2);
        assert_eq!(
            r.best_tc,
            evaluate_cost(&c, &p, &r.best_config, EvalOptions::default())
                .unwrap()
                .teleportations
        );
    }

    #[test]
    fn exhaustive_tie_breaks_lexicographically() {
        let (c, p) = fan_instance(2);
        let r = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        // Best cost is shared by several configurations; the smallest
        // bitstring must win regardless of evaluation order.
        let mut expect = None;
        for v in 0..(1u64 << r.best_config.len()) {
            let cfg = Configuration::from_index(v, r.best_config.len());
            let tc = evaluate_cost(&c, &p, &cfg, EvalOptions::default())
                .unwrap()
                .teleportations;
            if tc == r.best_tc {
                expect = Some(cfg);
                break;
            }
        }
        assert_eq!(r.best_config, expect.unwrap());
    }

    #[test]
    fn exhaustive_cap_refusal_mentions_ga() {
        let (c, p) = fan_instance(8);
        let err = exhaustive_search_capped(&c, &p, EvalOptions::default(), 3).unwrap_err();
        assert!(err.to_string().contains("genetic"));
    }

    #[test]
    fn roulette_prefers_low_cost() {
        let pop = vec![
            Chromosome {
                bits: Configuration::from_bitstring("0").unwrap(),
                tc: 0,
            },
            Chromosome {
                bits: Configuration::from_bitstring("1").unwrap(),
                tc: 1,
            },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 100_000;
        let mut hits = [0u32; 2];
        for _ in 0..draws {
            hits[roulette_select(&pop, &mut rng)] += 1;
        }
        // Weights 1 and 1/2: expect a 2:1 split within 3 sigma.
        let p = 2.0 / 3.0;
        let expected = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((hits[0] as f64 - expected).abs() < 3.0 * sigma, "{hits:?}");
    }

    #[test]
    fn roulette_uniform_on_equal_costs() {
        let pop: Vec<Chromosome> = (0..4)
            .map(|i| Chromosome {
                bits: Configuration::from_index(i, 2),
                tc: 6,
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 100_000;
        let mut hits = [0u32; 4];
        for _ in 0..draws {
            hits[roulette_select(&pop, &mut rng)] += 1;
        }
        let expected = draws as f64 / 4.0;
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for h in hits {
            assert!((h as f64 - expected).abs() < 3.0 * sigma, "{hits:?}");
        }
    }

    #[test]
    fn crossover_swaps_the_cut_segment() {
        let a = Configuration::from_bitstring("0000").unwrap();
        let b = Configuration::from_bitstring("1111").unwrap();
        // Search a seed whose first accepted draw is the pair (1, 3).
        for seed in 0..500 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (l, r) = two_point_crossover(&a, &b, &mut rng).unwrap();
            if l.to_bitstring() == "0110" {
                assert_eq!(r.to_bitstring(), "1001");
                return;
            }
        }
        panic!("no seed produced cuts (1, 3)");
    }

    #[test]
    fn crossover_identical_parents_identical_children() {
        let a = Configuration::from_bitstring("0101").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (l, r) = two_point_crossover(&a, &a.clone(), &mut rng).unwrap();
        assert_eq!(l, a);
        assert_eq!(r, a);
    }

    #[test]
    fn crossover_rejects_bad_lengths() {
        let a = Configuration::from_bitstring("01").unwrap();
        let b = Configuration::from_bitstring("011").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(two_point_crossover(&a, &b, &mut rng).is_err());
        let short = Configuration::from_bitstring("0").unwrap();
        assert!(two_point_crossover(&short, &short.clone(), &mut rng).is_err());
    }

    #[test]
    fn mutation_flips_exactly_one_gene() {
        let x = Configuration::from_bitstring("000000").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let y = mutate(&x, &mut rng);
            let distance = x
                .bits()
                .iter()
                .zip(y.bits())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(distance, 1);
        }
    }

    #[test]
    fn mutation_single_gene_always_flips() {
        let x = Configuration::from_bitstring("0").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(mutate(&x, &mut rng).to_bitstring(), "1");
    }

    #[test]
    fn mutation_position_histogram_uniform() {
        let x = Configuration::from_bitstring("00000").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 100_000;
        let mut hits = [0u32; 5];
        for _ in 0..trials {
            let y = mutate(&x, &mut rng);
            let pos = y.bits().iter().position(|&b| b).unwrap();
            hits[pos] += 1;
        }
        let expected = trials as f64 / 5.0;
        let sigma = (trials as f64 * 0.2 * 0.8).sqrt();
        for h in hits {
            assert!((h as f64 - expected).abs() < 3.0 * sigma, "{hits:?}");
        }
    }

    fn chrom(s: &str, tc: u32) -> Chromosome {
        Chromosome {
            bits: Configuration::from_bitstring(s).unwrap(),
            tc,
        }
    }

    #[test]
    fn replacement_extremes() {
        let parents = vec![chrom("00", 4), chrom("01", 2)];
        let offspring = vec![chrom("10", 6), chrom("11", 8)];
        assert_eq!(
            elitist_replace(&parents, offspring.clone(), 0.0),
            offspring
        );
        let full = elitist_replace(&parents, offspring.clone(), 1.0);
        let mut tcs: Vec<u32> = full.iter().map(|c| c.tc).collect();
        tcs.sort_unstable();
        assert_eq!(tcs, vec![2, 4]);
    }

    #[test]
    fn replacement_keeps_best_parent() {
        let parents = vec![chrom("00", 1), chrom("01", 9), chrom("10", 9), chrom("11", 9)];
        let offspring = vec![chrom("00", 5), chrom("01", 6), chrom("10", 7), chrom("11", 8)];
        let next = elitist_replace(&parents, offspring, 0.4);
        assert_eq!(next.len(), 4);
        assert_eq!(next.iter().map(|c| c.tc).min(), Some(1));
        // Two elite slots (round(0.4 * 4) = 2): the two worst offspring fall.
        assert!(!next.iter().any(|c| c.tc == 8));
        assert!(!next.iter().any(|c| c.tc == 7));
    }

    #[test]
    fn ga_trivial_when_no_global_gates() {
        let mut c = Circuit::new(2, "local");
        c.push(Gate::cnot(QubitId(0), QubitId(1)).unwrap()).unwrap();
        let p = PartitionAssignment::new(vec![Side::A, Side::A]).unwrap();
        let r = ga_optimize(&c, &p, &GaParams::default(), EvalOptions::default()).unwrap();
        assert_eq!(r.best_tc, 0);
        assert_eq!(r.generations, Some(0));
    }

    #[test]
    fn ga_single_gene_space() {
        let (c, p) = fan_instance(1);
        let r = ga_optimize(&c, &p, &GaParams::default(), EvalOptions::default()).unwrap();
        let e = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        assert_eq!(r.best_tc, e.best_tc);
    }

    #[test]
    fn ga_matches_exhaustive_on_fan() {
        let (c, p) = fan_instance(9);
        let e = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        for seed in 0..5 {
            let params = GaParams {
                seed,
                ..GaParams::default()
            };
            let r = ga_optimize(&c, &p, &params, EvalOptions::default()).unwrap();
            assert_eq!(r.best_tc, e.best_tc, "seed {seed}");
        }
    }

    #[test]
    fn ga_deterministic_and_counts_evaluations() {
        let (c, p) = fan_instance(6);
        let params = GaParams {
            seed: 42,
            ..GaParams::default()
        };
        let r1 = ga_optimize(&c, &p, &params, EvalOptions::default()).unwrap();
        let r2 = ga_optimize(&c, &p, &params, EvalOptions::default()).unwrap();
        assert_eq!(r1.best_config, r2.best_config);
        assert_eq!(r1.history, r2.history);
        let pop = params.effective_pop_size(3) as u64;
        assert_eq!(
            r1.evaluations,
            pop * (r1.generations.unwrap() as u64 + 1)
        );
    }

    #[test]
    fn ga_history_non_increasing() {
        let (c, p) = fan_instance(8);
        let params = GaParams {
            seed: 7,
            ..GaParams::default()
        };
        let r = ga_optimize(&c, &p, &params, EvalOptions::default()).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn random_search_basics() {
        let (c, p) = fan_instance(4);
        let e = exhaustive_search(&c, &p, EvalOptions::default()).unwrap();
        let r = random_search(&c, &p, 50, 3, EvalOptions::default()).unwrap();
        assert!(r.best_tc >= e.best_tc);
        assert_eq!(r.evaluations, 50);
        assert_eq!(r.history.len(), 50);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(
            r.best_tc,
            evaluate_cost(&c, &p, &r.best_config, EvalOptions::default())
                .unwrap()
                .teleportations
        );

        let one = random_search(&c, &p, 1, 9, EvalOptions::default()).unwrap();
        assert_eq!(one.evaluations, 1);
        assert!(random_search(&c, &p, 0, 0, EvalOptions::default()).is_err());
    }
}
