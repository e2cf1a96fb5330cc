//! Permutation-encoded genetic algorithm with a two-stage time-prefix /
//! linear-order crossover.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spt::{list_makespan, list_schedule, spt_order};
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament: usize,
    pub seed: u64,
    /// Put the SPT order into the initial population.
    pub seed_spt: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 50,
            generations: 200,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            tournament: 3,
            seed: 0,
            seed_spt: true,
        }
    }
}

impl GaConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config("GA population must be at least 2".into()));
        }
        if self.generations < 1 {
            return Err(Error::Config("GA needs at least one generation".into()));
        }
        for (name, rate) in [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config(format!("{name} rate must lie in [0, 1], got {rate}")));
            }
        }
        if self.tournament < 1 {
            return Err(Error::Config("tournament size must be at least 1".into()));
        }
        Ok(())
    }
}

/// A priority permutation of job ids. Decoding dispatches jobs in this order
/// onto the earliest-available machine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Chromosome(pub Vec<usize>);

impl Chromosome {
    pub fn is_permutation_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.0.len() == n && self.0.iter().all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
    }

    pub fn decode(&self, inst: &Instance) -> Schedule {
        list_schedule(inst, &self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaOutcome {
    pub schedule: Schedule,
    pub cmax: f64,
    pub best: Chromosome,
    /// Best makespan after initialization (index 0) and after each generation.
    pub trace: Vec<f64>,
}

/// TSX stage keeps the longest prefix of parent1 whose decoded starts all lie
/// before `cut`; LOX stage appends the rest in parent2's relative order.
pub fn crossover_at(inst: &Instance, parent1: &Chromosome, parent2: &Chromosome, cut: f64) -> Result<Chromosome> {
    let n = inst.n();
    if !parent1.is_permutation_of(n) || !parent2.is_permutation_of(n) {
        return Err(Error::InvalidInput("crossover parents must be permutations of the same job set".into()));
    }
    let decoded = parent1.decode(inst);
    let mut taken = vec![false; n];
    let mut child = Vec::with_capacity(n);
    for &job in parent1.0.iter().take_while(|&&j| decoded.entries[j].start < cut) {
        taken[job] = true;
        child.push(job);
    }
    child.extend(parent2.0.iter().copied().filter(|&j| !taken[j]));
    Ok(Chromosome(child))
}

/// Crossover with a cut time drawn uniformly from `[0, C_max(parent1))`.
pub fn crossover_tsx_lox<R: Rng + ?Sized>(
    inst: &Instance,
    parent1: &Chromosome,
    parent2: &Chromosome,
    rng: &mut R,
) -> Result<Chromosome> {
    let cmax = if parent1.is_permutation_of(inst.n()) { parent1.decode(inst).makespan(inst) } else { 0.0 };
    let cut = rng.gen::<f64>() * cmax;
    crossover_at(inst, parent1, parent2, cut)
}

/// Swaps two distinct uniformly chosen positions with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    let n = out.0.len();
    if n >= 2 && rng.gen::<f64>() < rate {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        out.0.swap(i, j);
    }
    out
}

struct Individual {
    genes: Chromosome,
    cmax: f64,
}

fn rank(a: &Individual, b: &Individual) -> Ordering {
    a.cmax.total_cmp(&b.cmax).then_with(|| a.genes.cmp(&b.genes))
}

fn tournament<'a, R: Rng>(pop: &'a [Individual], size: usize, rng: &mut R) -> &'a Individual {
    let mut best = &pop[rng.gen_range(0..pop.len())];
    for _ in 1..size {
        let cand = &pop[rng.gen_range(0..pop.len())];
        if rank(cand, best) == Ordering::Less {
            best = cand;
        }
    }
    best
}

pub fn ga_schedule(inst: &Instance, cfg: &GaConfig) -> Result<GaOutcome> {
    cfg.validate()?;
    let n = inst.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut scratch = vec![0.0; inst.machines()];
    let mut evaluate = |genes: Chromosome| {
        let cmax = list_makespan(inst, &genes.0, &mut scratch);
        Individual { genes, cmax }
    };

    let mut pop = Vec::with_capacity(cfg.population);
    if cfg.seed_spt {
        pop.push(evaluate(Chromosome(spt_order(inst))));
    }
    while pop.len() < cfg.population {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        pop.push(evaluate(Chromosome(perm)));
    }
    pop.sort_by(rank);

    let mut trace = Vec::with_capacity(cfg.generations + 1);
    trace.push(pop[0].cmax);
    for _ in 0..cfg.generations {
        let mut offspring = Vec::with_capacity(cfg.population);
        for _ in 0..cfg.population {
            let p1 = tournament(&pop, cfg.tournament, &mut rng).genes.clone();
            let p2 = tournament(&pop, cfg.tournament, &mut rng).genes.clone();
            let child =
                if rng.gen::<f64>() < cfg.crossover_rate { crossover_tsx_lox(inst, &p1, &p2, &mut rng)? } else { p1 };
            offspring.push(mutate(&child, cfg.mutation_rate, &mut rng));
        }
        pop.extend(offspring.into_iter().map(&mut evaluate));
        pop.sort_by(rank);
        pop.dedup_by(|a, b| a.genes == b.genes);
        pop.truncate(cfg.population);
        trace.push(pop[0].cmax);
    }

    let best = pop.swap_remove(0);
    let schedule = best.genes.decode(inst);
    Ok(GaOutcome { cmax: schedule.makespan(inst), schedule, best: best.genes, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::spt_schedule;
    use crate::model::Job;

    fn inst(jobs: &[(f64, f64)], m: usize) -> Instance {
        Instance::new(jobs.iter().enumerate().map(|(i, &(p, r))| Job::new(i, p, r)).collect(), m).unwrap()
    }

    #[test]
    fn equal_parents_give_same_child() {
        let i = inst(&[(3.0, 0.0), (5.0, 0.0), (2.0, 4.0), (1.0, 2.0)], 2);
        let p = Chromosome(vec![2, 0, 3, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(crossover_tsx_lox(&i, &p, &p, &mut rng).unwrap(), p);
        }
    }

    #[test]
    fn zero_cut_returns_second_parent() {
        let i = inst(&[(3.0, 0.0), (5.0, 0.0), (2.0, 4.0)], 2);
        let a = Chromosome(vec![0, 1, 2]);
        let b = Chromosome(vec![2, 1, 0]);
        assert_eq!(crossover_at(&i, &a, &b, 0.0).unwrap(), b);
    }

    #[test]
    fn prefix_then_relative_order() {
        // on one machine parent1 decodes to starts 0, 1, 2
        let i = inst(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)], 1);
        let a = Chromosome(vec![0, 1, 2]);
        let b = Chromosome(vec![2, 1, 0]);
        assert_eq!(crossover_at(&i, &a, &b, 0.5).unwrap(), Chromosome(vec![0, 2, 1]));
    }

    #[test]
    fn mismatched_parents_rejected() {
        let i = inst(&[(1.0, 0.0), (1.0, 0.0)], 1);
        let err = crossover_at(&i, &Chromosome(vec![0, 1]), &Chromosome(vec![0, 0]), 1.0);
        assert!(err.is_err());
    }

    #[test]
    fn mutation_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = Chromosome(vec![0, 1, 2, 3]);
        assert_eq!(mutate(&c, 0.0, &mut rng), c);
        assert_eq!(mutate(&Chromosome(vec![0]), 1.0, &mut rng), Chromosome(vec![0]));
    }

    #[test]
    fn mutation_is_reproducible() {
        let c = Chromosome(vec![0, 1, 2]);
        let a = mutate(&c, 1.0, &mut ChaCha8Rng::seed_from_u64(11));
        let b = mutate(&c, 1.0, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_permutation_of(3));
        // exactly one transposition
        assert_eq!(a.0.iter().zip(&c.0).filter(|(x, y)| x != y).count(), 2);
    }

    #[test]
    fn single_job_ga() {
        let i = inst(&[(4.0, 3.0)], 2);
        let out = ga_schedule(&i, &GaConfig { generations: 5, population: 4, ..Default::default() }).unwrap();
        assert_eq!(out.cmax, 7.0);
        assert!(out.trace.iter().all(|&c| c == 7.0));
    }

    #[test]
    fn seeded_ga_never_worse_than_spt() {
        let i = inst(&[(3.0, 0.0), (5.0, 0.0), (2.0, 4.0), (6.0, 1.0), (1.0, 9.0)], 2);
        let out = ga_schedule(&i, &GaConfig { generations: 10, population: 6, ..Default::default() }).unwrap();
        assert!(out.cmax <= spt_schedule(&i).makespan(&i));
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.trace.len(), 11);
    }

    #[test]
    fn invalid_config() {
        let i = inst(&[(1.0, 0.0)], 1);
        assert!(ga_schedule(&i, &GaConfig { population: 1, ..Default::default() }).is_err());
        assert!(ga_schedule(&i, &GaConfig { generations: 0, ..Default::default() }).is_err());
        assert!(ga_schedule(&i, &GaConfig { mutation_rate: 1.5, ..Default::default() }).is_err());
    }
}
