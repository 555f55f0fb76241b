use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::sem::{advance, DisturbanceModel, ModelMode, SemModel, StructFn, Value};

/// Largest node count the generator accepts; keeps exact enumeration cheap.
pub const MAX_GENERATED_NODES: usize = 8;

/// Shape of randomly generated models.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorProfile {
    pub nodes: usize,
    /// Domain sizes are drawn from `2..=max_domain`.
    pub max_domain: usize,
    /// Disturbance support sizes are drawn from `domain..=max_disturbance`.
    pub max_disturbance: usize,
    /// Probability of each forward edge in a random topological order.
    pub edge_probability: f64,
    /// Emit dependent disturbances that still satisfy the cross-world condition.
    pub ffrcistg: bool,
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        Self {
            nodes: 5,
            max_domain: 3,
            max_disturbance: 3,
            edge_probability: 0.5,
            ffrcistg: false,
        }
    }
}

impl GeneratorProfile {
    fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.nodes > MAX_GENERATED_NODES {
            return Err(Error::InvalidProfile(format!(
                "node count must be between 1 and {MAX_GENERATED_NODES}, got {}",
                self.nodes
            )));
        }
        if self.max_domain < 2 {
            return Err(Error::InvalidProfile("max_domain must be at least 2".into()));
        }
        if self.max_disturbance < self.max_domain {
            return Err(Error::InvalidProfile(
                "max_disturbance must be at least max_domain so every value is reachable".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return Err(Error::InvalidProfile(format!(
                "edge_probability must lie in [0, 1], got {}",
                self.edge_probability
            )));
        }
        Ok(())
    }
}

fn ints(n: usize) -> Vec<Value> {
    (0..n as i64).map(Value::Int).collect()
}

/// Strictly positive pmf with integer weights in `1..=9`.
fn random_pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

/// Row over `u` that hits every output value at least once.
fn surjective_row(rng: &mut ChaCha8Rng, domain: usize, u_size: usize) -> Vec<usize> {
    let mut row: Vec<usize> = (0..domain).collect();
    row.extend((domain..u_size).map(|_| rng.gen_range(0..domain)));
    row.shuffle(rng);
    row
}

/// Seeded random finite model. The same seed and profile always give the
/// same model.
///
/// Without `ffrcistg` the disturbances are independent and every structural
/// row is onto its domain, so every joint assignment has positive
/// probability. With `ffrcistg`, a block of at least two nodes ignores its
/// disturbances, which are then given an arbitrary joint law.
pub fn generate_random_sem(seed: u64, profile: &GeneratorProfile) -> Result<SemModel<BigRational>> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = profile.nodes;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let labels: Vec<String> = (1..=n).map(|i| format!("V{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(profile.edge_probability) {
                edges.push((labels[order[i]].clone(), labels[order[j]].clone()));
            }
        }
    }
    let dag = Dag::new(labels.iter().cloned(), edges)?;

    let domain: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=profile.max_domain)).collect();
    let u_size: Vec<usize> = domain
        .iter()
        .map(|&d| rng.gen_range(d..=profile.max_disturbance))
        .collect();

    let mut block = vec![false; n];
    if profile.ffrcistg && n >= 2 {
        let mut picks: Vec<usize> = (0..n).collect();
        picks.shuffle(&mut rng);
        block[picks[0]] = true;
        block[picks[1]] = true;
        for &v in &picks[2..] {
            block[v] = rng.gen_bool(0.5);
        }
    }

    let mut functions = Vec::with_capacity(n);
    for v in 0..n {
        let parents = dag.parent_ids(v).to_vec();
        let radices: Vec<usize> = parents.iter().map(|&p| domain[p]).collect();
        let configs: usize = radices.iter().product();
        let mut table = Vec::with_capacity(configs * u_size[v]);
        for _ in 0..configs {
            if block[v] {
                let out = rng.gen_range(0..domain[v]);
                table.extend(std::iter::repeat(out).take(u_size[v]));
            } else {
                table.extend(surjective_row(&mut rng, domain[v], u_size[v]));
            }
        }
        functions.push(StructFn::from_table(parents, radices, u_size[v], table)?);
    }

    let supports: Vec<Vec<Value>> = u_size.iter().map(|&s| ints(s)).collect();
    let domains: Vec<Vec<Value>> = domain.iter().map(|&d| ints(d)).collect();
    let pmfs: Vec<Vec<BigRational>> = u_size.iter().map(|&s| random_pmf(&mut rng, s)).collect();
    if !profile.ffrcistg {
        let disturbances = DisturbanceModel::independent(supports, pmfs)?;
        return SemModel::new(dag, domains, functions, disturbances, ModelMode::NpsemIe);
    }

    // Joint law: an arbitrary pmf over the block, independent of the rest.
    let members: Vec<usize> = (0..n).filter(|&v| block[v]).collect();
    let block_sizes: Vec<usize> = members.iter().map(|&v| u_size[v]).collect();
    let block_cells: usize = block_sizes.iter().product();
    let block_pmf = random_pmf(&mut rng, block_cells);
    let mut rows = Vec::new();
    let mut u = vec![0usize; n];
    loop {
        let mut cell = 0;
        for (&v, &s) in members.iter().zip(&block_sizes) {
            cell = cell * s + u[v];
        }
        let p = (0..n)
            .filter(|&v| !block[v])
            .fold(block_pmf[cell].clone(), |acc, v| acc * &pmfs[v][u[v]]);
        rows.push((u.clone(), p));
        if !advance(&mut u, &u_size) {
            break;
        }
    }
    let disturbances = DisturbanceModel::joint(supports, rows)?;
    SemModel::new(dag, domains, functions, disturbances, ModelMode::FfrcistgCandidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_ffrcistg;

    #[test]
    fn same_seed_same_model() {
        let p = GeneratorProfile::default();
        assert_eq!(generate_random_sem(7, &p).unwrap(), generate_random_sem(7, &p).unwrap());
        assert_ne!(generate_random_sem(7, &p).unwrap(), generate_random_sem(8, &p).unwrap());
    }

    #[test]
    fn profile_bounds_are_respected() {
        let p = GeneratorProfile {
            nodes: 6,
            max_domain: 3,
            max_disturbance: 4,
            ..GeneratorProfile::default()
        };
        for seed in 0..20 {
            let m = generate_random_sem(seed, &p).unwrap();
            assert_eq!(m.len(), 6);
            for v in m.dag().nodes() {
                let d = m.domains()[v].len();
                let s = m.disturbances().supports()[v].len();
                assert!((2..=3).contains(&d));
                assert!(s >= d && s <= 4);
            }
        }
    }

    #[test]
    fn bad_profiles_are_rejected() {
        let base = GeneratorProfile::default();
        for p in [
            GeneratorProfile { nodes: 0, ..base.clone() },
            GeneratorProfile { nodes: 99, ..base.clone() },
            GeneratorProfile { max_domain: 1, ..base.clone() },
            GeneratorProfile { max_disturbance: 2, ..base.clone() },
            GeneratorProfile { edge_probability: 1.5, ..base.clone() },
        ] {
            assert!(matches!(generate_random_sem(0, &p), Err(Error::InvalidProfile(_))));
        }
    }

    #[test]
    fn ffrcistg_profile_has_dependent_errors_and_passes() {
        let p = GeneratorProfile {
            nodes: 4,
            ffrcistg: true,
            ..GeneratorProfile::default()
        };
        for seed in 0..10 {
            let m = generate_random_sem(seed, &p).unwrap();
            assert_eq!(m.mode(), ModelMode::FfrcistgCandidate);
            assert!(!m.disturbances().is_independent());
            assert!(check_ffrcistg(&m).unwrap().holds);
        }
    }
}
