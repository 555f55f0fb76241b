#![allow(dead_code)]

use cfsem::{Dag, NodeId, NodeSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// DAG whose forward edges (in the order `perm`) are switched on by `bits`,
/// read row by row over pairs `i < j`.
pub fn dag_from_bits(perm: &[usize], bits: &[bool]) -> Dag {
    let n = perm.len();
    let labels: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits.get(k).copied().unwrap_or(false) {
                edges.push((labels[perm[i]].clone(), labels[perm[j]].clone()));
            }
            k += 1;
        }
    }
    Dag::new(labels, edges).expect("forward edges are acyclic")
}

pub fn random_dag(seed: u64, max_nodes: usize) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_nodes);
    let density: f64 = rng.gen_range(0.15..0.75);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(density)).collect();
    dag_from_bits(&perm, &bits)
}

pub fn arb_dag(max_nodes: usize) -> impl Strategy<Value = Dag> {
    (1..=max_nodes).prop_flat_map(|n| {
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
        )
            .prop_map(|(perm, bits)| dag_from_bits(&perm, &bits))
    })
}

/// Every subset of `items`, smallest first.
pub fn subsets(items: &[NodeId]) -> Vec<NodeSet> {
    let mut out: Vec<NodeSet> = (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    out.sort_by_key(|s| s.len());
    out
}

/// Subsets of size one or two.
pub fn small_sets(items: &[NodeId]) -> Vec<NodeSet> {
    subsets(items)
        .into_iter()
        .filter(|s| (1..=2).contains(&s.len()))
        .collect()
}
