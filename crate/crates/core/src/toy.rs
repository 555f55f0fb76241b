//! Small canonical models used throughout the tests, fixtures and docs.

use num_rational::BigRational;

use crate::graph::Dag;
use crate::scalar::Probability;
use crate::sem::{DisturbanceModel, ModelMode, SemModel, StructFn, Value};

fn q<P: Probability>(n: i64, d: i64) -> P {
    P::from_rational(&BigRational::new(n.into(), d.into()))
}

fn binary(n: usize) -> Vec<Vec<Value>> {
    vec![vec![Value::Int(0), Value::Int(1)]; n]
}

/// Three-node confounded graph `L -> A`, `L -> Y`, `A -> Y`.
pub fn figure1() -> Dag {
    Dag::new(["L", "A", "Y"], [("L", "A"), ("L", "Y"), ("A", "Y")]).expect("static graph")
}

/// `figure1` with the arrows out of `A` removed.
pub fn figure2() -> Dag {
    Dag::new(["L", "A", "Y"], [("L", "A"), ("L", "Y")]).expect("static graph")
}

/// Binary model over [`figure1`]:
/// `L = U_L`, `A = L xor U_A`, `Y = (A and L) xor U_Y`, with independent
/// `U_L ~ Bernoulli(1/2)`, `U_A ~ Bernoulli(3/10)`, `U_Y ~ Bernoulli(1/10)`.
pub fn toy_sem<P: Probability>() -> SemModel<P> {
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, u| pa[0] ^ u),
        StructFn::tabulate(vec![0, 1], vec![2, 2], 2, |pa, u| (pa[0] & pa[1]) ^ u),
    ];
    let pmfs = vec![
        vec![q(1, 2), q(1, 2)],
        vec![q(7, 10), q(3, 10)],
        vec![q(9, 10), q(1, 10)],
    ];
    let disturbances = DisturbanceModel::independent(binary(3), pmfs).expect("valid pmfs");
    SemModel::new(figure1(), binary(3), functions, disturbances, ModelMode::NpsemIe).expect("valid toy model")
}

/// `A -> Y` with `A = U_A`, `Y = A xor U_Y`, `U_A ~ Bernoulli(1/2)`, `U_Y ~ Bernoulli(1/4)`.
pub fn two_node_chain<P: Probability>() -> SemModel<P> {
    let dag = Dag::new(["A", "Y"], [("A", "Y")]).expect("static graph");
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, u| pa[0] ^ u),
    ];
    let pmfs = vec![vec![q(1, 2), q(1, 2)], vec![q(3, 4), q(1, 4)]];
    let disturbances = DisturbanceModel::independent(binary(2), pmfs).expect("valid pmfs");
    SemModel::new(dag, binary(2), functions, disturbances, ModelMode::NpsemIe).expect("valid model")
}

/// Dependent-error model over [`figure1`] that still satisfies the
/// cross-world independence condition: `L = U_L`, `A = L xor U_A`,
/// `Y = A and L`, with `U_Y` an exact copy of `U_A` and `U_L` independent.
/// `Y` ignores its disturbance, so the dependence never surfaces.
pub fn dependent_errors<P: Probability>() -> SemModel<P> {
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, u| pa[0] ^ u),
        StructFn::tabulate(vec![0, 1], vec![2, 2], 2, |pa, _| pa[0] & pa[1]),
    ];
    let rows = vec![
        (vec![0, 0, 0], q(7, 20)),
        (vec![0, 1, 1], q(3, 20)),
        (vec![1, 0, 0], q(7, 20)),
        (vec![1, 1, 1], q(3, 20)),
    ];
    let disturbances = DisturbanceModel::joint(binary(3), rows).expect("valid pmf");
    SemModel::new(figure1(), binary(3), functions, disturbances, ModelMode::FfrcistgCandidate)
        .expect("valid model")
}

/// `A -> Y` with `A = U_A`, `Y = A xor U_Y` and `U_A = U_Y` a single fair
/// coin: the structural variables are dependent at every parent value.
pub fn correlated_errors<P: Probability>() -> SemModel<P> {
    let dag = Dag::new(["A", "Y"], [("A", "Y")]).expect("static graph");
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, u| pa[0] ^ u),
    ];
    let rows = vec![(vec![0, 0], q(1, 2)), (vec![1, 1], q(1, 2))];
    let disturbances = DisturbanceModel::joint(binary(2), rows).expect("valid pmf");
    SemModel::new(dag, binary(2), functions, disturbances, ModelMode::FfrcistgCandidate).expect("valid model")
}

/// `X -> Y` with `X` a fair coin and `Y = X`.
pub fn perfect_copy<P: Probability>() -> SemModel<P> {
    let dag = Dag::new(["X", "Y"], [("X", "Y")]).expect("static graph");
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, _| pa[0]),
    ];
    let pmfs = vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 2)]];
    let disturbances = DisturbanceModel::independent(binary(2), pmfs).expect("valid pmfs");
    SemModel::new(dag, binary(2), functions, disturbances, ModelMode::NpsemIe).expect("valid model")
}

/// [`figure1`] with `A = L` exactly, so positivity fails for `A` given `L`.
pub fn noiseless_treatment<P: Probability>() -> SemModel<P> {
    let functions = vec![
        StructFn::tabulate(vec![], vec![], 2, |_, u| u),
        StructFn::tabulate(vec![0], vec![2], 2, |pa, _| pa[0]),
        StructFn::tabulate(vec![0, 1], vec![2, 2], 2, |pa, u| pa[1] ^ u),
    ];
    let pmfs = vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 2)], vec![q(9, 10), q(1, 10)]];
    let disturbances = DisturbanceModel::independent(binary(3), pmfs).expect("valid pmfs");
    SemModel::new(figure1(), binary(3), functions, disturbances, ModelMode::NpsemIe).expect("valid model")
}
