//! Executable checks of the pointwise surgery identities, the consistency
//! event equality, the back-door theorem and the cross-world independence
//! condition, plus a seeded model generator for corpus runs.

mod generate;
pub mod mutants;

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use generate::{generate_random_sem, GeneratorProfile};

use crate::dist::{adjustment_formula, check_ci, check_markov, exact_joint_with_cap, positivity_violation, ProbTable, WorldPairs, WorldVar};
use crate::dsep::{backdoor_criterion, CriterionReport};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet};
use crate::scalar::Probability;
use crate::sem::{advance, Intervention, SemModel, Surgeries, DEFAULT_ENUMERATION_CAP};

fn check_cap(required: u128, cap: u64) -> Result<()> {
    if required > cap as u128 {
        Err(Error::EnumerationCap { required, cap })
    } else {
        Ok(())
    }
}

/// Which pointwise identity a counterexample breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaClaim {
    /// `V_{a,i}(u) = V^a_i(u)` off the treatment set.
    PearlEqualsNew,
    /// `A^a(u) = A(u)` on treatments that do not descend from other treatments.
    TreatmentPreserved,
    /// `V_i(u) = V_{a,i}(u) = V^a_i(u)` for non-treatment non-descendants.
    NonDescendantFixed,
}

/// A disturbance tuple where an identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub claim: LemmaClaim,
    pub u: Vec<usize>,
    pub node: NodeId,
    pub factual: usize,
    pub pearl: usize,
    pub new: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub tuples_checked: u128,
    pub pearl_equals_new: Option<Counterexample>,
    pub treatment_preserved: Option<Counterexample>,
    pub non_descendants_fixed: Option<Counterexample>,
    /// Treatments descending from another treatment; their `A^a` is built
    /// from the other treatments' levels, so the preservation identity does
    /// not apply to them.
    pub nested_treatments: NodeSet,
}

impl LemmaReport {
    pub fn passes(&self) -> bool {
        self.pearl_equals_new.is_none() && self.treatment_preserved.is_none() && self.non_descendants_fixed.is_none()
    }

    /// First counterexample found, if any.
    pub fn witness(&self) -> Option<&Counterexample> {
        self.pearl_equals_new
            .as_ref()
            .or(self.treatment_preserved.as_ref())
            .or(self.non_descendants_fixed.as_ref())
    }
}

/// Compares `M`, `M_a` and `M^a` at every disturbance tuple.
pub fn check_lemma_equalities<P: Probability>(m: &SemModel<P>, iv: &Intervention) -> Result<LemmaReport> {
    check_lemma_equalities_with(m, &Surgeries::build(m, iv)?, DEFAULT_ENUMERATION_CAP)
}

/// Same check against explicitly supplied surgeries (used to test the checker itself).
pub fn check_lemma_equalities_with<P: Probability>(
    m: &SemModel<P>,
    surgeries: &Surgeries<P>,
    cap: u64,
) -> Result<LemmaReport> {
    check_cap(m.disturbances().tuple_count(), cap)?;
    let g = m.dag();
    let a_set = surgeries.intervention.treatments();
    let descendants = g.descendants(&a_set)?;
    let nested_treatments = a_set.intersection(&descendants);
    let n = m.len();
    let (mut fact, mut pearl, mut new) = (vec![0; n], vec![0; n], vec![0; n]);
    let mut report = LemmaReport {
        tuples_checked: 0,
        pearl_equals_new: None,
        treatment_preserved: None,
        non_descendants_fixed: None,
        nested_treatments,
    };
    m.disturbances().for_each_tuple(|u| {
        report.tuples_checked += 1;
        m.eval_into(u, &mut fact);
        surgeries.pearl.eval_into(u, &mut pearl);
        surgeries.new.eval_into(u, &mut new);
        let witness = |claim, v: NodeId| Counterexample {
            claim,
            u: u.to_vec(),
            node: v,
            factual: fact[v],
            pearl: pearl[v],
            new: new[v],
        };
        for v in 0..n {
            let treated = a_set.contains(v);
            if report.pearl_equals_new.is_none() && !treated && pearl[v] != new[v] {
                report.pearl_equals_new = Some(witness(LemmaClaim::PearlEqualsNew, v));
            }
            if report.treatment_preserved.is_none()
                && treated
                && !report.nested_treatments.contains(v)
                && new[v] != fact[v]
            {
                report.treatment_preserved = Some(witness(LemmaClaim::TreatmentPreserved, v));
            }
            if report.non_descendants_fixed.is_none()
                && !treated
                && !descendants.contains(v)
                && (fact[v] != pearl[v] || fact[v] != new[v])
            {
                report.non_descendants_fixed = Some(witness(LemmaClaim::NonDescendantFixed, v));
            }
        }
    });
    Ok(report)
}

/// Outcome of comparing `{A^a = a, W^a = w}` with `{A = a, W = w}` for every `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub holds: bool,
    /// Number of `w` values whose events were compared.
    pub events_compared: usize,
    /// A `w` (values of `W` in canonical order) and a tuple in exactly one of the two events.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Set equality of the two consistency events over all disturbance tuples.
pub fn check_consistency_event<P: Probability>(m: &SemModel<P>, iv: &Intervention, w: &NodeSet) -> Result<ConsistencyReport> {
    check_consistency_event_with_cap(m, iv, w, DEFAULT_ENUMERATION_CAP)
}

pub fn check_consistency_event_with_cap<P: Probability>(
    m: &SemModel<P>,
    iv: &Intervention,
    w: &NodeSet,
    cap: u64,
) -> Result<ConsistencyReport> {
    m.dag().check_set(w)?;
    let a_set = iv.treatments();
    if !w.is_disjoint(&a_set) {
        return Err(Error::Precondition(format!(
            "W overlaps the treatment set at {}",
            m.dag().set_labels(&w.intersection(&a_set)).join(", ")
        )));
    }
    check_cap(m.disturbances().tuple_count(), cap)?;
    let new_model = m.surgery_new(iv)?;
    let n = m.len();
    let (mut fact, mut new) = (vec![0; n], vec![0; n]);
    let mut new_events: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut fact_events: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
    m.disturbances().for_each_tuple(|u| {
        m.eval_into(u, &mut fact);
        new_model.eval_into(u, &mut new);
        if iv.entries().iter().all(|&(v, a)| new[v] == a) {
            new_events
                .entry(w.iter().map(|v| new[v]).collect())
                .or_default()
                .insert(u.to_vec());
        }
        if iv.entries().iter().all(|&(v, a)| fact[v] == a) {
            fact_events
                .entry(w.iter().map(|v| fact[v]).collect())
                .or_default()
                .insert(u.to_vec());
        }
    });
    let keys: BTreeSet<&Vec<usize>> = new_events.keys().chain(fact_events.keys()).collect();
    let empty = BTreeSet::new();
    let mut witness = None;
    for key in &keys {
        let lhs = new_events.get(*key).unwrap_or(&empty);
        let rhs = fact_events.get(*key).unwrap_or(&empty);
        if lhs != rhs {
            let u = lhs.symmetric_difference(rhs).next().expect("sets differ").clone();
            witness = Some(((*key).clone(), u));
            break;
        }
    }
    Ok(ConsistencyReport {
        holds: witness.is_none(),
        events_compared: keys.len(),
        witness,
    })
}

/// Adjustment formula next to the counterfactual law it should identify.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaCheck<P> {
    pub adjusted: ProbTable<P>,
    pub counterfactual: ProbTable<P>,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport<P> {
    pub criterion: CriterionReport,
    pub positivity: bool,
    /// `(a, l)` event where positivity fails.
    pub positivity_violation: Option<String>,
    /// `Y^a _||_ A | L` on the shared disturbance space.
    pub ignorability: bool,
    /// `None` when the formula is undefined for the intervention level.
    pub formula: Option<FormulaCheck<P>>,
}

impl<P> TheoremReport<P> {
    pub fn formula_holds(&self) -> bool {
        self.formula.as_ref().is_some_and(|f| f.equal)
    }

    /// Criterion and positivity imply ignorability and the formula.
    pub fn confirmed(&self) -> bool {
        !(self.criterion.holds() && self.positivity) || (self.ignorability && self.formula_holds())
    }
}

/// Back-door checks for one model and intervention, sharing the enumeration
/// across many `(y, l)` queries.
#[derive(Debug, Clone)]
pub struct TheoremBench<'m, P> {
    model: &'m SemModel<P>,
    intervention: Intervention,
    worlds: WorldPairs<P>,
    factual: ProbTable<P>,
    intervened: ProbTable<P>,
    positivity: RefCell<HashMap<Vec<NodeId>, Option<String>>>,
}

impl<'m, P: Probability> TheoremBench<'m, P> {
    pub fn new(model: &'m SemModel<P>, iv: &Intervention, cap: u64) -> Result<Self> {
        let worlds = WorldPairs::new(model, iv, cap)?;
        let factual = worlds.factual_joint();
        let intervened = worlds.intervened_joint();
        Ok(Self {
            model,
            intervention: iv.clone(),
            worlds,
            factual,
            intervened,
            positivity: RefCell::default(),
        })
    }

    pub fn factual_joint(&self) -> &ProbTable<P> {
        &self.factual
    }

    pub fn intervened_joint(&self) -> &ProbTable<P> {
        &self.intervened
    }

    fn positivity_violation(&self, a_set: &NodeSet, l: &NodeSet) -> Result<Option<String>> {
        if let Some(hit) = self.positivity.borrow().get(&l.to_vec()) {
            return Ok(hit.clone());
        }
        let violation = positivity_violation(&self.factual, a_set, l)?.map(|(a, lv)| {
            let mut event: Vec<(usize, usize)> = a_set.iter().zip(a).chain(l.iter().zip(lv)).collect();
            event.sort_unstable();
            self.factual.describe_event(&event)
        });
        self.positivity.borrow_mut().insert(l.to_vec(), violation.clone());
        Ok(violation)
    }

    pub fn check(&self, y: NodeId, l: &NodeSet) -> Result<TheoremReport<P>> {
        let a_set = self.intervention.treatments();
        let criterion = backdoor_criterion(self.model.dag(), &a_set, y, l)?;
        let violation = self.positivity_violation(&a_set, l)?;

        let mut vars: Vec<WorldVar> = a_set.iter().chain(l.iter()).map(WorldVar::Factual).collect();
        vars.push(WorldVar::Intervened(y));
        let twin = self.worlds.table(&vars);
        let ids = |s: &NodeSet| -> NodeSet { s.iter().map(|v| self.worlds.id(WorldVar::Factual(v))).collect() };
        let y_cf = NodeSet::singleton(self.worlds.id(WorldVar::Intervened(y)));
        let ignorability = check_ci(&twin, &ids(&a_set), &y_cf, &ids(l))?;

        let formula = match adjustment_formula(&self.factual, &self.intervention, y, l) {
            Ok(adjusted) => {
                let counterfactual = self.intervened.marginal(&NodeSet::singleton(y))?;
                let equal = adjusted.same(&counterfactual);
                Some(FormulaCheck {
                    adjusted,
                    counterfactual,
                    equal,
                })
            }
            Err(Error::Positivity(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(TheoremReport {
            criterion,
            positivity: violation.is_none(),
            positivity_violation: violation,
            ignorability,
            formula,
        })
    }
}

/// Criterion, positivity, ignorability and formula verdicts for one query.
pub fn check_backdoor_theorem<P: Probability>(
    m: &SemModel<P>,
    iv: &Intervention,
    y: NodeId,
    l: &NodeSet,
) -> Result<TheoremReport<P>> {
    TheoremBench::new(m, iv, DEFAULT_ENUMERATION_CAP)?.check(y, l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfrcistgReport {
    pub holds: bool,
    /// Full assignments examined (zero when the disturbances are independent).
    pub assignments_checked: u128,
    /// First assignment at which the structural variables are dependent.
    pub witness: Option<Vec<usize>>,
}

/// For every full assignment `v`, are the variables `f_i(v_pa(i), U_i)` mutually independent?
pub fn check_ffrcistg<P: Probability>(m: &SemModel<P>) -> Result<FfrcistgReport> {
    check_ffrcistg_with_cap(m, DEFAULT_ENUMERATION_CAP)
}

pub fn check_ffrcistg_with_cap<P: Probability>(m: &SemModel<P>, cap: u64) -> Result<FfrcistgReport> {
    if m.disturbances().is_independent() {
        return Ok(FfrcistgReport {
            holds: true,
            assignments_checked: 0,
            witness: None,
        });
    }
    cross_world_independence(m, cap)
}

/// Exact factorization test of the structural variables at every `v`.
///
/// Only nodes with children influence the structural variables, so the
/// remaining coordinates of `v` stay at their first value.
fn cross_world_independence<P: Probability>(m: &SemModel<P>, cap: u64) -> Result<FfrcistgReport> {
    let sizes = m.domain_sizes();
    let n = m.len();
    let relevant: Vec<NodeId> = m.dag().nodes().filter(|&v| !m.dag().child_ids(v).is_empty()).collect();
    let relevant_sizes: Vec<usize> = relevant.iter().map(|&v| sizes[v]).collect();
    let assignments: u128 = relevant_sizes.iter().map(|&s| s as u128).product();
    check_cap(assignments * m.disturbances().weighted_count(), cap)?;

    let mut tuples: Vec<(Vec<usize>, P)> = Vec::new();
    m.disturbances().for_each_weighted(|u, p| {
        if !p.is_negligible() {
            tuples.push((u.to_vec(), p.clone()));
        }
    });
    let cells: usize = sizes.iter().product();
    let mut joint = vec![P::zero(); cells];
    let mut touched: Vec<usize> = Vec::new();
    let mut outputs = vec![0usize; n];
    let mut digits = vec![0usize; relevant.len()];
    let mut v = vec![0usize; n];
    let mut checked = 0u128;
    loop {
        checked += 1;
        for (&node, &x) in relevant.iter().zip(&digits) {
            v[node] = x;
        }
        for (u, p) in &tuples {
            let mut idx = 0;
            for i in 0..n {
                idx = idx * sizes[i] + m.function(i).eval(&v, u[i]);
            }
            if joint[idx].is_negligible() {
                touched.push(idx);
            }
            joint[idx] += p;
        }
        let mut marginals: Vec<Vec<P>> = sizes.iter().map(|&s| vec![P::zero(); s]).collect();
        let decode = |mut idx: usize, out: &mut [usize]| {
            for i in (0..n).rev() {
                out[i] = idx % sizes[i];
                idx /= sizes[i];
            }
        };
        for &idx in &touched {
            decode(idx, &mut outputs);
            for i in 0..n {
                marginals[i][outputs[i]] += &joint[idx];
            }
        }
        let support_product: u128 = marginals
            .iter()
            .map(|m| m.iter().filter(|p| !p.is_negligible()).count() as u128)
            .product();
        let factorizes = touched.len() as u128 == support_product
            && touched.iter().all(|&idx| {
                decode(idx, &mut outputs);
                let product = (0..n).fold(P::one(), |acc, i| acc * marginals[i][outputs[i]].clone());
                joint[idx].same(&product)
            });
        for &idx in &touched {
            joint[idx] = P::zero();
        }
        touched.clear();
        if !factorizes {
            return Ok(FfrcistgReport {
                holds: false,
                assignments_checked: checked,
                witness: Some(v),
            });
        }
        if !advance(&mut digits, &relevant_sizes) {
            break;
        }
    }
    Ok(FfrcistgReport {
        holds: true,
        assignments_checked: checked,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationReport {
    /// Cross-world condition on the surged model, relative to the surged graph.
    pub surged: FfrcistgReport,
    /// The surged model's joint law factorizes along the surged graph.
    pub markov: bool,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.surged.holds && self.markov
    }
}

/// The new surgery keeps the cross-world condition and the Markov factorization.
pub fn check_ffrcistg_preserved<P: Probability>(m: &SemModel<P>, iv: &Intervention) -> Result<PreservationReport> {
    check_ffrcistg_preserved_with_cap(m, iv, DEFAULT_ENUMERATION_CAP)
}

pub fn check_ffrcistg_preserved_with_cap<P: Probability>(
    m: &SemModel<P>,
    iv: &Intervention,
    cap: u64,
) -> Result<PreservationReport> {
    let base = check_ffrcistg_with_cap(m, cap)?;
    if !base.holds {
        return Err(Error::Precondition(
            "the model does not satisfy the cross-world independence condition".into(),
        ));
    }
    let surged = m.surgery_new(iv)?;
    let surged_report = check_ffrcistg_with_cap(&surged, cap)?;
    let markov = check_markov(&exact_joint_with_cap(&surged, cap)?, surged.dag())?;
    Ok(PreservationReport {
        surged: surged_report,
        markov,
    })
}
