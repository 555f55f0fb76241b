//! Exact distributions by enumeration of the disturbance space.
//!
//! A [`ProbTable`] is a dense pmf over the joint values of a scope of
//! variables. Variable ids are node ids for ordinary tables; tables built
//! from [`WorldPairs`] also carry the intervened copy of node `i` under id
//! `n + i`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId, NodeSet};
use crate::scalar::Probability;
use crate::sem::{advance, Intervention, SemModel, Value, DEFAULT_ENUMERATION_CAP};

/// Name and value list of one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub values: Vec<Value>,
}

fn model_vars<P>(m: &SemModel<P>) -> Arc<[VarInfo]> {
    m.dag()
        .labels()
        .iter()
        .zip(m.domains())
        .map(|(name, values)| VarInfo {
            name: name.clone(),
            values: values.clone(),
        })
        .collect()
}

/// Exact pmf over the joint values of an ordered scope.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable<P> {
    vars: Arc<[VarInfo]>,
    scope: Vec<usize>,
    radices: Vec<usize>,
    probs: Vec<P>,
}

impl<P: Probability> ProbTable<P> {
    fn zeros(vars: Arc<[VarInfo]>, scope: Vec<usize>) -> Self {
        let radices: Vec<usize> = scope.iter().map(|&v| vars[v].values.len()).collect();
        let size = radices.iter().product();
        Self {
            vars,
            scope,
            radices,
            probs: vec![P::zero(); size],
        }
    }

    /// Scope variable ids, ascending.
    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn vars(&self) -> &[VarInfo] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn index_of(&self, values: &[usize]) -> usize {
        values.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    fn position(&self, var: usize) -> Result<usize> {
        self.scope
            .iter()
            .position(|&v| v == var)
            .ok_or_else(|| Error::InvalidQuery(format!("`{}` is not in the table's scope", self.var_name(var))))
    }

    fn var_name(&self, var: usize) -> String {
        self.vars.get(var).map_or_else(|| format!("#{var}"), |v| v.name.clone())
    }

    /// Probability of one full row (values listed in scope order).
    pub fn get(&self, values: &[usize]) -> &P {
        &self.probs[self.index_of(values)]
    }

    /// Probability of a partial event `{var = value, ...}` over scope variables.
    pub fn prob(&self, event: &[(usize, usize)]) -> Result<P> {
        let positions = event
            .iter()
            .map(|&(v, x)| Ok((self.position(v)?, x)))
            .collect::<Result<Vec<_>>>()?;
        let mut total = P::zero();
        for (values, p) in self.rows() {
            if positions.iter().all(|&(i, x)| values[i] == x) {
                total = total + p.clone();
            }
        }
        Ok(total)
    }

    /// Rows in mixed-radix order: `(values in scope order, probability)`.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<usize>, &P)> + '_ {
        let mut values = vec![0usize; self.scope.len()];
        let mut first = true;
        self.probs.iter().map(move |p| {
            if !first {
                advance(&mut values, &self.radices);
            }
            first = false;
            (values.clone(), p)
        })
    }

    pub fn total(&self) -> P {
        self.probs.iter().cloned().fold(P::zero(), |a, b| a + b)
    }

    /// Same scope and equal probabilities (exactly, for rationals).
    pub fn same(&self, other: &ProbTable<P>) -> bool {
        self.scope == other.scope
            && self.radices == other.radices
            && self.probs.iter().zip(&other.probs).all(|(a, b)| a.same(b))
    }

    /// Marginal over `keep`, which must be a subset of the scope.
    pub fn marginal(&self, keep: &NodeSet) -> Result<ProbTable<P>> {
        let positions = keep.iter().map(|v| self.position(v)).collect::<Result<Vec<_>>>()?;
        let mut out = Self::zeros(self.vars.clone(), keep.to_vec());
        let mut sub = vec![0usize; positions.len()];
        let mut values = vec![0usize; self.scope.len()];
        for p in &self.probs {
            if !p.is_negligible() {
                for (k, &i) in positions.iter().enumerate() {
                    sub[k] = values[i];
                }
                let idx = out.index_of(&sub);
                out.probs[idx] += p;
            }
            advance(&mut values, &self.radices);
        }
        Ok(out)
    }

    /// `P(target | given)`; fails when the conditioning event has probability zero.
    pub fn conditional(&self, target: &NodeSet, given: &[(usize, usize)]) -> Result<ProbTable<P>> {
        if given.iter().any(|&(v, _)| target.contains(v)) {
            return Err(Error::InvalidQuery("target and conditioning variables overlap".into()));
        }
        for &(v, x) in given {
            let i = self.position(v)?;
            if x >= self.radices[i] {
                return Err(Error::InvalidQuery(format!("value #{x} out of range for `{}`", self.var_name(v))));
            }
        }
        let mut scope = target.clone();
        for &(v, _) in given {
            scope.insert(v);
        }
        let joint = self.marginal(&scope)?;
        let denom = joint.prob(given)?;
        if denom.is_negligible() {
            return Err(Error::ZeroProbability(self.describe_event(given)));
        }
        let positions: Vec<(usize, usize)> = given
            .iter()
            .map(|&(v, x)| (joint.position(v).expect("in scope"), x))
            .collect();
        let target_pos: Vec<usize> = target.iter().map(|v| joint.position(v).expect("in scope")).collect();
        let mut out = Self::zeros(self.vars.clone(), target.to_vec());
        let mut sub = vec![0usize; target_pos.len()];
        for (values, p) in joint.rows() {
            if positions.iter().all(|&(i, x)| values[i] == x) {
                for (k, &i) in target_pos.iter().enumerate() {
                    sub[k] = values[i];
                }
                let idx = out.index_of(&sub);
                out.probs[idx] = p.clone() / denom.clone();
            }
        }
        Ok(out)
    }

    /// `L=1, A=0`
    pub fn describe_event(&self, event: &[(usize, usize)]) -> String {
        event
            .iter()
            .map(|&(v, x)| match self.vars.get(v) {
                Some(info) => format!("{}={}", info.name, info.values.get(x).map_or("?".into(), |x| x.to_string())),
                None => format!("#{v}=#{x}"),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Rows as rendered `(name=value pairs, probability)`.
    pub fn labelled_rows(&self) -> Vec<(Vec<(String, String)>, P)> {
        self.rows()
            .map(|(values, p)| {
                let cells = self
                    .scope
                    .iter()
                    .zip(&values)
                    .map(|(&v, &x)| (self.vars[v].name.clone(), self.vars[v].values[x].to_string()))
                    .collect();
                (cells, p.clone())
            })
            .collect()
    }
}

fn check_cap(required: u128, cap: u64) -> Result<()> {
    if required > cap as u128 {
        Err(Error::EnumerationCap { required, cap })
    } else {
        Ok(())
    }
}

/// Joint pmf of all nodes of `m`.
pub fn exact_joint<P: Probability>(m: &SemModel<P>) -> Result<ProbTable<P>> {
    exact_joint_with_cap(m, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_joint_with_cap<P: Probability>(m: &SemModel<P>, cap: u64) -> Result<ProbTable<P>> {
    check_cap(m.disturbances().weighted_count(), cap)?;
    let mut table: ProbTable<P> = ProbTable::zeros(model_vars(m), (0..m.len()).collect());
    let mut values = vec![0usize; m.len()];
    m.disturbances().for_each_weighted(|u, p| {
        if p.is_negligible() {
            return;
        }
        m.eval_into(u, &mut values);
        let idx = table.index_of(&values);
        table.probs[idx] += p;
    });
    Ok(table)
}

/// Marginal of the new-surgery model on `targets`.
pub fn counterfactual_dist<P: Probability>(m: &SemModel<P>, iv: &Intervention, targets: &NodeSet) -> Result<ProbTable<P>> {
    counterfactual_dist_with_cap(m, iv, targets, DEFAULT_ENUMERATION_CAP)
}

pub fn counterfactual_dist_with_cap<P: Probability>(
    m: &SemModel<P>,
    iv: &Intervention,
    targets: &NodeSet,
    cap: u64,
) -> Result<ProbTable<P>> {
    exact_joint_with_cap(&m.surgery_new(iv)?, cap)?.marginal(targets)
}

/// The same marginal computed through the constant-replacement surgery.
pub fn counterfactual_dist_pearl<P: Probability>(
    m: &SemModel<P>,
    iv: &Intervention,
    targets: &NodeSet,
    cap: u64,
) -> Result<ProbTable<P>> {
    exact_joint_with_cap(&m.surgery_pearl(iv)?, cap)?.marginal(targets)
}

fn check_disjoint(sets: &[&NodeSet]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !a.is_disjoint(b) {
                return Err(Error::InvalidQuery("variable sets must be disjoint".into()));
            }
        }
    }
    Ok(())
}

/// Exact conditional independence `x _||_ y | z`.
pub fn check_ci<P: Probability>(t: &ProbTable<P>, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<bool> {
    check_disjoint(&[x, y, z])?;
    let all = x.union(y).union(z);
    let joint = t.marginal(&all)?;
    let pxz = joint.marginal(&x.union(z))?;
    let pyz = joint.marginal(&y.union(z))?;
    let pz = joint.marginal(z)?;
    let pick = |table: &ProbTable<P>, values: &[usize]| -> Vec<usize> {
        table
            .scope
            .iter()
            .map(|v| values[joint.position(*v).expect("in scope")])
            .collect()
    };
    // P(x,y,z) P(z) = P(x,z) P(y,z) for every row; trivially true where P(z) = 0.
    for (values, p) in joint.rows() {
        let z_prob = pz.get(&pick(&pz, &values));
        if z_prob.is_negligible() {
            continue;
        }
        let lhs = p.clone() * z_prob.clone();
        let rhs = pxz.get(&pick(&pxz, &values)).clone() * pyz.get(&pick(&pyz, &values)).clone();
        if !lhs.same(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P(v) = prod_i P(v_i | v_pa(i))` at every full assignment.
pub fn check_markov<P: Probability>(t: &ProbTable<P>, g: &Dag) -> Result<bool> {
    if t.scope != (0..g.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidQuery("table scope must be exactly the graph's nodes".into()));
    }
    struct Family<P> {
        family: ProbTable<P>,
        parents: ProbTable<P>,
    }
    let families = g
        .nodes()
        .map(|v| {
            let pa: NodeSet = g.parent_ids(v).iter().copied().collect();
            let mut fam = pa.clone();
            fam.insert(v);
            Ok(Family {
                family: t.marginal(&fam)?,
                parents: t.marginal(&pa)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for (values, p) in t.rows() {
        // Cross-multiplied: P(v) prod P(pa) = prod P(v_i, pa). A zero parent
        // marginal forces P(v) = 0, which the 0/0 convention accepts.
        let mut lhs = p.clone();
        let mut rhs = P::one();
        let mut degenerate = false;
        for f in &families {
            let pick = |tab: &ProbTable<P>| -> Vec<usize> { tab.scope.iter().map(|&v| values[v]).collect() };
            let den = f.parents.get(&pick(&f.parents)).clone();
            if den.is_negligible() {
                degenerate = true;
                break;
            }
            lhs = lhs * den;
            rhs = rhs * f.family.get(&pick(&f.family)).clone();
        }
        if degenerate {
            if !p.is_negligible() {
                return Ok(false);
            }
            continue;
        }
        if !lhs.same(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First `(a, l)` with `P(L=l) > 0` and `P(A=a, L=l) = 0`, values in canonical order.
pub fn positivity_violation<P: Probability>(
    t: &ProbTable<P>,
    a_set: &NodeSet,
    l: &NodeSet,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    check_disjoint(&[a_set, l])?;
    let joint = t.marginal(&a_set.union(l))?;
    let pl = joint.marginal(l)?;
    let a_pos: Vec<usize> = a_set.iter().map(|v| joint.position(v).expect("in scope")).collect();
    let l_pos: Vec<usize> = l.iter().map(|v| joint.position(v).expect("in scope")).collect();
    let a_radices: Vec<usize> = a_pos.iter().map(|&i| joint.radices[i]).collect();
    for (l_values, p) in pl.rows() {
        if p.is_negligible() {
            continue;
        }
        let mut a_values = vec![0usize; a_pos.len()];
        loop {
            let mut full = vec![0usize; joint.scope.len()];
            for (k, &i) in a_pos.iter().enumerate() {
                full[i] = a_values[k];
            }
            for (k, &i) in l_pos.iter().enumerate() {
                full[i] = l_values[k];
            }
            if joint.get(&full).is_negligible() {
                return Ok(Some((a_values, l_values)));
            }
            if !advance(&mut a_values, &a_radices) {
                break;
            }
        }
    }
    Ok(None)
}

/// Every treatment level has positive probability in every positive stratum of `l`.
pub fn check_positivity<P: Probability>(t: &ProbTable<P>, a_set: &NodeSet, l: &NodeSet) -> Result<bool> {
    Ok(positivity_violation(t, a_set, l)?.is_none())
}

/// `sum_l P(Y=y | A=a, L=l) P(L=l)` as a pmf over the values of `y`.
///
/// Strata with `P(L=l) = 0` contribute nothing. A stratum with positive
/// probability where the intervention level `a` never occurs is a
/// positivity failure.
pub fn adjustment_formula<P: Probability>(
    t: &ProbTable<P>,
    iv: &Intervention,
    y: NodeId,
    l: &NodeSet,
) -> Result<ProbTable<P>> {
    let a_set = iv.treatments();
    let y_set = NodeSet::singleton(y);
    check_disjoint(&[&a_set, &y_set, l])?;
    let scope = a_set.union(l).union(&y_set);
    let joint = t.marginal(&scope)?;
    let pal = joint.marginal(&a_set.union(l))?;
    let pl = joint.marginal(l)?;
    let y_pos = joint.position(y)?;
    let mut out: ProbTable<P> = ProbTable::zeros(t.vars.clone(), vec![y]);
    let a_event: Vec<(usize, usize)> = iv.entries().to_vec();
    for (l_values, p_l) in pl.rows() {
        if p_l.is_negligible() {
            continue;
        }
        let l_event: Vec<(usize, usize)> = l.iter().zip(l_values.iter().copied()).collect();
        let mut stratum: Vec<(usize, usize)> = a_event.clone();
        stratum.extend_from_slice(&l_event);
        stratum.sort_unstable();
        let al_values: Vec<usize> = stratum.iter().map(|&(_, x)| x).collect();
        let p_al = pal.get(&al_values).clone();
        if p_al.is_negligible() {
            return Err(Error::Positivity(t.describe_event(&stratum)));
        }
        for (values, p) in joint.rows() {
            let matches = joint
                .scope
                .iter()
                .zip(&values)
                .all(|(v, x)| stratum.binary_search_by(|(w, _)| w.cmp(v)).map_or(true, |k| stratum[k].1 == *x));
            if matches {
                let yv = values[y_pos];
                out.probs[yv] = out.probs[yv].clone() + p.clone() / p_al.clone() * p_l.clone();
            }
        }
    }
    Ok(out)
}

/// Which copy of a node a world-table variable refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorldVar {
    Factual(NodeId),
    Intervened(NodeId),
}

/// Factual and new-surgery evaluations paired on the shared disturbance
/// space, weighted by the disturbance pmf. Any joint law of factual and
/// intervened variables is a marginal of this object.
#[derive(Debug, Clone)]
pub struct WorldPairs<P> {
    n: usize,
    vars: Arc<[VarInfo]>,
    rows: Vec<(P, Vec<usize>, Vec<usize>)>,
}

impl<P: Probability> WorldPairs<P> {
    pub fn new(m: &SemModel<P>, iv: &Intervention, cap: u64) -> Result<Self> {
        check_cap(m.disturbances().weighted_count(), cap)?;
        let new = m.surgery_new(iv)?;
        let n = m.len();
        let suffix = iv.display(m).replace(", ", ",");
        let mut vars: Vec<VarInfo> = model_vars(m).to_vec();
        vars.extend(m.dag().labels().iter().zip(m.domains()).map(|(name, values)| VarInfo {
            name: format!("{name}^{{{suffix}}}"),
            values: values.clone(),
        }));
        // Tuples landing on the same pair of worlds are merged.
        let mut merged: HashMap<(Vec<usize>, Vec<usize>), P> = HashMap::new();
        let (mut fact, mut cf) = (vec![0usize; n], vec![0usize; n]);
        m.disturbances().for_each_weighted(|u, p| {
            if p.is_negligible() {
                return;
            }
            m.eval_into(u, &mut fact);
            new.eval_into(u, &mut cf);
            *merged.entry((fact.clone(), cf.clone())).or_insert_with(P::zero) += p;
        });
        let mut rows: Vec<(P, Vec<usize>, Vec<usize>)> =
            merged.into_iter().map(|((fact, cf), p)| (p, fact, cf)).collect();
        rows.sort_by(|a, b| (&a.1, &a.2).cmp(&(&b.1, &b.2)));
        Ok(Self {
            n,
            vars: vars.into(),
            rows,
        })
    }

    pub fn id(&self, var: WorldVar) -> usize {
        match var {
            WorldVar::Factual(v) => v,
            WorldVar::Intervened(v) => self.n + v,
        }
    }

    /// Joint pmf of the listed variables.
    pub fn table(&self, vars: &[WorldVar]) -> ProbTable<P> {
        let mut scope: Vec<usize> = vars.iter().map(|&v| self.id(v)).collect();
        scope.sort_unstable();
        scope.dedup();
        let mut out: ProbTable<P> = ProbTable::zeros(self.vars.clone(), scope);
        let mut values = vec![0usize; out.scope.len()];
        for (p, fact, cf) in &self.rows {
            for (k, &id) in out.scope.iter().enumerate() {
                values[k] = if id < self.n { fact[id] } else { cf[id - self.n] };
            }
            let idx = out.index_of(&values);
            out.probs[idx] += p;
        }
        out
    }

    /// Joint pmf of every factual node.
    pub fn factual_joint(&self) -> ProbTable<P> {
        self.table(&(0..self.n).map(WorldVar::Factual).collect::<Vec<_>>())
    }

    /// Joint pmf of every intervened node.
    pub fn intervened_joint(&self) -> ProbTable<P> {
        let mut t = self.table(&(0..self.n).map(WorldVar::Intervened).collect::<Vec<_>>());
        // Re-key onto node ids so the table can be checked against the surged graph.
        t.scope = (0..self.n).collect();
        t.vars = self.vars[self.n..].to_vec().into();
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    /// Independent 8-tuple oracle for the toy model: returns
    /// `(probability, factual [L,A,Y], new-surgery [L,A,Y] for do(A=a))`.
    fn toy_oracle(a: i64) -> Vec<(Q, [i64; 3], [i64; 3])> {
        let pu = [[q(1, 2), q(1, 2)], [q(7, 10), q(3, 10)], [q(9, 10), q(1, 10)]];
        let mut out = Vec::new();
        for ul in 0..2i64 {
            for ua in 0..2i64 {
                for uy in 0..2i64 {
                    let p = pu[0][ul as usize].clone() * pu[1][ua as usize].clone() * pu[2][uy as usize].clone();
                    let l = ul;
                    let av = l ^ ua;
                    let y = (av & l) ^ uy;
                    let y_new = (a & l) ^ uy;
                    out.push((p, [l, av, y], [l, av, y_new]));
                }
            }
        }
        out
    }

    fn oracle_prob(a: i64, pred: impl Fn(&[i64; 3], &[i64; 3]) -> bool) -> Q {
        toy_oracle(a)
            .into_iter()
            .filter(|(_, f, n)| pred(f, n))
            .fold(q(0, 1), |acc, (p, _, _)| acc + p)
    }

    #[test]
    fn oracle_values_are_the_golden_numbers() {
        assert_eq!(oracle_prob(1, |f, _| *f == [1, 1, 1]), q(63, 200));
        assert_eq!(oracle_prob(1, |_, n| n[2] == 1), q(1, 2));
        assert_eq!(oracle_prob(0, |_, n| n[2] == 1), q(1, 10));
        let joint = oracle_prob(1, |f, _| f[0] == 1 && f[1] == 1 && f[2] == 1);
        let given = oracle_prob(1, |f, _| f[0] == 1 && f[1] == 1);
        assert_eq!(joint / given, q(9, 10));
    }

    #[test]
    fn toy_joint_matches_oracle() {
        let m = toy::toy_sem::<Q>();
        let t = exact_joint(&m).unwrap();
        assert_eq!(*t.get(&[1, 1, 1]), q(63, 200));
        for (values, p) in t.rows() {
            let v = [values[0] as i64, values[1] as i64, values[2] as i64];
            assert_eq!(*p, oracle_prob(1, |f, _| *f == v));
        }
        assert_eq!(t.total(), q(1, 1));
    }

    #[test]
    fn constant_model_is_a_point_mass() {
        let m = toy::toy_sem::<Q>();
        let iv = Intervention::parse(&m, "L=1,A=0,Y=1").unwrap();
        let t = exact_joint(&m.surgery_pearl(&iv).unwrap()).unwrap();
        assert_eq!(*t.get(&[1, 0, 1]), q(1, 1));
    }

    #[test]
    fn counterfactual_golden_numbers() {
        let m = toy::toy_sem::<Q>();
        let y = NodeSet::singleton(2);
        let do1 = Intervention::parse(&m, "A=1").unwrap();
        let do0 = Intervention::parse(&m, "A=0").unwrap();
        assert_eq!(*counterfactual_dist(&m, &do1, &y).unwrap().get(&[1]), q(1, 2));
        assert_eq!(*counterfactual_dist(&m, &do0, &y).unwrap().get(&[1]), q(1, 10));
        let t = exact_joint(&m.surgery_new(&do1).unwrap()).unwrap();
        assert_eq!(*t.marginal(&y).unwrap().get(&[1]), q(1, 2));
        assert_eq!(
            counterfactual_dist_pearl(&m, &do1, &y, DEFAULT_ENUMERATION_CAP).unwrap(),
            counterfactual_dist(&m, &do1, &y).unwrap()
        );
    }

    #[test]
    fn non_descendant_targets_keep_factual_law() {
        let m = toy::toy_sem::<Q>();
        let joint = exact_joint(&m).unwrap();
        let l = NodeSet::singleton(0);
        let do1 = Intervention::parse(&m, "A=1").unwrap();
        assert_eq!(counterfactual_dist(&m, &do1, &l).unwrap(), joint.marginal(&l).unwrap());
        let do_sink = Intervention::parse(&m, "Y=0").unwrap();
        let la: NodeSet = [0, 1].into_iter().collect();
        assert_eq!(counterfactual_dist(&m, &do_sink, &la).unwrap(), joint.marginal(&la).unwrap());
    }

    #[test]
    fn marginal_and_conditional() {
        let m = toy::toy_sem::<Q>();
        let t = exact_joint(&m).unwrap();
        assert_eq!(*t.marginal(&NodeSet::singleton(0)).unwrap().get(&[1]), q(1, 2));
        assert_eq!(t.marginal(&m.dag().all_nodes()).unwrap(), t);
        let c = t.conditional(&NodeSet::singleton(2), &[(1, 1), (0, 1)]).unwrap();
        assert_eq!(*c.get(&[1]), q(9, 10));
        assert_eq!(c.total(), q(1, 1));
        assert!(t.marginal(&NodeSet::singleton(9)).is_err());
    }

    #[test]
    fn conditioning_on_null_event_is_an_error() {
        let m = toy::dependent_errors::<Q>();
        let t = exact_joint(&m).unwrap();
        // Y = A and L, so Y=1 with A=0 never happens.
        let err = t.conditional(&NodeSet::singleton(0), &[(1, 0), (2, 1)]).unwrap_err();
        assert!(matches!(err, Error::ZeroProbability(_)), "{err:?}");
    }

    #[test]
    fn ci_examples() {
        let m = toy::toy_sem::<Q>();
        let (l, a, y) = (NodeSet::singleton(0), NodeSet::singleton(1), NodeSet::singleton(2));
        let do1 = Intervention::parse(&m, "A=1").unwrap();
        let surged = exact_joint(&m.surgery_new(&do1).unwrap()).unwrap();
        assert!(check_ci(&surged, &a, &y, &l).unwrap());
        let factual = exact_joint(&m).unwrap();
        assert!(!check_ci(&factual, &a, &y, &l).unwrap());
        assert!(check_ci(&factual, &a, &y, &a).is_err());

        let coins = toy::two_node_chain::<Q>().surgery_new(&Intervention::parse(&toy::two_node_chain::<Q>(), "A=0").unwrap()).unwrap();
        let t = exact_joint(&coins).unwrap();
        assert!(check_ci(&t, &NodeSet::singleton(0), &NodeSet::singleton(1), &NodeSet::new()).unwrap());
    }

    #[test]
    fn markov_examples() {
        let m = toy::toy_sem::<Q>();
        assert!(check_markov(&exact_joint(&m).unwrap(), &toy::figure1()).unwrap());
        let do1 = Intervention::parse(&m, "A=1").unwrap();
        let surged = exact_joint(&m.surgery_new(&do1).unwrap()).unwrap();
        assert!(check_markov(&surged, &toy::figure2()).unwrap());
        // The factual law is not Markov to the graph without A -> Y.
        assert!(!check_markov(&exact_joint(&m).unwrap(), &toy::figure2()).unwrap());

        let edgeless = Dag::new(["X", "Y"], Vec::<(&str, &str)>::new()).unwrap();
        let copy = toy::perfect_copy::<Q>();
        let x_eq_y = exact_joint(&copy).unwrap();
        assert!(!check_markov(&x_eq_y, &edgeless).unwrap());
        assert!(check_markov(&x_eq_y, copy.dag()).unwrap());
        assert!(check_markov(&exact_joint(&toy::correlated_errors::<Q>()).unwrap(), &Dag::new(["A", "Y"], [("A", "Y")]).unwrap()).unwrap());
    }

    #[test]
    fn positivity_examples() {
        let m = toy::toy_sem::<Q>();
        let t = exact_joint(&m).unwrap();
        assert!(check_positivity(&t, &NodeSet::singleton(1), &NodeSet::singleton(0)).unwrap());

        let copy = toy::noiseless_treatment::<Q>();
        let t = exact_joint(&copy).unwrap();
        let v = positivity_violation(&t, &NodeSet::singleton(1), &NodeSet::singleton(0)).unwrap();
        assert_eq!(v, Some((vec![1], vec![0])));
    }

    #[test]
    fn adjustment_examples() {
        let m = toy::toy_sem::<Q>();
        let t = exact_joint(&m).unwrap();
        let l = NodeSet::singleton(0);
        let do1 = Intervention::parse(&m, "A=1").unwrap();
        let do0 = Intervention::parse(&m, "A=0").unwrap();
        let f1 = adjustment_formula(&t, &do1, 2, &l).unwrap();
        assert_eq!(*f1.get(&[1]), q(1, 2));
        assert_eq!(f1.total(), q(1, 1));
        assert_eq!(*adjustment_formula(&t, &do0, 2, &l).unwrap().get(&[1]), q(1, 10));
        // Without adjustment: P(Y=1 | A=1).
        let naive = adjustment_formula(&t, &do1, 2, &NodeSet::new()).unwrap();
        assert_eq!(naive, t.conditional(&NodeSet::singleton(2), &[(1, 1)]).unwrap());
    }

    #[test]
    fn adjustment_rejects_positivity_failures() {
        let m = toy::noiseless_treatment::<Q>();
        let t = exact_joint(&m).unwrap();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let err = adjustment_formula(&t, &iv, 2, &NodeSet::singleton(0)).unwrap_err();
        assert_eq!(err, Error::Positivity("L=0, A=1".into()));
        assert!(!check_positivity(&t, &NodeSet::singleton(1), &NodeSet::singleton(0)).unwrap());
    }

    #[test]
    fn point_mass_stratum_collapses_to_one_term() {
        // With L constant the sum has a single term P(Y | A=a, L=l0).
        let m = toy::toy_sem::<Q>();
        let fixed_l = m.surgery_pearl(&Intervention::parse(&m, "L=1").unwrap()).unwrap();
        let t = exact_joint(&fixed_l).unwrap();
        let iv = Intervention::parse(&fixed_l, "A=1").unwrap();
        let f = adjustment_formula(&t, &iv, 2, &NodeSet::singleton(0)).unwrap();
        assert_eq!(f, t.conditional(&NodeSet::singleton(2), &[(1, 1), (0, 1)]).unwrap());
    }

    #[test]
    fn float_tables_match_exact_ones() {
        let exact = exact_joint(&toy::toy_sem::<Q>()).unwrap();
        let float = exact_joint(&toy::toy_sem::<f64>()).unwrap();
        for ((_, p), (_, x)) in exact.rows().zip(float.rows()) {
            assert!(x.same(&p.to_f64()));
        }
    }

    #[test]
    fn world_pairs_reproduce_both_joints() {
        let m = toy::toy_sem::<Q>();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let w = WorldPairs::new(&m, &iv, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(w.factual_joint().probs, exact_joint(&m).unwrap().probs);
        assert_eq!(w.intervened_joint().probs, exact_joint(&m.surgery_new(&iv).unwrap()).unwrap().probs);
        // P(Y^1 = 1 | A = 1) = (0.315 + 0.015) / 0.5
        let t = w.table(&[WorldVar::Factual(1), WorldVar::Intervened(2)]);
        let c = t.conditional(&NodeSet::singleton(w.id(WorldVar::Intervened(2))), &[(1, 1)]).unwrap();
        assert_eq!(*c.get(&[1]), q(33, 50));
    }

    #[test]
    fn cap_is_enforced() {
        let m = toy::toy_sem::<Q>();
        assert_eq!(
            exact_joint_with_cap(&m, 7).unwrap_err(),
            Error::EnumerationCap { required: 8, cap: 7 }
        );
    }
}
