//! Finite-domain structural equation models and the two surgeries.
//!
//! Values and disturbances are stored as indices into their domain and
//! support lists. Every structural function is an extensional table over
//! `(parent values) x (disturbance value)`, so partial application is a
//! row filter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId, NodeSet};
use crate::scalar::Probability;

/// Default cap on the number of disturbance tuples an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Domain or disturbance value as it appears in model files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

/// Position of a value in a list, matched by its rendered form.
pub(crate) fn find_value(values: &[Value], text: &str) -> Option<usize> {
    values.iter().position(|v| v.to_string() == text)
}

fn check_distinct(values: &[Value], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidModel(format!("{what} is empty")));
    }
    for (i, v) in values.iter().enumerate() {
        if values[..i].iter().any(|w| w.to_string() == v.to_string()) {
            return Err(Error::InvalidModel(format!("{what} repeats `{v}`")));
        }
    }
    Ok(())
}

/// Structural function of one node as a total lookup table.
///
/// Rows are laid out in mixed radix with the parents (in canonical order)
/// most significant and the disturbance value least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructFn {
    parents: Vec<NodeId>,
    radices: Vec<usize>,
    u_size: usize,
    table: Vec<usize>,
}

impl StructFn {
    /// Tabulates `f(parent_values, u)` over the full product of inputs.
    pub fn tabulate(
        parents: Vec<NodeId>,
        radices: Vec<usize>,
        u_size: usize,
        mut f: impl FnMut(&[usize], usize) -> usize,
    ) -> Self {
        assert_eq!(parents.len(), radices.len());
        let rows: usize = radices.iter().product::<usize>() * u_size;
        let mut table = Vec::with_capacity(rows);
        let mut pa = vec![0usize; radices.len()];
        for _ in 0..rows / u_size.max(1) {
            for u in 0..u_size {
                table.push(f(&pa, u));
            }
            advance(&mut pa, &radices);
        }
        Self {
            parents,
            radices,
            u_size,
            table,
        }
    }

    /// Builds from raw table rows in canonical layout.
    pub fn from_table(parents: Vec<NodeId>, radices: Vec<usize>, u_size: usize, table: Vec<usize>) -> Result<Self> {
        let rows: usize = radices.iter().product::<usize>() * u_size;
        if parents.len() != radices.len() || table.len() != rows {
            return Err(Error::InvalidModel(format!(
                "function table has {} rows, expected {rows}",
                table.len()
            )));
        }
        Ok(Self {
            parents,
            radices,
            u_size,
            table,
        })
    }

    pub fn constant(parents: Vec<NodeId>, radices: Vec<usize>, u_size: usize, value: usize) -> Self {
        Self::tabulate(parents, radices, u_size, |_, _| value)
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parents
    }

    pub fn parent_radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Output for parent values listed in `self.parents()` order.
    pub fn lookup(&self, parent_values: &[usize], u: usize) -> usize {
        let mut idx = 0;
        for (&v, &r) in parent_values.iter().zip(&self.radices) {
            idx = idx * r + v;
        }
        self.table[idx * self.u_size + u]
    }

    /// Output with parent values read from a full assignment.
    #[inline]
    pub fn eval(&self, values: &[usize], u: usize) -> usize {
        let mut idx = 0;
        for (&p, &r) in self.parents.iter().zip(&self.radices) {
            idx = idx * r + values[p];
        }
        self.table[idx * self.u_size + u]
    }

    pub fn ignores_disturbance(&self) -> bool {
        self.table
            .chunks(self.u_size)
            .all(|row| row.iter().all(|&v| v == row[0]))
    }

    /// Fixes the given parents at constant values, dropping them from the signature.
    pub fn partially_apply(&self, fixed: &[(NodeId, usize)]) -> StructFn {
        let keep: Vec<usize> = (0..self.parents.len())
            .filter(|&i| !fixed.iter().any(|&(v, _)| v == self.parents[i]))
            .collect();
        let parents = keep.iter().map(|&i| self.parents[i]).collect();
        let radices = keep.iter().map(|&i| self.radices[i]).collect();
        let mut full = vec![0usize; self.parents.len()];
        for (i, p) in self.parents.iter().enumerate() {
            if let Some(&(_, val)) = fixed.iter().find(|(v, _)| v == p) {
                full[i] = val;
            }
        }
        StructFn::tabulate(parents, radices, self.u_size, |pa, u| {
            for (k, &i) in keep.iter().enumerate() {
                full[i] = pa[k];
            }
            self.lookup(&full, u)
        })
    }
}

/// Advances a mixed-radix counter; returns false after wrapping to zero.
pub(crate) fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Law of the disturbance vector.
#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceLaw<P> {
    /// One pmf per node over its support; jointly independent.
    Independent(Vec<Vec<P>>),
    /// Pmf over full tuples (support indices, node order); unlisted tuples have probability zero.
    Joint(Vec<(Vec<usize>, P)>),
}

/// Disturbance supports plus their law.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceModel<P> {
    supports: Vec<Vec<Value>>,
    law: DisturbanceLaw<P>,
}

impl<P: Probability> DisturbanceModel<P> {
    pub fn independent(supports: Vec<Vec<Value>>, pmfs: Vec<Vec<P>>) -> Result<Self> {
        let model = Self {
            supports,
            law: DisturbanceLaw::Independent(pmfs),
        };
        model.validate()?;
        Ok(model)
    }

    /// Joint pmf; rows are sorted and must not repeat a tuple.
    pub fn joint(supports: Vec<Vec<Value>>, mut rows: Vec<(Vec<usize>, P)>) -> Result<Self> {
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let model = Self {
            supports,
            law: DisturbanceLaw::Joint(rows),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        for (i, s) in self.supports.iter().enumerate() {
            check_distinct(s, &format!("disturbance support #{i}"))?;
        }
        let check_pmf = |probs: &mut dyn Iterator<Item = &P>, what: &str| -> Result<()> {
            let mut total = P::zero();
            for p in probs {
                if *p < P::zero() {
                    return Err(Error::InvalidModel(format!("{what} has a negative probability")));
                }
                total = total + p.clone();
            }
            if !total.same(&P::one()) {
                return Err(Error::InvalidModel(format!("{what} sums to {total:?}, not 1")));
            }
            Ok(())
        };
        match &self.law {
            DisturbanceLaw::Independent(pmfs) => {
                if pmfs.len() != self.supports.len() {
                    return Err(Error::InvalidModel("one disturbance pmf per node required".into()));
                }
                for (i, (pmf, s)) in pmfs.iter().zip(&self.supports).enumerate() {
                    if pmf.len() != s.len() {
                        return Err(Error::InvalidModel(format!(
                            "disturbance pmf #{i} has {} entries for a support of {}",
                            pmf.len(),
                            s.len()
                        )));
                    }
                    check_pmf(&mut pmf.iter(), &format!("disturbance pmf #{i}"))?;
                }
            }
            DisturbanceLaw::Joint(rows) => {
                for (k, (tuple, _)) in rows.iter().enumerate() {
                    if tuple.len() != self.supports.len()
                        || tuple.iter().zip(&self.supports).any(|(&u, s)| u >= s.len())
                    {
                        return Err(Error::InvalidModel(format!("joint disturbance row {k} is out of range")));
                    }
                    if k > 0 && rows[k - 1].0 == *tuple {
                        return Err(Error::InvalidModel(format!("joint disturbance row {k} repeats a tuple")));
                    }
                }
                check_pmf(&mut rows.iter().map(|(_, p)| p), "joint disturbance pmf")?;
            }
        }
        Ok(())
    }

    pub fn supports(&self) -> &[Vec<Value>] {
        &self.supports
    }

    pub fn law(&self) -> &DisturbanceLaw<P> {
        &self.law
    }

    pub fn is_independent(&self) -> bool {
        matches!(self.law, DisturbanceLaw::Independent(_))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.supports.iter().map(Vec::len).collect()
    }

    /// Number of tuples in the full product of supports.
    pub fn tuple_count(&self) -> u128 {
        self.supports.iter().map(|s| s.len() as u128).product()
    }

    /// Number of tuples visited by [`DisturbanceModel::for_each_weighted`].
    pub fn weighted_count(&self) -> u128 {
        match &self.law {
            DisturbanceLaw::Independent(_) => self.tuple_count(),
            DisturbanceLaw::Joint(rows) => rows.len() as u128,
        }
    }

    /// Probability of one tuple.
    pub fn prob(&self, tuple: &[usize]) -> P {
        match &self.law {
            DisturbanceLaw::Independent(pmfs) => tuple
                .iter()
                .zip(pmfs)
                .fold(P::one(), |acc, (&u, pmf)| acc * pmf[u].clone()),
            DisturbanceLaw::Joint(rows) => rows
                .binary_search_by(|(t, _)| t.as_slice().cmp(tuple))
                .map(|k| rows[k].1.clone())
                .unwrap_or_else(|_| P::zero()),
        }
    }

    /// Visits every tuple that may carry mass, with its probability.
    pub fn for_each_weighted(&self, mut f: impl FnMut(&[usize], &P)) {
        match &self.law {
            DisturbanceLaw::Independent(pmfs) => {
                let sizes = self.sizes();
                let n = sizes.len();
                let mut tuple = vec![0usize; n];
                // prefix[i] = product of pmf values of coordinates < i
                let mut prefix = vec![P::one(); n + 1];
                for i in 0..n {
                    prefix[i + 1] = prefix[i].clone() * pmfs[i][0].clone();
                }
                loop {
                    f(&tuple, &prefix[n]);
                    let mut i = n;
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        tuple[i] += 1;
                        if tuple[i] < sizes[i] {
                            break;
                        }
                        tuple[i] = 0;
                    }
                    for j in i..n {
                        prefix[j + 1] = prefix[j].clone() * pmfs[j][tuple[j]].clone();
                    }
                }
            }
            DisturbanceLaw::Joint(rows) => {
                for (tuple, p) in rows {
                    f(tuple, p);
                }
            }
        }
    }

    /// Visits every tuple of the full product of supports, in lexicographic order.
    pub fn for_each_tuple(&self, mut f: impl FnMut(&[usize])) {
        let sizes = self.sizes();
        let mut tuple = vec![0usize; sizes.len()];
        loop {
            f(&tuple);
            if !advance(&mut tuple, &sizes) {
                return;
            }
        }
    }

    /// Exact marginal pmf of one coordinate.
    pub fn marginal(&self, i: usize) -> Vec<P> {
        match &self.law {
            DisturbanceLaw::Independent(pmfs) => pmfs[i].clone(),
            DisturbanceLaw::Joint(rows) => {
                let mut out = vec![P::zero(); self.supports[i].len()];
                for (t, p) in rows {
                    out[t[i]] += p;
                }
                out
            }
        }
    }
}

/// Which disturbance assumption the model is declared under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelMode {
    /// Jointly independent disturbances.
    NpsemIe,
    /// Possibly dependent disturbances; the cross-world independence
    /// condition must be checked separately.
    FfrcistgCandidate,
}

impl ModelMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelMode::NpsemIe => "npsem-ie",
            ModelMode::FfrcistgCandidate => "ffrcistg-candidate",
        }
    }
}

/// Full assignment of values (as domain indices) to every node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn get(&self, v: NodeId) -> usize {
        self.0[v]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `L=1, A=0, Y=1`
    pub fn display<P>(&self, m: &SemModel<P>) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(v, &x)| format!("{}={}", m.dag.label(v), m.domains[v][x]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Treatment nodes mapped to the fixed level of each, as domain indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Intervention {
    entries: Vec<(NodeId, usize)>,
}

impl Intervention {
    pub fn new<P>(m: &SemModel<P>, mut entries: Vec<(NodeId, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidIntervention("no treatment nodes".into()));
        }
        entries.sort_unstable();
        for (k, &(v, a)) in entries.iter().enumerate() {
            m.dag.check_node(v)?;
            if k > 0 && entries[k - 1].0 == v {
                return Err(Error::InvalidIntervention(format!(
                    "`{}` is assigned twice",
                    m.dag.label(v)
                )));
            }
            if a >= m.domains[v].len() {
                return Err(Error::OutOfDomain {
                    node: m.dag.label(v).to_string(),
                    value: format!("#{a}"),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Builds from `(label, rendered value)` pairs.
    pub fn from_labels<P, S: AsRef<str>, T: AsRef<str>>(m: &SemModel<P>, pairs: &[(S, T)]) -> Result<Self> {
        let mut entries = Vec::with_capacity(pairs.len());
        for (label, value) in pairs {
            let v = m.dag.node(label.as_ref())?;
            let a = m.value_index(v, value.as_ref())?;
            entries.push((v, a));
        }
        Self::new(m, entries)
    }

    /// Parses `A=1,B=0`.
    pub fn parse<P>(m: &SemModel<P>, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (l, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidIntervention(format!("expected `node=value`, got `{part}`")))?;
            pairs.push((l.trim().to_string(), v.trim().to_string()));
        }
        Self::from_labels(m, &pairs)
    }

    pub fn entries(&self) -> &[(NodeId, usize)] {
        &self.entries
    }

    pub fn treatments(&self) -> NodeSet {
        self.entries.iter().map(|&(v, _)| v).collect()
    }

    pub fn level(&self, v: NodeId) -> Option<usize> {
        self.entries.iter().find(|&&(w, _)| w == v).map(|&(_, a)| a)
    }

    /// Treatment levels in canonical node order.
    pub fn levels(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, a)| a).collect()
    }

    /// `A=1, B=0`
    pub fn display<P>(&self, m: &SemModel<P>) -> String {
        self.entries
            .iter()
            .map(|&(v, a)| format!("{}={}", m.dag.label(v), m.domains[v][a]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Finite structural equation model `M = (F, U)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemModel<P> {
    dag: Dag,
    domains: Vec<Vec<Value>>,
    functions: Vec<StructFn>,
    disturbances: DisturbanceModel<P>,
    mode: ModelMode,
}

impl<P: Probability> SemModel<P> {
    pub fn new(
        dag: Dag,
        domains: Vec<Vec<Value>>,
        functions: Vec<StructFn>,
        disturbances: DisturbanceModel<P>,
        mode: ModelMode,
    ) -> Result<Self> {
        let n = dag.len();
        if domains.len() != n || functions.len() != n || disturbances.supports.len() != n {
            return Err(Error::InvalidModel(format!(
                "expected {n} domains, functions and disturbances, got {}, {} and {}",
                domains.len(),
                functions.len(),
                disturbances.supports.len()
            )));
        }
        for (v, dom) in domains.iter().enumerate() {
            check_distinct(dom, &format!("domain of `{}`", dag.label(v)))?;
        }
        for (v, f) in functions.iter().enumerate() {
            let label = dag.label(v);
            if f.parents != dag.parent_ids(v) {
                return Err(Error::InvalidModel(format!(
                    "function of `{label}` does not take exactly the parents of `{label}`"
                )));
            }
            let radices: Vec<usize> = f.parents.iter().map(|&p| domains[p].len()).collect();
            if f.radices != radices || f.u_size != disturbances.supports[v].len() {
                return Err(Error::InvalidModel(format!("function of `{label}` has the wrong signature")));
            }
            if f.table.len() != radices.iter().product::<usize>() * f.u_size {
                return Err(Error::InvalidModel(format!("function table of `{label}` is incomplete")));
            }
            if f.table.iter().any(|&x| x >= domains[v].len()) {
                return Err(Error::InvalidModel(format!(
                    "function of `{label}` outputs a value outside its domain"
                )));
            }
        }
        if mode == ModelMode::NpsemIe && !disturbances.is_independent() {
            return Err(Error::InvalidModel("npsem-ie models need independent disturbances".into()));
        }
        Ok(Self {
            dag,
            domains,
            functions,
            disturbances,
            mode,
        })
    }

    /// Converts every probability to another scalar type.
    pub fn map_probabilities<Q: Probability>(&self, mut f: impl FnMut(&P) -> Q) -> SemModel<Q> {
        let law = match &self.disturbances.law {
            DisturbanceLaw::Independent(pmfs) => {
                DisturbanceLaw::Independent(pmfs.iter().map(|pmf| pmf.iter().map(&mut f).collect()).collect())
            }
            DisturbanceLaw::Joint(rows) => DisturbanceLaw::Joint(rows.iter().map(|(t, p)| (t.clone(), f(p))).collect()),
        };
        SemModel {
            dag: self.dag.clone(),
            domains: self.domains.clone(),
            functions: self.functions.clone(),
            disturbances: DisturbanceModel {
                supports: self.disturbances.supports.clone(),
                law,
            },
            mode: self.mode,
        }
    }
}

impl<P> SemModel<P> {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.domains.iter().map(Vec::len).collect()
    }

    pub fn functions(&self) -> &[StructFn] {
        &self.functions
    }

    pub fn function(&self, v: NodeId) -> &StructFn {
        &self.functions[v]
    }

    pub fn disturbances(&self) -> &DisturbanceModel<P> {
        &self.disturbances
    }

    pub fn mode(&self) -> ModelMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn value_index(&self, v: NodeId, text: &str) -> Result<usize> {
        find_value(&self.domains[v], text).ok_or_else(|| Error::OutOfDomain {
            node: self.dag.label(v).to_string(),
            value: text.to_string(),
        })
    }

    /// Evaluates the recursion at one disturbance tuple into `out`.
    #[inline]
    pub fn eval_into(&self, u: &[usize], out: &mut [usize]) {
        for &v in self.dag.topological_order() {
            out[v] = self.functions[v].eval(out, u[v]);
        }
    }

    /// Values generated by the recursion `V_i = f_i(PA_i, U_i)` at the tuple `u`.
    pub fn evaluate_factual(&self, u: &[usize]) -> Result<Assignment> {
        let n = self.len();
        if u.len() != n {
            return Err(Error::InvalidModel(format!(
                "expected {n} disturbance values, got {}",
                u.len()
            )));
        }
        for (v, &x) in u.iter().enumerate() {
            if x >= self.functions[v].u_size {
                return Err(Error::OutOfDomain {
                    node: format!("U_{}", self.dag.label(v)),
                    value: format!("#{x}"),
                });
            }
        }
        let mut out = vec![0; n];
        self.eval_into(u, &mut out);
        Ok(Assignment(out))
    }

    fn check_intervention(&self, iv: &Intervention) -> Result<()> {
        for &(v, a) in iv.entries() {
            self.dag.check_node(v)?;
            if a >= self.domains[v].len() {
                return Err(Error::OutOfDomain {
                    node: self.dag.label(v).to_string(),
                    value: format!("#{a}"),
                });
            }
        }
        Ok(())
    }
}

impl<P: Clone> SemModel<P> {
    /// Replaces each treatment's function by its constant level; graph and
    /// disturbances are unchanged.
    pub fn surgery_pearl(&self, iv: &Intervention) -> Result<SemModel<P>> {
        self.check_intervention(iv)?;
        let mut functions = self.functions.clone();
        for &(v, a) in iv.entries() {
            let f = &self.functions[v];
            functions[v] = StructFn::constant(f.parents.clone(), f.radices.clone(), f.u_size, a);
        }
        Ok(SemModel {
            dag: self.dag.clone(),
            domains: self.domains.clone(),
            functions,
            disturbances: self.disturbances.clone(),
            mode: self.mode,
        })
    }

    /// Removes the treatments' outgoing edges and fixes their levels inside
    /// every child's function. Treatments keep their own functions (partially
    /// applied only when a treatment has another treatment as a parent).
    pub fn surgery_new(&self, iv: &Intervention) -> Result<SemModel<P>> {
        self.check_intervention(iv)?;
        let dag = self.dag.remove_outgoing(&iv.treatments())?;
        let functions = self
            .functions
            .iter()
            .map(|f| {
                let fixed: Vec<(NodeId, usize)> = f
                    .parents
                    .iter()
                    .filter_map(|&p| iv.level(p).map(|a| (p, a)))
                    .collect();
                if fixed.is_empty() {
                    f.clone()
                } else {
                    f.partially_apply(&fixed)
                }
            })
            .collect();
        Ok(SemModel {
            dag,
            domains: self.domains.clone(),
            functions,
            disturbances: self.disturbances.clone(),
            mode: self.mode,
        })
    }

    /// Copy with one structural function swapped, skipping signature checks.
    pub(crate) fn replace_function(&self, v: NodeId, f: StructFn) -> SemModel<P> {
        let mut out = self.clone();
        out.functions[v] = f;
        out
    }

    /// Factual, Pearl-surgery and new-surgery values at one shared tuple.
    pub fn evaluate_triple(&self, iv: &Intervention, u: &[usize]) -> Result<Triple> {
        Surgeries::build(self, iv)?.evaluate(self, u)
    }
}

/// The two surgically modified models for one intervention.
#[derive(Debug, Clone, PartialEq)]
pub struct Surgeries<P> {
    pub intervention: Intervention,
    pub pearl: SemModel<P>,
    pub new: SemModel<P>,
}

impl<P: Clone> Surgeries<P> {
    pub fn build(m: &SemModel<P>, iv: &Intervention) -> Result<Self> {
        Ok(Self {
            intervention: iv.clone(),
            pearl: m.surgery_pearl(iv)?,
            new: m.surgery_new(iv)?,
        })
    }

    pub fn evaluate(&self, factual: &SemModel<P>, u: &[usize]) -> Result<Triple> {
        Ok(Triple {
            factual: factual.evaluate_factual(u)?,
            pearl: self.pearl.evaluate_factual(u)?,
            new: self.new.evaluate_factual(u)?,
        })
    }
}

/// Evaluations of `M`, `M_a` and `M^a` at the same disturbance tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub factual: Assignment,
    pub pearl: Assignment,
    pub new: Assignment,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::toy_sem;
    use num_rational::BigRational;

    type Q = BigRational;

    fn values(m: &SemModel<Q>, a: &Assignment) -> Vec<i64> {
        a.values()
            .iter()
            .enumerate()
            .map(|(v, &x)| match &m.domains()[v][x] {
                Value::Int(i) => *i,
                Value::Text(_) => panic!("text value"),
            })
            .collect()
    }

    /// Direct hand recursion of the toy model, independent of the tables.
    fn toy_by_hand(u: [i64; 3], do_a: Option<i64>, keep_a: bool) -> [i64; 3] {
        let l = u[0];
        let a_fact = l ^ u[1];
        let a = match (do_a, keep_a) {
            (Some(x), false) => x,
            _ => a_fact,
        };
        let a_for_y = do_a.unwrap_or(a);
        let y = (a_for_y & l) ^ u[2];
        [l, a, y]
    }

    #[test]
    fn factual_examples() {
        let m = toy_sem::<Q>();
        assert_eq!(values(&m, &m.evaluate_factual(&[1, 0, 0]).unwrap()), [1, 1, 1]);
        assert_eq!(values(&m, &m.evaluate_factual(&[0, 0, 0]).unwrap()), [0, 0, 0]);
        for u in 0..8usize {
            let t = [u >> 2 & 1, u >> 1 & 1, u & 1];
            let hand = toy_by_hand([t[0] as i64, t[1] as i64, t[2] as i64], None, true);
            assert_eq!(values(&m, &m.evaluate_factual(&t).unwrap()), hand);
        }
    }

    #[test]
    fn evaluation_rejects_bad_tuples() {
        let m = toy_sem::<Q>();
        assert!(m.evaluate_factual(&[0, 0]).is_err());
        assert!(m.evaluate_factual(&[0, 2, 0]).is_err());
    }

    #[test]
    fn constant_model_evaluates_to_constants() {
        let dag = Dag::new(["X", "Y"], [("X", "Y")]).unwrap();
        let dom = vec![vec![Value::Int(0), Value::Int(7)]; 2];
        let fs = vec![
            StructFn::constant(vec![], vec![], 2, 1),
            StructFn::constant(vec![0], vec![2], 2, 1),
        ];
        let half = Q::new(1.into(), 2.into());
        let d = DisturbanceModel::independent(dom.clone(), vec![vec![half.clone(), half.clone()]; 2]).unwrap();
        let m = SemModel::new(dag, dom, fs, d, ModelMode::NpsemIe).unwrap();
        m.disturbances().for_each_tuple(|u| {
            assert_eq!(m.evaluate_factual(u).unwrap().values(), &[1, 1]);
        });
        let iv = Intervention::from_labels(&m, &[("X", "0")]).unwrap();
        let t = m.evaluate_triple(&iv, &[0, 1]).unwrap();
        assert_eq!(t.factual.get(1), t.pearl.get(1));
        assert_eq!(t.factual.get(1), t.new.get(1));
    }

    #[test]
    fn pearl_surgery_fixes_treatment() {
        let m = toy_sem::<Q>();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let ma = m.surgery_pearl(&iv).unwrap();
        assert_eq!(ma.dag(), m.dag());
        ma.disturbances().for_each_tuple(|u| {
            assert_eq!(values(&ma, &ma.evaluate_factual(u).unwrap())[1], 1);
        });
        // Already-constant function is a fixed point.
        let again = ma.surgery_pearl(&iv).unwrap();
        assert_eq!(again, ma);
    }

    #[test]
    fn pearl_surgery_on_two_nodes_substitutes_directly() {
        let m = crate::toy::two_node_chain::<Q>();
        let iv = Intervention::parse(&m, "A=0").unwrap();
        let ma = m.surgery_pearl(&iv).unwrap();
        m.disturbances().for_each_tuple(|u| {
            let y = ma.evaluate_factual(u).unwrap().get(1);
            assert_eq!(y, m.function(1).lookup(&[0], u[1]));
        });
    }

    #[test]
    fn new_surgery_on_toy() {
        let m = toy_sem::<Q>();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let mn = m.surgery_new(&iv).unwrap();
        let fig2 = Dag::new(["L", "A", "Y"], [("L", "A"), ("L", "Y")]).unwrap();
        assert!(mn.dag().same_structure(&fig2));
        assert_eq!(mn.function(1), m.function(1));
        assert_eq!(mn.function(2).parents(), &[0]);
        for l in 0..2 {
            for u in 0..2 {
                assert_eq!(mn.function(2).lookup(&[l], u), m.function(2).lookup(&[l, 1], u));
            }
        }
        // Output is itself a valid model over the surged graph.
        SemModel::new(
            mn.dag().clone(),
            mn.domains().to_vec(),
            mn.functions().to_vec(),
            mn.disturbances().clone(),
            mn.mode(),
        )
        .unwrap();
    }

    #[test]
    fn new_surgery_on_sink_changes_nothing() {
        let m = toy_sem::<Q>();
        let iv = Intervention::parse(&m, "Y=0").unwrap();
        let mn = m.surgery_new(&iv).unwrap();
        assert_eq!(mn.functions(), m.functions());
        assert_eq!(mn.dag(), m.dag());
    }

    #[test]
    fn new_surgery_two_treatments() {
        let dag = Dag::new(["A1", "A2", "Y"], [("A1", "Y"), ("A2", "Y")]).unwrap();
        let dom = vec![vec![Value::Int(0), Value::Int(1)]; 3];
        let fs = vec![
            StructFn::tabulate(vec![], vec![], 2, |_, u| u),
            StructFn::tabulate(vec![], vec![], 2, |_, u| u),
            StructFn::tabulate(vec![0, 1], vec![2, 2], 2, |pa, u| (pa[0] & pa[1]) ^ u),
        ];
        let half = Q::new(1.into(), 2.into());
        let d = DisturbanceModel::independent(dom.clone(), vec![vec![half.clone(), half.clone()]; 3]).unwrap();
        let m = SemModel::new(dag, dom, fs, d, ModelMode::NpsemIe).unwrap();
        let iv = Intervention::parse(&m, "A1=0, A2=1").unwrap();
        let mn = m.surgery_new(&iv).unwrap();
        assert!(mn.function(2).parents().is_empty());
        assert!(mn.dag().edges().is_empty());
        for u in 0..2 {
            assert_eq!(mn.function(2).lookup(&[], u), m.function(2).lookup(&[0, 1], u));
        }
    }

    #[test]
    fn triple_example() {
        let m = toy_sem::<Q>();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let t = m.evaluate_triple(&iv, &[1, 1, 0]).unwrap();
        assert_eq!(values(&m, &t.factual), [1, 0, 0]);
        assert_eq!(values(&m, &t.pearl), [1, 1, 1]);
        assert_eq!(values(&m, &t.new), [1, 0, 1]);
        for u in 0..8usize {
            let tup = [u >> 2 & 1, u >> 1 & 1, u & 1];
            let ui = tup.map(|x| x as i64);
            let t = m.evaluate_triple(&iv, &tup).unwrap();
            assert_eq!(values(&m, &t.pearl), toy_by_hand(ui, Some(1), false));
            assert_eq!(values(&m, &t.new), toy_by_hand(ui, Some(1), true));
        }
    }

    #[test]
    fn interventions_are_validated() {
        let m = toy_sem::<Q>();
        assert!(matches!(Intervention::parse(&m, "A=2"), Err(Error::OutOfDomain { .. })));
        assert!(matches!(Intervention::parse(&m, "Q=1"), Err(Error::UnknownNode(_))));
        assert!(Intervention::parse(&m, "").is_err());
        assert!(Intervention::parse(&m, "A=1,A=0").is_err());
        assert!(Intervention::parse(&m, "A").is_err());
    }

    #[test]
    fn model_validation() {
        let m = toy_sem::<Q>();
        let mut fs = m.functions().to_vec();
        fs.swap(0, 1);
        assert!(SemModel::new(m.dag().clone(), m.domains().to_vec(), fs, m.disturbances().clone(), m.mode()).is_err());

        let half = Q::new(1.into(), 2.into());
        let bad_sum = DisturbanceModel::<Q>::independent(vec![vec![Value::Int(0), Value::Int(1)]], vec![vec![half.clone(), half.clone() + half.clone()]]);
        assert!(bad_sum.is_err());

        let joint = DisturbanceModel::joint(
            vec![vec![Value::Int(0), Value::Int(1)]; 3],
            vec![(vec![0, 0, 0], half.clone()), (vec![1, 1, 1], half.clone())],
        )
        .unwrap();
        let err = SemModel::new(m.dag().clone(), m.domains().to_vec(), m.functions().to_vec(), joint, ModelMode::NpsemIe);
        assert!(err.is_err());
    }

    #[test]
    fn disturbance_enumeration() {
        let m = toy_sem::<Q>();
        let mut total = Q::from_integer(0.into());
        let mut count = 0;
        m.disturbances().for_each_weighted(|u, p| {
            assert_eq!(*p, m.disturbances().prob(u));
            total += p;
            count += 1;
        });
        assert_eq!(count, 8);
        assert_eq!(total, Q::from_integer(1.into()));
    }

    #[test]
    fn partial_application_matches_lookup() {
        let f = StructFn::tabulate(vec![0, 1, 2], vec![2, 3, 2], 2, |pa, u| (pa[0] + 2 * pa[1] + pa[2] + u) % 3);
        let g = f.partially_apply(&[(1, 2)]);
        assert_eq!(g.parents(), &[0, 2]);
        for a in 0..2 {
            for c in 0..2 {
                for u in 0..2 {
                    assert_eq!(g.lookup(&[a, c], u), f.lookup(&[a, 2, c], u));
                }
            }
        }
    }
}
