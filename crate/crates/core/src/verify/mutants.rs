//! Deliberately broken surgeries. The lemma checker must reject each of
//! them with a concrete disturbance tuple.

use crate::error::{Error, Result};
use crate::sem::{Intervention, SemModel, StructFn, Surgeries};

fn constant_like(f: &StructFn, value: usize) -> StructFn {
    StructFn::constant(f.parents().to_vec(), f.parent_radices().to_vec(), f.u_size(), value)
}

/// Pearl surgery that pins the first non-treatment node instead of the treatment.
pub fn constant_on_wrong_node<P: Clone>(m: &SemModel<P>, iv: &Intervention) -> Result<Surgeries<P>> {
    let a_set = iv.treatments();
    let w = m
        .dag()
        .nodes()
        .find(|&v| !a_set.contains(v) && m.domains()[v].len() > 1)
        .ok_or_else(|| Error::Precondition("no non-treatment node with two or more values".into()))?;
    let new = m.surgery_new(iv)?;
    let mut values = vec![0; m.len()];
    new.eval_into(&vec![0; m.len()], &mut values);
    let wrong = (values[w] + 1) % m.domains()[w].len();
    Ok(Surgeries {
        intervention: iv.clone(),
        pearl: m.replace_function(w, constant_like(m.function(w), wrong)),
        new,
    })
}

/// New surgery that leaves the children reading the factual treatment, i.e. `M^a = M`.
pub fn children_not_fixed<P: Clone>(m: &SemModel<P>, iv: &Intervention) -> Result<Surgeries<P>> {
    Ok(Surgeries {
        intervention: iv.clone(),
        pearl: m.surgery_pearl(iv)?,
        new: m.clone(),
    })
}

/// New surgery that also overwrites each treatment's own function with its level.
pub fn treatment_replaced<P: Clone>(m: &SemModel<P>, iv: &Intervention) -> Result<Surgeries<P>> {
    let mut new = m.surgery_new(iv)?;
    for &(v, a) in iv.entries() {
        new = new.replace_function(v, constant_like(new.function(v), a));
    }
    Ok(Surgeries {
        intervention: iv.clone(),
        pearl: m.surgery_pearl(iv)?,
        new,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sem::DEFAULT_ENUMERATION_CAP;
    use crate::toy::toy_sem;
    use crate::verify::{check_lemma_equalities_with, LemmaClaim};
    use num_rational::BigRational;

    #[test]
    fn every_mutant_is_caught_on_the_toy_model() {
        let m = toy_sem::<BigRational>();
        let iv = Intervention::parse(&m, "A=1").unwrap();
        let cases = [
            (constant_on_wrong_node(&m, &iv).unwrap(), LemmaClaim::PearlEqualsNew),
            (children_not_fixed(&m, &iv).unwrap(), LemmaClaim::PearlEqualsNew),
            (treatment_replaced(&m, &iv).unwrap(), LemmaClaim::TreatmentPreserved),
        ];
        for (s, claim) in cases {
            let r = check_lemma_equalities_with(&m, &s, DEFAULT_ENUMERATION_CAP).unwrap();
            let w = r.witness().expect("mutant must be caught");
            assert_eq!(w.claim, claim);
            // replay the witness
            let t = m.evaluate_triple(&iv, &w.u).unwrap();
            let replay = s.evaluate(&m, &w.u).unwrap();
            assert_eq!(t.factual.get(w.node), w.factual);
            assert_eq!(replay.new.get(w.node), w.new);
        }
    }
}
