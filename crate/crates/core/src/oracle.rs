//! Decision oracles for the two explanation predicates, plus subset-minimal
//! extraction by deletion.
//!
//! An AXp query asks whether fixing a feature set to the instance's values
//! entails the instance's class on every point of the space. A CXp query asks
//! for a witness: a point that agrees with the instance outside the freed set
//! yet classifies differently. The two are complementary: fixing `s` entails
//! the class exactly when freeing the complement of `s` admits no witness.

use crate::model::{
    Classifier, DecisionTree, FeatureSet, FeatureSpace, Instance, ModelError, Point, TreeNode,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("seed {seed:?} does not satisfy the {kind:?} predicate")]
    InvalidSeed { kind: XpKind, seed: Vec<usize> },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XpKind {
    Axp,
    Cxp,
}

/// A subset-minimal explanation of one kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub features: FeatureSet,
    pub kind: XpKind,
}

/// Decides the explanation predicates for one (classifier, instance) pair.
pub trait XpOracle {
    fn space(&self) -> &FeatureSpace;

    fn instance(&self) -> &Instance;

    /// True iff every point agreeing with the instance on `fixed` classifies
    /// to the instance's label (the weak-AXp test; no minimality implied).
    fn holds_axp(&self, fixed: FeatureSet) -> bool;

    /// A point agreeing with the instance outside `freed` whose class
    /// differs from the label, if any; the first such point in the space's
    /// lexicographic enumeration order.
    fn cxp_witness(&self, freed: FeatureSet) -> Option<Point>;

    fn num_features(&self) -> usize {
        self.space().num_features()
    }
}

/// Reference oracle: answers every query by enumerating the relevant points.
pub struct BruteForceOracle<'a> {
    model: &'a Classifier,
    instance: Instance,
}

impl<'a> BruteForceOracle<'a> {
    pub fn new(model: &'a Classifier, instance: Instance) -> Result<Self, OracleError> {
        model.space().check_point(&instance.point)?;
        let actual = model.classify(&instance.point)?;
        if actual != instance.label {
            return Err(ModelError::LabelMismatch { label: instance.label, actual }.into());
        }
        Ok(BruteForceOracle { model, instance })
    }

    pub fn model(&self) -> &Classifier {
        self.model
    }
}

impl XpOracle for BruteForceOracle<'_> {
    fn space(&self) -> &FeatureSpace {
        self.model.space()
    }

    fn instance(&self) -> &Instance {
        &self.instance
    }

    fn holds_axp(&self, fixed: FeatureSet) -> bool {
        self.space()
            .points_fixing(fixed, &self.instance.point)
            .all(|p| self.model.classify(&p).expect("in-domain point") == self.instance.label)
    }

    fn cxp_witness(&self, freed: FeatureSet) -> Option<Point> {
        let fixed = freed.complement(self.num_features());
        self.space()
            .points_fixing(fixed, &self.instance.point)
            .find(|p| self.model.classify(p).expect("in-domain point") != self.instance.label)
    }
}

/// Structural oracle for decision trees: walks root-to-leaf paths instead of
/// enumerating the space.
pub struct TreeOracle<'a> {
    tree: &'a DecisionTree,
    instance: Instance,
}

impl<'a> TreeOracle<'a> {
    pub fn new(tree: &'a DecisionTree, instance: Instance) -> Result<Self, OracleError> {
        tree.space().check_point(&instance.point)?;
        let actual = tree.classify(&instance.point)?;
        if actual != instance.label {
            return Err(ModelError::LabelMismatch { label: instance.label, actual }.into());
        }
        Ok(TreeOracle { tree, instance })
    }

    /// Visits every wrong-class leaf whose path constraints are compatible
    /// with fixing `fixed` to the instance's values. `allowed[f]` carries the
    /// value sets accumulated along the current path (None = unconstrained).
    /// Returns the lexicographically smallest witness over all such paths.
    fn min_witness(
        &self,
        node: &TreeNode,
        fixed: FeatureSet,
        allowed: &mut Vec<Option<Vec<usize>>>,
        best: &mut Option<Point>,
    ) {
        match node {
            TreeNode::Leaf { class } => {
                if *class == self.instance.label {
                    return;
                }
                // Smallest point of this path's region: per-feature minima.
                let mut point = Vec::with_capacity(allowed.len());
                for (f, constraint) in allowed.iter().enumerate() {
                    let v = if fixed.contains(f) {
                        self.instance.point[f]
                    } else {
                        match constraint {
                            Some(values) => *values.iter().min().expect("nonempty constraint"),
                            None => 0,
                        }
                    };
                    point.push(v);
                }
                if best.as_ref().map_or(true, |b| point < *b) {
                    *best = Some(point);
                }
            }
            TreeNode::Split { feature, branches } => {
                for (values, child) in branches {
                    let narrowed: Vec<usize> = match &allowed[*feature] {
                        Some(prev) => values.iter().copied().filter(|v| prev.contains(v)).collect(),
                        None => values.clone(),
                    };
                    if narrowed.is_empty() {
                        continue; // dead path
                    }
                    if fixed.contains(*feature) && !narrowed.contains(&self.instance.point[*feature])
                    {
                        continue; // incompatible with the fixed value
                    }
                    let saved = allowed[*feature].replace(narrowed);
                    self.min_witness(child, fixed, allowed, best);
                    allowed[*feature] = saved;
                }
            }
        }
    }
}

impl XpOracle for TreeOracle<'_> {
    fn space(&self) -> &FeatureSpace {
        self.tree.space()
    }

    fn instance(&self) -> &Instance {
        &self.instance
    }

    fn holds_axp(&self, fixed: FeatureSet) -> bool {
        let mut allowed = vec![None; self.num_features()];
        let mut best = None;
        self.min_witness(self.tree.root(), fixed, &mut allowed, &mut best);
        best.is_none()
    }

    fn cxp_witness(&self, freed: FeatureSet) -> Option<Point> {
        let fixed = freed.complement(self.num_features());
        let mut allowed = vec![None; self.num_features()];
        let mut best = None;
        self.min_witness(self.tree.root(), fixed, &mut allowed, &mut best);
        best
    }
}

/// Shrinks a weak AXp to a subset-minimal one by attempting to delete each
/// feature in ascending index order.
pub fn extract_axp(oracle: &impl XpOracle, seed: FeatureSet) -> Result<Explanation, OracleError> {
    if !oracle.holds_axp(seed) {
        return Err(OracleError::InvalidSeed { kind: XpKind::Axp, seed: seed.to_vec() });
    }
    let mut current = seed;
    for i in seed.iter() {
        let mut candidate = current;
        candidate.remove(i);
        if oracle.holds_axp(candidate) {
            current = candidate;
        }
    }
    Ok(Explanation { features: current, kind: XpKind::Axp })
}

/// Shrinks a weak CXp to a subset-minimal one, ascending deletion order.
pub fn extract_cxp(oracle: &impl XpOracle, seed: FeatureSet) -> Result<Explanation, OracleError> {
    if oracle.cxp_witness(seed).is_none() {
        return Err(OracleError::InvalidSeed { kind: XpKind::Cxp, seed: seed.to_vec() });
    }
    let mut current = seed;
    for i in seed.iter() {
        let mut candidate = current;
        candidate.remove(i);
        if oracle.cxp_witness(candidate).is_some() {
            current = candidate;
        }
    }
    Ok(Explanation { features: current, kind: XpKind::Cxp })
}

#[cfg(test)]
pub(crate) mod testutil {
    //! Brute-force ground truth used across the crate's tests: explanation
    //! families computed by sweeping all feature subsets, and minimal hitting
    //! sets computed by sweeping all candidate subsets. Independent of the
    //! enumeration machinery under test.

    use super::*;

    pub fn all_subsets(m: usize) -> impl Iterator<Item = FeatureSet> {
        (0u64..(1u64 << m)).map(|bits| FeatureSet::from_indices((0..m).filter(move |i| bits & (1 << i) != 0)))
    }

    /// Every subset-minimal set satisfying the weak-AXp predicate.
    pub fn brute_force_axps(oracle: &impl XpOracle) -> Vec<FeatureSet> {
        let m = oracle.num_features();
        let weak: Vec<FeatureSet> = all_subsets(m).filter(|&s| oracle.holds_axp(s)).collect();
        minimal_sets(&weak)
    }

    /// Every subset-minimal set with a CXp witness.
    pub fn brute_force_cxps(oracle: &impl XpOracle) -> Vec<FeatureSet> {
        let m = oracle.num_features();
        let weak: Vec<FeatureSet> = all_subsets(m)
            .filter(|&s| oracle.cxp_witness(s).is_some())
            .collect();
        minimal_sets(&weak)
    }

    pub fn minimal_sets(family: &[FeatureSet]) -> Vec<FeatureSet> {
        family
            .iter()
            .copied()
            .filter(|&s| !family.iter().any(|&t| t != s && t.is_subset(s)))
            .collect()
    }

    /// Minimal hitting sets of `family` over the universe {0, .., m-1}.
    pub fn brute_force_mhs(family: &[FeatureSet], m: usize) -> Vec<FeatureSet> {
        let hitting: Vec<FeatureSet> = all_subsets(m)
            .filter(|&s| family.iter().all(|f| f.intersects(s)))
            .collect();
        minimal_sets(&hitting)
    }

    pub fn as_set(family: &[FeatureSet]) -> std::collections::BTreeSet<FeatureSet> {
        family.iter().copied().collect()
    }
}
