//! Finite-domain classification problems: feature spaces, instances and
//! concrete classifiers (truth tables and decision trees).
//!
//! Feature domains are finite and explicitly enumerated. Points are stored as
//! per-feature indices into the domain lists, which keeps comparisons exact
//! and point enumeration cheap; the domain values themselves only matter at
//! the serialization boundary.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Hard limit on the number of features (sets are stored as 64-bit masks).
pub const MAX_FEATURES: usize = 64;

/// Default cap on the total number of points in a feature space.
pub const DEFAULT_SPACE_CAP: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("a feature space needs at least one feature")]
    NoFeatures,
    #[error("feature {0} has an empty domain")]
    EmptyDomain(usize),
    #[error("at most {MAX_FEATURES} features are supported, got {0}")]
    TooManyFeatures(usize),
    #[error("feature space has {size} points, exceeding the cap of {cap}")]
    SpaceTooLarge { size: u64, cap: u64 },
    #[error("point has {got} values but the space has {expected} features")]
    ArityMismatch { expected: usize, got: usize },
    #[error("value index {value} is outside the domain of feature {feature}")]
    ValueOutOfDomain { feature: usize, value: usize },
    #[error("class {class} is outside the class set of size {num_classes}")]
    ClassOutOfRange { class: usize, num_classes: usize },
    #[error("a classifier needs at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("truth table has {got} entries but the space has {expected} points")]
    TableSizeMismatch { expected: u64, got: usize },
    #[error("invalid decision tree: {0}")]
    InvalidTree(String),
    #[error("instance label {label} disagrees with the classifier output {actual}")]
    LabelMismatch { label: usize, actual: usize },
}

/// A concrete feature value, used at the serialization boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => write!(f, "{s}"),
        }
    }
}

/// A set of feature indices, stored as a 64-bit mask.
///
/// Feature indices are 0-based throughout the crate. Iteration order is
/// always ascending.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FeatureSet(u64);

impl FeatureSet {
    pub const EMPTY: FeatureSet = FeatureSet(0);

    pub fn empty() -> Self {
        FeatureSet(0)
    }

    /// The full set {0, .., m-1}.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_FEATURES);
        if m == MAX_FEATURES {
            FeatureSet(u64::MAX)
        } else {
            FeatureSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_FEATURES);
        FeatureSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = FeatureSet(0);
        for i in iter {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_FEATURES);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < MAX_FEATURES && self.0 & (1u64 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(&self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 & other.0)
    }

    pub fn difference(&self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 & !other.0)
    }

    /// Complement within {0, .., m-1}.
    pub fn complement(&self, m: usize) -> FeatureSet {
        FeatureSet(!self.0 & Self::full(m).0)
    }

    pub fn is_subset(&self, other: FeatureSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: FeatureSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Ascending iteration over the member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..MAX_FEATURES).filter(move |i| bits & (1u64 << i) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        FeatureSet::from_indices(iter)
    }
}

impl Serialize for FeatureSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FeatureSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        for &i in &indices {
            if i >= MAX_FEATURES {
                return Err(serde::de::Error::custom(format!(
                    "feature index {i} out of range"
                )));
            }
        }
        Ok(FeatureSet::from_indices(indices))
    }
}

/// A point of the feature space: one domain index per feature.
pub type Point = Vec<usize>;

/// A finite feature space: per-feature lists of admissible values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpace {
    domains: Vec<Vec<Value>>,
}

impl FeatureSpace {
    /// Builds a space, enforcing the default point-count cap.
    pub fn new(domains: Vec<Vec<Value>>) -> Result<Self, ModelError> {
        Self::with_cap(domains, DEFAULT_SPACE_CAP)
    }

    /// Builds a space with an explicit point-count cap.
    pub fn with_cap(domains: Vec<Vec<Value>>, cap: u64) -> Result<Self, ModelError> {
        if domains.is_empty() {
            return Err(ModelError::NoFeatures);
        }
        if domains.len() > MAX_FEATURES {
            return Err(ModelError::TooManyFeatures(domains.len()));
        }
        let mut size: u64 = 1;
        for (i, d) in domains.iter().enumerate() {
            if d.is_empty() {
                return Err(ModelError::EmptyDomain(i));
            }
            size = size
                .checked_mul(d.len() as u64)
                .filter(|&s| s <= cap)
                .ok_or(ModelError::SpaceTooLarge { size: u64::MAX, cap })?;
        }
        if size > cap {
            return Err(ModelError::SpaceTooLarge { size, cap });
        }
        Ok(FeatureSpace { domains })
    }

    /// A space of `m` features with domain {0, 1} each.
    pub fn booleans(m: usize) -> Self {
        let domains = (0..m).map(|_| vec![Value::Int(0), Value::Int(1)]).collect();
        FeatureSpace::new(domains).expect("boolean space within caps")
    }

    pub fn num_features(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, feature: usize) -> &[Value] {
        &self.domains[feature]
    }

    pub fn domain_size(&self, feature: usize) -> usize {
        self.domains[feature].len()
    }

    /// Total number of points; fits in u64 by construction.
    pub fn total_points(&self) -> u64 {
        self.domains.iter().map(|d| d.len() as u64).product()
    }

    /// Validates a point's arity and per-feature domain indices.
    pub fn check_point(&self, point: &[usize]) -> Result<(), ModelError> {
        if point.len() != self.num_features() {
            return Err(ModelError::ArityMismatch {
                expected: self.num_features(),
                got: point.len(),
            });
        }
        for (i, &v) in point.iter().enumerate() {
            if v >= self.domain_size(i) {
                return Err(ModelError::ValueOutOfDomain { feature: i, value: v });
            }
        }
        Ok(())
    }

    /// Streams every point of the space, in lexicographic order by feature
    /// index (lower indices more significant) then domain order.
    pub fn points(&self) -> PointIter<'_> {
        self.points_fixing(FeatureSet::empty(), &vec![0; self.num_features()])
    }

    /// Streams the points agreeing with `point` on the features in `fixed`,
    /// each exactly once, in the same lexicographic order.
    pub fn points_fixing(&self, fixed: FeatureSet, point: &[usize]) -> PointIter<'_> {
        debug_assert_eq!(point.len(), self.num_features());
        let mut current = vec![0; self.num_features()];
        for i in fixed.iter() {
            current[i] = point[i];
        }
        PointIter { space: self, fixed, current, done: false }
    }
}

/// Deterministic odometer over the free features of a space.
pub struct PointIter<'a> {
    space: &'a FeatureSpace,
    fixed: FeatureSet,
    current: Point,
    done: bool,
}

impl Iterator for PointIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // Advance the least-significant free feature; carry on overflow.
        self.done = true;
        for i in (0..self.space.num_features()).rev() {
            if self.fixed.contains(i) {
                continue;
            }
            if self.current[i] + 1 < self.space.domain_size(i) {
                self.current[i] += 1;
                self.done = false;
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// A concrete data point together with its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub point: Point,
    pub label: usize,
}

impl Instance {
    pub fn new(space: &FeatureSpace, point: Point, label: usize) -> Result<Self, ModelError> {
        space.check_point(&point)?;
        Ok(Instance { point, label })
    }
}

/// A total classifier over a finite feature space.
#[derive(Debug, Clone)]
pub enum Classifier {
    Table(TruthTable),
    Tree(DecisionTree),
}

impl Classifier {
    pub fn space(&self) -> &FeatureSpace {
        match self {
            Classifier::Table(t) => &t.space,
            Classifier::Tree(t) => &t.space,
        }
    }

    pub fn num_classes(&self) -> usize {
        match self {
            Classifier::Table(t) => t.num_classes,
            Classifier::Tree(t) => t.num_classes,
        }
    }

    pub fn classify(&self, point: &[usize]) -> Result<usize, ModelError> {
        match self {
            Classifier::Table(t) => t.classify(point),
            Classifier::Tree(t) => t.classify(point),
        }
    }

    /// Builds the instance `(point, classify(point))`.
    pub fn instance(&self, point: Point) -> Result<Instance, ModelError> {
        let label = self.classify(&point)?;
        Ok(Instance { point, label })
    }

    /// True when every point of the space maps to the same class.
    pub fn is_constant(&self) -> Result<bool, ModelError> {
        let mut points = self.space().points();
        let first = match points.next() {
            Some(p) => self.classify(&p)?,
            None => return Ok(true),
        };
        for p in points {
            if self.classify(&p)? != first {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An explicit map from every point of the space to a class.
///
/// Entries are indexed by point rank in the space's lexicographic order.
#[derive(Debug, Clone)]
pub struct TruthTable {
    space: FeatureSpace,
    num_classes: usize,
    entries: Vec<usize>,
}

impl TruthTable {
    pub fn new(
        space: FeatureSpace,
        num_classes: usize,
        entries: Vec<usize>,
    ) -> Result<Self, ModelError> {
        if num_classes < 2 {
            return Err(ModelError::TooFewClasses(num_classes));
        }
        let expected = space.total_points();
        if entries.len() as u64 != expected {
            return Err(ModelError::TableSizeMismatch { expected, got: entries.len() });
        }
        if let Some(&c) = entries.iter().find(|&&c| c >= num_classes) {
            return Err(ModelError::ClassOutOfRange { class: c, num_classes });
        }
        Ok(TruthTable { space, num_classes, entries })
    }

    /// Builds a table by evaluating `f` on every point.
    pub fn from_fn(
        space: FeatureSpace,
        num_classes: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self, ModelError> {
        let entries = space.points().map(|p| f(&p)).collect();
        TruthTable::new(space, num_classes, entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    fn rank(&self, point: &[usize]) -> usize {
        let mut r = 0usize;
        for (i, &v) in point.iter().enumerate() {
            r = r * self.space.domain_size(i) + v;
        }
        r
    }

    pub fn classify(&self, point: &[usize]) -> Result<usize, ModelError> {
        self.space.check_point(point)?;
        Ok(self.entries[self.rank(point)])
    }
}

/// One node of a decision tree.
///
/// A split carries, for each branch, the set of domain indices it accepts;
/// the branch value sets of a split partition the feature's domain, so every
/// point reaches exactly one leaf.
#[derive(Debug, Clone)]
pub enum TreeNode {
    Leaf { class: usize },
    Split { feature: usize, branches: Vec<(Vec<usize>, TreeNode)> },
}

#[derive(Debug, Clone)]
pub struct DecisionTree {
    space: FeatureSpace,
    num_classes: usize,
    root: TreeNode,
}

impl DecisionTree {
    pub fn new(
        space: FeatureSpace,
        num_classes: usize,
        root: TreeNode,
    ) -> Result<Self, ModelError> {
        if num_classes < 2 {
            return Err(ModelError::TooFewClasses(num_classes));
        }
        Self::validate_node(&space, num_classes, &root)?;
        Ok(DecisionTree { space, num_classes, root })
    }

    fn validate_node(
        space: &FeatureSpace,
        num_classes: usize,
        node: &TreeNode,
    ) -> Result<(), ModelError> {
        match node {
            TreeNode::Leaf { class } => {
                if *class >= num_classes {
                    return Err(ModelError::ClassOutOfRange { class: *class, num_classes });
                }
            }
            TreeNode::Split { feature, branches } => {
                if *feature >= space.num_features() {
                    return Err(ModelError::InvalidTree(format!(
                        "split on unknown feature {feature}"
                    )));
                }
                let size = space.domain_size(*feature);
                let mut covered = vec![false; size];
                for (values, child) in branches {
                    if values.is_empty() {
                        return Err(ModelError::InvalidTree(format!(
                            "empty branch on feature {feature}"
                        )));
                    }
                    for &v in values {
                        if v >= size {
                            return Err(ModelError::ValueOutOfDomain { feature: *feature, value: v });
                        }
                        if covered[v] {
                            return Err(ModelError::InvalidTree(format!(
                                "value {v} of feature {feature} covered twice"
                            )));
                        }
                        covered[v] = true;
                    }
                    Self::validate_node(space, num_classes, child)?;
                }
                if covered.iter().any(|&c| !c) {
                    return Err(ModelError::InvalidTree(format!(
                        "branches of feature {feature} do not cover its domain"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn classify(&self, point: &[usize]) -> Result<usize, ModelError> {
        self.space.check_point(point)?;
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { class } => return Ok(*class),
                TreeNode::Split { feature, branches } => {
                    let v = point[*feature];
                    // Branches partition the domain, so exactly one matches.
                    node = branches
                        .iter()
                        .find(|(values, _)| values.contains(&v))
                        .map(|(_, child)| child)
                        .expect("validated split covers the domain");
                }
            }
        }
    }

    /// Tabulates the tree by classifying every point of the space.
    pub fn to_table(&self) -> Result<TruthTable, ModelError> {
        let entries = self
            .space
            .points()
            .map(|p| self.classify(&p))
            .collect::<Result<Vec<_>, _>>()?;
        TruthTable::new(self.space.clone(), self.num_classes, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// AND over two boolean features, as a truth table.
    pub(crate) fn and_table() -> Classifier {
        let space = FeatureSpace::booleans(2);
        Classifier::Table(
            TruthTable::from_fn(space, 2, |p| usize::from(p[0] == 1 && p[1] == 1)).unwrap(),
        )
    }

    /// x1 OR x2 as a decision tree: split on feature 0, else test feature 1.
    fn or_tree() -> DecisionTree {
        let space = FeatureSpace::booleans(2);
        let root = TreeNode::Split {
            feature: 0,
            branches: vec![
                (
                    vec![0],
                    TreeNode::Split {
                        feature: 1,
                        branches: vec![
                            (vec![0], TreeNode::Leaf { class: 0 }),
                            (vec![1], TreeNode::Leaf { class: 1 }),
                        ],
                    },
                ),
                (vec![1], TreeNode::Leaf { class: 1 }),
            ],
        };
        DecisionTree::new(space, 2, root).unwrap()
    }

    #[test]
    fn classify_and_table() {
        let model = and_table();
        assert_eq!(model.classify(&[1, 1]).unwrap(), 1);
        assert_eq!(model.classify(&[1, 0]).unwrap(), 0);
        assert_eq!(model.classify(&[0, 1]).unwrap(), 0);
    }

    #[test]
    fn classify_rejects_out_of_domain() {
        let model = and_table();
        assert_eq!(
            model.classify(&[2, 0]),
            Err(ModelError::ValueOutOfDomain { feature: 0, value: 2 })
        );
        assert_eq!(
            model.classify(&[1]),
            Err(ModelError::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn classify_or_tree_matches_table() {
        let tree = or_tree();
        assert_eq!(tree.classify(&[0, 1]).unwrap(), 1);
        let table = tree.to_table().unwrap();
        for p in tree.space().points() {
            assert_eq!(tree.classify(&p).unwrap(), table.classify(&p).unwrap());
        }
    }

    #[test]
    fn points_fixing_one_feature() {
        let space = FeatureSpace::booleans(2);
        let fixed = FeatureSet::singleton(0);
        let got: Vec<_> = space.points_fixing(fixed, &[1, 0]).collect();
        assert_eq!(got, vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn points_fixing_complete_assignment() {
        let space = FeatureSpace::booleans(3);
        let all = FeatureSet::full(3);
        let got: Vec<_> = space.points_fixing(all, &[1, 0, 1]).collect();
        assert_eq!(got, vec![vec![1, 0, 1]]);
    }

    #[test]
    fn points_cover_whole_space_once() {
        let space = FeatureSpace::booleans(3);
        let got: Vec<_> = space.points().collect();
        assert_eq!(got.len(), 8);
        let unique: std::collections::BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(unique.len(), 8);
    }

    #[test]
    fn points_are_lexicographic() {
        let space = FeatureSpace::new(vec![
            vec![Value::Int(0), Value::Int(1)],
            vec![Value::Int(0), Value::Int(1), Value::Int(2)],
        ])
        .unwrap();
        let got: Vec<_> = space.points().collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn space_cap_is_enforced() {
        let domains = (0..25).map(|_| vec![Value::Int(0), Value::Int(1)]).collect();
        match FeatureSpace::new(domains) {
            Err(ModelError::SpaceTooLarge { .. }) => {}
            other => panic!("expected SpaceTooLarge, got {other:?}"),
        }
        let domains: Vec<_> = (0..25).map(|_| vec![Value::Int(0), Value::Int(1)]).collect();
        assert!(FeatureSpace::with_cap(domains, 1 << 25).is_ok());
    }

    #[test]
    fn tree_validation_rejects_partial_cover() {
        let space = FeatureSpace::booleans(1);
        let root = TreeNode::Split {
            feature: 0,
            branches: vec![(vec![0], TreeNode::Leaf { class: 0 })],
        };
        assert!(matches!(
            DecisionTree::new(space, 2, root),
            Err(ModelError::InvalidTree(_))
        ));
    }

    #[test]
    fn feature_set_basics() {
        let mut s = FeatureSet::from_indices([2, 0, 5]);
        assert_eq!(s.to_vec(), vec![0, 2, 5]);
        assert_eq!(s.len(), 3);
        s.remove(2);
        assert!(!s.contains(2));
        assert_eq!(s.complement(6).to_vec(), vec![1, 2, 3, 4]);
        assert!(FeatureSet::empty().is_subset(s));
        assert!(s.is_subset(FeatureSet::full(6)));
    }
}
