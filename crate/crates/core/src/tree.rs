//! Weighted partition trees and the additivity of Ĥ over two-stage (and
//! iterated) partitionings.
//!
//! An internal node stands for the grouping of its children's masses; the
//! entropy of the whole tree is the sum of Ĥ over the child-mass vectors of
//! every internal node, and for Shannon Ĥ this always equals the flat Ĥ of
//! the leaf weights, whatever the nesting. [`cocycle_residual`] measures the
//! one-level version of that identity on a [`Grouping`]; [`grouping_residual`]
//! is the same statement phrased with probability vectors and an arbitrary
//! entropy oracle.

use num::rational::BigRational;
use num::{Signed, Zero};
use serde_json::Value;

use crate::entropy::{hat_entropy, shannon_entropy, EntropyValue, ProbVector, WeightVector};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// A rooted ordered tree whose leaves carry nonnegative rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionTree {
    Leaf(BigRational),
    Internal(Vec<PartitionTree>),
}

impl PartitionTree {
    pub fn leaf(weight: BigRational) -> Result<Self> {
        if weight.is_negative() {
            return Err(Error::Negative(weight.to_string()));
        }
        Ok(PartitionTree::Leaf(weight))
    }

    pub fn internal(children: Vec<PartitionTree>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::MalformedTree(
                "internal node must have at least one child".into(),
            ));
        }
        Ok(PartitionTree::Internal(children))
    }
}

/// Total leaf weight under a node.
pub fn node_mass(t: &PartitionTree) -> BigRational {
    match t {
        PartitionTree::Leaf(w) => w.clone(),
        PartitionTree::Internal(children) => children
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + node_mass(c)),
    }
}

/// Left-to-right leaf weights, zeros preserved.
pub fn flatten(t: &PartitionTree) -> WeightVector {
    fn walk(t: &PartitionTree, out: &mut Vec<BigRational>) {
        match t {
            PartitionTree::Leaf(w) => out.push(w.clone()),
            PartitionTree::Internal(children) => {
                for c in children {
                    walk(c, out);
                }
            }
        }
    }
    let mut leaves = Vec::new();
    walk(t, &mut leaves);
    // every tree has at least one leaf and leaves are validated nonnegative
    WeightVector::new(leaves).expect("leaf walk yields a valid weight vector")
}

/// Ĥ of one internal node's child masses; an all-zero family contributes 0.
fn node_entropy(child_masses: Vec<BigRational>) -> Result<f64> {
    if child_masses.iter().all(|m| m.is_zero()) {
        return Ok(0.0);
    }
    let w = WeightVector::new(child_masses)?;
    Ok(hat_entropy(&w)?.bits())
}

/// Per-internal-node entropies in pre-order, each tagged with a path like
/// `root.1.0`.
pub fn node_entropies(t: &PartitionTree) -> Result<Vec<(String, f64)>> {
    fn walk(t: &PartitionTree, path: String, out: &mut Vec<(String, f64)>) -> Result<()> {
        if let PartitionTree::Internal(children) = t {
            let masses: Vec<BigRational> = children.iter().map(node_mass).collect();
            out.push((path.clone(), node_entropy(masses)?));
            for (i, c) in children.iter().enumerate() {
                walk(c, format!("{path}.{i}"), out)?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(t, "root".into(), &mut out)?;
    Ok(out)
}

/// Sum of Ĥ over all internal nodes; equals the flat Ĥ of the leaves for
/// Shannon entropy (iterated cocycle identity).
pub fn tree_entropy(t: &PartitionTree) -> Result<EntropyValue> {
    if !node_mass(t).is_positive() {
        return Err(Error::ZeroTotalWeight);
    }
    let per_node = node_entropies(t)?;
    let total = crate::entropy::stable_sum(per_node.into_iter().map(|(_, e)| e).collect());
    EntropyValue::new(total, "tree_entropy")
}

/// Everything `tree_entropy` knows, packaged for reporting: per-node
/// entropies, their total, the flat Ĥ of the leaves, and the difference.
#[derive(Debug, Clone)]
pub struct TreeReport {
    pub node_entropies: Vec<(String, f64)>,
    pub total: f64,
    pub flat: f64,
    pub residual: f64,
}

pub fn tree_report(t: &PartitionTree) -> Result<TreeReport> {
    let total = tree_entropy(t)?.bits();
    let node_entropies = node_entropies(t)?;
    let flat = hat_entropy(&flatten(t))?.bits();
    Ok(TreeReport {
        node_entropies,
        total,
        flat,
        residual: total - flat,
    })
}

/// A one-level grouping of weights: an ordered list of nonempty groups.
/// Individual groups may have zero mass, but not all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    groups: Vec<WeightVector>,
}

impl Grouping {
    pub fn new(groups: Vec<WeightVector>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::EmptyGrouping);
        }
        let total = groups
            .iter()
            .fold(BigRational::zero(), |acc, g| acc + g.total());
        if !total.is_positive() {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(Grouping { groups })
    }

    pub fn groups(&self) -> &[WeightVector] {
        &self.groups
    }

    /// All weights concatenated in group order.
    pub fn flattened(&self) -> WeightVector {
        let entries: Vec<BigRational> = self
            .groups
            .iter()
            .flat_map(|g| g.entries().iter().cloned())
            .collect();
        WeightVector::new(entries).expect("groups are nonempty")
    }

    /// The coarse vector of per-group sums (zero sums kept in place).
    pub fn group_sums(&self) -> WeightVector {
        let sums: Vec<BigRational> = self.groups.iter().map(|g| g.total()).collect();
        WeightVector::new(sums).expect("at least one group")
    }
}

/// Left side minus right side of the two-stage partitioning identity, for an
/// arbitrary homogeneous-entropy oracle: Ĥ(flat) − [Ĥ(sums) + Σ Ĥ(group)].
/// Groups of zero mass contribute Ĥ = 0.
pub fn cocycle_residual_with<F>(hat: F, g: &Grouping) -> Result<f64>
where
    F: Fn(&WeightVector) -> Result<f64>,
{
    let lhs = hat(&g.flattened())?;
    let mut rhs_terms = vec![hat(&g.group_sums())?];
    for group in g.groups() {
        if group.total().is_zero() {
            rhs_terms.push(0.0);
        } else {
            rhs_terms.push(hat(group)?);
        }
    }
    Ok(lhs - crate::entropy::stable_sum(rhs_terms))
}

/// [`cocycle_residual_with`] specialised to Shannon Ĥ, where the residual
/// vanishes up to float rounding.
pub fn cocycle_residual(g: &Grouping) -> Result<f64> {
    cocycle_residual_with(|w| hat_entropy(w).map(EntropyValue::bits), g)
}

/// Grouping identity at probability level: H(joint) − [H(p) + Σ pᵢ·H(condᵢ)]
/// where joint flattens the products condᵢⱼ·pᵢ. Zero for Shannon entropy.
pub fn grouping_residual<F>(p: &ProbVector, conds: &[ProbVector], h: F) -> Result<f64>
where
    F: Fn(&ProbVector) -> f64,
{
    if conds.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: conds.len(),
        });
    }
    let mut joint = Vec::new();
    for (pi, cond) in p.entries().iter().zip(conds) {
        for q in cond.entries() {
            joint.push(pi * q);
        }
    }
    let joint = ProbVector::from_floats(joint)?;
    let mut rhs = h(p);
    for (pi, cond) in p.entries().iter().zip(conds) {
        rhs += pi * h(cond);
    }
    Ok(h(&joint) - rhs)
}

/// Shannon form of [`grouping_residual`].
pub fn grouping_residual_shannon(p: &ProbVector, conds: &[ProbVector]) -> Result<f64> {
    grouping_residual(p, conds, |q| {
        shannon_entropy(q).map(EntropyValue::bits).unwrap_or(f64::NAN)
    })
}

// ---------------------------------------------------------------------------
// JSON representation: {"w": "p/q"} | {"w": 3} | {"children": [node, ...]}
// ---------------------------------------------------------------------------

/// Parses the tree file format. Weights are rational strings or JSON
/// integers; floating-point literals are rejected to keep weights exact.
pub fn tree_from_json(text: &str) -> Result<PartitionTree> {
    let value: Value = serde_json::from_str(text)?;
    node_from_value(&value)
}

fn node_from_value(v: &Value) -> Result<PartitionTree> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::MalformedTree(format!("expected an object, got {v}")))?;
    match (obj.get("w"), obj.get("children")) {
        (Some(w), None) => {
            if obj.len() != 1 {
                return Err(Error::MalformedTree("unexpected extra keys".into()));
            }
            PartitionTree::leaf(weight_from_value(w)?)
        }
        (None, Some(children)) => {
            if obj.len() != 1 {
                return Err(Error::MalformedTree("unexpected extra keys".into()));
            }
            let arr = children
                .as_array()
                .ok_or_else(|| Error::MalformedTree("children must be an array".into()))?;
            let parsed: Result<Vec<PartitionTree>> = arr.iter().map(node_from_value).collect();
            PartitionTree::internal(parsed?)
        }
        _ => Err(Error::MalformedTree(
            "node must have exactly one of \"w\" or \"children\"".into(),
        )),
    }
}

fn weight_from_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                Ok(BigRational::from_integer(i.into()))
            } else if n.as_i64().is_some() {
                Err(Error::Negative(n.to_string()))
            } else {
                Err(Error::FloatWeight(n.to_string()))
            }
        }
        other => Err(Error::MalformedTree(format!("bad weight {other}"))),
    }
}

/// Canonical JSON form: weights as reduced rational strings.
pub fn tree_to_json(t: &PartitionTree) -> Value {
    match t {
        PartitionTree::Leaf(w) => serde_json::json!({ "w": format_rational(w) }),
        PartitionTree::Internal(children) => {
            let arr: Vec<Value> = children.iter().map(tree_to_json).collect();
            serde_json::json!({ "children": arr })
        }
    }
}

// ---------------------------------------------------------------------------
// Shape enumeration
// ---------------------------------------------------------------------------

/// An unlabelled ordered tree shape; internal nodes have ≥ 2 children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeShape {
    Leaf,
    Node(Vec<TreeShape>),
}

/// All ordered tree shapes with exactly `leaves` leaves in which every
/// internal node has at least two children. (Allowing single-child nodes
/// would make the family infinite; they are entropy-neutral anyway since a
/// singleton grouping has Ĥ = 0.) Counts follow the little Schröder
/// numbers: 1, 1, 3, 11, 45, 197, ...
pub fn enumerate_shapes(leaves: usize) -> Vec<TreeShape> {
    // ordered sequences of already-built shapes summing to `total`, each
    // part strictly smaller than the shape being assembled
    fn sequences(total: usize, by_count: &[Vec<TreeShape>]) -> Vec<Vec<TreeShape>> {
        let max_part = by_count.len() - 1;
        let mut out = Vec::new();
        for head in 1..=total.min(max_part) {
            for hs in &by_count[head] {
                if head == total {
                    out.push(vec![hs.clone()]);
                } else {
                    for tail in sequences(total - head, by_count) {
                        let mut seq = Vec::with_capacity(1 + tail.len());
                        seq.push(hs.clone());
                        seq.extend(tail);
                        out.push(seq);
                    }
                }
            }
        }
        out
    }
    match leaves {
        0 => Vec::new(),
        1 => vec![TreeShape::Leaf],
        n => {
            let mut by_count: Vec<Vec<TreeShape>> = vec![Vec::new(), vec![TreeShape::Leaf]];
            for k in 2..=n {
                // parts are capped at k−1, so every root here has ≥ 2 children
                let shapes_k: Vec<TreeShape> = sequences(k, &by_count)
                    .into_iter()
                    .map(TreeShape::Node)
                    .collect();
                by_count.push(shapes_k);
            }
            by_count.pop().expect("built up to n")
        }
    }
}

/// Instantiates a shape with leaf weights drawn left to right from `weights`.
pub fn shape_with_weights(shape: &TreeShape, weights: &[BigRational]) -> Result<PartitionTree> {
    fn build(shape: &TreeShape, weights: &mut std::slice::Iter<BigRational>) -> Result<PartitionTree> {
        match shape {
            TreeShape::Leaf => {
                let w = weights.next().ok_or(Error::EmptyVector)?;
                PartitionTree::leaf(w.clone())
            }
            TreeShape::Node(children) => {
                let built: Result<Vec<PartitionTree>> =
                    children.iter().map(|c| build(c, weights)).collect();
                PartitionTree::internal(built?)
            }
        }
    }
    build(shape, &mut weights.iter())
}

/// Number of leaves a shape consumes.
pub fn shape_leaves(shape: &TreeShape) -> usize {
    match shape {
        TreeShape::Leaf => 1,
        TreeShape::Node(children) => children.iter().map(shape_leaves).sum(),
    }
}
