//! Arena storage for the search tree of piecewise-constant control signals.
//!
//! Every node represents the signal obtained by following parent links back to
//! a root: each edge holds one constant control applied for a fixed segment
//! duration. Nodes are immutable once inserted and are never removed; pruned
//! candidates simply never enter the arena or the queue.

use crate::error::GlcError;

/// Dense identifier of a node inside one [`SignalTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of the signal tree.
///
/// `terminal_time` always equals `depth * segment_duration`, computed by a
/// single multiplication of the integer depth so that equal depths compare
/// bit-identically.
#[derive(Debug, Clone)]
pub struct SignalNode {
    pub parent: Option<NodeId>,
    /// Control applied over the incoming segment; `None` for roots.
    pub control: Option<Vec<f64>>,
    pub depth: u32,
    pub terminal_state: Vec<f64>,
    pub terminal_time: f64,
    /// Accumulated trajectory cost from the root.
    pub cost: f64,
}

/// A finite piecewise-constant control signal: `controls[i]` acts on
/// `[i*segment_duration, (i+1)*segment_duration)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub controls: Vec<Vec<f64>>,
    pub segment_duration: f64,
}

impl Signal {
    pub fn empty(segment_duration: f64) -> Self {
        Signal { controls: Vec::new(), segment_duration }
    }

    pub fn depth(&self) -> usize {
        self.controls.len()
    }

    pub fn duration(&self) -> f64 {
        self.controls.len() as f64 * self.segment_duration
    }

    /// Value at time `t`, right-continuous on segment boundaries. The final
    /// boundary returns the last control; `None` only for the empty signal or
    /// `t` outside `[0, duration]`.
    pub fn value_at(&self, t: f64) -> Option<&[f64]> {
        if self.controls.is_empty() || t < 0.0 || t > self.duration() {
            return None;
        }
        let idx = ((t / self.segment_duration) as usize).min(self.controls.len() - 1);
        Some(&self.controls[idx])
    }
}

/// Append-only arena of [`SignalNode`]s sharing one segment duration.
#[derive(Debug, Clone)]
pub struct SignalTree {
    nodes: Vec<SignalNode>,
    segment_duration: f64,
}

impl SignalTree {
    /// `segment_duration` is the common duration c/R of every edge.
    pub fn new(segment_duration: f64) -> Self {
        assert!(segment_duration > 0.0, "segment duration must be positive");
        SignalTree { nodes: Vec::new(), segment_duration }
    }

    pub fn segment_duration(&self) -> f64 {
        self.segment_duration
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Inserts a root at depth 0 with zero time and cost. Calling this twice
    /// yields two distinct identifiers with identical fields.
    pub fn create_root(&mut self, initial_state: Vec<f64>) -> NodeId {
        self.push(SignalNode {
            parent: None,
            control: None,
            depth: 0,
            terminal_state: initial_state,
            terminal_time: 0.0,
            cost: 0.0,
        })
    }

    /// Appends a child reached from `parent` by applying `control` for one
    /// segment, landing on `terminal_state` at incremental cost `segment_cost`.
    pub fn add_child(
        &mut self,
        parent: NodeId,
        control: Vec<f64>,
        terminal_state: Vec<f64>,
        segment_cost: f64,
    ) -> Result<NodeId, GlcError> {
        let p = self.get(parent)?;
        let depth = p.depth + 1;
        let cost = p.cost + segment_cost;
        let node = SignalNode {
            parent: Some(parent),
            control: Some(control),
            depth,
            terminal_state,
            terminal_time: depth as f64 * self.segment_duration,
            cost,
        };
        Ok(self.push(node))
    }

    pub fn get(&self, id: NodeId) -> Result<&SignalNode, GlcError> {
        self.nodes.get(id.index()).ok_or(GlcError::UnknownNode(id.index()))
    }

    /// Panicking accessor for identifiers known to be valid.
    pub fn node(&self, id: NodeId) -> &SignalNode {
        &self.nodes[id.index()]
    }

    /// Rebuilds the control signal leading from the root to `node` by walking
    /// parent links; a root reconstructs to the empty signal.
    pub fn reconstruct_signal(&self, node: NodeId) -> Result<Signal, GlcError> {
        let mut controls = Vec::with_capacity(self.get(node)?.depth as usize);
        let mut cur = node;
        loop {
            let n = self.get(cur)?;
            match (n.parent, &n.control) {
                (Some(p), Some(u)) => {
                    controls.push(u.clone());
                    cur = p;
                }
                (None, None) => break,
                _ => unreachable!("roots and only roots lack parent and control"),
            }
        }
        controls.reverse();
        Ok(Signal { controls, segment_duration: self.segment_duration })
    }

    fn push(&mut self, node: SignalNode) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("tree exceeds u32 node capacity"));
        self.nodes.push(node);
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_distinct_with_identical_fields() {
        let mut tree = SignalTree::new(0.5);
        let a = tree.create_root(vec![1.0, 2.0]);
        let b = tree.create_root(vec![1.0, 2.0]);
        assert_ne!(a, b);
        let (na, nb) = (tree.node(a), tree.node(b));
        assert_eq!(na.terminal_state, nb.terminal_state);
        assert_eq!(na.depth, 0);
        assert_eq!(nb.depth, 0);
        assert_eq!(na.cost, 0.0);
        assert_eq!(na.terminal_time, 0.0);
    }

    #[test]
    fn unknown_parent_is_an_error() {
        let mut tree = SignalTree::new(1.0);
        let root = tree.create_root(vec![0.0]);
        let bogus = NodeId(17);
        let err = tree.add_child(bogus, vec![0.1], vec![0.1], 1.0).unwrap_err();
        assert_eq!(err, GlcError::UnknownNode(17));
        assert!(tree.add_child(root, vec![0.1], vec![0.1], 1.0).is_ok());
    }

    #[test]
    fn chain_cost_and_time_match_closed_form() {
        // Chain of k segments, each of cost c/R (unit running cost): the leaf
        // accumulates k*c/R and its terminal time is depth * segment duration
        // with zero error by construction.
        let c = 6.0;
        let r = 7.0;
        let tau = c / r;
        let mut tree = SignalTree::new(tau);
        let mut cur = tree.create_root(vec![0.0, 0.0]);
        let k = 25;
        for i in 0..k {
            cur = tree.add_child(cur, vec![0.2], vec![i as f64, 0.0], tau).unwrap();
        }
        let leaf = tree.node(cur);
        assert_eq!(leaf.depth, k);
        assert!((leaf.cost - k as f64 * tau).abs() < 1e-12);
        assert_eq!(leaf.terminal_time, leaf.depth as f64 * tree.segment_duration());
    }

    #[test]
    fn reconstruct_walks_back_in_order() {
        let mut tree = SignalTree::new(2.0);
        let root = tree.create_root(vec![0.0]);
        let a = tree.add_child(root, vec![-1.0], vec![1.0], 2.0).unwrap();
        let b = tree.add_child(a, vec![0.5], vec![2.0], 2.0).unwrap();
        let sig = tree.reconstruct_signal(b).unwrap();
        assert_eq!(sig.controls, vec![vec![-1.0], vec![0.5]]);
        assert_eq!(sig.duration(), 4.0);
        assert_eq!(sig.value_at(0.0).unwrap(), &[-1.0]);
        assert_eq!(sig.value_at(2.0).unwrap(), &[0.5]);
        assert_eq!(sig.value_at(4.0).unwrap(), &[0.5]);
        assert_eq!(sig.value_at(4.1), None);

        let empty = tree.reconstruct_signal(root).unwrap();
        assert_eq!(empty.depth(), 0);
        assert_eq!(empty.duration(), 0.0);
        assert_eq!(empty.value_at(0.0), None);
    }
}
