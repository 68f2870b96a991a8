//! Merge trees of FinSet-valued modules over a total order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pmod::{Morphism, Object, PersistenceModule, Target};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Birth,
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    /// Index of the proset element where the node appears.
    pub level: usize,
    pub kind: NodeKind,
}

/// A rooted forest. `parent[i] = None` means node `i`'s edge runs to the end
/// of the filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTree {
    pub nodes: Vec<Node>,
    pub parent: Vec<Option<usize>>,
    pub level_labels: Vec<String>,
}

impl MergeTree {
    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Birth).count()
    }

    pub fn merges(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Merge).count()
    }

    pub fn edges(&self) -> usize {
        self.parent.len()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph mergetree {\n  rankdir=BT;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if n.kind == NodeKind::Birth { "circle" } else { "box" };
            let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", self.level_labels[n.level]);
        }
        let mut roots = 0;
        for (i, p) in self.parent.iter().enumerate() {
            match p {
                Some(j) => {
                    let _ = writeln!(s, "  n{i} -> n{j};");
                }
                None => {
                    let _ = writeln!(s, "  end{roots} [label=\"inf\", shape=point];");
                    let _ = writeln!(s, "  n{i} -> end{roots};");
                    roots += 1;
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Traces births and merges of a FinSet module over a totally ordered proset.
pub fn merge_tree(f: &PersistenceModule) -> Result<MergeTree> {
    if *f.target() != Target::FinSet {
        return Err(Error::Shape("merge trees need a FinSet module".into()));
    }
    let p = f.proset();
    if !p.is_total() || !p.is_antisymmetric() {
        return Err(Error::NotTotal);
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| (0..p.len()).filter(|&y| p.leq(y, x)).count());

    let mut nodes = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    // node currently carried by each element of the set at the previous level
    let mut carried: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    for &x in &order {
        let size = match f.object(x) {
            Object::Set(n) => *n,
            _ => unreachable!("FinSet objects are sets"),
        };
        let mut pre: Vec<Vec<usize>> = vec![vec![]; size];
        if let Some(w) = prev {
            let Morphism::Function(table) = f.hom(w, x) else { unreachable!("FinSet morphisms are functions") };
            for (i, &j) in table.iter().enumerate() {
                pre[j].push(carried[i]);
            }
        }
        let mut next = Vec::with_capacity(size);
        for mut sources in pre {
            sources.dedup();
            let node = match sources.len() {
                0 => {
                    nodes.push(Node { level: x, kind: NodeKind::Birth });
                    parent.push(None);
                    nodes.len() - 1
                }
                1 => sources[0],
                _ => {
                    nodes.push(Node { level: x, kind: NodeKind::Merge });
                    parent.push(None);
                    let m = nodes.len() - 1;
                    for s in sources {
                        parent[s] = Some(m);
                    }
                    m
                }
            };
            next.push(node);
        }
        carried = next;
        prev = Some(x);
    }
    Ok(MergeTree { nodes, parent, level_labels: p.labels().to_vec() })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::proset::Proset;

    fn chain(n: usize) -> Arc<Proset> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Arc::new(Proset::new(labels, &rel).unwrap())
    }

    #[test]
    fn single_component() {
        let f = PersistenceModule::constant(chain(3), Target::FinSet, Object::Set(1)).unwrap();
        let t = merge_tree(&f).unwrap();
        assert_eq!((t.leaves(), t.merges(), t.edges()), (1, 0, 1));
    }

    #[test]
    fn two_minima_merge() {
        let f = PersistenceModule::finset(chain(2), vec![2, 1], BTreeMap::from([((0, 1), vec![0, 0])])).unwrap();
        let t = merge_tree(&f).unwrap();
        assert_eq!((t.leaves(), t.merges()), (2, 1));
        assert_eq!(t.parent, vec![Some(2), Some(2), None]);
        assert!(t.to_dot().contains("n0 -> n2"));
    }

    #[test]
    fn empty_start() {
        let f = PersistenceModule::finset(
            chain(3),
            vec![0, 0, 1],
            BTreeMap::from([((0, 1), vec![]), ((1, 2), vec![])]),
        )
        .unwrap();
        let t = merge_tree(&f).unwrap();
        assert_eq!(t.nodes, vec![Node { level: 2, kind: NodeKind::Birth }]);
    }

    #[test]
    fn non_total_is_rejected() {
        let p = Arc::new(Proset::new(vec!["a", "b"], &[]).unwrap());
        let f = PersistenceModule::constant(p, Target::FinSet, Object::Set(1)).unwrap();
        assert_eq!(merge_tree(&f).unwrap_err(), Error::NotTotal);
    }
}
