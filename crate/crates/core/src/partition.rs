//! Union-find and deterministic partitions of labelled points.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::natural_cmp;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Groups of indices, each ascending, ordered by their smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Smallest member label.
    pub id: String,
    pub members: Vec<String>,
}

/// Partition of a labelled point set. Components are sorted by id, members by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub components: Vec<Component>,
}

impl Partition {
    pub fn from_groups(groups: Vec<Vec<String>>) -> Self {
        let mut components: Vec<Component> = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|mut members| {
                members.sort_by(|a, b| natural_cmp(a, b));
                Component {
                    id: members[0].clone(),
                    members,
                }
            })
            .collect();
        components.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        Partition { components }
    }

    pub fn from_dsu(dsu: &mut Dsu, labels: &[String]) -> Self {
        Partition::from_groups(
            dsu.groups()
                .into_iter()
                .map(|g| g.into_iter().map(|i| labels[i].clone()).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, label: &str) -> Option<&str> {
        self.components
            .iter()
            .find(|c| c.members.iter().any(|m| m == label))
            .map(|c| c.id.as_str())
    }

    /// Label to component id.
    pub fn as_map(&self) -> BTreeMap<String, String> {
        self.components
            .iter()
            .flat_map(|c| c.members.iter().map(move |m| (m.clone(), c.id.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_smallest_labels() {
        let labels: Vec<String> = ["pi^2", "pi", "x", "pi^10"].iter().map(|s| s.to_string()).collect();
        let mut d = Dsu::new(4);
        d.union(0, 3);
        d.union(3, 1);
        let p = Partition::from_dsu(&mut d, &labels);
        assert_eq!(p.len(), 2);
        assert_eq!(p.components[0].id, "pi");
        assert_eq!(p.components[0].members, vec!["pi", "pi^2", "pi^10"]);
        assert_eq!(p.component_of("x"), Some("x"));
        assert_eq!(p.as_map()["pi^10"], "pi");
    }
}
