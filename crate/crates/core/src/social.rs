use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

/// Directed who-influences-whom graph over user ids. An edge `u -> v` means
/// purchases by `u` may influence `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SocialGraph {
    users: BTreeSet<String>,
    out: BTreeMap<String, BTreeSet<String>>,
    inc: BTreeMap<String, BTreeSet<String>>,
    edges: usize,
}

static EMPTY: BTreeSet<String> = BTreeSet::new();

impl SocialGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_user(&mut self, user: impl Into<String>) {
        self.users.insert(user.into());
    }

    /// Adds `from -> to`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, from: impl Into<String>, to: impl Into<String>) -> bool {
        let (from, to) = (from.into(), to.into());
        self.users.insert(from.clone());
        self.users.insert(to.clone());
        let fresh = self.out.entry(from.clone()).or_default().insert(to.clone());
        if fresh {
            self.inc.entry(to).or_default().insert(from);
            self.edges += 1;
        }
        fresh
    }

    pub fn users(&self) -> impl Iterator<Item = &String> {
        self.users.iter()
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn contains_edge(&self, from: &str, to: &str) -> bool {
        self.out.get(from).is_some_and(|s| s.contains(to))
    }

    pub fn in_neighbors(&self, user: &str) -> &BTreeSet<String> {
        self.inc.get(user).unwrap_or(&EMPTY)
    }

    pub fn out_neighbors(&self, user: &str) -> &BTreeSet<String> {
        self.out.get(user).unwrap_or(&EMPTY)
    }

    /// `N_G(v)`: `v` together with every user within one hop in either direction.
    pub fn neighborhood(&self, user: &str) -> BTreeSet<String> {
        let mut n: BTreeSet<String> = self.in_neighbors(user).clone();
        n.extend(self.out_neighbors(user).iter().cloned());
        n.insert(user.into());
        n
    }

    pub fn edges(&self) -> impl Iterator<Item = (&String, &String)> {
        self.out
            .iter()
            .flat_map(|(u, vs)| vs.iter().map(move |v| (u, v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighborhood_includes_self() {
        let mut g = SocialGraph::new();
        assert!(g.add_edge("a", "b"));
        assert!(!g.add_edge("a", "b"));
        g.add_edge("c", "a");
        assert_eq!(g.edge_count(), 2);
        let n = g.neighborhood("a");
        assert!(n.contains("a") && n.contains("b") && n.contains("c"));
        assert!(g.in_neighbors("b").contains("a"));
        assert!(g.in_neighbors("zzz").is_empty());
    }
}
