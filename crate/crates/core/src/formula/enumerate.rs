//! Exhaustive, size-ordered enumeration of formulas over `⊥, ¬, ∧` and a
//! chosen set of modalities.
//!
//! The remaining connectives are definable from this basis, so enumerating it
//! is enough for bounded modal-equivalence checks.

use super::{Formula, Modality};

/// A formula bound: variables and maximum number of syntax-tree nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaBound {
    pub vars: Vec<String>,
    pub max_nodes: usize,
}

impl FormulaBound {
    pub fn new(vars: &[&str], max_nodes: usize) -> Self {
        FormulaBound {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            max_nodes,
        }
    }
}

impl Default for FormulaBound {
    fn default() -> Self {
        FormulaBound::new(&["p", "q"], 5)
    }
}

/// One enumerated formula, with children referring to earlier indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumNode {
    Var(usize),
    Bottom,
    Not(usize),
    Modal(Modality, usize),
    And(usize, usize),
}

/// All formulas up to a node bound, as a table of shared nodes.
///
/// Order: by node count; within a size, atoms (variables, then `⊥`), then
/// `¬`, then each modality in the order given, then `∧` by left-child size.
#[derive(Clone, Debug)]
pub struct Enumeration {
    vars: Vec<String>,
    nodes: Vec<EnumNode>,
    level_ends: Vec<usize>,
}

impl Enumeration {
    pub fn new(vars: &[String], max_nodes: usize, modalities: &[Modality]) -> Self {
        let mut nodes = Vec::new();
        let mut level_ends = Vec::new();
        let mut level_ranges: Vec<(usize, usize)> = vec![(0, 0)];
        for size in 1..=max_nodes {
            let start = nodes.len();
            if size == 1 {
                nodes.extend((0..vars.len()).map(EnumNode::Var));
                nodes.push(EnumNode::Bottom);
            } else {
                let (cs, ce) = level_ranges[size - 1];
                nodes.extend((cs..ce).map(EnumNode::Not));
                for m in modalities {
                    nodes.extend((cs..ce).map(|c| EnumNode::Modal(*m, c)));
                }
                for left in 1..size - 1 {
                    let right = size - 1 - left;
                    let (ls, le) = level_ranges[left];
                    let (rs, re) = level_ranges[right];
                    for l in ls..le {
                        nodes.extend((rs..re).map(|r| EnumNode::And(l, r)));
                    }
                }
            }
            level_ranges.push((start, nodes.len()));
            level_ends.push(nodes.len());
        }
        Enumeration {
            vars: vars.to_vec(),
            nodes,
            level_ends,
        }
    }

    pub fn from_bound(bound: &FormulaBound, modalities: &[Modality]) -> Self {
        Self::new(&bound.vars, bound.max_nodes, modalities)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nodes(&self) -> &[EnumNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of formulas with at most `size` nodes.
    pub fn count_up_to(&self, size: usize) -> usize {
        match size {
            0 => 0,
            s => self.level_ends[(s - 1).min(self.level_ends.len() - 1)],
        }
    }

    pub fn formula(&self, index: usize) -> Formula {
        match self.nodes[index] {
            EnumNode::Var(v) => Formula::Var(self.vars[v].clone()),
            EnumNode::Bottom => Formula::Bottom,
            EnumNode::Not(c) => Formula::not(self.formula(c)),
            EnumNode::Modal(m, c) => Formula::nec(m, self.formula(c)),
            EnumNode::And(l, r) => Formula::and(self.formula(l), self.formula(r)),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = Formula> + '_ {
        (0..self.nodes.len()).map(|i| self.formula(i))
    }

    /// The same table with one modality swapped for another.
    pub fn rename_modality(&self, from: Modality, to: Modality) -> Enumeration {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                EnumNode::Modal(m, c) if *m == from => EnumNode::Modal(to, *c),
                other => *other,
            })
            .collect();
        Enumeration {
            vars: self.vars.clone(),
            nodes,
            level_ends: self.level_ends.clone(),
        }
    }
}

/// Every formula over `vars` with at most `max_nodes` nodes, using `⊥, ¬, ∧,
/// □, •, ■`.
pub fn enumerate_formulas(vars: &[&str], max_nodes: usize) -> impl Iterator<Item = Formula> {
    enumerate_formulas_with(vars, max_nodes, &Modality::ALL)
}

pub fn enumerate_formulas_with(
    vars: &[&str],
    max_nodes: usize,
    modalities: &[Modality],
) -> impl Iterator<Item = Formula> {
    let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    let table = Enumeration::new(&vars, max_nodes, modalities);
    (0..table.len()).map(move |i| table.formula(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Counts syntax trees of exactly `size` nodes directly from the grammar.
    fn count_exact(atoms: usize, unary: usize, size: usize) -> usize {
        match size {
            0 => 0,
            1 => atoms,
            n => {
                let mut total = unary * count_exact(atoms, unary, n - 1);
                for left in 1..n - 1 {
                    total +=
                        count_exact(atoms, unary, left) * count_exact(atoms, unary, n - 1 - left);
                }
                total
            }
        }
    }

    #[test]
    fn size_one_and_two() {
        let one: Vec<String> = enumerate_formulas(&["p"], 1)
            .map(|f| f.to_string())
            .collect();
        assert_eq!(one, vec!["p", "false"]);
        let two: Vec<String> = enumerate_formulas(&["p"], 2)
            .map(|f| f.to_string())
            .collect();
        for s in ["~p", "[]p", "*p", "[b]p"] {
            assert!(two.contains(&s.to_string()), "{s} missing");
        }
        assert_eq!(two.len(), 2 + 4 * 2);
    }

    #[test]
    fn count_matches_grammar_oracle() {
        let frozen = 3 + 12 + 57 + 300;
        let oracle: usize = (1..=4).map(|s| count_exact(3, 4, s)).sum();
        assert_eq!(oracle, frozen);
        assert_eq!(enumerate_formulas(&["p", "q"], 4).count(), frozen);
        let box_only = Enumeration::new(&["p".into(), "q".into()], 5, &[Modality::Box]);
        let oracle5: usize = (1..=5).map(|s| count_exact(3, 2, s)).sum();
        assert_eq!(box_only.len(), oracle5);
        assert_eq!(box_only.count_up_to(3), 3 + 6 + 21);
    }

    #[test]
    fn duplicate_free_and_sized() {
        let all: Vec<Formula> = enumerate_formulas(&["p", "q"], 5).collect();
        let distinct: HashSet<&Formula> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all
            .windows(2)
            .all(|w| w[0].node_count() <= w[1].node_count()));
        assert!(all.iter().all(|f| f.node_count() <= 5));
    }

    #[test]
    fn bounds_are_nested() {
        let small: HashSet<Formula> = enumerate_formulas(&["p"], 3).collect();
        let big: Vec<Formula> = enumerate_formulas(&["p"], 4).collect();
        assert!(small.iter().all(|f| big.contains(f)));
        assert_eq!(
            &big[..small.len()],
            &enumerate_formulas(&["p"], 3).collect::<Vec<_>>()[..]
        );
    }
}
