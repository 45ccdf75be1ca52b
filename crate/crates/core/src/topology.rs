//! Finite generalized topologies: families of world sets that contain ∅ and
//! are closed under unions. Neither the full universe nor intersections are
//! required to be open.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::report::{ValidationReport, Witness};
use crate::worldset::{canonical_family, WorldSet, MAX_WORLDS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("universe must contain at least one world")]
    EmptyUniverse,
    #[error("universe of {0} worlds exceeds the supported maximum of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("set {set} belongs to a universe of {found} worlds, expected {expected}")]
    UniverseMismatch {
        set: WorldSet,
        expected: usize,
        found: usize,
    },
    #[error("family is not a generalized topology:\n{0}")]
    Invalid(ValidationReport),
    #[error("bad example space parameters: {0}")]
    BadExample(String),
}

fn check_universe(universe: usize, family: &[WorldSet]) -> Result<(), TopologyError> {
    if universe == 0 {
        return Err(TopologyError::EmptyUniverse);
    }
    if universe > MAX_WORLDS {
        return Err(TopologyError::TooManyWorlds(universe));
    }
    if let Some(bad) = family.iter().find(|s| s.universe() != universe) {
        return Err(TopologyError::UniverseMismatch {
            set: *bad,
            expected: universe,
            found: bad.universe(),
        });
    }
    Ok(())
}

/// Checks the two defining conditions: ∅ is open and the family is closed
/// under (binary, hence all finite) unions.
pub fn validate_topology(
    universe: usize,
    family: &[WorldSet],
) -> Result<ValidationReport, TopologyError> {
    check_universe(universe, family)?;
    let family = canonical_family(family.to_vec());
    let mut report = ValidationReport::new();
    if family.binary_search(&WorldSet::empty(universe)).is_err() {
        report.push("empty-set", vec![Witness::Note("∅ is not a member".into())]);
    }
    let mut missing: Vec<WorldSet> = Vec::new();
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            let u = x.union(*y);
            if family.binary_search(&u).is_err() && !missing.contains(&u) {
                missing.push(u);
                report.push(
                    "union-closure",
                    vec![
                        Witness::Set(*x),
                        Witness::Note("∪".into()),
                        Witness::Set(*y),
                        Witness::Note("=".into()),
                        Witness::Set(u),
                        Witness::Note("is not open".into()),
                    ],
                );
            }
        }
    }
    Ok(report)
}

/// A validated generalized topology with opens in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenTopology {
    universe: usize,
    opens: Vec<WorldSet>,
}

impl GenTopology {
    pub fn new(universe: usize, family: Vec<WorldSet>) -> Result<Self, TopologyError> {
        let report = validate_topology(universe, &family)?;
        if !report.valid() {
            return Err(TopologyError::Invalid(report));
        }
        Ok(GenTopology {
            universe,
            opens: canonical_family(family),
        })
    }

    /// The trivial topology `{∅}`.
    pub fn trivial(universe: usize) -> Result<Self, TopologyError> {
        Self::new(universe, vec![WorldSet::empty(universe)])
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn opens(&self) -> &[WorldSet] {
        &self.opens
    }

    pub fn is_open(&self, x: WorldSet) -> bool {
        self.opens.binary_search(&x).is_ok()
    }

    /// Index of an open in canonical order.
    pub fn open_index(&self, x: WorldSet) -> Option<usize> {
        self.opens.binary_search(&x).ok()
    }

    /// ⋃μ, the largest open set.
    pub fn union_of_opens(&self) -> WorldSet {
        *self.opens.last().expect("∅ is always open")
    }

    /// Worlds outside every open set.
    pub fn orphans(&self) -> WorldSet {
        self.union_of_opens().complement()
    }

    pub fn is_strong(&self) -> bool {
        self.union_of_opens().is_full()
    }

    pub fn opens_containing(&self, world: usize) -> impl Iterator<Item = WorldSet> + '_ {
        self.opens
            .iter()
            .copied()
            .filter(move |o| o.contains(world))
    }

    pub fn interior(&self, x: WorldSet) -> WorldSet {
        self.opens
            .iter()
            .filter(|o| o.is_subset(x))
            .fold(WorldSet::empty(self.universe), |acc, o| acc.union(*o))
    }

    /// `W \ Int(W \ x)`.
    pub fn closure(&self, x: WorldSet) -> WorldSet {
        self.interior(x.complement()).complement()
    }

    pub fn is_nowhere_dense(&self, a: WorldSet) -> bool {
        self.interior(self.closure(a)).is_empty()
    }

    /// Every nonempty open `G` contains a nonempty open `H` missing `a`.
    pub fn is_strongly_nowhere_dense(&self, a: WorldSet) -> bool {
        self.opens.iter().filter(|g| !g.is_empty()).all(|g| {
            self.opens
                .iter()
                .any(|h| !h.is_empty() && h.is_subset(*g) && h.is_disjoint(a))
        })
    }
}

impl fmt::Display for GenTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.opens.iter().map(|o| o.to_string()).collect();
        write!(f, "{{{}}} on {} worlds", parts.join(", "), self.universe)
    }
}

/// The smallest generalized topology containing `base`.
pub fn close_under_unions(
    universe: usize,
    base: &[WorldSet],
) -> Result<GenTopology, TopologyError> {
    check_universe(universe, base)?;
    let mut opens = canonical_family(
        base.iter()
            .copied()
            .chain(std::iter::once(WorldSet::empty(universe)))
            .collect(),
    );
    // each round adds unions of pairs; stops once no new set appears
    loop {
        let mut added = Vec::new();
        for (i, x) in opens.iter().enumerate() {
            for y in &opens[i + 1..] {
                let u = x.union(*y);
                if opens.binary_search(&u).is_err() {
                    added.push(u);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        opens.extend(added);
        opens = canonical_family(opens);
    }
    Ok(GenTopology { universe, opens })
}

/// Finite stand-ins for the classical list of generalized topologies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleSpace {
    /// `{∅,{a},{b},{a,b}}` on `{a,b,c}`.
    Ex1,
    /// `{∅,{a},{c},{a,b},{a,c},{b,c},W}` on `{a,b,c}`.
    Ex2,
    /// All subsets avoiding a nonempty forbidden set.
    Forbidden {
        universe: usize,
        forbidden: WorldSet,
    },
    /// The nested chain `∅ ⊂ {w0} ⊂ {w0,w1} ⊂ ...` on `n` worlds.
    Chain(usize),
}

impl ExampleSpace {
    pub fn topology(&self) -> Result<GenTopology, TopologyError> {
        let abc = |ws: &[usize]| WorldSet::from_worlds(3, ws.iter().copied());
        match self {
            ExampleSpace::Ex1 => {
                GenTopology::new(3, vec![abc(&[]), abc(&[0]), abc(&[1]), abc(&[0, 1])])
            }
            ExampleSpace::Ex2 => GenTopology::new(
                3,
                vec![
                    abc(&[]),
                    abc(&[0]),
                    abc(&[2]),
                    abc(&[0, 1]),
                    abc(&[0, 2]),
                    abc(&[1, 2]),
                    abc(&[0, 1, 2]),
                ],
            ),
            ExampleSpace::Forbidden {
                universe,
                forbidden,
            } => {
                check_universe(*universe, &[*forbidden])?;
                if forbidden.is_empty() {
                    return Err(TopologyError::BadExample(
                        "the forbidden set must be nonempty".into(),
                    ));
                }
                GenTopology::new(*universe, forbidden.complement().subsets().collect())
            }
            ExampleSpace::Chain(n) => {
                check_universe(*n, &[])?;
                let chain = (0..=*n).map(|k| WorldSet::from_worlds(*n, 0..k)).collect();
                GenTopology::new(*n, chain)
            }
        }
    }

    /// Conventional world names: `a, b, c, ...` for small spaces, `w0, w1, ...`
    /// otherwise.
    pub fn world_names(&self) -> Vec<String> {
        let n = match self {
            ExampleSpace::Ex1 | ExampleSpace::Ex2 => 3,
            ExampleSpace::Forbidden { universe, .. } => *universe,
            ExampleSpace::Chain(n) => *n,
        };
        default_world_names(n)
    }
}

impl FromStr for ExampleSpace {
    type Err = TopologyError;

    /// Accepts `ex1`, `ex2`, `ex4-forbidden:<n>:<i,j,..>`, `ex5-chain:<n>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let id = parts.next().unwrap_or_default();
        let bad = |msg: &str| TopologyError::BadExample(format!("{s}: {msg}"));
        let space = match id {
            "ex1" => ExampleSpace::Ex1,
            "ex2" => ExampleSpace::Ex2,
            "ex4" | "ex4-forbidden" => {
                let n: usize = parts
                    .next()
                    .ok_or_else(|| bad("missing universe size"))?
                    .parse()
                    .map_err(|_| bad("universe size is not a number"))?;
                let worlds = parts
                    .next()
                    .ok_or_else(|| bad("missing forbidden worlds"))?;
                let mut forbidden = Vec::new();
                for w in worlds.split(',').filter(|w| !w.is_empty()) {
                    let w: usize = w.parse().map_err(|_| bad("world index is not a number"))?;
                    if w >= n {
                        return Err(bad("world index out of range"));
                    }
                    forbidden.push(w);
                }
                check_universe(n, &[])?;
                ExampleSpace::Forbidden {
                    universe: n,
                    forbidden: WorldSet::from_worlds(n, forbidden),
                }
            }
            "ex5" | "ex5-chain" => {
                let n: usize = parts
                    .next()
                    .ok_or_else(|| bad("missing chain length"))?
                    .parse()
                    .map_err(|_| bad("chain length is not a number"))?;
                ExampleSpace::Chain(n)
            }
            _ => return Err(bad("unknown example id")),
        };
        if parts.next().is_some() {
            return Err(bad("too many parameters"));
        }
        Ok(space)
    }
}

/// `a..z` for universes of at most 26 worlds, `w0..` beyond that.
pub fn default_world_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("w{i}")).collect()
    }
}

/// Every generalized topology on `n ≤ 4` worlds, ordered by size.
pub fn all_topologies(n: usize) -> Result<Vec<GenTopology>, TopologyError> {
    if n == 0 {
        return Err(TopologyError::EmptyUniverse);
    }
    if n > 4 {
        return Err(TopologyError::BadExample(format!(
            "exhaustive enumeration supports at most 4 worlds, got {n}"
        )));
    }
    let sets: Vec<u64> = (1..(1u64 << n)).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << sets.len()) {
        let member = |code: u64| choice >> (code - 1) & 1 == 1;
        let closed = sets
            .iter()
            .all(|&x| !member(x) || sets.iter().all(|&y| !member(y) || member(x | y)));
        if closed {
            let mut family = vec![WorldSet::empty(n)];
            family.extend(
                sets.iter()
                    .filter(|&&c| member(c))
                    .map(|&c| WorldSet::from_bits(n, c).expect("code fits universe")),
            );
            out.push(GenTopology {
                universe: n,
                opens: canonical_family(family),
            });
        }
    }
    out.sort_by(|a, b| {
        a.opens
            .len()
            .cmp(&b.opens.len())
            .then(a.opens.cmp(&b.opens))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ws: &[usize]) -> WorldSet {
        WorldSet::from_worlds(3, ws.iter().copied())
    }

    fn ex1() -> GenTopology {
        ExampleSpace::Ex1.topology().unwrap()
    }

    fn overlap() -> GenTopology {
        GenTopology::new(3, vec![s(&[]), s(&[0, 1]), s(&[1, 2]), s(&[0, 1, 2])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(
            validate_topology(3, &[s(&[]), s(&[0]), s(&[1]), s(&[0, 1])])
                .unwrap()
                .valid()
        );
        let r = validate_topology(3, &[s(&[]), s(&[0]), s(&[1])]).unwrap();
        assert!(!r.valid());
        assert!(r.has_rule("union-closure"));
        assert_eq!(r.violations[0].witnesses[4], Witness::Set(s(&[0, 1])));
        let r = validate_topology(3, &[s(&[0])]).unwrap();
        assert!(r.has_rule("empty-set"));
        assert!(!r.has_rule("union-closure"));
    }

    #[test]
    fn validate_rejects_mismatched_universe() {
        let err = validate_topology(3, &[WorldSet::empty(2)]).unwrap_err();
        assert!(matches!(err, TopologyError::UniverseMismatch { .. }));
        assert_eq!(
            validate_topology(0, &[]).unwrap_err(),
            TopologyError::EmptyUniverse
        );
    }

    #[test]
    fn close_under_unions_examples() {
        let t = close_under_unions(3, &[s(&[0]), s(&[1])]).unwrap();
        assert_eq!(t.opens(), &[s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
        assert_eq!(close_under_unions(3, &[]).unwrap().opens(), &[s(&[])]);
        let t = close_under_unions(3, &[s(&[0, 1]), s(&[1, 2])]).unwrap();
        assert_eq!(t, overlap());
    }

    #[test]
    fn strong_examples() {
        assert!(!ex1().is_strong());
        assert!(ExampleSpace::Ex2.topology().unwrap().is_strong());
        assert!(!GenTopology::trivial(1).unwrap().is_strong());
    }

    #[test]
    fn interior_and_closure_examples() {
        let t = ex1();
        assert_eq!(t.interior(s(&[0, 2])), s(&[0]));
        assert_eq!(t.interior(s(&[])), s(&[]));
        assert_eq!(t.interior(s(&[0, 1, 2])), s(&[0, 1]));
        assert_eq!(t.closure(s(&[2])), s(&[2]));
        assert_eq!(t.closure(s(&[0, 1, 2])), s(&[0, 1, 2]));
        assert_eq!(overlap().closure(s(&[0])), s(&[0]));
    }

    #[test]
    fn density_examples() {
        let t = ex1();
        assert!(t.is_nowhere_dense(s(&[2])));
        assert!(t.is_nowhere_dense(s(&[])));
        assert!(t.is_strongly_nowhere_dense(s(&[])));
        assert!(t.is_strongly_nowhere_dense(s(&[2])));
        let o = overlap();
        assert!(o.is_nowhere_dense(s(&[0])));
        assert!(!o.is_strongly_nowhere_dense(s(&[0])));
    }

    #[test]
    fn example_spaces() {
        assert_eq!(ex1().opens(), &[s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
        let forb = ExampleSpace::Forbidden {
            universe: 3,
            forbidden: s(&[2]),
        }
        .topology()
        .unwrap();
        assert_eq!(forb.opens(), &[s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
        let chain = ExampleSpace::Chain(3).topology().unwrap();
        assert_eq!(chain.opens(), &[s(&[]), s(&[0]), s(&[0, 1]), s(&[0, 1, 2])]);
        assert!(ExampleSpace::Forbidden {
            universe: 3,
            forbidden: s(&[])
        }
        .topology()
        .is_err());
        assert!(ExampleSpace::Chain(0).topology().is_err());
    }

    #[test]
    fn example_ids_parse() {
        assert_eq!("ex1".parse::<ExampleSpace>().unwrap(), ExampleSpace::Ex1);
        assert_eq!(
            "ex5-chain:4".parse::<ExampleSpace>().unwrap(),
            ExampleSpace::Chain(4)
        );
        assert_eq!(
            "ex4-forbidden:3:2".parse::<ExampleSpace>().unwrap(),
            ExampleSpace::Forbidden {
                universe: 3,
                forbidden: s(&[2])
            }
        );
        assert!("ex3".parse::<ExampleSpace>().is_err());
        assert!("ex4:3:7".parse::<ExampleSpace>().is_err());
    }

    #[test]
    fn topology_counts_match_moore_families() {
        // union-closed families with ∅ are complements of closure systems
        let counts: Vec<usize> = (1..=4).map(|n| all_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 7, 61, 2480]);
    }
}
