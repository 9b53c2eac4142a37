use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Arrow `name: source -> target`, vertices zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n_vertices: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(n_vertices: usize) -> Self {
        Quiver { n_vertices, arrows: Vec::new() }
    }

    /// Convenience constructor from `(name, source, target)` triples with
    /// one-based vertices, as they appear in quiver files.
    pub fn from_arrows(n_vertices: usize, arrows: &[(&str, usize, usize)]) -> Result<Self> {
        let mut q = Quiver::new(n_vertices);
        for (name, s, t) in arrows {
            if *s == 0 || *t == 0 {
                return Err(Error::InvalidInput("vertices are numbered from 1".into()));
            }
            q.add_arrow(name, s - 1, t - 1)?;
        }
        Ok(q)
    }

    pub fn add_arrow(&mut self, name: &str, source: usize, target: usize) -> Result<usize> {
        if source >= self.n_vertices || target >= self.n_vertices {
            return Err(Error::InvalidInput(format!("arrow {name} has an endpoint outside 1..{}", self.n_vertices)));
        }
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(Error::InvalidInput(format!("duplicate arrow name {name}")));
        }
        self.arrows.push(Arrow { name: name.to_string(), source, target });
        Ok(self.arrows.len() - 1)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> &Arrow {
        &self.arrows[idx]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let mut indeg = vec![0usize; self.n_vertices];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n_vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows_from(v).collect::<Vec<_>>() {
                let t = self.arrows[a].target;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == self.n_vertices
    }

    /// Source and target of a non-empty arrow sequence, if composable.
    /// Paths are read left to right: `a*b` means `a` first, then `b`.
    pub fn path_ends(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*path.first()?)?;
        let mut cur = first.target;
        for &a in &path[1..] {
            let arr = self.arrows.get(a)?;
            if arr.source != cur {
                return None;
            }
            cur = arr.target;
        }
        Some((first.source, cur))
    }

    pub fn render_path(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }
}

/// Integer linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(i64, Vec<usize>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn empty() -> Self {
        RelationSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// A quiver together with admissible relations; the algebra `kQ/I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    quiver: Quiver,
    relations: RelationSet,
}

impl Algebra {
    pub fn new(quiver: Quiver, relations: RelationSet) -> Result<Self> {
        for (k, rel) in relations.relations.iter().enumerate() {
            let mut ends = None;
            for (_, path) in &rel.terms {
                if path.len() < 2 {
                    return Err(Error::NotAdmissible(format!("relation {} contains a path of length < 2", k + 1)));
                }
                let e = quiver
                    .path_ends(path)
                    .ok_or_else(|| Error::InvalidInput(format!("relation {} has a non-composable path", k + 1)))?;
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => {
                        return Err(Error::InvalidInput(format!("relation {} mixes paths with different endpoints", k + 1)))
                    }
                    _ => {}
                }
            }
        }
        Ok(Algebra { quiver, relations })
    }

    pub fn path_algebra(quiver: Quiver) -> Self {
        Algebra { quiver, relations: RelationSet::empty() }
    }

    /// Parse relations given as `(coefficient, "a*b*c")` pairs.
    pub fn with_relations(quiver: Quiver, relations: &[Vec<(i64, &str)>]) -> Result<Self> {
        let names: HashMap<&str, usize> =
            quiver.arrows().iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let mut rels = Vec::new();
        for rel in relations {
            let mut terms = Vec::new();
            for (c, p) in rel {
                let path = p
                    .split('*')
                    .map(|n| names.get(n.trim()).copied().ok_or_else(|| Error::InvalidInput(format!("unknown arrow {n}"))))
                    .collect::<Result<Vec<_>>>()?;
                terms.push((*c, path));
            }
            rels.push(Relation { terms });
        }
        Algebra::new(quiver, RelationSet { relations: rels })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn n(&self) -> usize {
        self.quiver.n_vertices()
    }

    pub fn is_hereditary(&self) -> bool {
        self.relations.is_empty() && self.quiver.is_acyclic()
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.quiver.n_vertices())?;
        for a in self.quiver.arrows() {
            writeln!(f, "arrow {}: {} -> {}", a.name, a.source + 1, a.target + 1)?;
        }
        for r in &self.relations.relations {
            let terms: Vec<String> =
                r.terms.iter().map(|(c, p)| format!("{}*{}", c, self.quiver.render_path(p))).collect();
            writeln!(f, "relation: {}", terms.join(" + "))?;
        }
        Ok(())
    }
}

/// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
pub fn linear_a(n: usize) -> Algebra {
    let mut q = Quiver::new(n);
    for i in 0..n.saturating_sub(1) {
        q.add_arrow(&format!("a{}", i + 1), i, i + 1).expect("fresh arrow");
    }
    Algebra::path_algebra(q)
}

/// `A_n` with the orientation given per edge: `true` means `i -> i+1`.
pub fn oriented_a(orientation: &[bool]) -> Algebra {
    let n = orientation.len() + 1;
    let mut q = Quiver::new(n);
    for (i, &fwd) in orientation.iter().enumerate() {
        let (s, t) = if fwd { (i, i + 1) } else { (i + 1, i) };
        q.add_arrow(&format!("a{}", i + 1), s, t).expect("fresh arrow");
    }
    Algebra::path_algebra(q)
}

/// Preprojective algebra of `A_2`: `a: 1 -> 2`, `b: 2 -> 1`, relations `a*b`, `b*a`.
pub fn preprojective_a2() -> Algebra {
    let q = Quiver::from_arrows(2, &[("a", 1, 2), ("b", 2, 1)]).expect("valid quiver");
    Algebra::with_relations(q, &[vec![(1, "a*b")], vec![(1, "b*a")]]).expect("valid relations")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_arrow_rejected() {
        assert!(Quiver::from_arrows(2, &[("a", 1, 2), ("a", 2, 1)]).is_err());
    }

    #[test]
    fn acyclicity() {
        assert!(linear_a(3).quiver().is_acyclic());
        assert!(!preprojective_a2().quiver().is_acyclic());
    }

    #[test]
    fn relation_validation() {
        let q = Quiver::from_arrows(3, &[("a", 1, 2), ("b", 2, 3)]).unwrap();
        assert!(Algebra::with_relations(q.clone(), &[vec![(1, "a*b")]]).is_ok());
        assert!(Algebra::with_relations(q.clone(), &[vec![(1, "b*a")]]).is_err());
        assert!(Algebra::with_relations(q, &[vec![(1, "a")]]).is_err());
    }

    #[test]
    fn path_ends_compose_left_to_right() {
        let alg = preprojective_a2();
        assert_eq!(alg.quiver().path_ends(&[0, 1]), Some((0, 0)));
        assert_eq!(alg.quiver().path_ends(&[1, 0]), Some((1, 1)));
        assert_eq!(alg.quiver().path_ends(&[0, 0]), None);
    }
}
