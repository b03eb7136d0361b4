use crate::error::{Error, Result};

/// A finite group given by its multiplication table over `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl Group {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::NotAGroup("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        Ok(Group { name: name.into(), table, identity, inverses })
    }

    pub fn trivial() -> Group {
        Group::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Group {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(format!("C{n}"), table).expect("cyclic group")
    }

    /// Symmetric group on `n` letters; elements are permutations in lexicographic order.
    pub fn symmetric(n: usize) -> Group {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        // (p q)(i) = p(q(i))
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect())).collect())
            .collect();
        Group::from_table(format!("S{n}"), table).expect("symmetric group")
    }

    pub fn product(g: &Group, h: &Group) -> Group {
        let (m, n) = (g.order(), h.order());
        let table = (0..m * n)
            .map(|a| {
                (0..m * n)
                    .map(|b| g.mul(a / n, b / n) * n + h.mul(a % n, b % n))
                    .collect()
            })
            .collect();
        Group::from_table(format!("{}x{}", g.name, h.name), table).expect("direct product")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, a), self.inverse(g)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Index of the conjugacy class containing `a`.
    pub fn class_of(&self, a: usize) -> usize {
        self.conjugacy_classes().iter().position(|c| c.contains(&a)).unwrap()
    }

    /// Whether `elements` form a subgroup.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        !elements.is_empty()
            && elements.iter().all(|&a| {
                elements.contains(&self.inverse(a))
                    && elements.iter().all(|&b| elements.contains(&self.mul(a, b)))
            })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// The permutation of `0..n` that element `g` of [`Group::symmetric`]`(n)` represents.
pub fn symmetric_permutation(n: usize, g: usize) -> Vec<usize> {
    permutations(n)[g].clone()
}
