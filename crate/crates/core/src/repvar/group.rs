use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RepvarError;

/// Default cap on the number of elements a permutation closure may produce.
pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// Tables up to this order get an exhaustive associativity check.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Shape,
    Closure,
    Identity,
    Inverse,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Shape => "shape",
            Axiom::Closure => "closure",
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
            Axiom::Associativity => "associativity",
        })
    }
}

/// A finite group given by its full multiplication table on indices
/// `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

fn not_a_group(axiom: Axiom, witness: String) -> RepvarError {
    RepvarError::NotAGroup { axiom, witness }
}

impl FiniteGroup {
    /// Validates a 0-based multiplication table, `table[a][b] = a·b`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, RepvarError> {
        let n = table.len();
        if n == 0 {
            return Err(not_a_group(Axiom::Shape, "empty table".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(not_a_group(
                    Axiom::Shape,
                    format!("row {} has {} entries, expected {n}", a + 1, row.len()),
                ));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(not_a_group(
                        Axiom::Closure,
                        format!("{}·{} = {} is out of range", a + 1, b + 1, c + 1),
                    ));
                }
            }
            mult.extend_from_slice(row);
        }
        Self::validate(n, mult)
    }

    fn validate(n: usize, mult: Vec<usize>) -> Result<Self, RepvarError> {
        let at = |a: usize, b: usize| mult[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| not_a_group(Axiom::Identity, "no two-sided identity".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity)
                .ok_or_else(|| not_a_group(Axiom::Inverse, format!("element {} has no right inverse", a + 1)))?;
            if at(b, a) != identity {
                return Err(not_a_group(
                    Axiom::Inverse,
                    format!("right inverse {} of {} is not a left inverse", b + 1, a + 1),
                ));
            }
            inv[a] = b;
        }
        let group = FiniteGroup {
            order: n,
            mult,
            inv,
            identity,
            names: None,
        };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<(), RepvarError> {
        let n = self.order;
        let fail = |a: usize, b: usize, c: usize| {
            not_a_group(
                Axiom::Associativity,
                format!("({}·{})·{} ≠ {}·({}·{})", a + 1, b + 1, c + 1, a + 1, b + 1, c + 1),
            )
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(fail(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(fail(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Closes permutation generators (0-based images) under composition,
    /// `(σ·τ)(x) = σ(τ(x))`. Element 0 is the identity.
    pub fn from_permutations(generators: &[Vec<usize>], bound: usize) -> Result<Self, RepvarError> {
        let degree = generators.iter().map(Vec::len).max().unwrap_or(0);
        let pad = |p: &Vec<usize>| -> Vec<usize> { (0..degree).map(|i| p.get(i).copied().unwrap_or(i)).collect() };
        let gens: Vec<Vec<usize>> = generators.iter().map(pad).collect();
        for (k, g) in gens.iter().enumerate() {
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(RepvarError::Parse {
                        line: k + 1,
                        message: "generator is not a permutation".into(),
                    });
                }
            }
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        // parent[x] = (p, s) with x = p·gens[s].
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        // right[s][x] = x·gens[s]
        let mut right: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        let mut head = 0;
        while head < elements.len() {
            for (s, g) in gens.iter().enumerate() {
                let prod: Vec<usize> = g.iter().map(|&y| elements[head][y]).collect();
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= bound {
                            return Err(RepvarError::ClosureBound { bound });
                        }
                        let i = elements.len();
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        parent.push(Some((head, s)));
                        i
                    }
                };
                right[s].push(idx);
            }
            head += 1;
        }

        let n = elements.len();
        // a·x = (a·p)·s along the tree, so each row fills in BFS order.
        let mut mult = vec![0; n * n];
        for a in 0..n {
            mult[a * n] = a;
            for x in 1..n {
                let (p, s) = parent[x].expect("non-root element has a parent");
                mult[a * n + x] = right[s][mult[a * n + p]];
            }
        }
        let mut group = Self::validate(n, mult)?;
        group.names = Some(elements.iter().map(|p| cycle_notation(p)).collect());
        Ok(group)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order);
        self.names = Some(names);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(ab, self.inv[a]);
        self.mul(ab_ai, self.inv[b])
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => (a + 1).to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The multiplication table with 1-based entries, as written in group
    /// files.
    pub fn to_table_string(&self) -> String {
        let n = self.order;
        let mut out = format!("order {n}\n");
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| (self.mul(a, b) + 1).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses one permutation in cycle notation with 1-based points, e.g.
/// `(1 2 3)(4 5)`, `(1,2)` or `()`.
pub fn parse_cycles(src: &str) -> Result<Vec<usize>, String> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = src.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = body.find(')').ok_or("unclosed cycle")?;
        let points = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("bad point `{t}` (points are positive integers)")),
                Ok(k) => Ok(k - 1),
            })
            .collect::<Result<Vec<_>, _>>()?;
        cycles.push(points);
        rest = body[close + 1..].trim_start();
    }
    let degree = cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
    let mut perm: Vec<usize> = (0..degree).collect();
    // Product of cycles, rightmost applied first.
    for cycle in cycles.iter().rev() {
        let mut step: Vec<usize> = (0..degree).collect();
        for (i, &x) in cycle.iter().enumerate() {
            if cycle[..i].contains(&x) {
                return Err(format!("point {} repeated in a cycle", x + 1));
            }
            step[x] = cycle[(i + 1) % cycle.len()];
        }
        perm = perm.iter().map(|&y| step[y]).collect();
    }
    Ok(perm)
}

/// Reads a group file: `order n` followed by `n` rows of 1-based indices,
/// or `perm` followed by one cycle-notation generator per line. Blank
/// lines and `#` comments are ignored.
pub fn parse_group_file(src: &str, bound: usize) -> Result<FiniteGroup, RepvarError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(RepvarError::Parse {
        line: 1,
        message: "empty group file".into(),
    })?;
    let mut words = header.split_whitespace();
    match words.next() {
        Some("order") => {
            let n: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .filter(|&n| n > 0 && n <= bound)
                .ok_or(RepvarError::Parse {
                    line: hline,
                    message: format!("expected `order n` with 1 <= n <= {bound}"),
                })?;
            let mut table = Vec::with_capacity(n);
            for (line, text) in lines {
                let row = text
                    .split_whitespace()
                    .map(|t| match t.parse::<usize>() {
                        Ok(k) if k >= 1 => Ok(k - 1),
                        _ => Err(RepvarError::Parse {
                            line,
                            message: format!("bad entry `{t}`"),
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.push(row);
            }
            if table.len() != n {
                return Err(not_a_group(Axiom::Shape, format!("expected {n} rows, found {}", table.len())));
            }
            FiniteGroup::from_table(table)
        }
        Some("perm") => {
            let gens = lines
                .map(|(line, text)| parse_cycles(text).map_err(|message| RepvarError::Parse { line, message }))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_permutations(&gens, bound)
        }
        _ => Err(RepvarError::Parse {
            line: hline,
            message: "expected header `order n` or `perm`".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two_table() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn s3_from_generators() {
        let gens = vec![parse_cycles("(1 2)").unwrap(), parse_cycles("(1 2 3)").unwrap()];
        let g = FiniteGroup::from_permutations(&gens, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.name(0), "()");
    }

    #[test]
    fn table_from_closure_matches_composition() {
        // Recompose every product directly from the permutations.
        let gens = vec![parse_cycles("(1 2 3 4)").unwrap(), parse_cycles("(1 2)").unwrap()];
        let g = FiniteGroup::from_permutations(&gens, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(g.order(), 24);
        let perms: Vec<Vec<usize>> = (0..24)
            .map(|a| {
                let mut p = vec![0usize, 1, 2, 3];
                // Rebuild from names to keep the check independent of the table.
                let name = g.name(a);
                let parsed = parse_cycles(&name).unwrap();
                for (i, &x) in parsed.iter().enumerate() {
                    p[i] = x;
                }
                p
            })
            .collect();
        for a in 0..24 {
            for b in 0..24 {
                let composed: Vec<usize> = perms[b].iter().map(|&y| perms[a][y]).collect();
                assert_eq!(perms[g.mul(a, b)], composed);
            }
        }
    }

    #[test]
    fn broken_associativity() {
        // A Latin square with identity 0 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(t) {
            Err(RepvarError::NotAGroup { axiom, .. }) => assert_eq!(axiom, Axiom::Associativity),
            other => panic!("expected NotAGroup, got {other:?}"),
        }
    }

    #[test]
    fn missing_identity_and_range() {
        let t = vec![vec![1, 0], vec![1, 0]];
        assert!(matches!(
            FiniteGroup::from_table(t),
            Err(RepvarError::NotAGroup { axiom: Axiom::Identity, .. })
        ));
        let t = vec![vec![0, 5], vec![1, 0]];
        assert!(matches!(
            FiniteGroup::from_table(t),
            Err(RepvarError::NotAGroup { axiom: Axiom::Closure, .. })
        ));
    }

    #[test]
    fn closure_bound() {
        let gens = vec![parse_cycles("(1 2 3 4 5)").unwrap(), parse_cycles("(1 2)").unwrap()];
        assert_eq!(
            FiniteGroup::from_permutations(&gens, 50),
            Err(RepvarError::ClosureBound { bound: 50 })
        );
    }

    #[test]
    fn group_files() {
        let g = parse_group_file("order 3\n1 2 3\n2 3 1\n3 1 2\n", DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(parse_group_file(&g.to_table_string(), DEFAULT_CLOSURE_BOUND).unwrap(), g);
        let g = parse_group_file("# S3\nperm\n(1 2)\n(1,2,3)\n", DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(g.order(), 6);
        assert!(matches!(
            parse_group_file("perm\n(1 2\n", DEFAULT_CLOSURE_BOUND),
            Err(RepvarError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_group_file("group 3\n", DEFAULT_CLOSURE_BOUND),
            Err(RepvarError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn cycle_products() {
        // (1 2)(2 3): apply (2 3) first, so 2 ↦ 3 ↦ 3, 3 ↦ 2 ↦ 1, 1 ↦ 1 ↦ 2.
        assert_eq!(parse_cycles("(1 2)(2 3)").unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("()").unwrap(), Vec::<usize>::new());
        assert!(parse_cycles("(1 1)").is_err());
        assert!(parse_cycles("(0 1)").is_err());
    }
}
