//! Counting representations of surface groups into finite groups.
//!
//! `|Hom(π₁(Σ_g), G)|` is computed by convolution in the class algebra of
//! `G` and checked against brute-force tuple enumeration where that is
//! cheap. The twist operator Θ and its trace identities live here too.

mod counting;
mod group;

use thiserror::Error;

pub use counting::{
    brute_force_count, brute_force_unbounded, commutator_distribution, repvar_sequence, twist_trace, ClassData,
    ClassFunction, SurfaceCounter, TwistProvenance, TwistTrace, BRUTE_FORCE_LIMIT, TWIST_MATRIX_LIMIT,
};
pub use group::{parse_cycles, parse_group_file, Axiom, FiniteGroup, DEFAULT_CLOSURE_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepvarError {
    #[error("not a group ({axiom}): {witness}")]
    NotAGroup { axiom: Axiom, witness: String },
    #[error("permutation closure exceeded {bound} elements")]
    ClosureBound { bound: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown builtin group `{0}` (try C<n>, D<n>, S3, S4, Q8)")]
    UnknownBuiltin(String),
}

/// The builtin names accepted by [`builtin`], for help text.
pub const BUILTIN_NAMES: &[&str] = &["C<n>", "D<n>", "S3", "S4", "Q8"];

/// `C<n>` cyclic of order n, `D<n>` dihedral of order 2n, `S3`, `S4`, `Q8`.
/// `trivial` is an alias for `C1`.
pub fn builtin(name: &str) -> Result<FiniteGroup, RepvarError> {
    let unknown = || RepvarError::UnknownBuiltin(name.to_string());
    let parse_n = |rest: &str| rest.parse::<usize>().ok().filter(|&n| (1..=DEFAULT_CLOSURE_BOUND).contains(&n));
    let perms = |gens: &[&str]| {
        let gens: Vec<Vec<usize>> = gens.iter().map(|g| parse_cycles(g).expect("builtin generator")).collect();
        FiniteGroup::from_permutations(&gens, DEFAULT_CLOSURE_BOUND)
    };
    match name {
        "trivial" => cyclic(1),
        "S3" => perms(&["(1 2)", "(1 2 3)"]),
        "S4" => perms(&["(1 2)", "(1 2 3 4)"]),
        "Q8" => perms(&["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]),
        _ => {
            if let Some(n) = name.strip_prefix('C').and_then(parse_n) {
                cyclic(n)
            } else if let Some(n) = name.strip_prefix('D').and_then(parse_n) {
                if 2 * n > DEFAULT_CLOSURE_BOUND {
                    return Err(unknown());
                }
                dihedral(n)
            } else {
                Err(unknown())
            }
        }
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup, RepvarError> {
    FiniteGroup::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
}

/// Elements `r^k s^e` at index `k + n·e`, with `s r s⁻¹ = r⁻¹`.
fn dihedral(n: usize) -> Result<FiniteGroup, RepvarError> {
    let elem = |i: usize| (i % n, i / n);
    let table = (0..2 * n)
        .map(|x| {
            let (a, e) = elem(x);
            (0..2 * n)
                .map(|y| {
                    let (b, f) = elem(y);
                    let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                    k + n * ((e + f) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        for (name, order) in [("trivial", 1), ("C1", 1), ("C7", 7), ("D1", 2), ("D4", 8), ("S3", 6), ("S4", 24), ("Q8", 8)] {
            assert_eq!(builtin(name).unwrap().order(), order, "{name}");
        }
        assert!(matches!(builtin("A5"), Err(RepvarError::UnknownBuiltin(_))));
        assert!(builtin("C0").is_err());
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        // Q8 has a single involution, D4 has five.
        let involutions = |g: &FiniteGroup| (0..g.order()).filter(|&x| x != g.identity() && g.mul(x, x) == g.identity()).count();
        assert_eq!(involutions(&builtin("Q8").unwrap()), 1);
        assert_eq!(involutions(&builtin("D4").unwrap()), 5);
    }
}
