use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::exactmath::{Field, Rational};
use crate::linalg::Matrix;
use crate::quantize::InvariantSequence;

/// Tuple enumeration is used as an oracle while `|G|^{2g}` stays below this.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Θ is materialized as a dense matrix only up to this order.
pub const TWIST_MATRIX_LIMIT: usize = 512;

/// Conjugacy classes and centralizer orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub centralizer_order: Vec<usize>,
}

impl ClassData {
    pub fn new(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        // Classes are discovered in element order, so the identity's class is 0
        // whenever the identity is element 0.
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for y in 0..n {
                let c = g.mul(g.mul(y, x), g.inv(y));
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let centralizer_order = (0..n)
            .map(|x| (0..n).filter(|&y| g.mul(x, y) == g.mul(y, x)).count())
            .collect();
        ClassData {
            classes,
            class_of,
            centralizer_order,
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }
}

/// One integer per conjugacy class: the common value of a class function
/// at any element of that class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction(pub Vec<BigInt>);

impl ClassFunction {
    pub fn at_class(&self, c: usize) -> &BigInt {
        &self.0[c]
    }

    /// `Σ_C f(C)·|C|`.
    pub fn mass(&self, classes: &ClassData) -> BigInt {
        self.0
            .iter()
            .enumerate()
            .map(|(c, v)| v * BigInt::from(classes.class_size(c)))
            .sum()
    }
}

/// `N₁(x) = #{(a, b) : [a, b] = x}`.
pub fn commutator_distribution(g: &FiniteGroup, classes: &ClassData) -> ClassFunction {
    let n = g.order();
    let per_class = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; classes.class_count()],
            |mut acc, a| {
                for b in 0..n {
                    acc[classes.class_of[g.commutator(a, b)]] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; classes.class_count()],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
                x
            },
        );
    ClassFunction(
        per_class
            .into_iter()
            .enumerate()
            .map(|(c, total)| {
                let size = classes.class_size(c) as u64;
                debug_assert_eq!(total % size, 0);
                BigInt::from(total / size)
            })
            .collect(),
    )
}

/// Counting data for surfaces: the class algebra structure of `G` plus the
/// commutator distribution.
///
/// With `N_g(x) = #{(a₁,b₁,…,a_g,b_g) : Π[aᵢ,bᵢ] = x}`, splitting off the
/// last commutator gives `N_g(x) = Σ_y N_{g-1}(y) N₁(y⁻¹x)`. Both factors are
/// class functions, so for the representative `x_E` of a class `E`
///
/// `N_g(E) = Σ_{C,D} a_{CD}^E N_{g-1}(C) N₁(D)`,
/// `a_{CD}^E = #{y ∈ C : y⁻¹ x_E ∈ D}`.
#[derive(Debug, Clone)]
pub struct SurfaceCounter<'g> {
    group: &'g FiniteGroup,
    classes: ClassData,
    n1: ClassFunction,
    /// Nonzero `(C, D, a_{CD}^E)` for each `E`.
    structure: Vec<Vec<(usize, usize, u64)>>,
}

impl<'g> SurfaceCounter<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        let classes = ClassData::new(group);
        let n1 = commutator_distribution(group, &classes);
        let c = classes.class_count();
        let structure = (0..c)
            .map(|e| {
                let x = classes.representative(e);
                let mut dense = vec![0u64; c * c];
                for y in 0..group.order() {
                    let d = classes.class_of[group.mul(group.inv(y), x)];
                    dense[classes.class_of[y] * c + d] += 1;
                }
                dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, k)| *k > 0)
                    .map(|(i, k)| (i / c, i % c, k))
                    .collect()
            })
            .collect();
        SurfaceCounter {
            group,
            classes,
            n1,
            structure,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn commutator_distribution(&self) -> &ClassFunction {
        &self.n1
    }

    /// One convolution with `N₁`.
    fn step(&self, cur: &[BigInt]) -> Vec<BigInt> {
        self.structure
            .iter()
            .map(|entries| {
                entries
                    .iter()
                    .map(|&(ci, di, k)| &cur[ci] * &self.n1.0[di] * BigInt::from(k))
                    .sum()
            })
            .collect()
    }

    /// `N_g` as a class function; `N_0` is the indicator of the identity.
    pub fn distribution(&self, genus: usize) -> ClassFunction {
        let c = self.classes.class_count();
        let mut cur = vec![BigInt::zero(); c];
        cur[self.classes.class_of[self.group.identity()]] = BigInt::one();
        for _ in 0..genus {
            cur = self.step(&cur);
        }
        ClassFunction(cur)
    }

    /// `|Hom(π₁(Σ_g), G)|`.
    pub fn genus_count(&self, genus: usize) -> BigInt {
        let value = self.distribution(genus).0[self.classes.class_of[self.group.identity()]].clone();
        if cfg!(debug_assertions) {
            if let Some(oracle) = brute_force_count(self.group, genus) {
                assert_eq!(value, oracle, "convolution disagrees with tuple enumeration at genus {genus}");
            }
        }
        value
    }

    /// `|G|^{points-1} · N_g`: representations with `points` basepoints.
    pub fn pointed_count(&self, genus: usize, points: usize) -> BigInt {
        assert!(points >= 1, "at least one basepoint");
        BigInt::from(self.group.order()).pow(points as u32 - 1) * self.genus_count(genus)
    }

    /// Genus counts for `0..=max_genus` over ℚ.
    pub fn sequence(&self, max_genus: usize) -> InvariantSequence<Rational> {
        let c = self.classes.class_count();
        let e = self.classes.class_of[self.group.identity()];
        let mut cur = vec![BigInt::zero(); c];
        cur[e] = BigInt::one();
        let mut values = vec![Rational::one()];
        for _ in 0..max_genus {
            cur = self.step(&cur);
            values.push(Rational::from(cur[e].clone()));
        }
        InvariantSequence::new(values)
    }

    /// Commuting pairs, `N₁(e)`.
    pub fn commuting_pairs(&self) -> BigInt {
        self.n1.0[self.classes.class_of[self.group.identity()]].clone()
    }

    pub fn twist(&self) -> TwistTrace {
        twist_trace(self.group, &self.classes)
    }
}

/// Enumerates all `2g`-tuples when `|G|^{2g} ≤ BRUTE_FORCE_LIMIT`.
pub fn brute_force_count(g: &FiniteGroup, genus: usize) -> Option<BigInt> {
    let n = g.order() as u128;
    let mut total: u128 = 1;
    for _ in 0..2 * genus {
        total = total.checked_mul(n)?;
        if total > BRUTE_FORCE_LIMIT {
            return None;
        }
    }
    Some(BigInt::from(brute_force_unbounded(g, genus)))
}

/// Tuple enumeration without a size guard. Runs in `|G|^{2g}` steps.
pub fn brute_force_unbounded(g: &FiniteGroup, genus: usize) -> u64 {
    fn go(g: &FiniteGroup, left: usize, acc: usize) -> u64 {
        if left == 0 {
            return u64::from(acc == g.identity());
        }
        let n = g.order();
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                count += go(g, left - 1, g.mul(acc, g.commutator(a, b)));
            }
        }
        count
    }
    go(g, genus, g.identity())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistProvenance {
    /// Θ was built as a matrix and its trace summed directly.
    Materialized,
    /// Above the size cap: the trace is `Σ_x |Stab(x)|`, which equals
    /// `|G|·c` by orbit–stabilizer.
    IdentityBased,
}

/// The twist operator `Θ(1_g) = Σ_{h ~ g} |Stab(g)| 1_h`.
#[derive(Debug, Clone)]
pub struct TwistTrace {
    pub trace: BigInt,
    pub operator: Option<Matrix<Rational>>,
    pub provenance: TwistProvenance,
    pub class_count: usize,
    /// `Θ² = |G|·Θ`, checked on the matrix when it was materialized.
    pub idempotent_up_to_order: Option<bool>,
    /// `Tr(Θ²) / |G|`, when materialized.
    pub trace_of_square_over_order: Option<Rational>,
}

pub fn twist_trace(g: &FiniteGroup, classes: &ClassData) -> TwistTrace {
    let n = g.order();
    let c = classes.class_count();
    if n > TWIST_MATRIX_LIMIT {
        let trace: BigInt = classes.centralizer_order.iter().map(|&s| BigInt::from(s)).sum();
        debug_assert_eq!(trace, BigInt::from(n * c));
        return TwistTrace {
            trace,
            operator: None,
            provenance: TwistProvenance::IdentityBased,
            class_count: c,
            idempotent_up_to_order: None,
            trace_of_square_over_order: None,
        };
    }
    // Column x holds Θ(1_x).
    let theta = Matrix::from_fn(n, n, |h, x| {
        if classes.class_of[h] == classes.class_of[x] {
            Rational::from(classes.centralizer_order[x] as i64)
        } else {
            Rational::zero()
        }
    });
    let trace = theta.trace().to_rational().expect("rational trace");
    let square = theta.mul(&theta);
    let order = Rational::from(n as i64);
    let idempotent = square == theta.scale(&order);
    let tr2 = square.trace().div(&order).expect("nonzero order");
    TwistTrace {
        trace: trace.numer().clone(),
        operator: Some(theta),
        provenance: TwistProvenance::Materialized,
        class_count: c,
        idempotent_up_to_order: Some(idempotent),
        trace_of_square_over_order: Some(tr2),
    }
}

/// Genus counts `N_0 … N_{max_genus}` as an invariant sequence over ℚ.
pub fn repvar_sequence(g: &FiniteGroup, max_genus: usize) -> InvariantSequence<Rational> {
    SurfaceCounter::new(g).sequence(max_genus)
}
