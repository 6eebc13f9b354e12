//! The defining 9x9 braid matrix of the deformed oscillator algebra, exact
//! linear algebra over Q(q, u, s), and the spectral facts the verification
//! suites check.
//!
//! Rows and columns are indexed by ordered pairs (k, l), k, l in 1..3, in
//! lexicographic order. The entry at row (k, l), column (m, n) is the
//! coefficient C^{kl}_{mn} of the exchange rule
//! `x^k xi^l = C^{kl}_{mn} xi^m x^n` (summed over m, n).

use std::fmt;
use std::sync::OnceLock;

use crate::error::{CoreError, Result};
use crate::scalar::{Param, ScalarValue, Substitution};

/// Ordered index pairs in row/column order.
pub const PAIRS: [(u8, u8); 9] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 3),
];

pub fn pair_index(k: u8, l: u8) -> usize {
    debug_assert!((1..=3).contains(&k) && (1..=3).contains(&l));
    ((k - 1) * 3 + (l - 1)) as usize
}

fn q() -> ScalarValue {
    ScalarValue::param(Param::Q)
}
fn u() -> ScalarValue {
    ScalarValue::param(Param::U)
}
fn s() -> ScalarValue {
    ScalarValue::param(Param::S)
}

/// 9x9 matrix over Q(q, u, s), row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMatrix {
    entries: Vec<ScalarValue>,
}

impl RMatrix {
    pub fn zero() -> RMatrix {
        RMatrix {
            entries: vec![ScalarValue::zero(); 81],
        }
    }

    pub fn identity() -> RMatrix {
        let mut m = RMatrix::zero();
        for i in 0..9 {
            m.entries[i * 9 + i] = ScalarValue::one();
        }
        m
    }

    /// The flip matrix: C^{kl}_{mn} = delta(k,n) delta(l,m).
    pub fn flip() -> RMatrix {
        let mut m = RMatrix::zero();
        for (r, &(k, l)) in PAIRS.iter().enumerate() {
            let c = pair_index(l, k);
            m.entries[r * 9 + c] = ScalarValue::one();
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> &ScalarValue {
        &self.entries[row * 9 + col]
    }

    /// Entry C^{kl}_{mn}.
    pub fn coeff(&self, k: u8, l: u8, m: u8, n: u8) -> &ScalarValue {
        self.get(pair_index(k, l), pair_index(m, n))
    }

    pub fn set(&mut self, row: usize, col: usize, v: ScalarValue) {
        self.entries[row * 9 + col] = v;
    }

    pub fn set_coeff(&mut self, k: u8, l: u8, m: u8, n: u8, v: ScalarValue) {
        self.set(pair_index(k, l), pair_index(m, n), v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        RMatrix { entries }
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        RMatrix { entries }
    }

    pub fn scale(&self, c: &ScalarValue) -> RMatrix {
        RMatrix {
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        let mut out = RMatrix::zero();
        for i in 0..9 {
            for k in 0..9 {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..9 {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, &(a * b) + cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RMatrix {
        let mut out = RMatrix::zero();
        for i in 0..9 {
            for j in 0..9 {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<RMatrix> {
        let mut entries = Vec::with_capacity(81);
        for e in &self.entries {
            entries.push(e.substitute(sub)?);
        }
        Ok(RMatrix { entries })
    }

    /// Exact inverse by Gauss-Jordan elimination over the field.
    pub fn inverse(&self) -> Result<RMatrix> {
        let mut a: Vec<Vec<ScalarValue>> = (0..9)
            .map(|i| (0..9).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut inv: Vec<Vec<ScalarValue>> = (0..9)
            .map(|i| {
                (0..9)
                    .map(|j| {
                        if i == j {
                            ScalarValue::one()
                        } else {
                            ScalarValue::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..9 {
            let pivot = (col..9)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(CoreError::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            let pinv = p.inverse().expect("pivot nonzero");
            for j in 0..9 {
                a[col][j] = &a[col][j] * &pinv;
                inv[col][j] = &inv[col][j] * &pinv;
            }
            for r in 0..9 {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..9 {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
        let mut out = RMatrix::zero();
        for i in 0..9 {
            for j in 0..9 {
                out.set(i, j, inv[i][j].clone());
            }
        }
        Ok(out)
    }

    /// Exact rank by forward elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<ScalarValue>> = (0..9)
            .map(|i| (0..9).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..9 {
            let Some(pivot) = (rank..9).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            let pinv = a[rank][col].inverse().expect("pivot nonzero");
            for j in 0..9 {
                a[rank][j] = &a[rank][j] * &pinv;
            }
            for r in 0..9 {
                if r == rank || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..9 {
                    a[r][j] = &a[r][j] - &(&f * &a[rank][j]);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..9 {
            let row: Vec<String> = (0..9).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The braid matrix of the oscillator calculus.
pub fn omega() -> RMatrix {
    static CELL: OnceLock<RMatrix> = OnceLock::new();
    CELL.get_or_init(build_omega).clone()
}

/// Its exact inverse, computed once.
pub fn omega_inverse() -> RMatrix {
    static CELL: OnceLock<RMatrix> = OnceLock::new();
    CELL.get_or_init(|| build_omega().inverse().expect("omega is invertible"))
        .clone()
}

fn build_omega() -> RMatrix {
    let q_u2 = q().div(&u().pow(2)).unwrap();
    let q_u2_m1 = &q_u2 - &ScalarValue::one();
    let mut m = RMatrix::zero();
    // Diagonal pairs (k,k) exchange with factor q/u^2.
    m.set_coeff(1, 1, 1, 1, q_u2.clone());
    m.set_coeff(2, 2, 2, 2, q_u2.clone());
    m.set_coeff(3, 3, 3, 3, q_u2.clone());
    // Row (1,2): x^1 xi^2 = q^2/u^2 xi^2 x^1 + qs/u^2 xi^3 x^3.
    m.set_coeff(1, 2, 2, 1, q().pow(2).div(&u().pow(2)).unwrap());
    m.set_coeff(1, 2, 3, 3, (&q() * &s()).div(&u().pow(2)).unwrap());
    // Row (1,3): x^1 xi^3 = q/u xi^3 x^1.
    m.set_coeff(1, 3, 3, 1, q().div(&u()).unwrap());
    // Row (2,1): x^2 xi^1 = 1/q xi^1 x^2 + (q/u^2-1) xi^2 x^1 - s/q xi^3 x^3.
    m.set_coeff(2, 1, 1, 2, q().inverse().unwrap());
    m.set_coeff(2, 1, 2, 1, q_u2_m1.clone());
    m.set_coeff(2, 1, 3, 3, -&s().div(&q()).unwrap());
    // Row (2,3): x^2 xi^3 = (q/u^2-1) xi^2 x^3 + 1/u xi^3 x^2.
    m.set_coeff(2, 3, 2, 3, q_u2_m1.clone());
    m.set_coeff(2, 3, 3, 2, u().inverse().unwrap());
    // Row (3,1): x^3 xi^1 = 1/u xi^1 x^3 + (q/u^2-1) xi^3 x^1.
    m.set_coeff(3, 1, 1, 3, u().inverse().unwrap());
    m.set_coeff(3, 1, 3, 1, q_u2_m1);
    // Row (3,2): x^3 xi^2 = q/u xi^2 x^3.
    m.set_coeff(3, 2, 2, 3, q().div(&u()).unwrap());
    m
}

/// 27x27 operator on the triple tensor space, row-major over triples
/// (a, b, c), a, b, c in 1..3.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorOperator {
    entries: Vec<ScalarValue>,
}

impl TensorOperator {
    pub fn zero() -> TensorOperator {
        TensorOperator {
            entries: vec![ScalarValue::zero(); 27 * 27],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> &ScalarValue {
        &self.entries[row * 27 + col]
    }

    fn set(&mut self, row: usize, col: usize, v: ScalarValue) {
        self.entries[row * 27 + col] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// C acting on tensor factors 1 and 2.
    pub fn amplify_left(c: &RMatrix) -> TensorOperator {
        let mut t = TensorOperator::zero();
        for ab in 0..9 {
            for ab2 in 0..9 {
                let v = c.get(ab, ab2);
                if v.is_zero() {
                    continue;
                }
                for k in 0..3 {
                    t.set(ab * 3 + k, ab2 * 3 + k, v.clone());
                }
            }
        }
        t
    }

    /// C acting on tensor factors 2 and 3.
    pub fn amplify_right(c: &RMatrix) -> TensorOperator {
        let mut t = TensorOperator::zero();
        for bc in 0..9 {
            for bc2 in 0..9 {
                let v = c.get(bc, bc2);
                if v.is_zero() {
                    continue;
                }
                for k in 0..3 {
                    t.set(k * 9 + bc, k * 9 + bc2, v.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &TensorOperator) -> TensorOperator {
        let mut out = TensorOperator::zero();
        for i in 0..27 {
            for k in 0..27 {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..27 {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, &(a * b) + cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &TensorOperator) -> TensorOperator {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        TensorOperator { entries }
    }

    /// Largest entry by string length, for witnesses; None when zero.
    pub fn sample_nonzero(&self) -> Option<(usize, usize, &ScalarValue)> {
        for i in 0..27 {
            for j in 0..27 {
                let e = self.get(i, j);
                if !e.is_zero() {
                    return Some((i, j, e));
                }
            }
        }
        None
    }
}

/// (C x 1)(1 x C)(C x 1) - (1 x C)(C x 1)(1 x C).
pub fn yang_baxter_residual(c: &RMatrix) -> TensorOperator {
    let l = TensorOperator::amplify_left(c);
    let r = TensorOperator::amplify_right(c);
    let lhs = l.mul(&r).mul(&l);
    let rhs = r.mul(&l).mul(&r);
    lhs.sub(&rhs)
}

/// (C - l1 I)(C - l2 I); zero exactly when C satisfies that quadratic.
pub fn minimal_poly_residual(c: &RMatrix, l1: &ScalarValue, l2: &ScalarValue) -> RMatrix {
    let id = RMatrix::identity();
    let a = c.sub(&id.scale(l1));
    let b = c.sub(&id.scale(l2));
    a.mul(&b)
}

/// The oscillator braid matrix satisfies (C + I)(C - q/u^2 I) = 0.
pub fn hecke_residual(c: &RMatrix) -> RMatrix {
    let lam = q().div(&u().pow(2)).unwrap();
    minimal_poly_residual(c, &-&ScalarValue::one(), &lam)
}

/// Row covector on the pair space.
pub type Covector = Vec<ScalarValue>;

pub fn covector_from_pairs(entries: &[(u8, u8, ScalarValue)]) -> Covector {
    let mut v = vec![ScalarValue::zero(); 9];
    for (k, l, c) in entries {
        v[pair_index(*k, *l)] = c.clone();
    }
    v
}

/// f C - lambda f.
pub fn left_eigen_residual(f: &Covector, c: &RMatrix, lambda: &ScalarValue) -> Covector {
    (0..9)
        .map(|j| {
            let mut acc = ScalarValue::zero();
            for i in 0..9 {
                if f[i].is_zero() {
                    continue;
                }
                acc = &acc + &(&f[i] * c.get(i, j));
            }
            &acc - &(lambda * &f[j])
        })
        .collect()
}

pub fn covector_is_zero(f: &Covector) -> bool {
    f.iter().all(|e| e.is_zero())
}

/// Reverses the pair order: the (k,l) entry becomes the (l,k) entry.
pub fn flip_covector(f: &Covector) -> Covector {
    let mut out = vec![ScalarValue::zero(); 9];
    for k in 1..=3u8 {
        for l in 1..=3u8 {
            out[pair_index(l, k)] = f[pair_index(k, l)].clone();
        }
    }
    out
}

/// Coefficient rows of the variable relations x1x2 - q x2x1 - s x3x3,
/// x1x3 - u x3x1, x2x3 - 1/u x3x2 in the pair basis. Left eigenvectors of
/// the braid matrix with eigenvalue -1.
pub fn xx_relation_covectors() -> Vec<Covector> {
    vec![
        covector_from_pairs(&[
            (1, 2, ScalarValue::one()),
            (2, 1, -&q()),
            (3, 3, -&s()),
        ]),
        covector_from_pairs(&[(1, 3, ScalarValue::one()), (3, 1, -&u())]),
        covector_from_pairs(&[
            (2, 3, ScalarValue::one()),
            (3, 2, -&u().inverse().unwrap()),
        ]),
    ]
}

/// Coefficient rows of the one-form relations; left eigenvectors with
/// eigenvalue q/u^2.
pub fn xixi_relation_covectors() -> Vec<Covector> {
    let u2q2 = u().pow(2).div(&q().pow(2)).unwrap();
    vec![
        covector_from_pairs(&[(1, 1, ScalarValue::one())]),
        covector_from_pairs(&[(2, 2, ScalarValue::one())]),
        covector_from_pairs(&[(3, 3, ScalarValue::one())]),
        covector_from_pairs(&[(2, 1, ScalarValue::one()), (1, 2, u2q2)]),
        covector_from_pairs(&[(1, 3, ScalarValue::one()), (3, 1, q().div(&u()).unwrap())]),
        covector_from_pairs(&[(2, 3, ScalarValue::one()), (3, 2, u().div(&q()).unwrap())]),
    ]
}

/// Coefficient rows of the derivative relations. The derivative pair
/// composes contravariantly to the pair basis, so these rows become left
/// eigenvectors of the transposed inverse braid matrix (eigenvalue -1) only
/// after `flip_covector`.
pub fn dd_relation_covectors() -> Vec<Covector> {
    let q2u2 = q().pow(2).div(&u().pow(2)).unwrap();
    vec![
        covector_from_pairs(&[(1, 2, ScalarValue::one()), (2, 1, -&q2u2)]),
        covector_from_pairs(&[
            (1, 3, ScalarValue::one()),
            (3, 1, -&q().div(&u()).unwrap()),
        ]),
        covector_from_pairs(&[
            (2, 3, ScalarValue::one()),
            (3, 2, -&u().div(&q()).unwrap()),
        ]),
    ]
}

/// The coefficient identities the braid matrix must satisfy for the
/// derivative calculus to close on the variable relations: seven linear
/// identities plus three vanishing products. Returns (label, residual)
/// pairs; all residuals must be zero.
pub fn constraint_residuals(c: &RMatrix) -> Vec<(String, ScalarValue)> {
    let one = ScalarValue::one();
    let e = |k: u8, l: u8, m: u8, n: u8| c.coeff(k, l, m, n).clone();
    let mut out: Vec<(String, ScalarValue)> = Vec::new();
    out.push((
        "C12_12 - (q*C21_12 - 1)".into(),
        &e(1, 2, 1, 2) - &(&(&q() * &e(2, 1, 1, 2)) - &one),
    ));
    out.push((
        "C12_21 - (q*C21_21 + q)".into(),
        &e(1, 2, 2, 1) - &(&(&q() * &e(2, 1, 2, 1)) + &q()),
    ));
    out.push((
        "C13_13 - (u*C31_13 - 1)".into(),
        &e(1, 3, 1, 3) - &(&(&u() * &e(3, 1, 1, 3)) - &one),
    ));
    out.push((
        "C13_31 - (u*C31_31 + u)".into(),
        &e(1, 3, 3, 1) - &(&(&u() * &e(3, 1, 3, 1)) + &u()),
    ));
    out.push((
        "C32_23 - (u*C23_23 + u)".into(),
        &e(3, 2, 2, 3) - &(&(&u() * &e(2, 3, 2, 3)) + &u()),
    ));
    out.push((
        "C32_32 - (u*C23_32 - 1)".into(),
        &e(3, 2, 3, 2) - &(&(&u() * &e(2, 3, 3, 2)) - &one),
    ));
    out.push((
        "C12_33 - (q*C21_33 + s*C33_33 + s)".into(),
        &e(1, 2, 3, 3) - &(&(&(&q() * &e(2, 1, 3, 3)) + &(&s() * &e(3, 3, 3, 3))) + &s()),
    ));
    out.push(("C12_12*C21_21".into(), &e(1, 2, 1, 2) * &e(2, 1, 2, 1)));
    out.push(("C13_13*C31_31".into(), &e(1, 3, 1, 3) * &e(3, 1, 3, 1)));
    out.push(("C23_23*C32_32".into(), &e(2, 3, 2, 3) * &e(3, 2, 3, 2)));
    out
}
